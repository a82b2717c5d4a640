package itrust.risk;

public class CholesterolFactor extends PatientRiskFactor {
    private HealthRecord record;

    public CholesterolFactor(HealthRecord record) {
        this.record = record;
    }

    @Override
    public boolean hasFactor() {
        return record.getCholesterol() >= 240;
    }
}
