package itrust.risk;

public class HypertensionFactor extends PatientRiskFactor {
    private HealthRecord record;

    public HypertensionFactor(HealthRecord record) {
        this.record = record;
    }

    @Override
    public boolean hasFactor() {
        return record.isHypertensive();
    }
}
