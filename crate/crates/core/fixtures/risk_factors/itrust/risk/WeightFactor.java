package itrust.risk;

public class WeightFactor extends PatientRiskFactor {
    private HealthRecord record;
    private double limit;

    public WeightFactor(HealthRecord record, double limit) {
        this.record = record;
        this.limit = limit;
    }

    @Override
    public boolean hasFactor() {
        return record.getBodyMassIndex() > limit;
    }
}
