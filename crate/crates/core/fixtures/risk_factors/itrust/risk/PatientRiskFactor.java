package itrust.risk;

public abstract class PatientRiskFactor {
    public boolean hasRiskFactor() {
        return hasFactor();
    }

    public abstract boolean hasFactor();
}
