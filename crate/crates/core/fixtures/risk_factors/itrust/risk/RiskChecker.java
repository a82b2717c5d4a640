package itrust.risk;

import java.util.List;

public abstract class RiskChecker {
    public static final int RISK_THRESHOLD = 2;
    protected Patient patient;
    protected HealthRecord currentHealthRecord;

    public RiskChecker(Patient patient, HealthRecord currentHealthRecord) {
        this.patient = patient;
        this.currentHealthRecord = currentHealthRecord;
    }

    protected abstract List<PatientRiskFactor> getDiseaseRiskFactors();

    public boolean isAtRisk() {
        int numRisks = 0;
        List<PatientRiskFactor> factors = getDiseaseRiskFactors();
        for (PatientRiskFactor factor : factors) {
            if (factor.hasRiskFactor()) // <<
                numRisks++;
            if (numRisks >= RISK_THRESHOLD)
                return true;
        }

        return false;
    }
}
