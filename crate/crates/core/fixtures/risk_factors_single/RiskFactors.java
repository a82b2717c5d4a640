import java.util.ArrayList;
import java.util.List;

class Type2DiabetesRisks extends RiskChecker {
    protected List<PatientRiskFactor> getDiseaseRiskFactors() {
        List<PatientRiskFactor> factors = new ArrayList<>();
        factors.add(new AgeFactor(patient, 45)); // <<
        factors.add(new WeightFactor(currentHealthRecord, 25));
        factors.add(new HypertensionFactor(currentHealthRecord));
        factors.add(new CholesterolFactor(currentHealthRecord));
        return factors;
    }
}

abstract class RiskChecker {
    static final int RISK_THRESHOLD = 2;
    protected Patient patient;
    protected HealthRecord currentHealthRecord;

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

class AgeFactor extends PatientRiskFactor {
    private Patient patient;
    private int age;

    AgeFactor(Patient patient, int age) {
        this.patient = patient;
        this.age = age;
    }

    public boolean hasFactor() {
        return patient.getAge() > age; // <<
    }
}
