package itrust.risk.heart;

import itrust.risk.*;
import java.util.ArrayList;
import java.util.List;

public class HeartDiseaseRisks extends RiskChecker {
    public HeartDiseaseRisks(Patient patient, HealthRecord currentHealthRecord) {
        super(patient, currentHealthRecord);
    }

    @Override
    protected List<PatientRiskFactor> getDiseaseRiskFactors() {
        List<PatientRiskFactor> factors = new ArrayList<>();
        factors.add(new AgeFactor(patient, 45)); // <<
        factors.add(new HypertensionFactor(currentHealthRecord));
        factors.add(new CholesterolFactor(currentHealthRecord));
        return factors;
    }
}
