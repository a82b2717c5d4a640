package itrust.risk.diabetes;

import itrust.risk.Patient;
import itrust.risk.PatientRiskFactor;

public class AgeFactor extends PatientRiskFactor {
    private Patient patient;
    private int age;

    public AgeFactor(Patient patient, int age) {
        this.patient = patient;
        this.age = age;
    }

    @Override
    public boolean hasFactor() {
        return patient.getAge() > age; // <<
    }
}
