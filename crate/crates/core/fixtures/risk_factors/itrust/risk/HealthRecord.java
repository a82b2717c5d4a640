package itrust.risk;

public class HealthRecord {
    private double bodyMassIndex;
    private boolean hypertensive;
    private int cholesterol;

    public HealthRecord(double bodyMassIndex, boolean hypertensive, int cholesterol) {
        this.bodyMassIndex = bodyMassIndex;
        this.hypertensive = hypertensive;
        this.cholesterol = cholesterol;
    }

    public double getBodyMassIndex() {
        return bodyMassIndex;
    }

    public boolean isHypertensive() {
        return hypertensive;
    }

    public int getCholesterol() {
        return cholesterol;
    }
}
