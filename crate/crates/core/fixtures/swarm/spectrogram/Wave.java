package spectrogram;

public class Wave {
    private double samplingRate;

    public Wave(double samplingRate) {
        this.samplingRate = samplingRate;
    }

    public double getNyquist() {
        return samplingRate / 2;
    }
}
