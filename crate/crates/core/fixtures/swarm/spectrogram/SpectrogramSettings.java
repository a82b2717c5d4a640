package spectrogram;

public class SpectrogramSettings {
    public double spectrogramMaxFreq = 100.0;
    public double spectrogramMinFreq = 0.0;
}
