package spectrogram;

public class SpectrogramPanel {
    private SpectrogramSettings settings;
    private Wave wave;

    public SpectrogramPanel(SpectrogramSettings settings) {
        this.settings = settings;
    }

    public void setWave(Wave w) {
        wave = w;
        processSettings();
    }

    private void processSettings() {
        if (settings.spectrogramMaxFreq > wave.getNyquist()) {
            settings.spectrogramMaxFreq = wave.getNyquist();
        }
        if (settings.spectrogramMinFreq > settings.spectrogramMaxFreq) {
            settings.spectrogramMinFreq = 0;
        }
    }
}
