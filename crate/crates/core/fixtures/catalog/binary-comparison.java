class Spectrogram {
    void render(double maxFreq, Wave wave) {
        if(maxFreq > wave.getNyquist()) {
            clip();
        }
    }

    void clip() {
    }
}

class Wave {
    double nyquist;

    double getNyquist() {
        return nyquist;
    }
}
