class DiagramSetup {
    void configure(Settings settings) {
        settings.setShowVisibilities(false);
    }
}
