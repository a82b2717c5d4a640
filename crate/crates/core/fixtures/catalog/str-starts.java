class Launcher {
    void parse(String arg) {
        if (arg.startsWith("-background")) {
            background();
        }
    }

    void background() {
    }
}
