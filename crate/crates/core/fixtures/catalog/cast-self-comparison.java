class Numbers {
    void check(double d) {
        int id = (int)d; if (id == d) { integral(); }
    }

    void integral() {
    }
}
