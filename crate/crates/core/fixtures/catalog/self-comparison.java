class Numbers {
    boolean isNaN(double d) {
        return d != d;
    }
}
