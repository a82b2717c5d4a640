class HttpDefaults {
    int port() {
        return 80;
    }
}
