class Lookup {
    void find(String name) {
        if(name == null) {
            fail();
        }
    }

    void fail() {
    }
}
