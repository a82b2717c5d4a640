class Strings {
    boolean blank(String string) {
        return string == null || string.equals("");
    }
}
