class Strings {
    boolean present(String string) {
        return string != null && string.length() > 0;
    }
}
