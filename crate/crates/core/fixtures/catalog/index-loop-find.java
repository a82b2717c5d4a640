class Arrays2 {
    int indexOf(Object[] values, Object value) {
        for (int i = 0; i < values.length; i++) {if (value.equals(values[i])) {return i;}} return -1;
    }
}
