class FileFilter {
    void accept(String name, Filter defaultFilter) {
        if (name.toLowerCase().endsWith("." + defaultFilter.getSuffix())) {
            add(name);
        }
    }

    void add(String name) {
    }
}
