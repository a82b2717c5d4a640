class FileState {
    boolean isNew(int flag) {
        return flag & NEW_FILE == NEW_FILE;
    }
}
