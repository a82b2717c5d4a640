class Toolbar {
    boolean canSave(Action saveAction) {
        return saveAction != null && saveAction.isEnabled();
    }
}
