class BufferSetManager {
    Object scope() {
        Object scope = BufferSet.Scope.valueOf(jEdit.getProperty("bufferset.scope", "global"));
        return scope;
    }
}
