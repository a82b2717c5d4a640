class ExecutorSetup {
    String classname;

    void init() {
        classname = DefaultExecutor.class.getName();
    }
}
