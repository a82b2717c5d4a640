class CompilerFactory {
    Compiler create(String compilerType) {
        if ("jikes".equalsIgnoreCase(compilerType)) {return new Jikes();} if ("extjavac".equalsIgnoreCase(compilerType)) {return new JavacExternal();}
        return fallback();
    }

    Compiler fallback() {
        return null;
    }
}
