class Editor {
    void close(Buffer buffer) {
        if(buffer.isModified) {
            prompt();
        }
    }

    void prompt() {
    }
}

class Buffer {
    boolean isModified;
}
