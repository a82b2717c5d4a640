class BufferListener {
    void handle(int state) {
        switch(state) {case Buffer.FILE_CHANGED: reload(); break; }
    }

    void reload() {
    }
}
