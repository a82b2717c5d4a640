package buffer;

public class BufferAutosaveRequest {
    private final Buffer buffer;
    private int saved;

    public BufferAutosaveRequest(Buffer buffer) {
        this.buffer = buffer;
    }

    public void run() {
        if (!buffer.isDirty())
            return;
        saved++;
    }
}
