package buffer;

public class View {
    private Buffer buffer;
    private boolean closing;

    public View(Buffer buffer) {
        this.buffer = buffer;
    }

    public boolean canClose() {
        if (buffer.isDirty()) {
            return false;
        }
        closing = true;
        return closing;
    }
}
