package buffer;

public class Buffer {
    private boolean dirty;
    private String path;

    public Buffer(String path) {
        this.path = path;
    }

    public boolean isDirty() {
        return dirty;
    }

    public void setDirty(boolean d) {
        dirty = d;
    }

    public String getPath() {
        return path;
    }
}
