package buffer;

public class EditPane {
    private Buffer buffer;

    public EditPane(Buffer buffer) {
        this.buffer = buffer;
    }

    public String title() {
        if (buffer.isDirty()) {
            return "*" + buffer.getPath();
        }
        return buffer.getPath();
    }
}
