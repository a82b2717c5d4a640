package plain;

public class Plain {
    private int limit = 5;
    private int unused;

    public boolean within(int x) {
        if (x > 0) {
            return x < limit;
        }
        return false;
    }
}
