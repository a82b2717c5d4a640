package bounce;

public class Bounce {
    static final int LIMIT = 10;

    public boolean check(int x) {
        return ping(x);
    }

    boolean ping(int x) {
        return x > LIMIT && pong(x - 1);
    }

    boolean pong(int x) {
        return x < LIMIT || ping(x + 1);
    }
}
