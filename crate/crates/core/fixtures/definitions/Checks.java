package defs;

import java.util.Map;

public class Checks {
    private int count;

    int getCount() {
        return count;
    }

    int calculateValue() {
        return count * 2;
    }

    boolean viaGetter(Checks obj) {
        return obj.getCount() > 3;
    }

    boolean viaComputed(Checks obj) {
        return obj.calculateValue() > 3;
    }

    boolean viaLocal() {
        int value = 100;
        return count > value;
    }

    boolean viaLibrary(Map<String, String> request) {
        return request.get("key") != null;
    }

    boolean viaParameter(int limit) {
        return count < limit;
    }
}
