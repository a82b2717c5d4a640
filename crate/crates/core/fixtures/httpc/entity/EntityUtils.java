package entity;

public class EntityUtils {
    public static boolean canBuffer(HttpEntity entity) {
        if (entity.isRepeatable()) {
            return false;
        }
        return true;
    }

    public static boolean canReplay(HttpEntity entity) {
        while (entity.isRepeatable()) {
            return true;
        }
        return false;
    }

    public static boolean replayable(HttpEntity entity) {
        return entity != null && entity.isRepeatable();
    }
}
