package entity;

public class RedirectStrategy {
    public boolean canRedirect(HttpEntity entity) {
        if (entity != null && entity.isRepeatable()) {
            return true;
        }
        return false;
    }

    public boolean canResend(HttpEntity entity) {
        return entity != null && entity.isRepeatable();
    }
}
