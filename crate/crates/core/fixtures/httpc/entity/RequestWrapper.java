package entity;

public class RequestWrapper {
    private HttpEntity entity;
    private boolean consumed;

    public RequestWrapper(HttpEntity entity) {
        this.entity = entity;
    }

    public boolean isRepeatable() {
        if (entity.isRepeatable()) {
            return !consumed;
        }
        return false;
    }

    public void retry() {
        if (!entity.isRepeatable()) {
            throw new IllegalStateException("cannot retry");
        }
        consumed = false;
    }
}
