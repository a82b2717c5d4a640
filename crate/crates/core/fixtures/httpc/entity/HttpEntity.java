package entity;

public interface HttpEntity {
    boolean isRepeatable();

    long getContentLength();
}
