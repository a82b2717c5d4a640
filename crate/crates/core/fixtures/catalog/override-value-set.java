abstract class Archive {
    public abstract String getExtension();
}
