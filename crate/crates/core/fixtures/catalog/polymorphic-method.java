class Converter {
    Object convert(Scriptable scriptable) {
        Object value = scriptable.getDefaultValue();
        return value;
    }
}

interface Scriptable {
    Object getDefaultValue();
}

class NativeObject implements Scriptable {
    public Object getDefaultValue() {
        return this;
    }
}
