package shapes;

interface Shape {
    double area();
}

class Square implements Shape {
    private double side;

    Square(double side) {
        this.side = side;
    }

    public double area() {
        return side * side;
    }
}

class Circle implements Shape {
    private double radius;

    Circle(double radius) {
        this.radius = radius;
    }

    public double area() {
        return 3.14 * radius * radius;
    }
}

public class Shapes {
    public boolean large(Shape s) {
        return s.area() > 100;
    }
}
