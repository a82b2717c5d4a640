package collect;

import java.util.Comparator;
import java.util.Iterator;

public class Ordering<E> {
    private final Comparator<E> comparator;

    public Ordering(Comparator<E> comparator) {
        this.comparator = comparator;
    }

    public E min(Iterator<E> iterator) {
        E minSoFar = iterator.next();
        while (iterator.hasNext()) {
            E next = iterator.next();
            if (comparator.compare(next, minSoFar) < 0) {
                minSoFar = next;
            }
        }
        return minSoFar;
    }
}
