class Seismic {
    void classify(int onset) {
        if(onset == EMERGENT) {
            emergent();
        } else if(onset == IMPULSIVE) {
            impulsive();
        } else if(onset == QUESTIONABLE) {
            questionable();
        }
    }

    void emergent() {
    }

    void impulsive() {
    }

    void questionable() {
    }
}
