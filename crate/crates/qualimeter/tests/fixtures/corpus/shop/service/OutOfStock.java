package shop.service;

public class OutOfStock extends Exception {
    private static final long serialVersionUID = 1L;

    public OutOfStock(String what) {
        super(what);
    }
}
