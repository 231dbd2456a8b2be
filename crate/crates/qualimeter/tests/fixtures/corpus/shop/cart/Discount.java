package shop.cart;

@FunctionalInterface
public interface Discount {
    int apply(int cents);

    static Discount none() {
        return c -> c;
    }
}
