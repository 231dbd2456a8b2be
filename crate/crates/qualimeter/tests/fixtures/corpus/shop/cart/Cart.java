package shop.cart;

import java.util.ArrayList;
import java.util.List;
import shop.model.Item;

public class Cart {
    private final List<Line> lines = new ArrayList<>();
    private Discount discount = Discount.none();

    public void add(Item item, int qty) {
        if (qty <= 0) {
            throw new IllegalArgumentException("qty");
        }
        lines.add(new Line(item, qty));
    }

    public void apply(Discount d) {
        discount = d;
    }

    public int total() {
        int sum = 0;
        for (Line l : lines) {
            sum += l.subtotal();
        }
        return discount.apply(sum);
    }

    int size() {
        return lines.size();
    }
}
