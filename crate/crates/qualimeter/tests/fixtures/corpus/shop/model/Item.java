package shop.model;

import java.util.Objects;

// A sellable thing.
public class Item implements Named, Comparable<Item> {
    private final long id;
    private String name;
    protected int priceCents;
    int stock;

    public Item(long id, String name, int priceCents) {
        this.id = id;
        this.name = name;
        this.priceCents = priceCents;
    }

    public long id() {
        return id;
    }

    public String name() {
        return name;
    }

    /* Price in cents,
       never negative. */
    public int price() {
        return priceCents < 0 ? 0 : priceCents;
    }

    @Override
    public int compareTo(Item other) {
        return Long.compare(id, other.id);
    }

    @Override
    public boolean equals(Object o) {
        return o instanceof Item && ((Item) o).id == id;
    }

    @Override
    public int hashCode() {
        return Objects.hash(id);
    }
}
