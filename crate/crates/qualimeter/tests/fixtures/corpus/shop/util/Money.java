package shop.util;

// Immutable amount.
public record Money(long cents, String currency) {
    public Money {
        if (currency == null) {
            throw new IllegalArgumentException("currency");
        }
    }

    public Money plus(Money other) {
        return new Money(cents + other.cents, currency);
    }
}
