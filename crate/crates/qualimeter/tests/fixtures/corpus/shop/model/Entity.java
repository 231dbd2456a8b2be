package shop.model;

/** Anything with an identity. */
public interface Entity {
    long id();

    String LABEL = "entity";
}
