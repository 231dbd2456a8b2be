package shop.service;

import shop.model.Entity;

public interface Repository<T extends Entity> {
    T find(long id);

    void save(T value);

    /* Removes everything. */
    default void clear() {}
}
