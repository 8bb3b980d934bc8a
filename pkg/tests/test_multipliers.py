"""Unit tests for generalized multipliers, genuine rows, and solving sets."""

from itertools import combinations

import pytest

from circulant_ci.cayley import ConnectionSet
from circulant_ci.keys import Key, enumerate_keys, key_of_set, zero_key
from circulant_ci.multipliers import (
    GeneralizedMultiplier,
    GenuineMultiplier,
    apply_multiplier,
    apply_multiplier_prime,
    as_permutation,
    genuine_multipliers_prime_power,
    solving_set,
)
from circulant_ci.zn import DomainError, element_order, factorize


def test_apply_prime_example():
    assert apply_multiplier_prime((1, 1, 3), 5, 2, 3) == 7


def test_all_ones_is_identity():
    for p, t in ((2, 3), (3, 2), (5, 1)):
        q = p**t
        row = (1,) * t
        assert [apply_multiplier_prime(row, x, p, t) for x in range(q)] == list(
            range(q)
        )


def test_prime_square_action_formula():
    # x0 + x1 p maps to m2 x0 + m1 x1 p, for every multiplier of Z_{p^2}
    for p in (2, 3, 5):
        q = p * p
        coprime = [m for m in range(1, q) if m % p]
        for m1 in coprime:
            for m2 in coprime:
                for x in range(q):
                    expected = (m2 * (x % p) + m1 * (x // p) * p) % q
                    assert apply_multiplier_prime((m1, m2), x, p, 2) == expected


def test_apply_multiplier_composite():
    f = factorize(36)
    ones = GeneralizedMultiplier(f, ((1, 1), (1, 1)))
    assert [apply_multiplier(ones, x) for x in range(36)] == list(range(36))
    m = GeneralizedMultiplier(factorize(8), ((1, 1, 3),))
    assert {apply_multiplier(m, x) for x in (1, 2, 5)} == {2, 3, 7}


def test_apply_multiplier_rejects_wrong_modulus():
    m = GeneralizedMultiplier(factorize(8), ((1, 1, 3),))
    with pytest.raises(DomainError):
        apply_multiplier(m, 8)


def test_zero_key_multipliers_act_as_units():
    z = zero_key(factorize(9))
    for m in solving_set(z):
        u = m.rows[0][-1] % 9  # the last entry determines the unit
        assert as_permutation(m) == tuple(u * x % 9 for x in range(9))


def test_generalized_multiplier_validation():
    f9 = factorize(9)
    with pytest.raises(DomainError, match="coprime"):
        GeneralizedMultiplier(f9, ((3, 1),))
    with pytest.raises(DomainError):
        GeneralizedMultiplier(f9, ((1,),))  # wrong row length


def test_genuine_rows_examples():
    assert genuine_multipliers_prime_power((0, 1), 3, 2) == (
        (1, 1),
        (1, 2),
        (2, 1),
        (2, 2),
    )
    assert genuine_multipliers_prime_power((0, 0, 1), 2, 3) == (
        (1, 1, 1),
        (1, 1, 3),
        (1, 3, 1),
        (1, 3, 3),
    )
    assert genuine_multipliers_prime_power((0,), 5, 1) == ((1,), (2,), (3,), (4,))


def test_genuine_validation():
    f8 = factorize(8)
    k8 = Key(f8, ((0, 0, 1),))
    with pytest.raises(DomainError, match="genuine range"):
        GenuineMultiplier(f8, ((1, 1, 5),), k8)  # 5 > 2^(3-1) - 1
    f9 = factorize(9)
    k9 = Key(f9, ((0, 0),))
    with pytest.raises(DomainError, match="congruence"):
        GenuineMultiplier(f9, ((1, 2),), k9)  # 2 != 1 (mod 3)
    GenuineMultiplier(f9, ((1, 4),), k9)  # 4 = 1 (mod 3) is fine


def test_solving_set_sizes_and_order():
    f9 = factorize(9)
    assert len(solving_set(zero_key(f9))) == 6
    assert len(solving_set(Key(f9, ((0, 1),)))) == 4
    ss = solving_set(Key(factorize(8), ((0, 0, 1),)))
    assert [m.rows for m in ss] == [
        ((1, 1, 1),),
        ((1, 1, 3),),
        ((1, 3, 1),),
        ((1, 3, 3),),
    ]
    # iteration is repeatable
    assert [m.rows for m in ss] == [m.rows for m in ss]


def test_solving_set_is_per_prime_product():
    f72 = factorize(72)
    k = Key(f72, ((0, 0, 1), (0, 1)))
    expected = len(genuine_multipliers_prime_power((0, 0, 1), 2, 3)) * len(
        genuine_multipliers_prime_power((0, 1), 3, 2)
    )
    assert len(solving_set(k)) == expected


def test_key01_solving_set_action():
    k = Key(factorize(9), ((0, 1),))
    perms = {as_permutation(m) for m in solving_set(k)}
    expected = {
        tuple((m2 * (x % 3) + m1 * (x // 3) * 3) % 9 for x in range(9))
        for m1 in (1, 2)
        for m2 in (1, 2)
    }
    assert perms == expected


def test_streaming_solving_set_matches_materialized():
    k = Key(factorize(8), ((0, 0, 1),))
    eager = [m.rows for m in solving_set(k)]
    lazy = solving_set(k, materialize_limit=1)
    assert len(lazy) == len(eager)
    assert [m.rows for m in lazy] == eager
    assert [m.rows for m in lazy] == eager  # streaming is re-iterable too


def test_order_preservation():
    for q in (4, 8, 16, 9, 27, 25, 49):
        f = factorize(q)
        for k in enumerate_keys(f):
            for m in solving_set(k):
                perm = as_permutation(m)
                for x in range(q):
                    assert element_order(perm[x], q) == element_order(x, q)


def test_key_preservation_exhaustive_small_n():
    # images under the solving set of k(S) never change the key, n <= 16
    for n in range(2, 17):
        key_cache = {}
        perm_cache = {}

        def key_of(members, n=n, cache=key_cache):
            if members not in cache:
                cache[members] = key_of_set(ConnectionSet(n, members))
            return cache[members]

        def perms_for(k, cache=perm_cache):
            if k not in cache:
                cache[k] = tuple(as_permutation(m) for m in solving_set(k))
            return cache[k]

        for size in range(1, n):
            for members in combinations(range(1, n), size):
                k = key_of(members)
                for perm in perms_for(k):
                    image = tuple(sorted(perm[x] for x in members))
                    assert key_of(image) == k, (n, members, image)
