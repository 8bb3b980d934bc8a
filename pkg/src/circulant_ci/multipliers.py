"""Generalized multipliers, their permutations, and solving sets.

A multiplier row (m_1, ..., m_t) of Z_{p^t} needs every entry coprime to p
and acts through the p-adic digits: x = sum x_i p^i maps to
sum m_{t-i} x_i p^i (mod p^t).  Rows congruent entrywise mod p^i induce the
same permutation, so each key has a normal form, the *genuine* rows: entry
m_i ranges over [1, p^(i - k_i) - 1] and consecutive entries satisfy
m_{i+1} = m_i (mod p^(i - k_{i+1})).

The solving set of a key combines the per-prime genuine rows across the
ascending primes of n; its induced permutations are exactly what the
isomorphism criterion scans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator

from .keys import Key, _check_key_row
from .zn import DomainError, Factorization, crt_decode, crt_encode, is_prime


@dataclass(frozen=True)
class GeneralizedMultiplier:
    """Ragged tuple of positive entries, each coprime to its prime."""

    factorization: Factorization
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        parts = self.factorization.parts
        if len(self.rows) != len(parts):
            raise DomainError("one multiplier row per prime power required")
        for (p, t), row in zip(parts, self.rows):
            if len(row) != t:
                raise DomainError(f"multiplier row for {p}^{t} must have length {t}")
            for m in row:
                if m < 1 or m % p == 0:
                    raise DomainError(
                        "multiplier entries must be positive and coprime to p"
                    )

    def as_lists(self) -> list[list[int]]:
        """Serialization form mirroring the key serialization."""
        return [list(row) for row in self.rows]


@dataclass(frozen=True)
class GenuineMultiplier(GeneralizedMultiplier):
    """A generalized multiplier in the normal form of a key."""

    key: Key = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.key is None or self.key.factorization != self.factorization:
            raise DomainError("genuine multiplier must carry a key of the same n")
        for (p, t), row, krow in zip(
            self.factorization.parts, self.rows, self.key.rows
        ):
            for a in range(t):
                bound = p ** (a + 1 - krow[a])
                assert bound >= 2  # k_j < j keeps the genuine range non-empty
                if not 1 <= row[a] < bound:
                    raise DomainError(
                        f"entry {row[a]} outside the genuine range [1, {bound - 1}]"
                    )
            for a in range(t - 1):
                mod = p ** (a + 1 - krow[a + 1])
                if (row[a + 1] - row[a]) % mod:
                    raise DomainError("congruence chain violated")


def apply_multiplier_prime(row: tuple[int, ...], x: int, p: int, t: int) -> int:
    """Image of x in Z_{p^t}: digit x_i picks up the factor m_{t-i}."""
    if len(row) != t:
        raise DomainError(f"multiplier row must have length {t}")
    q = p**t
    if not 0 <= x < q:
        raise DomainError(f"{x} is not a canonical residue mod {q}")
    y = 0
    power = 1
    for i in range(t):
        y += row[t - 1 - i] * (x % p) * power
        x //= p
        power *= p
    return y % q


def apply_multiplier(m: GeneralizedMultiplier, x: int) -> int:
    """Image of x in Z_n: encode, act per prime power, decode."""
    f = m.factorization
    components = crt_encode(x, f)
    images = tuple(
        apply_multiplier_prime(row, c, p, t)
        for row, (p, t), c in zip(m.rows, f.parts, components)
    )
    return crt_decode(images, f)


def as_permutation(m: GeneralizedMultiplier) -> tuple[int, ...]:
    """The full image table of the induced permutation of Z_n."""
    return tuple(apply_multiplier(m, x) for x in range(m.factorization.n))


@lru_cache(maxsize=None)
def genuine_multipliers_prime_power(
    row: tuple[int, ...], p: int, t: int
) -> tuple[tuple[int, ...], ...]:
    """All genuine rows for a key row, in lexicographic order.

    For t = 1 the congruence chain is vacuous and the rows are exactly the
    nonzero residues mod p.
    """
    if not is_prime(p) or t < 1:
        raise DomainError("prime power required")
    _check_key_row(tuple(row), t)
    out: list[tuple[int, ...]] = []

    def extend(prefix: list[int]) -> None:
        a = len(prefix)
        if a == t:
            out.append(tuple(prefix))
            return
        for m in range(1, p ** (a + 1 - row[a])):
            if m % p == 0:
                continue
            if a > 0 and (m - prefix[-1]) % p ** (a - row[a]):
                continue
            prefix.append(m)
            extend(prefix)
            prefix.pop()

    extend([])
    return tuple(out)


class SolvingSet:
    """The genuine multipliers of a key, deterministically ordered.

    Iteration walks the cartesian product of the per-prime genuine rows in
    ascending-prime, lexicographic order and is repeatable.  Small sets
    (at most ``materialize_limit`` elements) are materialized up front since
    sweeps iterate them many times; larger ones stream.
    """

    def __init__(self, key: Key, materialize_limit: int = 10_000):
        self.key = key
        f = key.factorization
        self._per_prime = tuple(
            genuine_multipliers_prime_power(row, p, t)
            for (p, t), row in zip(f.parts, key.rows)
        )
        self._size = math.prod(len(rows) for rows in self._per_prime)
        self._materialized: tuple[GenuineMultiplier, ...] | None = None
        if self._size <= materialize_limit:
            self._materialized = tuple(self._generate())

    def _generate(self) -> Iterator[GenuineMultiplier]:
        f = self.key.factorization
        for rows in product(*self._per_prime):
            yield GenuineMultiplier(f, rows, self.key)

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[GenuineMultiplier]:
        if self._materialized is not None:
            return iter(self._materialized)
        return self._generate()


def solving_set(k: Key, materialize_limit: int = 10_000) -> SolvingSet:
    """P(k): every permutation the criterion needs for sets with key k."""
    return SolvingSet(k, materialize_limit)
