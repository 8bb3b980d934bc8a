"""Exact arithmetic over Z_n.

Residues are canonical ints in ``range(n)``; derived views (CRT coordinate
tuples, p-adic digit vectors) are computed on demand and never stored.  All
functions are pure and all values immutable, so everything here is safe to
share across threads or worker processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence


class DomainError(ValueError):
    """An argument lies outside the operation's mathematical domain."""


class InternalConsistencyError(RuntimeError):
    """A theory-backed runtime check failed: a bug, not bad input."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Factorization:
    """Ordered prime-power decomposition n = p1^t1 * ... * pl^tl.

    Primes ascend strictly; every tuple structure downstream (keys,
    multipliers, CRT coordinates) inherits this order.
    """

    n: int
    parts: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 2:
            raise DomainError("modulus must be at least 2")
        prod = 1
        prev = 1
        for p, t in self.parts:
            if not is_prime(p):
                raise DomainError(f"{p} is not prime")
            if p <= prev:
                raise DomainError("primes must be strictly ascending")
            if t < 1:
                raise DomainError("exponents must be at least 1")
            prev = p
            prod *= p**t
        if prod != self.n:
            raise DomainError(f"prime powers multiply to {prod}, not {self.n}")

    @property
    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**t for p, t in self.parts)

    def __str__(self) -> str:
        body = " * ".join(f"{p}^{t}" if t > 1 else str(p) for p, t in self.parts)
        return f"{self.n} = {body}"


@lru_cache(maxsize=None)
def factorize(n: int) -> Factorization:
    """Unique ordered factorization by trial division."""
    if n < 2:
        raise DomainError("modulus must be at least 2")
    parts = []
    rest = n
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            t = 0
            while rest % p == 0:
                rest //= p
                t += 1
            parts.append((p, t))
        p += 1 if p == 2 else 2
    if rest > 1:
        parts.append((rest, 1))
    return Factorization(n, tuple(parts))


def _check_residue(x: int, n: int) -> None:
    if not 0 <= x < n:
        raise DomainError(f"{x} is not a canonical residue mod {n}")


def crt_encode(x: int, f: Factorization) -> tuple[int, ...]:
    """Coordinates of x in the direct-sum view, one per prime power."""
    _check_residue(x, f.n)
    return tuple(x % q for q in f.prime_powers)


def crt_decode(components: Sequence[int], f: Factorization) -> int:
    """The unique x in range(n) matching every coordinate; inverts crt_encode."""
    qs = f.prime_powers
    if len(components) != len(qs):
        raise DomainError("one component per prime power required")
    x = 0
    for c, q in zip(components, qs):
        _check_residue(c, q)
        m = f.n // q
        x = (x + c * m * pow(m, -1, q)) % f.n
    return x


def p_adic_digits(x: int, modulus: int) -> tuple[int, ...]:
    """Base-p digits (x_0, ..., x_{t-1}) of x for a prime-power modulus p^t."""
    f = factorize(modulus)
    if len(f.parts) != 1:
        raise DomainError(f"{modulus} is not a prime power")
    ((p, t),) = f.parts
    _check_residue(x, modulus)
    digits = []
    for _ in range(t):
        digits.append(x % p)
        x //= p
    return tuple(digits)


def element_order(x: int, n: int) -> int:
    """Additive order of x in Z_n, i.e. n / gcd(x, n)."""
    _check_residue(x, n)
    return n // math.gcd(x, n)


def order_exponent(x: int, p: int, t: int) -> int:
    """The a with p^a the additive order of x in Z_{p^t} (0 for x = 0)."""
    _check_residue(x, p**t)
    if x == 0:
        return 0
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return t - v


@lru_cache(maxsize=None)
def units(n: int) -> tuple[int, ...]:
    """Ascending units of Z_n; multiplication by these realizes Aut(Z_n)."""
    if n < 2:
        raise DomainError("modulus must be at least 2")
    return tuple(u for u in range(1, n) if math.gcd(u, n) == 1)


def subgroup_of_order(n: int, d: int) -> tuple[int, ...]:
    """The unique subgroup of Z_n of order d: the multiples of n/d."""
    if d < 1 or n % d != 0:
        raise DomainError(f"{d} does not divide {n}")
    return tuple(range(0, n, n // d))


def generated_subgroup(members: Iterable[int], n: int) -> tuple[int, ...]:
    """<S>: the multiples of gcd(S plus n); the empty set generates {0}."""
    g = n
    for s in members:
        _check_residue(s, n)
        g = math.gcd(g, s)
    return tuple(range(0, n, g))
