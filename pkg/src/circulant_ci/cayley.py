"""Connection sets, Cayley (di)graphs over Z_n, unit orbits, and a
self-contained backtracking isomorphism oracle.

The oracle is deliberately independent of the key and multiplier machinery:
it decides isomorphism by colour-refinement-pruned exhaustive search on the
adjacency structure alone, so it can serve as ground truth for the
criterion-based engine.  It refuses (never approximates) above its cutoff.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .zn import DomainError, units

MODES = ("digraph", "graph")


class OracleCutoffError(RuntimeError):
    """The brute-force oracle refuses inputs above its configured cutoff."""


@dataclass(frozen=True)
class ConnectionSet:
    """A subset of Z_n minus {0}; graph mode additionally needs S = -S."""

    n: int
    members: tuple[int, ...]
    mode: str = "digraph"

    def __post_init__(self) -> None:
        if self.n < 2:
            raise DomainError("modulus must be at least 2")
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}")
        if tuple(sorted(set(self.members))) != self.members:
            raise DomainError("members must be a strictly increasing tuple")
        for s in self.members:
            if not 1 <= s < self.n:
                raise DomainError(
                    "connection set members must lie in 1..n-1 (0 is excluded)"
                )
        if self.mode == "graph":
            if {(-s) % self.n for s in self.members} != set(self.members):
                raise DomainError("graph connection set must be inverse-closed")

    @classmethod
    def from_iterable(cls, n: int, members, mode: str = "digraph") -> "ConnectionSet":
        return cls(n, tuple(sorted(set(members))), mode)

    @property
    def valency(self) -> int:
        return len(self.members)

    def __str__(self) -> str:
        return "{%s}" % ",".join(map(str, self.members))


@dataclass(frozen=True)
class CayleyDigraph:
    """Vertex set Z_n with the arc (g, s+g) for every member s."""

    connection: ConnectionSet
    adjacency: tuple[frozenset[int], ...]

    @property
    def n(self) -> int:
        return self.connection.n


def build_cayley(s: ConnectionSet) -> CayleyDigraph:
    n = s.n
    adjacency = tuple(
        frozenset((g + m) % n for m in s.members) for g in range(n)
    )
    return CayleyDigraph(s, adjacency)


def orbit_members(members: tuple[int, ...], n: int) -> tuple[tuple[int, ...], ...]:
    """Distinct unit multiples of a member tuple, each sorted, overall sorted."""
    seen = {tuple(sorted(u * x % n for x in members)) for u in units(n)}
    return tuple(sorted(seen))


def aut_orbit(s: ConnectionSet) -> tuple[tuple[ConnectionSet, ...], ConnectionSet]:
    """The orbit of S under unit multiplication and its least member.

    The representative is the lexicographically least sorted member tuple;
    CI-ness is a property of this orbit.
    """
    orbit = tuple(
        ConnectionSet(s.n, m, s.mode) for m in orbit_members(s.members, s.n)
    )
    return orbit, orbit[0]


def _joint_refinement(a_out, a_in, b_out, b_in):
    """Iterated in/out neighbour colour refinement with a shared palette.

    Returns per-vertex colours for both graphs, or None as soon as the
    colour histograms diverge (then no isomorphism exists).
    """
    n = len(a_out)
    ca = [0] * n
    cb = [0] * n
    while True:
        sig_a = [
            (ca[v], tuple(sorted(ca[w] for w in a_out[v])),
             tuple(sorted(ca[w] for w in a_in[v])))
            for v in range(n)
        ]
        sig_b = [
            (cb[v], tuple(sorted(cb[w] for w in b_out[v])),
             tuple(sorted(cb[w] for w in b_in[v])))
            for v in range(n)
        ]
        if Counter(sig_a) != Counter(sig_b):
            return None
        palette = {s: i for i, s in enumerate(sorted(set(sig_a)))}
        new_a = [palette[s] for s in sig_a]
        new_b = [palette[s] for s in sig_b]
        if new_a == ca and new_b == cb:
            return ca, cb
        ca, cb = new_a, new_b


def brute_force_isomorphism(
    a: CayleyDigraph, b: CayleyDigraph, *, oracle_cutoff: int = 12
) -> tuple[int, ...] | None:
    """An arc-preserving vertex bijection from `a` onto `b`, or None.

    Plain backtracking over partial vertex maps, candidates pruned by the
    refinement colours and checked for adjacency consistency against every
    vertex already mapped.  Exact; no heuristics affect correctness.
    """
    if a.n != b.n:
        raise DomainError("digraphs live over different Z_n")
    if a.connection.mode != b.connection.mode:
        raise DomainError("digraphs have different modes")
    n = a.n
    if n > oracle_cutoff:
        raise OracleCutoffError(f"oracle cutoff exceeded (n={n} > {oracle_cutoff})")
    if a.connection.valency != b.connection.valency:
        return None

    a_out = [set(x) for x in a.adjacency]
    b_out = [set(x) for x in b.adjacency]
    a_in = [set() for _ in range(n)]
    b_in = [set() for _ in range(n)]
    for v in range(n):
        for w in a_out[v]:
            a_in[w].add(v)
        for w in b_out[v]:
            b_in[w].add(v)

    colours = _joint_refinement(a_out, a_in, b_out, b_in)
    if colours is None:
        return None
    ca, cb = colours

    mapping = [-1] * n
    used = [False] * n
    placed: list[int] = []

    def pick() -> int:
        # most-constrained-first: maximize already-mapped neighbours
        best, best_score = -1, (-1, 0)
        for v in range(n):
            if mapping[v] >= 0:
                continue
            score = sum(1 for u in placed if u in a_out[v] or u in a_in[v])
            if (score, -v) > best_score:
                best, best_score = v, (score, -v)
        return best

    def consistent(v: int, w: int) -> bool:
        for u in placed:
            mu = mapping[u]
            if (u in a_out[v]) != (mu in b_out[w]):
                return False
            if (u in a_in[v]) != (mu in b_in[w]):
                return False
        return True

    def search() -> bool:
        if len(placed) == n:
            return True
        v = pick()
        for w in range(n):
            if used[w] or cb[w] != ca[v]:
                continue
            if consistent(v, w):
                mapping[v] = w
                used[w] = True
                placed.append(v)
                if search():
                    return True
                placed.pop()
                used[w] = False
                mapping[v] = -1
        return False

    if search():
        return tuple(mapping)
    return None


def brute_force_isomorphic(
    a: CayleyDigraph, b: CayleyDigraph, *, oracle_cutoff: int = 12
) -> bool:
    """Boolean form of the oracle."""
    return brute_force_isomorphism(a, b, oracle_cutoff=oracle_cutoff) is not None
