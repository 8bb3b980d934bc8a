"""Isomorphism and CI decisions for circulant (di)graphs.

Two circulants Cay(Z_n, S) and Cay(Z_n, T) are isomorphic exactly when their
keys agree and some solving-set permutation of that key carries S onto T
(Muzychuk's criterion).  CI testing scans the whole solving set: S is CI iff
every image stays inside the unit orbit of S.

On top of the single-set decision sit the exhaustive valency sweeps, the
closed-form classification predicates they are checked against, the coset
shaped fast paths, and the explicit non-CI witness families.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator

from .cayley import MODES, ConnectionSet, orbit_members
from .keys import (
    Key,
    almost_zero_key,
    key_of_set,
    zero_key,
)
from .multipliers import GenuineMultiplier, as_permutation, solving_set
from .zn import (
    DomainError,
    InternalConsistencyError,
    factorize,
    generated_subgroup,
    is_prime,
    subgroup_of_order,
    units,
)

# Solving sets at most this large are materialized (with their permutation
# tables) and cached per key; larger ones stream.
MATERIALIZE_LIMIT = 10_000


@dataclass(frozen=True)
class IsoVerdict:
    """Outcome of an isomorphism decision between two connection sets."""

    isomorphic: bool
    reason: str  # "key-mismatch" | "multiplier-found" | "exhausted"
    witness_multiplier: GenuineMultiplier | None = None


@dataclass(frozen=True)
class CiVerdict:
    """Outcome of a CI decision; non-CI verdicts carry an isomorphic mate
    outside the unit orbit."""

    is_ci: bool
    witness: ConnectionSet | None = None
    fast_path: str = "none"


@dataclass(frozen=True)
class CosetCase:
    """A recognized subgroup-coset shape with a CI fast conclusion."""

    case: str  # "i" | "ii" | "iii"
    subgroup: tuple[int, ...]
    shift: int


@dataclass(frozen=True)
class ClassificationReport:
    """One cell of a sweep: exhaustive result next to the closed form.

    ``predicate_value`` and ``agreement`` are None when no closed-form
    predicate applies to this (mode, m) cell.
    """

    n: int
    m: int
    mode: str
    property_holds: bool
    counterexamples: tuple[tuple[ConnectionSet, ConnectionSet], ...]
    predicate_value: bool | None
    agreement: bool | None
    failed_at: int | None = None


@dataclass(frozen=True)
class WitnessFamily:
    """A named explicit non-CI construction."""

    family: str
    connection_set: ConnectionSet


class DisagreementError(RuntimeError):
    """Exhaustive computation contradicted a closed-form predicate."""

    def __init__(self, reports: Iterable[ClassificationReport]):
        self.reports = tuple(reports)
        bad = sum(1 for r in self.reports if r.agreement is False)
        super().__init__(f"{bad} cell(s) disagree with the classification predicates")


@lru_cache(maxsize=None)
def _cached_permutations(
    k: Key,
) -> tuple[tuple[GenuineMultiplier, tuple[int, ...]], ...]:
    return tuple((m, as_permutation(m)) for m in solving_set(k))


def _iter_permutations(k: Key) -> Iterator[tuple[GenuineMultiplier, tuple[int, ...]]]:
    ss = solving_set(k, materialize_limit=MATERIALIZE_LIMIT)
    if len(ss) <= MATERIALIZE_LIMIT:
        yield from _cached_permutations(k)
    else:
        for m in ss:
            yield m, as_permutation(m)


def _check_pair(s: ConnectionSet, t: ConnectionSet) -> None:
    if s.n != t.n:
        raise DomainError("connection sets live over different Z_n")
    if s.mode != t.mode:
        raise DomainError("connection sets have different modes")
    if not s.members or not t.members:
        raise DomainError("key of the empty set is undefined")


def muzychuk_isomorphic(s: ConnectionSet, t: ConnectionSet) -> IsoVerdict:
    """Decide Cay(Z_n, S) isomorphic to Cay(Z_n, T) without any graph search.

    Different keys settle it negatively at once; equal keys reduce the
    question to scanning the solving set for a permutation with S^f = T.
    The recorded witness is the first hit in enumeration order.
    """
    _check_pair(s, t)
    ks = key_of_set(s)
    kt = key_of_set(t)
    if ks != kt:
        return IsoVerdict(False, "key-mismatch")
    target = set(t.members)
    for m, perm in _iter_permutations(ks):
        if {perm[x] for x in s.members} == target:
            return IsoVerdict(True, "multiplier-found", m)
    return IsoVerdict(False, "exhausted")


def isomorphism_class(s: ConnectionSet) -> tuple[ConnectionSet, ...]:
    """All images of S under its key's solving set, deduplicated and sorted.

    By the criterion this is the full isomorphism class of Cay(Z_n, S)
    among connection sets.  Every image is checked to carry the same key.
    """
    if not s.members:
        raise DomainError("key of the empty set is undefined")
    k = key_of_set(s)
    images = {
        tuple(sorted(perm[x] for x in s.members))
        for _, perm in _iter_permutations(k)
    }
    out = []
    for mem in sorted(images):
        t = ConnectionSet(s.n, mem, s.mode)
        if key_of_set(t) != k:
            raise InternalConsistencyError("solving-set image changed the key")
        out.append(t)
    return tuple(out)


def is_ci(s: ConnectionSet) -> CiVerdict:
    """Full-scan CI test: CI iff every solving-set image stays in the orbit.

    The witness, when one exists, is the first image outside the orbit in
    enumeration order, which makes reports reproducible.
    """
    if not s.members:
        return CiVerdict(True)
    k = key_of_set(s)
    orbit = set(orbit_members(s.members, s.n))
    for _, perm in _iter_permutations(k):
        image = tuple(sorted(perm[x] for x in s.members))
        if image not in orbit:
            witness = ConnectionSet(s.n, image, s.mode)
            if key_of_set(witness) != k:
                raise InternalConsistencyError("solving-set image changed the key")
            return CiVerdict(False, witness)
    return CiVerdict(True)


def is_ci_reduced(s: ConnectionSet) -> CiVerdict:
    """Decide CI inside the generated subgroup and transfer the verdict.

    CI-ness of Cay(Z_n, S) and Cay(<S>, S) coincide, so S is relabeled
    inside <S> (divide by n/n') and decided there; witnesses lift back by
    multiplying, and the lift is checked to keep the key and avoid the
    orbit.
    """
    if not s.members:
        return CiVerdict(True)
    sub = generated_subgroup(s.members, s.n)
    n_sub = len(sub)
    if n_sub == s.n:
        return is_ci(s)
    g = s.n // n_sub
    reduced = ConnectionSet(n_sub, tuple(sorted(x // g for x in s.members)), s.mode)
    verdict = is_ci(reduced)
    if verdict.is_ci:
        return CiVerdict(True, None, "reduction")
    lifted = ConnectionSet(
        s.n, tuple(sorted(x * g for x in verdict.witness.members)), s.mode
    )
    if key_of_set(lifted) != key_of_set(s):
        raise InternalConsistencyError("lifted witness changed the key")
    if lifted.members in orbit_members(s.members, s.n):
        raise InternalConsistencyError("lifted witness fell inside the unit orbit")
    return CiVerdict(False, lifted, "reduction")


def zero_key_fast_path(s: ConnectionSet) -> CiVerdict | None:
    """CI without any scan when the key is the (almost) zero key.

    Solving sets of those keys act as Aut(Z_n), so every isomorphic mate is
    already a unit multiple.  Returns None when the shortcut does not apply.
    """
    if not s.members:
        raise DomainError("key of the empty set is undefined")
    f = factorize(s.n)
    k = key_of_set(s)
    if k == zero_key(f):
        return CiVerdict(True, None, "zero-key")
    if s.n % 8 == 4 and k == almost_zero_key(f):
        return CiVerdict(True, None, "zero-key")
    return None


def _double_coset(members: set[int], n: int) -> tuple[tuple[int, ...], int] | None:
    # (P + s) | (P - s) for the subgroup P of odd prime order p, P+s != P-s
    size = len(members)
    if size % 2:
        return None
    p = size // 2
    if p < 3 or not is_prime(p) or n % p:
        return None
    sub = subgroup_of_order(n, p)
    shift = min(members)
    plus = {(x + shift) % n for x in sub}
    minus = {(x - shift) % n for x in sub}
    if plus != minus and plus | minus == members:
        return sub, shift
    return None


def recognize_coset_case(s: ConnectionSet) -> CosetCase | None:
    """Match S against the coset shapes that are CI by construction.

    (i)   S = H + s for a subgroup H (any single coset avoiding 0);
    (ii)  S = (P + s) | (P - s) for P of odd prime order, P+s != P-s;
    (iii) shape (ii) plus {n/2}, additionally requiring p^2 | n and
          <S> = Z_n, without which the conclusion is not available and the
          recognizer falls through.
    """
    n = s.n
    members = set(s.members)
    size = len(members)
    if size == 0:
        return None
    if n % size == 0:
        sub = subgroup_of_order(n, size)
        shift = min(members)
        if {(x + shift) % n for x in sub} == members:
            return CosetCase("i", sub, shift)
    found = _double_coset(members, n)
    if found:
        return CosetCase("ii", *found)
    if n % 2 == 0 and n // 2 in members:
        found = _double_coset(members - {n // 2}, n)
        if found:
            sub, shift = found
            p = len(sub)
            if n % (p * p) == 0 and len(generated_subgroup(s.members, n)) == n:
                return CosetCase("iii", sub, shift)
    return None


def _coset_fast_path(s: ConnectionSet) -> CiVerdict | None:
    case = recognize_coset_case(s)
    if case is None:
        return None
    return CiVerdict(True, None, f"coset-case-{case.case}")


def decide_ci(s: ConnectionSet) -> CiVerdict:
    """CI decision pipeline: zero-key shortcut, coset shapes, then the
    reduction to the generated subgroup with a full scan."""
    if not s.members:
        return CiVerdict(True)
    verdict = zero_key_fast_path(s)
    if verdict is not None:
        return verdict
    verdict = _coset_fast_path(s)
    if verdict is not None:
        return verdict
    return is_ci_reduced(s)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}")


def _check_nm(n: int, m: int) -> None:
    if n < 2:
        raise DomainError("modulus must be at least 2")
    if not 1 <= m <= n - 1:
        raise DomainError("valency must lie in 1..n-1")


def connection_set_tuples(n: int, m: int, mode: str) -> Iterator[tuple[int, ...]]:
    """All member tuples of size m (graph mode: inverse-closed only)."""
    if mode == "digraph":
        yield from combinations(range(1, n), m)
        return
    pairs = [(x, n - x) for x in range(1, (n + 1) // 2)]
    if m % 2 == 0:
        for combo in combinations(pairs, m // 2):
            yield tuple(sorted(x for pair in combo for x in pair))
    elif n % 2 == 0:
        half = n // 2
        for combo in combinations(pairs, (m - 1) // 2):
            yield tuple(sorted((half, *(x for pair in combo for x in pair))))
    # odd m with odd n: no inverse-closed sets exist


def orbit_representatives(n: int, m: int, mode: str = "digraph") -> tuple[tuple[int, ...], ...]:
    """Lexicographically least member per unit orbit, ascending."""
    _check_mode(mode)
    _check_nm(n, m)
    tables = [tuple(u * x % n for x in range(n)) for u in units(n)]
    reps = []
    for mem in connection_set_tuples(n, m, mode):
        if all(tuple(sorted(tab[x] for x in mem)) >= mem for tab in tables):
            reps.append(mem)
    return tuple(sorted(reps))


def m_property(n: int, m: int, mode: str = "digraph") -> ClassificationReport:
    """Exhaustively test every valency-m connection set, one per orbit.

    Single valencies carry no closed-form predicate (those quantify over
    all valencies up to m), so the predicate fields stay None here.
    """
    _check_mode(mode)
    _check_nm(n, m)
    counterexamples = []
    for mem in orbit_representatives(n, m, mode):
        s = ConnectionSet(n, mem, mode)
        verdict = decide_ci(s)
        if not verdict.is_ci:
            counterexamples.append((s, verdict.witness))
    return ClassificationReport(
        n, m, mode, not counterexamples, tuple(counterexamples), None, None
    )


@lru_cache(maxsize=None)
def _m_property_cached(n: int, m: int, mode: str) -> ClassificationReport:
    return m_property(n, m, mode)


def is_m_group(n: int, m: int, mode: str = "digraph") -> ClassificationReport:
    """Conjunction of the valency property over 1..m, short-circuiting.

    The report compares against the closed-form predicate where one is
    stated (digraph mode from m = 3, graph mode from m = 6) and records
    the first failing valency otherwise reached.
    """
    _check_mode(mode)
    _check_nm(n, m)
    holds = True
    failed_at = None
    counterexamples: tuple = ()
    for i in range(1, m + 1):
        report = _m_property_cached(n, i, mode)
        if not report.property_holds:
            holds = False
            failed_at = i
            counterexamples = report.counterexamples
            break
    if mode == "digraph" and m >= 3:
        predicate = predicate_mdci(n, m)
    elif mode == "graph" and m >= 6:
        predicate = predicate_mci(n, m)
    else:
        predicate = None
    agreement = None if predicate is None else predicate == holds
    return ClassificationReport(
        n, m, mode, holds, counterexamples, predicate, agreement, failed_at
    )


def predicate_mdci(n: int, m: int) -> bool:
    """Closed form for the cumulative digraph property at valency m:
    n divisible by neither 8 nor p^2 for any odd prime p < m."""
    if m < 3:
        raise DomainError("predicate stated only for m ≥ 3")
    if n < 2:
        raise DomainError("modulus must be at least 2")
    if n % 8 == 0:
        return False
    return not any(p != 2 and t >= 2 and p < m for p, t in factorize(n).parts)


def predicate_mci(n: int, m: int) -> bool:
    """Closed form for the cumulative graph property at valency m: the three
    exceptional orders, or n divisible by neither 8 nor p^2 for any odd
    prime p < (m-1)/2."""
    if m < 6:
        raise DomainError("predicate stated only for m ≥ 6")
    if n < 2:
        raise DomainError("modulus must be at least 2")
    if n in (8, 9, 18):
        return True
    if n % 8 == 0:
        return False
    return not any(
        p != 2 and t >= 2 and 2 * p < m - 1 for p, t in factorize(n).parts
    )


def predicate_dci_group(n: int) -> bool:
    """n = k or 2k with k square-free: no factor 8, no odd square factor."""
    if n < 2:
        raise DomainError("modulus must be at least 2")
    if n % 8 == 0:
        return False
    return not any(p != 2 and t >= 2 for p, t in factorize(n).parts)


def predicate_ci_group(n: int) -> bool:
    """The DCI condition relaxed by the three exceptional orders."""
    if n < 2:
        raise DomainError("modulus must be at least 2")
    return n in (8, 9, 18) or predicate_dci_group(n)


def _lift(members: Iterable[int], n: int, q: int) -> tuple[int, ...]:
    # embed Z_q onto the order-q subgroup of Z_n along x -> (n/q) x
    g = n // q
    return tuple(sorted(x * g for x in members))


def witnesses(n: int, mode: str = "digraph") -> tuple[WitnessFamily, ...]:
    """The explicit non-CI families applicable to n, each re-checked non-CI.

    Digraph families: the lifted valency-3 set over Z_8 when 8 | n, and the
    lifted coset-plus-generator set over Z_{p^2} for every odd prime square
    dividing n.  Graph families (skipped entirely for the three exceptional
    orders): the valency-6 set for 8 | n, the valency-8 set for 9 | n, and
    the lifted double-coset set over Z_{p^2} for primes p >= 5.
    """
    _check_mode(mode)
    if n < 2:
        raise DomainError("modulus must be at least 2")
    families: list[tuple[str, tuple[int, ...]]] = []
    if mode == "digraph":
        if n % 8 == 0:
            families.append(("z8-lift", _lift((1, 2, 5), n, 8)))
        for p, t in factorize(n).parts:
            if p != 2 and t >= 2:
                q = p * p
                base = sorted(set(range(1, q, p)) | {p})
                families.append((f"z{q}-coset-plus-p", _lift(base, n, q)))
    else:
        if n not in (8, 9, 18):
            if n % 8 == 0:
                members = sorted((1, n - 1, 2, n - 2, n // 2 - 1, n // 2 + 1))
                families.append(("mod8-graph", tuple(members)))
            if n % 9 == 0:
                members = sorted(
                    (1, n - 1, 3, n - 3, n // 3 + 1, n // 3 - 1,
                     2 * n // 3 + 1, 2 * n // 3 - 1)
                )
                families.append(("mod9-graph", tuple(members)))
            for p, t in factorize(n).parts:
                if p >= 5 and t >= 2:
                    q = p * p
                    base = sorted(
                        set(range(1, q, p)) | set(range(p - 1, q, p)) | {p, q - p}
                    )
                    families.append((f"z{q}-double-coset", _lift(base, n, q)))
    out = []
    for name, members in families:
        s = ConnectionSet(n, tuple(members), mode)
        if is_ci_reduced(s).is_ci:
            raise InternalConsistencyError(
                f"witness family {name} unexpectedly CI for n={n}"
            )
        out.append(WitnessFamily(name, s))
    return tuple(out)


def theorem_cells(n_max: int, m_max: int, mode: str) -> list[tuple[int, int]]:
    """The (n, m) cells where a closed-form predicate applies."""
    _check_mode(mode)
    lo = 3 if mode == "digraph" else 6
    return [
        (n, m)
        for n in range(2, n_max + 1)
        for m in range(lo, min(m_max, n - 1) + 1)
    ]


def _reports_for_n(args: tuple[int, tuple[int, ...], str]) -> list[ClassificationReport]:
    n, ms, mode = args
    return [is_m_group(n, m, mode) for m in ms]


def verify_theorems(
    n_max: int, m_max: int, mode: str = "digraph", workers: int = 1
) -> tuple[ClassificationReport, ...]:
    """Exhaustive group property against the predicate on every cell.

    Any disagreeing cell raises DisagreementError carrying all reports
    (a disagreement is either an implementation bug or a refutation and
    must not pass silently).  Worker count never changes the result: cells
    are computed independently and merged in sorted order.
    """
    cells = theorem_cells(n_max, m_max, mode)
    by_n: dict[int, list[int]] = {}
    for n, m in cells:
        by_n.setdefault(n, []).append(m)
    tasks = [(n, tuple(ms), mode) for n, ms in sorted(by_n.items())]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_reports_for_n, tasks))
    else:
        chunks = [_reports_for_n(task) for task in tasks]
    reports = sorted(
        (r for chunk in chunks for r in chunk), key=lambda r: (r.n, r.m)
    )
    if any(r.agreement is False for r in reports):
        raise DisagreementError(reports)
    return tuple(reports)
