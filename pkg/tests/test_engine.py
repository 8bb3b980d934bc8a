"""Unit tests for the isomorphism criterion, CI decisions, sweeps,
predicates, and witness families."""

import random

import pytest

from circulant_ci.cayley import ConnectionSet, aut_orbit
from circulant_ci.multipliers import as_permutation
from circulant_ci.engine import (
    decide_ci,
    is_ci,
    is_ci_reduced,
    is_m_group,
    isomorphism_class,
    m_property,
    muzychuk_isomorphic,
    orbit_representatives,
    predicate_ci_group,
    predicate_dci_group,
    predicate_mci,
    predicate_mdci,
    recognize_coset_case,
    verify_theorems,
    witnesses,
    zero_key_fast_path,
)
from circulant_ci.zn import DomainError, factorize, units


def _cs(n, members, mode="digraph"):
    return ConnectionSet(n, tuple(sorted(members)), mode)


def test_muzychuk_examples():
    v = muzychuk_isomorphic(_cs(8, (1, 2, 5)), _cs(8, (2, 3, 7)))
    assert v.isomorphic and v.reason == "multiplier-found"
    assert v.witness_multiplier.rows == ((1, 1, 3),)
    perm = as_permutation(v.witness_multiplier)
    assert {perm[x] for x in (1, 2, 5)} == {2, 3, 7}
    same = muzychuk_isomorphic(_cs(8, (1, 2, 5)), _cs(8, (1, 2, 5)))
    assert same.isomorphic and same.witness_multiplier.rows == ((1, 1, 1),)
    v2 = muzychuk_isomorphic(_cs(8, (1, 2, 5)), _cs(8, (1, 2, 3)))
    assert not v2.isomorphic and v2.reason == "key-mismatch"
    assert v2.witness_multiplier is None


def test_muzychuk_domain_errors():
    with pytest.raises(DomainError):
        muzychuk_isomorphic(_cs(8, (1,)), _cs(9, (1,)))
    with pytest.raises(DomainError, match="empty"):
        muzychuk_isomorphic(_cs(8, (1,)), _cs(8, ()))
    with pytest.raises(DomainError, match="mode"):
        muzychuk_isomorphic(_cs(8, (1, 7), "graph"), _cs(8, (1, 7), "digraph"))


def test_muzychuk_exhausted_for_equal_keys():
    # both keys are zero, but no permutation can match different valencies
    v = muzychuk_isomorphic(_cs(12, (1,)), _cs(12, (1, 5)))
    assert not v.isomorphic and v.reason == "exhausted"


def test_isomorphism_class_of_z8_witness():
    cls = isomorphism_class(_cs(8, (1, 2, 5)))
    assert tuple(c.members for c in cls) == (
        (1, 2, 5),
        (1, 5, 6),
        (2, 3, 7),
        (3, 6, 7),
    )


def test_isomorphism_class_zero_key_is_orbit():
    for s in (_cs(12, (1, 5)), _cs(9, (4,))):
        orbit, _ = aut_orbit(s)
        assert set(isomorphism_class(s)) == set(orbit)


def test_is_ci_examples():
    v = is_ci(_cs(8, (1, 2, 5)))
    assert not v.is_ci and v.witness.members == (2, 3, 7)
    mates = {o.members for o in aut_orbit(_cs(8, (1, 5, 6)))[0]}
    assert v.witness.members in mates
    assert is_ci(_cs(9, (1, 4, 7))).is_ci
    v9 = is_ci(_cs(9, (1, 3, 4, 7)))
    assert not v9.is_ci and v9.witness.members == (2, 3, 5, 8)
    assert is_ci(_cs(9, ())).is_ci  # the empty set is CI by convention


def test_is_ci_reduced_examples():
    v = is_ci_reduced(_cs(16, (2, 4, 10)))
    assert not v.is_ci
    assert v.fast_path == "reduction"
    assert v.witness.members == (4, 6, 14)
    # a generating set gives the identical verdict
    assert is_ci_reduced(_cs(8, (1, 2, 5))) == is_ci(_cs(8, (1, 2, 5)))
    v12 = is_ci_reduced(_cs(12, (4, 8)))
    assert v12.is_ci and v12.fast_path == "reduction"


def test_recognize_coset_case_examples():
    case = recognize_coset_case(_cs(27, (1, 10, 19)))
    assert case.case == "i" and case.subgroup == (0, 9, 18) and case.shift == 1
    case = recognize_coset_case(_cs(27, (1, 8, 10, 17, 19, 26)))
    assert case.case == "ii" and case.subgroup == (0, 9, 18)
    p_sub = (0, 18, 36)
    members = sorted(
        {(x + 1) % 54 for x in p_sub} | {(x - 1) % 54 for x in p_sub} | {27}
    )
    case = recognize_coset_case(_cs(54, members, "graph"))
    assert case.case == "iii" and case.subgroup == (0, 18, 36)
    assert recognize_coset_case(_cs(8, (1, 2, 5))) is None


def test_coset_case_hypotheses_checked():
    # the half-element shape without p^2 | n must fall through
    assert recognize_coset_case(_cs(12, (1, 3, 5, 6, 7, 9, 11), "graph")) is None
    # double cosets of the subgroup of order 2 are not case ii (p must be odd)
    assert recognize_coset_case(_cs(12, (1, 5, 7, 11), "graph")) is None


def test_zero_key_fast_path_examples():
    v = zero_key_fast_path(_cs(12, (1, 5)))
    assert v is not None and v.is_ci and v.fast_path == "zero-key"
    assert zero_key_fast_path(_cs(8, (1, 2, 5))) is None
    # the full set over Z_4 has the maximal = almost zero key
    v4 = zero_key_fast_path(_cs(4, (1, 2, 3)))
    assert v4 is not None and v4.is_ci


def test_decide_ci_tags():
    assert decide_ci(_cs(9, (1, 4, 7))).fast_path == "coset-case-i"
    assert decide_ci(_cs(12, (1, 5))).fast_path == "zero-key"
    v = decide_ci(_cs(8, (1, 2, 5)))
    assert not v.is_ci and v.witness.members == (2, 3, 7)


def test_m_property_examples():
    r = m_property(8, 3, "digraph")
    assert not r.property_holds
    assert r.counterexamples[0][0].members == (1, 2, 5)
    assert m_property(8, 3, "graph").property_holds
    r9 = m_property(9, 4, "digraph")
    assert not r9.property_holds
    assert (1, 3, 4, 7) in {s.members for s, _ in r9.counterexamples}


def test_m_property_bounds():
    with pytest.raises(DomainError):
        m_property(9, 0)
    with pytest.raises(DomainError):
        m_property(9, 9)
    with pytest.raises(DomainError):
        m_property(9, 2, "multigraph")


def test_orbit_representatives_cover_all_sets():
    for n, m, mode in ((9, 3, "digraph"), (12, 4, "graph")):
        reps = orbit_representatives(n, m, mode)
        seen = set()
        for rep in reps:
            for u in units(n):
                seen.add(tuple(sorted(u * x % n for x in rep)))
        from circulant_ci.engine import connection_set_tuples

        assert seen == set(connection_set_tuples(n, m, mode))


def test_is_m_group_examples():
    assert is_m_group(9, 3, "digraph").property_holds
    r = is_m_group(9, 4, "digraph")
    assert not r.property_holds and r.failed_at == 4 and r.agreement
    for m in (6, 7):
        rg = is_m_group(18, m, "graph")
        assert rg.property_holds and rg.predicate_value and rg.agreement
    # no closed form below the stated ranges
    assert is_m_group(8, 2, "digraph").predicate_value is None
    assert is_m_group(8, 5, "graph").agreement is None


def test_predicate_examples():
    assert predicate_mdci(50, 5)
    assert not predicate_mdci(50, 6)
    assert not predicate_mdci(16, 3)
    assert predicate_mci(9, 100)
    assert predicate_mci(50, 11)
    assert not predicate_mci(50, 12)
    assert predicate_dci_group(12)
    assert not predicate_dci_group(16) and not predicate_ci_group(16)
    assert not predicate_dci_group(18) and predicate_ci_group(18)


def test_predicate_ranges_rejected():
    with pytest.raises(DomainError, match="m"):
        predicate_mdci(12, 2)
    with pytest.raises(DomainError, match="m"):
        predicate_mci(12, 5)


def test_witness_families():
    assert [(w.family, w.connection_set.members) for w in witnesses(16, "digraph")] == [
        ("z8-lift", (2, 4, 10))
    ]
    assert [(w.family, w.connection_set.members) for w in witnesses(16, "graph")] == [
        ("mod8-graph", (1, 2, 7, 9, 14, 15))
    ]
    assert [w.connection_set.members for w in witnesses(25, "graph")] == [
        (1, 4, 5, 6, 9, 11, 14, 16, 19, 20, 21, 24)
    ]
    assert witnesses(30, "digraph") == ()
    assert witnesses(9, "graph") == ()  # exceptional orders carry no graph family
    assert [w.connection_set.members for w in witnesses(9, "digraph")] == [(1, 3, 4, 7)]


def test_witnesses_applicable_ranges():
    for n in range(2, 101):
        applicable = n % 8 == 0 or any(
            p != 2 and t >= 2 for p, t in factorize(n).parts
        )
        assert bool(witnesses(n, "digraph")) == applicable
    for n in range(2, 51):
        applicable = n not in (8, 9, 18) and (
            n % 8 == 0
            or n % 9 == 0
            or any(p >= 5 and t >= 2 for p, t in factorize(n).parts)
        )
        assert bool(witnesses(n, "graph")) == applicable


def test_verify_theorems_small():
    reports = verify_theorems(12, 6, "digraph")
    assert all(r.agreement for r in reports)
    assert len({(r.n, r.m) for r in reports}) == len(reports)
    reports_g = verify_theorems(12, 7, "graph")
    assert all(r.agreement for r in reports_g)


def test_verify_theorems_parallel_matches_serial():
    serial = verify_theorems(10, 5, "digraph", workers=1)
    parallel = verify_theorems(10, 5, "digraph", workers=2)
    assert serial == parallel


def test_orbit_closure_of_verdicts():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.choice((8, 9, 12, 16))
        size = rng.randint(1, n - 1)
        members = tuple(sorted(rng.sample(range(1, n), size)))
        base = decide_ci(ConnectionSet(n, members)).is_ci
        for u in rng.sample(units(n), min(3, len(units(n)))):
            t = ConnectionSet.from_iterable(n, (u * x % n for x in members))
            assert decide_ci(t).is_ci == base


def test_fast_path_soundness_small():
    # whenever a shortcut fires, the full scan agrees (orbit reps, n <= 16)
    for n in range(2, 17):
        for mode in ("digraph", "graph"):
            for size in range(1, n):
                for members in orbit_representatives(n, size, mode):
                    s = ConnectionSet(n, members, mode)
                    fired = (
                        zero_key_fast_path(s) is not None
                        or recognize_coset_case(s) is not None
                    )
                    if fired:
                        assert is_ci(s).is_ci, (n, mode, members)
