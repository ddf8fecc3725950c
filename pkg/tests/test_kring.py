"""Tests for the closed-form K-groups and their ring structure.

Hand oracles:

* wedge signs by counting transpositions: (e1 ^ e3) ^ e2 needs one swap,
  so the sign is -1; blocks of even length commute with everything.
* closed-form ranks: q - 2 characters times 2^m subsets per degree, so
  (3, 3) gives 8 + 8, (5, 0) gives 3 + 3 and q = 2 gives nothing at all.
* the q = 4, m = 1 basis written out by hand: each character contributes
  the corner class, the corner wedged with t(1), the unitary class and
  the unitary class wedged with t(1), split by parity.
* idempotent coefficients: squares reproduce the class, distinct
  characters annihilate, a repeated wedge factor kills the word.
"""

import math
import random

import pytest
from hypothesis import given, strategies as st

from ffkt import kring, pvengine
from ffkt.kring import (ComparisonReport, ExteriorAlgebra, ReducedK0Ring,
                        closed_form, compare, exterior_rank, ring_product,
                        wedge)
from ffkt.pvengine import GradedKGroup, WedgeSymbol


def mul(a, b):
    """Zero-aware product, zero encoded as None."""
    if a is None or b is None:
        return None
    return ring_product(a, b)


# ---------------------------------------------------------------- exterior

def test_exterior_rank_values():
    assert exterior_rank(3, 2) == 3
    for m in range(7):
        assert exterior_rank(m, 0) == 1
    assert exterior_rank(5, 5) == 1
    assert exterior_rank(3, 5) == 0
    for m in range(9):
        assert sum(exterior_rank(m, k) for k in range(m + 1)) == 2 ** m
    with pytest.raises(ValueError):
        exterior_rank(-1, 0)
    with pytest.raises(ValueError):
        exterior_rank(3, -2)


def test_wedge_examples():
    assert wedge((1,), (2,)) == (1, (1, 2))
    assert wedge((2,), (1,)) == (-1, (1, 2))
    assert wedge((1,), (1,)) is None
    assert wedge((1, 3), (2,)) == (-1, (1, 2, 3))
    assert wedge((), (2, 5)) == (1, (2, 5))
    assert wedge((2, 5), ()) == (1, (2, 5))
    # even-length blocks commute
    assert wedge((1, 2), (3, 4)) == (1, (1, 2, 3, 4))
    assert wedge((3, 4), (1, 2)) == (1, (1, 2, 3, 4))
    with pytest.raises(ValueError):
        wedge((2, 1), (3,))
    with pytest.raises(ValueError):
        wedge((1, 1), (3,))


def test_exterior_algebra_basics():
    alg = ExteriorAlgebra(range(4))
    assert alg.labels == (0, 1, 2, 3)
    assert alg.rank(2) == 6
    words = alg.words(2)
    assert len(words) == 6
    assert all(a < b for a, b in words)
    assert alg.total_rank == 16
    assert sum(alg.rank(k) for k in range(5)) == 16
    empty = ExteriorAlgebra(())
    assert empty.rank(0) == 1
    assert empty.words(0) == ((),)
    assert empty.total_rank == 1
    with pytest.raises(ValueError):
        ExteriorAlgebra((3, 1))
    with pytest.raises(ValueError):
        ExteriorAlgebra((1, 1))


# ------------------------------------------------------------- coefficients

def test_reduced_ring_basics():
    ring = ReducedK0Ring(5)
    assert ring.rank == 3
    assert ring.characters == (1, 2, 3)
    assert ring.zero() == (0, 0, 0)
    assert ring.basis_vector(2) == (0, 1, 0)
    assert ring.product((1, 2, 0), (3, 1, 4)) == (3, 2, 0)
    for j in ring.characters:
        e = ring.basis_vector(j)
        assert ring.product(e, e) == e
        for i in ring.characters:
            if i != j:
                assert ring.product(e, ring.basis_vector(i)) == ring.zero()
    with pytest.raises(ValueError):
        ring.basis_vector(0)
    with pytest.raises(ValueError):
        ring.basis_vector(4)
    with pytest.raises(ValueError):
        ring.product((1, 2), (1, 2, 3))
    with pytest.raises(ValueError):
        ReducedK0Ring(6)


def test_reduced_ring_smallest_field():
    ring = ReducedK0Ring(2)
    assert ring.rank == 0
    assert ring.characters == ()
    assert ring.zero() == ()
    assert ring.product((), ()) == ()
    with pytest.raises(ValueError):
        ring.basis_vector(1)


# -------------------------------------------------------------- closed form

def test_closed_form_ranks():
    grp = closed_form(3, 3)
    assert (len(grp.k0), len(grp.k1)) == (8, 8)
    grp = closed_form(2, 10)
    assert grp.level == 10
    assert grp.k0 == ()
    assert grp.k1 == ()
    grp = closed_form(5, 0)
    assert (len(grp.k0), len(grp.k1)) == (3, 3)
    for q in (2, 3, 4, 5):
        for m in range(9):
            grp = closed_form(q, m)
            assert len(grp.k0) == (q - 2) * 2 ** m
            assert len(grp.k1) == (q - 2) * 2 ** m


def test_closed_form_basis_q4_m1():
    grp = closed_form(4, 1)
    assert grp.k0 == (WedgeSymbol("P", 1, ()), WedgeSymbol("W", 1, (1,)),
                      WedgeSymbol("P", 2, ()), WedgeSymbol("W", 2, (1,)))
    assert grp.k1 == (WedgeSymbol("W", 1, ()), WedgeSymbol("P", 1, (1,)),
                      WedgeSymbol("W", 2, ()), WedgeSymbol("P", 2, (1,)))
    assert all(s.sign == 1 for s in grp.k0 + grp.k1)


def test_closed_form_deterministic():
    a = closed_form(5, 4)
    b = closed_form(5, 4)
    assert list(a.k0) == list(b.k0)
    assert list(a.k1) == list(b.k1)


def test_closed_form_validation():
    with pytest.raises(ValueError):
        closed_form(6, 2)
    with pytest.raises(ValueError):
        closed_form(3, -1)


# ---------------------------------------------------------------- comparison

def test_compare_against_engine():
    for q in (2, 3, 4, 5):
        for m in range(9):
            report = compare(pvengine.tower(q, m), closed_form(q, m))
            assert report.ok, (q, m, report)
            assert report.matched == 2 * (q - 2) * 2 ** m
            assert report.tower_only == ()
            assert report.closed_only == ()


def test_compare_missing_generator():
    t = pvengine.tower(3, 2)
    closed = closed_form(3, 2)
    dropped = GradedKGroup(2, closed.k0[1:], closed.k1)
    report = compare(t, dropped)
    assert not report.ok
    assert report.matched == 7
    assert [s.key() for s in report.tower_only] == [closed.k0[0].key()]
    assert report.closed_only == ()


def test_compare_extra_generator():
    t = pvengine.tower(3, 2)
    closed = closed_form(3, 2)
    bogus = WedgeSymbol("P", 1, (3,))
    padded = GradedKGroup(2, closed.k0, closed.k1 + (bogus,))
    report = compare(t, padded)
    assert not report.ok
    assert report.tower_only == ()
    assert report.closed_only == (bogus,)


def test_compare_ignores_sign():
    closed = closed_form(3, 1)
    flipped = GradedKGroup(
        1, [WedgeSymbol(s.base, s.character, s.indices, -s.sign)
            for s in closed.k0], closed.k1)
    report = compare(flipped, closed)
    assert report.ok


def test_compare_rejects_base_level():
    base = pvengine.base_level(3)
    with pytest.raises(ValueError):
        compare(base, closed_form(3, 0))


# ---------------------------------------------------------------------- ring

def test_ring_product_idempotents():
    p1 = WedgeSymbol("P", 1, ())
    p2 = WedgeSymbol("P", 2, ())
    w1 = WedgeSymbol("W", 1, ())
    assert ring_product(p1, p1) == p1
    assert ring_product(p1, p2) is None
    assert ring_product(w1, w1) is None
    assert ring_product(p1, w1) == w1
    assert ring_product(w1, p1) == w1


def test_ring_product_signs():
    w1 = WedgeSymbol("W", 1, ())
    p1t1 = WedgeSymbol("P", 1, (1,))
    assert ring_product(w1, p1t1) == WedgeSymbol("W", 1, (1,))
    assert ring_product(p1t1, w1) == WedgeSymbol("W", 1, (1,), -1)
    minus_p1 = WedgeSymbol("P", 1, (), -1)
    assert ring_product(minus_p1, w1) == WedgeSymbol("W", 1, (), -1)
    assert ring_product(minus_p1, minus_p1) == WedgeSymbol("P", 1, ())
    with pytest.raises(ValueError):
        ring_product(w1, (1, 0))


def test_ring_graded_commutativity():
    for q, m in ((3, 5), (4, 2)):
        grp = closed_form(q, m)
        basis = grp.k0 + grp.k1
        for x in basis:
            for y in basis:
                xy = ring_product(x, y)
                yx = ring_product(y, x)
                if xy is None:
                    assert yx is None
                    continue
                assert xy.parity == (x.parity + y.parity) % 2
                expected = 1 if (x.parity * y.parity) % 2 == 0 else -1
                assert yx.key() == xy.key()
                assert yx.sign == expected * xy.sign


def test_ring_associativity_random():
    grp = closed_form(4, 4)
    rng = random.Random(41)
    basis = [WedgeSymbol(s.base, s.character, s.indices, rng.choice((1, -1)))
             for s in grp.k0 + grp.k1]
    for _ in range(300):
        x, y, z = rng.choice(basis), rng.choice(basis), rng.choice(basis)
        assert mul(mul(x, y), z) == mul(x, mul(y, z))


def test_ring_degree_partition():
    # the even degree splits into corner words of even exterior size and
    # unitary words of odd size, and rank bookkeeping must agree
    grp = closed_form(5, 3)
    corners = [s for s in grp.k0 if s.base == "P"]
    unitaries = [s for s in grp.k0 if s.base == "W"]
    even = sum(exterior_rank(3, k) for k in range(0, 4, 2))
    odd = sum(exterior_rank(3, k) for k in range(1, 4, 2))
    assert len(corners) == 3 * even
    assert len(unitaries) == 3 * odd


# ---------------------------------------------------------------- properties

def label_split(assignment):
    groups = {1: [], 2: [], 3: []}
    for label, part in enumerate(assignment):
        if part:
            groups[part].append(label)
    return tuple(tuple(g) for g in groups.values())


@given(st.lists(st.integers(0, 2), min_size=9, max_size=9))
def test_wedge_antisymmetry(assignment):
    a, b, _ = label_split(assignment + [0])
    sign_ab, word_ab = wedge(a, b)
    sign_ba, word_ba = wedge(b, a)
    assert word_ab == word_ba
    assert sign_ab == sign_ba * (-1) ** (len(a) * len(b))


@given(st.lists(st.integers(0, 3), min_size=9, max_size=9))
def test_wedge_associativity(assignment):
    a, b, c = label_split(assignment)
    sign_ab, word_ab = wedge(a, b)
    left = wedge(word_ab, c)
    sign_bc, word_bc = wedge(b, c)
    right = wedge(a, word_bc)
    assert left[0] * sign_ab == right[0] * sign_bc
    assert left[1] == right[1]
