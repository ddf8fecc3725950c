"""Closed form of the tower K-groups and their ring structure.

The step engine in pvengine reaches level m by grinding through a colimit
and m + 1 kernel or cokernel computations.  The closed form predicts the
same groups in one stroke: the reduced even K-group of the unit-group
algebra tensored with an exterior algebra, one generator per adjoined
unitary.  Label 0 stands for the degree-one scaling unitary, whose wedge
factor is what turns a corner class into an odd one, and labels 1..m for
the unitaries adjoined afterwards.  This module builds that prediction
combinatorially, equips it with its multiplication, and checks a ledger
computed by the engine against it.

The coefficient ring is the span of the nontrivial-character idempotents.
That span is an ideal of the full character ring, not a quotient of it;
the identity of the full ring has a trivial-character component and lies
outside, and no unit is used here.  Consequently classes supported on
distinct characters multiply to zero.  The exterior factor contributes the
usual shuffle signs, and since coefficients sit in even degree no further
sign appears.
"""

import collections
import itertools
import math

from .ffield import field_of_order
from .pvengine import GradedKGroup, WedgeSymbol


def exterior_rank(m, k):
    """Rank of the degree-k piece of an exterior algebra on m generators."""
    return math.comb(m, k)


def _word(w):
    w = tuple(int(i) for i in w)
    if any(x >= y for x, y in zip(w, w[1:])):
        raise ValueError("basis words are strictly increasing label tuples")
    return w


def wedge(a, b):
    """Wedge two exterior basis words.

    Words are strictly increasing tuples of generator labels.  Returns
    (sign, merged word) where the sign counts the transpositions needed to
    sort the concatenation, or None when the factors share a label.
    """
    a = _word(a)
    b = _word(b)
    if set(a) & set(b):
        return None
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1 if inversions % 2 else 1, tuple(sorted(a + b)))


class ExteriorAlgebra:
    """Exterior algebra over the integers on a finite ordered label set.

    A finite window of labels is always enough: any class in sight wedges
    finitely many unitaries, so the infinite family never has to be
    materialized.
    """

    def __init__(self, labels):
        labels = tuple(int(i) for i in labels)
        if any(x >= y for x, y in zip(labels, labels[1:])):
            raise ValueError("generator labels must be distinct and "
                             "increasing")
        self.labels = labels

    def rank(self, k):
        return exterior_rank(len(self.labels), k)

    def words(self, k):
        """All degree-k basis words, in lexicographic order."""
        return tuple(itertools.combinations(self.labels, k))

    @property
    def total_rank(self):
        return 2 ** len(self.labels)


class ReducedK0Ring:
    """Even K-theory of the unit-group algebra, with the unit class removed.

    Free abelian of rank q - 2, one coordinate per nontrivial character of
    the multiplicative group, multiplied coordinatewise because the
    character idempotents are orthogonal.
    """

    def __init__(self, q):
        field_of_order(q)
        self.q = q
        self.rank = q - 2

    @property
    def characters(self):
        """Labels of the nontrivial characters, in order."""
        return tuple(range(1, self.q - 1))

    def zero(self):
        return (0,) * self.rank

    def basis_vector(self, j):
        """The class of the character idempotent for chi_j, j in 1..q-2."""
        if not 1 <= j <= self.rank:
            raise ValueError("character index out of range")
        return tuple(int(i == j - 1) for i in range(self.rank))

    def product(self, x, y):
        x = self._vector(x)
        y = self._vector(y)
        return tuple(u * v for u, v in zip(x, y))

    def _vector(self, x):
        x = tuple(int(c) for c in x)
        if len(x) != self.rank:
            raise ValueError("expected %d coordinates" % self.rank)
        return x


def _class_word(sym):
    # label 0 is the scaling-unitary wedge factor carried by a W base
    return (((0,) if sym.base == "W" else ()) + sym.indices)


def _class_symbol(character, word, sign=1):
    base = "W" if word and word[0] == 0 else "P"
    indices = word[1:] if base == "W" else word
    return WedgeSymbol(base, character, indices, sign)


def closed_form(q, m):
    """Predicted level-m K-groups, built without the step engine.

    One basis class per nontrivial character and subset of the m + 1
    adjoined unitaries, graded by the parity of the subset.  Each degree
    has rank (q - 2) * 2^m.
    """
    ring = ReducedK0Ring(q)
    if m < 0:
        raise ValueError("tower levels are nonnegative")
    algebra = ExteriorAlgebra(range(m + 1))
    k0 = []
    k1 = []
    for j in ring.characters:
        for size in range(len(algebra.labels) + 1):
            for word in algebra.words(size):
                sym = _class_symbol(j, word)
                (k1 if sym.parity else k0).append(sym)
    return GradedKGroup(m, k0, k1)


def ring_product(x, y):
    """Product of two closed-form classes; None encodes the zero class.

    Classes on distinct characters annihilate.  On a shared character the
    idempotent coefficient squares to itself and the exterior words wedge,
    so the only contributions to the sign are the shuffle and the signs
    the factors already carry.
    """
    if not (isinstance(x, WedgeSymbol) and isinstance(y, WedgeSymbol)):
        raise ValueError("ring classes are wedge symbols")
    if x.character != y.character:
        return None
    merged = wedge(_class_word(x), _class_word(y))
    if merged is None:
        return None
    sign, word = merged
    return _class_symbol(x.character, word, sign * x.sign * y.sign)


ComparisonReport = collections.namedtuple(
    "ComparisonReport", ["ok", "matched", "tower_only", "closed_only"])
# ok          degree-preserving bijection of basis labels exists
# matched     generators present on both sides, summed over both degrees
# tower_only  ledger symbols with no closed-form partner, ledger order
# closed_only closed-form classes with no ledger partner, basis order


def compare(tower_result, closed):
    """Match an engine ledger against the closed form, degree by degree.

    Generators pair up by identity (base, character, indices), signs
    ignored: the engine is free to hand back the opposite orientation of
    a generator.  The report keeps the leftovers of both sides visible so
    a failure names the classes that broke the bijection.
    """
    if tower_result.level == -1 or closed.level == -1:
        raise ValueError("compare works on symbol ledgers, not the base "
                         "level")
    matched = 0
    tower_only = []
    closed_only = []
    for degree in (0, 1):
        ledger = tower_result.k0 if degree == 0 else tower_result.k1
        predicted = closed.k0 if degree == 0 else closed.k1
        predicted_keys = {sym.key() for sym in predicted}
        seen = set()
        for sym in ledger:
            if sym.key() in predicted_keys:
                matched += 1
                seen.add(sym.key())
            else:
                tower_only.append(sym)
        closed_only.extend(s for s in predicted if s.key() not in seen)
    return ComparisonReport(not tower_only and not closed_only,
                            matched, tuple(tower_only), tuple(closed_only))
