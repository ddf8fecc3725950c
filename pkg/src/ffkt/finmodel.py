"""Finite matrix models of the truncation levels.

Fixing a level n, the functions on F_q[T] mod T^n together with the
translations v^a (a of degree below n) and the scalings t_b (b a unit)
generate a finite dimensional algebra: a full matrix algebra of size q^n
tensored with the group algebra of the unit group.  This module realises
it concretely on the basis indexed by pairs (x, c), x a coefficient
tuple and c a unit, with every operator an exact sparse matrix over
Q(zeta_{q-1}).

K_0 bookkeeping goes through the central projections z_j, one per
character of the unit group: the class of a projection is the vector of
ranks of z_j P.  On the corners cut out by the character projections
this gives unit vectors, and induced_iota_matrix measures how classes
refine from one level to the next.
"""

import collections
import itertools
from fractions import Fraction

from .errors import SizeCapError
from .exactla import CycMatrix, CycNumber, IntMatrix, cyc_rank
from .ffield import field_of_order

DEFAULT_CAP = 512


class LevelModel:
    """The level-n model on basis vectors xi_(x, c).

    x runs over length-n tuples of field elements, read as coefficients
    of a polynomial mod T^n, and c over the units.  All operators are
    square CycMatrix instances of dimension q^n (q - 1).
    """

    def __init__(self, field, level):
        self.field = field
        self.level = level
        self.conductor = field.order - 1
        self._xs = list(itertools.product(field.elements, repeat=level))
        self.basis = [(x, c) for x in self._xs for c in field.units]
        self.dim = len(self.basis)
        self.index = {pair: i for i, pair in enumerate(self.basis)}
        self._elements = frozenset(field.elements)
        self._p = {}
        self._z = {}

    def __repr__(self):
        return "LevelModel(q=%d, level=%d, dim=%d)" % (
            self.field.order, self.level, self.dim)

    # ---------------------------------------------------------- coercions

    def coerce_poly(self, a):
        """A coefficient tuple from a sequence of slots.

        Slots are field elements or integers, integers meaning scalars
        from the prime field.  Short sequences are padded with zeros;
        sequences longer than the level are refused rather than reduced.
        """
        slots = []
        for s in a:
            if isinstance(s, int):
                s = self.field.embed_scalar(s)
            if s not in self._elements:
                raise ValueError("bad coefficient %r" % (s,))
            slots.append(s)
        if len(slots) > self.level:
            raise ValueError(
                "polynomial of degree >= %d does not fit" % self.level)
        slots.extend([self.field.zero] * (self.level - len(slots)))
        return tuple(slots)

    def _coerce_unit(self, b):
        if isinstance(b, int):
            b = self.field.embed_scalar(b)
        if b not in self._elements or b == self.field.zero:
            raise ValueError("scaling label must be a unit, got %r" % (b,))
        return b

    # ---------------------------------------------------------- operators
    # column convention: entry (i, j) is the xi_i coefficient of the
    # image of basis vector xi_j

    def _permutation(self, image):
        one = CycNumber.one(self.conductor)
        rows = {}
        for col, pair in enumerate(self.basis):
            rows.setdefault(self.index[image(pair)], {})[col] = one
        return CycMatrix(self.conductor, self.dim, self.dim, rows)

    def identity(self):
        return CycMatrix.identity(self.conductor, self.dim)

    def translation(self, a):
        """v^a, the shift xi_(x, c) -> xi_(x + a, c)."""
        a = self.coerce_poly(a)
        add = self.field.add
        return self._permutation(
            lambda pair: (tuple(add(s, t) for s, t in zip(pair[0], a)),
                          pair[1]))

    def scaling(self, b):
        """t_b, the joint rescaling xi_(x, c) -> xi_(bx, bc)."""
        b = self._coerce_unit(b)
        mul = self.field.mul
        return self._permutation(
            lambda pair: (tuple(mul(b, s) for s in pair[0]),
                          mul(b, pair[1])))

    def diagonal(self, g):
        """Multiplication by a function of the coefficient tuple.

        g maps coefficient tuples to CycNumber, Fraction or int values;
        the value is repeated across the unit coordinate.
        """
        rows = {}
        for i, (x, _) in enumerate(self.basis):
            v = g(x)
            if not isinstance(v, CycNumber):
                v = CycNumber.from_rational(self.conductor, v)
            if not v.is_zero():
                rows[i] = {i: v}
        return CycMatrix(self.conductor, self.dim, self.dim, rows)

    def level_projection(self, m=None):
        """e_m, the indicator of x = 0 mod T^m; m defaults to the level."""
        m = self.level if m is None else m
        if not 0 <= m <= self.level:
            raise ValueError("projection level out of range")
        zero = self.field.zero
        return self.diagonal(
            lambda x: 1 if all(s == zero for s in x[:m]) else 0)

    def matrix_unit(self, a, a2):
        """v^a e v^{-a2}, the rank one operator between two cosets."""
        a = self.coerce_poly(a)
        a2 = self.coerce_poly(a2)
        one = CycNumber.one(self.conductor)
        rows = {}
        for c in self.field.units:
            rows.setdefault(self.index[(a, c)], {})[self.index[(a2, c)]] = one
        return CycMatrix(self.conductor, self.dim, self.dim, rows)

    def char_projection(self, j):
        """p_j, averaging the scalings against the character chi_j."""
        j %= self.field.order - 1
        p = self._p.get(j)
        if p is None:
            total = CycMatrix.zeros(self.conductor, self.dim, self.dim)
            for b in self.field.units:
                total = total + self.scaling(b) * self.field.char_value(j, b)
            p = total * Fraction(1, self.field.order - 1)
            self._p[j] = p
        return p

    def central_scaling(self, b):
        """The unit-leg part of t_b, (sum_a v^a e v^{-ba}) t_b.

        It fixes x and multiplies c by b, so it commutes with every
        matrix unit; together they exhibit the model as a matrix algebra
        tensored with the group algebra of the units.
        """
        b = self._coerce_unit(b)
        mul = self.field.mul
        one = CycNumber.one(self.conductor)
        rows = {}
        for a in self._xs:
            ba = tuple(mul(b, s) for s in a)
            for c in self.field.units:
                rows.setdefault(self.index[(a, c)],
                                {})[self.index[(ba, c)]] = one
        collapse = CycMatrix(self.conductor, self.dim, self.dim, rows)
        return collapse * self.scaling(b)

    def central_projection(self, j):
        """z_j, the central support of the character chi_j.

        Equal to sum_a v^a (e p_j) v^{-a}; pairing projections against
        the z_j reads off their class, one rank per character.
        """
        j %= self.field.order - 1
        z = self._z.get(j)
        if z is None:
            total = CycMatrix.zeros(self.conductor, self.dim, self.dim)
            for b in self.field.units:
                total = total + \
                    self.central_scaling(b) * self.field.char_value(j, b)
            z = total * Fraction(1, self.field.order - 1)
            self._z[j] = z
        return z


def build_model(q, n, cap=DEFAULT_CAP):
    """The level-n model over F_q, refusing dimensions above cap."""
    field = field_of_order(q)
    if n < 0:
        raise ValueError("level must be nonnegative, got %r" % (n,))
    dim = q ** n * (q - 1)
    if dim > cap:
        raise SizeCapError(
            "level %d over F_%d needs dimension %d, above the cap %d"
            % (n, q, dim, cap))
    return LevelModel(field, n)


def k0_class(model, matrix):
    """The class vector of a projection, one rank per character."""
    if not isinstance(matrix, CycMatrix) or \
            (matrix.nrows, matrix.ncols) != (model.dim, model.dim) or \
            matrix.conductor != model.conductor:
        raise ValueError("matrix does not live on the model")
    if matrix * matrix != matrix:
        raise ValueError("class of a non idempotent requested")
    return tuple(cyc_rank(model.central_projection(j) * matrix)
                 for j in range(model.field.order - 1))


def induced_iota_matrix(q, n, cap=DEFAULT_CAP):
    """The K_0 matrix of the refinement from level n to level n + 1.

    The corner e p_j at level n becomes the projection
    e_n p_j of the level n + 1 model; entry (i, j) is coordinate i of
    its class there.  The expected answer is identity plus all ones.
    """
    big = build_model(q, n + 1, cap)
    columns = []
    for j in range(q - 1):
        image = big.level_projection(n) * big.char_projection(j)
        if image * image != image:
            raise ArithmeticError("refined corner is not a projection")
        columns.append(k0_class(big, image))
    size = q - 1
    return IntMatrix([[columns[j][i] for j in range(size)]
                      for i in range(size)])


MvNReport = collections.namedtuple(
    "MvNReport",
    ["partial_isometry", "intertwines", "orientation",
     "range_character", "support_character",
     "expected_range", "expected_support", "ok"])


def mvn_check(model, j_psi, j_chi):
    """Equivalence data for the annulus intertwiner of two corners.

    In the level-N model the annulus is e_{N-1} - e_N.  Twisting the
    annulus by the character psi in its top digit gives an element E
    with p_chi E = E p_{conj(psi) chi}, and s = p_chi E should be a
    partial isometry with range projection (annulus) p_chi and support
    projection (annulus) p_{conj(psi) chi}.  The report records whether
    s is a partial isometry, whether the intertwining relation holds,
    and which characters the range and support projections actually
    carry, with orientation "direct" when they land as above and
    "swapped" when the two are exchanged.
    """
    if model.level < 1:
        raise ValueError("need level at least 1 for an annulus")
    q1 = model.field.order - 1
    j_psi %= q1
    j_chi %= q1
    n = model.level - 1
    twisted = CycMatrix.zeros(model.conductor, model.dim, model.dim)
    for b in model.field.units:
        shift = [model.field.zero] * n + [b]
        u = model.translation(shift)
        term = u * model.level_projection() * u.conjugate_transpose()
        twisted = twisted + term * model.field.char_value(j_psi, b)
    j_target = (j_chi - j_psi) % q1
    p_chi = model.char_projection(j_chi)
    s = p_chi * twisted
    s_star = s.conjugate_transpose()
    partial = s * s_star * s == s
    intertwines = p_chi * twisted == twisted * model.char_projection(j_target)
    annulus = model.level_projection(n) - model.level_projection()
    range_char = _match_character(model, annulus, s * s_star)
    support_char = _match_character(model, annulus, s_star * s)
    if range_char == j_chi and support_char == j_target:
        orientation = "direct"
    elif range_char == j_target and support_char == j_chi:
        orientation = "swapped"
    else:
        orientation = "neither"
    ok = partial and intertwines and orientation != "neither"
    return MvNReport(partial, intertwines, orientation,
                     range_char, support_char, j_chi, j_target, ok)


def _match_character(model, annulus, matrix):
    for j in range(model.field.order - 1):
        if matrix == annulus * model.char_projection(j):
            return j
    return None


def identity_checks(q, n=1, cap=DEFAULT_CAP, negative_control=False):
    """Structural checks on the level-n model, as (name, ok, detail) rows.

    Same row format as the symbolic checks: a name, a boolean, and an
    empty detail string on success.  With negative_control a check that
    must fail is appended, to prove the harness can see failures.
    """
    model = build_model(q, n, cap)
    field = model.field
    rows = []

    def record(name, ok, detail=""):
        rows.append((name, ok, "" if ok else detail or "identity failed"))

    xs = list(dict.fromkeys(model._xs[:3] + model._xs[-1:]))
    units = list(field.units)

    ok = all(
        (model.matrix_unit(a, a2) * model.matrix_unit(a3, a4)).is_zero()
        if a2 != a3 else
        model.matrix_unit(a, a2) * model.matrix_unit(a3, a4)
        == model.matrix_unit(a, a4)
        for a in xs for a2 in xs for a3 in xs for a4 in xs)
    record("matrix units compose", ok)
    record("matrix units star",
           all(model.matrix_unit(a, a2).conjugate_transpose()
               == model.matrix_unit(a2, a)
               for a in xs for a2 in xs))
    record("translations form a group",
           all(model.translation(a) * model.translation(a2)
               == model.translation(
                   [field.add(s, t) for s, t in zip(a, a2)])
               for a in xs for a2 in xs))
    record("scalings form a group",
           all(model.scaling(b) * model.scaling(b2)
               == model.scaling(field.mul(b, b2))
               for b in units for b2 in units))
    record("scaling moves translations",
           all(model.scaling(b) * model.translation(a)
               == model.translation([field.mul(b, s) for s in a])
               * model.scaling(b)
               for b in units for a in xs))

    # an injective rational weight separates the coefficient tuples
    def weight(x):
        return sum(field.encode(s) * (field.order + 1) ** i
                    for i, s in enumerate(x))

    record("covariance of diagonals",
           all(model.scaling(b) * model.diagonal(weight)
               * model.scaling(field.inv(b))
               == model.diagonal(
                   lambda x, b=b: weight(
                       tuple(field.mul(field.inv(b), s) for s in x)))
               for b in units))
    record("level projections are nested",
           all(model.level_projection(m) * model.level_projection(m2)
               == model.level_projection(max(m, m2))
               for m in range(n + 1) for m2 in range(n + 1)))

    p_total = CycMatrix.zeros(model.conductor, model.dim, model.dim)
    z_total = CycMatrix.zeros(model.conductor, model.dim, model.dim)
    for j in range(q - 1):
        p_total = p_total + model.char_projection(j)
        z_total = z_total + model.central_projection(j)
    record("character projections resolve the identity",
           p_total == model.identity())
    record("character projections are orthogonal",
           all((model.char_projection(i) * model.char_projection(j))
               .is_zero()
               for i in range(q - 1) for j in range(q - 1) if i != j))
    record("central projections resolve the identity",
           z_total == model.identity())
    generators = [model.translation(a) for a in xs] + \
        [model.scaling(b) for b in units] + [model.level_projection()]
    record("central projections commute with generators",
           all(model.central_projection(j) * g
               == g * model.central_projection(j)
               for j in range(q - 1) for g in generators))

    corner = model.level_projection()
    record("corner classes are unit vectors",
           all(k0_class(model, corner * model.char_projection(j))
               == tuple(1 if i == j else 0 for i in range(q - 1))
               for j in range(q - 1)))
    record("full class is constant",
           k0_class(model, model.identity()) == (q ** n,) * (q - 1))

    if n >= 1:
        if q - 1 <= 6:
            pairs = [(i, j) for i in range(q - 1) for j in range(q - 1)]
        else:
            pairs = [(i, j) for i in (0, 1) for j in range(q - 1)]
        reports = {(i, j): mvn_check(model, i, j) for i, j in pairs}
        bad = [(i, j, r.orientation) for (i, j), r in reports.items()
               if not (r.ok and r.orientation == "direct")]
        record("annulus intertwiners are direct", not bad,
               "failing pairs %r" % (bad,))

    if negative_control:
        bad_proj = model.level_projection() + model.identity()
        record("corrupted corner (control)",
               bad_proj * bad_proj == bad_proj,
               "idempotence fails by construction")
    return rows
