"""Symbolic *-calculus in the affine crossed product over F_q((T)).

The underlying space is the Laurent series field F_q((T)).  A cylinder
set is a coset center + T^level * F_q[[T]]; finite combinations of
their indicators with coefficients in Q(zeta_{q-1}), together with a
formal constant standing in for the adjoined unit, form the coefficient
algebra.  The group of affine maps X -> b*X + a (a, b rational
functions, b nonzero) acts on it, and a general element is a finite sum
of terms f * v^a * t_b where v^a is the translation unitary and t_b the
scaling unitary.

Everything is computed exactly and kept in a canonical form, so
equality of two elements is decidable and an identity verified here is
an algebraic proof.  A working precision N only bounds the coset levels
that may appear: an operation that would need a level outside
[-N, N] raises PrecisionError rather than truncating.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import PrecisionError
from .exactla import CycNumber
from .funcfield import (Poly, RationalFunction, enumeration_key,
                        irreducibles_normalized, laurent_expand)

DEFAULT_PRECISION = 8


def _conductor(field):
    return field.order - 1


def _as_cyc(field, value):
    if isinstance(value, CycNumber):
        return value
    return CycNumber.from_rational(_conductor(field), Fraction(value))


def _as_rf(field, value):
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, Poly):
        return RationalFunction(value)
    if isinstance(value, tuple):
        return RationalFunction.constant(field, value)
    if isinstance(value, int):
        return RationalFunction.constant(field, field.embed_scalar(value))
    raise TypeError("cannot interpret %r as a rational function" % (value,))


class CylinderSet:
    """The coset center + T^level * F_q[[T]] inside F_q((T)).

    The center is a sorted tuple of (degree, digit) pairs with nonzero
    digits at degrees below the level; it is the canonical
    representative of the coset modulo T^level * F_q[[T]].  Two cosets
    of the same subgroup are equal or disjoint, and cosets of different
    levels are nested or disjoint, which makes intersections trivial.
    """

    __slots__ = ("field", "level", "center")

    def __init__(self, field, level, center=()):
        pairs = sorted((int(d), tuple(e)) for d, e in center)
        kept = []
        for d, e in pairs:
            if e == field.zero:
                continue
            if d >= level:
                raise ValueError("center digit at degree %d, level %d" % (d, level))
            if kept and kept[-1][0] == d:
                raise ValueError("duplicate center degree %d" % d)
            kept.append((d, e))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "level", int(level))
        object.__setattr__(self, "center", tuple(kept))

    def __setattr__(self, *_):
        raise AttributeError("CylinderSet is immutable")

    @staticmethod
    def ball(field, level):
        """The subgroup coset T^level * F_q[[T]] itself."""
        return CylinderSet(field, level, ())

    @staticmethod
    def digit_coset(field, digit):
        """The coset digit + T * F_q[[T]] for a field element digit."""
        return CylinderSet(field, 1, ((0, digit),))

    def truncate(self, new_level):
        """The containing coset at a coarser level."""
        if new_level > self.level:
            raise ValueError("cannot refine a coset without choosing digits")
        return CylinderSet(self.field, new_level,
                           tuple(p for p in self.center if p[0] < new_level))

    def child(self, digit):
        """The sub-coset selecting one digit at the current level."""
        if digit == self.field.zero:
            return CylinderSet(self.field, self.level + 1, self.center)
        return CylinderSet(self.field, self.level + 1,
                           self.center + ((self.level, digit),))

    def contains(self, other):
        return self.level <= other.level and other.truncate(self.level) == self

    def meet(self, other):
        """Intersection: the deeper coset when nested, else None."""
        if self.contains(other):
            return other
        if other.contains(self):
            return self
        return None

    def sort_key(self):
        f = self.field
        return (self.level, tuple((d, f.encode(e)) for d, e in self.center))

    def __eq__(self, other):
        return (isinstance(other, CylinderSet)
                and self.level == other.level and self.center == other.center)

    def __hash__(self):
        return hash((self.level, self.center))

    def __repr__(self):
        f = self.field
        digits = ",".join("%d:%d" % (d, f.encode(e)) for d, e in self.center)
        if digits:
            return "Cyl[%s |%d]" % (digits, self.level)
        return "Cyl[%d]" % self.level


def affine_coset(coset, a, b, precision=DEFAULT_PRECISION):
    """The image b*X + a of the coset X under an affine bijection.

    The level shifts by the order of b at T = 0.  A result level
    outside [-precision, precision] raises PrecisionError.
    """
    field = coset.field
    a = _as_rf(field, a)
    b = _as_rf(field, b)
    if b.is_zero():
        raise ValueError("affine multiplier must be nonzero")
    level = coset.level + b.order_at_zero()
    if abs(level) > precision:
        raise PrecisionError("coset level %d outside precision %d"
                             % (level, precision))
    digits = {}

    def accumulate(degree, value):
        if degree < level and value != field.zero:
            digits[degree] = field.add(digits.get(degree, field.zero), value)

    for d, e in coset.center:
        order, coeffs = laurent_expand(b, level - 1 - d)
        for i, c in enumerate(coeffs):
            accumulate(order + i + d, field.mul(c, e))
    if not a.is_zero():
        order, coeffs = laurent_expand(a, level - 1)
        for i, c in enumerate(coeffs):
            accumulate(order + i, c)
    return CylinderSet(field, level, tuple(sorted(digits.items())))


def _canonical_items(field, raw):
    """Canonical form of a cylinder combination.

    First every coset that properly contains another listed coset is
    split one level at a time (a coset is the disjoint union of its q
    digit children), leaving an antichain of disjoint cosets.  Then any
    complete family of q siblings carrying one common coefficient is
    merged back into its parent.  The result is the unique coarsest
    disjoint representation, so equal functions get equal dictionaries.
    """
    cur = {E: c for E, c in raw.items() if not c.is_zero()}
    if not cur:
        return {}
    lo = min(E.level for E in cur)
    hi = max(E.level for E in cur)
    for k in range(lo, hi):
        for coset in [E for E in cur if E.level == k]:
            coeff = cur.get(coset)
            if coeff is None:
                continue
            if not any(F.level > k and coset.contains(F) for F in cur):
                continue
            del cur[coset]
            for digit in field.elements:
                child = coset.child(digit)
                prev = cur.get(child)
                total = coeff if prev is None else prev + coeff
                if total.is_zero():
                    cur.pop(child, None)
                else:
                    cur[child] = total
    if not cur:
        return {}
    k = hi
    while True:
        families = {}
        for coset in [E for E in cur if E.level == k]:
            families.setdefault(coset.truncate(k - 1), []).append(coset)
        for parent, kids in families.items():
            if len(kids) != field.order:
                continue
            value = cur[kids[0]]
            if all(cur[kid] == value for kid in kids[1:]):
                for kid in kids:
                    del cur[kid]
                cur[parent] = value
        if k - 1 < min(E.level for E in cur):
            return cur
        k -= 1


class CylFunction:
    """A combination of cylinder indicators plus a formal constant.

    The constant slot is the coefficient of the adjoined unit function,
    which has no compactly supported representative.  The cylinder part
    is stored in the canonical form produced by _canonical_items, so
    functions are equal exactly when their stored data agree.
    """

    __slots__ = ("field", "constant", "items")

    def __init__(self, field, constant=0, items=None):
        raw = {}
        for coset, coeff in (items or {}).items():
            c = _as_cyc(field, coeff)
            prev = raw.get(coset)
            raw[coset] = c if prev is None else prev + c
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "constant", _as_cyc(field, constant))
        object.__setattr__(self, "items", _canonical_items(field, raw))

    def __setattr__(self, *_):
        raise AttributeError("CylFunction is immutable")

    def is_zero(self):
        return self.constant.is_zero() and not self.items

    def _check_compatible(self, other):
        if self.field is not other.field:
            raise ValueError("mixed fields")

    def __add__(self, other):
        self._check_compatible(other)
        merged = dict(self.items)
        for coset, c in other.items.items():
            prev = merged.get(coset)
            merged[coset] = c if prev is None else prev + c
        return CylFunction(self.field, self.constant + other.constant, merged)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, value):
        c = _as_cyc(self.field, value)
        if c.is_zero():
            return CylFunction(self.field)
        return CylFunction(self.field, c * self.constant,
                           {E: c * w for E, w in self.items.items()})

    def __mul__(self, other):
        """Pointwise product; indicators multiply through intersections."""
        self._check_compatible(other)
        out = {}

        def put(coset, value):
            prev = out.get(coset)
            out[coset] = value if prev is None else prev + value

        if not other.constant.is_zero():
            for E, c in self.items.items():
                put(E, c * other.constant)
        if not self.constant.is_zero():
            for F, d in other.items.items():
                put(F, self.constant * d)
        for E, c in self.items.items():
            for F, d in other.items.items():
                G = E.meet(F)
                if G is not None:
                    put(G, c * d)
        return CylFunction(self.field, self.constant * other.constant, out)

    def conjugate(self):
        return CylFunction(self.field, self.constant.conjugate(),
                           {E: c.conjugate() for E, c in self.items.items()})

    def transport(self, a, b, precision=DEFAULT_PRECISION):
        """Pullback along the inverse affine map: each indicator moves to
        its image coset b*E + a; the constant part stays put."""
        items = {affine_coset(E, a, b, precision): c
                 for E, c in self.items.items()}
        return CylFunction(self.field, self.constant, items)

    def __eq__(self, other):
        return (isinstance(other, CylFunction) and self.field is other.field
                and self.constant == other.constant and self.items == other.items)

    def __repr__(self):
        parts = []
        if not self.constant.is_zero():
            parts.append("%r" % (self.constant,))
        for E in sorted(self.items, key=CylinderSet.sort_key):
            parts.append("(%r)*%r" % (self.items[E], E))
        if not parts:
            return "CylFn<0>"
        return "CylFn<%s>" % " + ".join(parts)


def _label_key(label):
    a, b = label
    return (enumeration_key(a.num), enumeration_key(a.den),
            enumeration_key(b.num), enumeration_key(b.den))


class CrossedElement:
    """A finite sum of terms f * v^a * t_b at a fixed working precision.

    Terms are keyed by the label (a, b), rational functions with b
    nonzero.  Multiplication follows the covariance rule: pulling a
    coefficient through v^a t_b transports it along X -> b*X + a.  The
    unit of the algebra is the constant-one coefficient on the label
    (0, 1); it differs from the indicator of F_q[[T]].
    """

    __slots__ = ("field", "precision", "terms")

    def __init__(self, field, terms=None, precision=DEFAULT_PRECISION):
        kept = {}
        for (a, b), func in (terms or {}).items():
            a = _as_rf(field, a)
            b = _as_rf(field, b)
            if b.is_zero():
                raise ValueError("scaling label must be nonzero")
            if func.is_zero():
                continue
            key = (a, b)
            prev = kept.get(key)
            merged = func if prev is None else prev + func
            if merged.is_zero():
                del kept[key]
            else:
                kept[key] = merged
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "precision", int(precision))
        object.__setattr__(self, "terms", kept)

    def __setattr__(self, *_):
        raise AttributeError("CrossedElement is immutable")

    @staticmethod
    def zero(field, precision=DEFAULT_PRECISION):
        return CrossedElement(field, {}, precision)

    def _check_compatible(self, other):
        if self.field is not other.field:
            raise ValueError("mixed fields")

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        self._check_compatible(other)
        merged = dict(self.terms)
        for key, func in other.terms.items():
            prev = merged.get(key)
            merged[key] = func if prev is None else prev + func
        return CrossedElement(self.field, merged,
                              min(self.precision, other.precision))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, value):
        return CrossedElement(self.field,
                              {key: func.scale(value)
                               for key, func in self.terms.items()},
                              self.precision)

    def __mul__(self, other):
        self._check_compatible(other)
        precision = min(self.precision, other.precision)
        out = {}
        for (a1, b1), f1 in self.terms.items():
            for (a2, b2), f2 in other.terms.items():
                key = (a1 + b1 * a2, b1 * b2)
                func = f1 * f2.transport(a1, b1, precision)
                prev = out.get(key)
                out[key] = func if prev is None else prev + func
        return CrossedElement(self.field, out, precision)

    def star(self):
        """The adjoint: (f v^a t_b)* = transported conjugate on the
        inverse label (-a/b, 1/b)."""
        out = {}
        for (a, b), func in self.terms.items():
            binv = b.inverse()
            key = (-(binv * a), binv)
            moved = func.conjugate().transport(key[0], key[1], self.precision)
            prev = out.get(key)
            out[key] = moved if prev is None else prev + moved
        return CrossedElement(self.field, out, self.precision)

    def mu(self, d):
        """The scaling endomorphism: f v^a t_b -> (f pulled along
        X -> d*X) v^{d*a} t_b, for nonzero d."""
        d = _as_rf(self.field, d)
        if d.is_zero():
            raise ValueError("scaling endomorphism needs a nonzero multiplier")
        zero = RationalFunction.zero(self.field)
        return CrossedElement(self.field,
                              {(d * a, b): func.transport(zero, d, self.precision)
                               for (a, b), func in self.terms.items()},
                              self.precision)

    def __eq__(self, other):
        return (isinstance(other, CrossedElement)
                and self.field is other.field and self.terms == other.terms)

    def __repr__(self):
        if not self.terms:
            return "CrossedElement<0>"
        bits = []
        for label in sorted(self.terms, key=_label_key):
            bits.append("[%r] v^(%r) t_(%r)"
                        % (self.terms[label], label[0], label[1]))
        return " + ".join(bits)


def check_identity(lhs, rhs):
    """Decide lhs = rhs exactly; on failure name the first bad term."""
    diff = lhs - rhs
    if diff.is_zero():
        return True, None
    label = min(diff.terms, key=_label_key)
    detail = ("term at v^(%r) t_(%r) differs by %r (left %r, right %r)"
              % (label[0], label[1], diff.terms[label],
                 lhs.terms.get(label), rhs.terms.get(label)))
    return False, detail


def _unit_label(field):
    return (RationalFunction.zero(field), RationalFunction.one(field))


def unit_element(field, precision=DEFAULT_PRECISION):
    """The adjoined unit: constant one on the label (0, 1)."""
    return CrossedElement(field, {_unit_label(field): CylFunction(field, 1)},
                          precision)


def level_projection(field, n, precision=DEFAULT_PRECISION):
    """The indicator of T^n * F_q[[T]] as a crossed element."""
    if abs(n) > precision:
        raise PrecisionError("level %d outside precision %d" % (n, precision))
    func = CylFunction(field, 0, {CylinderSet.ball(field, n): 1})
    return CrossedElement(field, {_unit_label(field): func}, precision)


def translation_element(field, a, precision=DEFAULT_PRECISION):
    """The translation unitary v^a."""
    a = _as_rf(field, a)
    return CrossedElement(field,
                          {(a, RationalFunction.one(field)): CylFunction(field, 1)},
                          precision)


def scaling_element(field, b, precision=DEFAULT_PRECISION):
    """The scaling unitary t_b, b nonzero."""
    b = _as_rf(field, b)
    if b.is_zero():
        raise ValueError("scaling element needs a nonzero multiplier")
    return CrossedElement(field,
                          {(RationalFunction.zero(field), b): CylFunction(field, 1)},
                          precision)


def char_projection(field, j, precision=DEFAULT_PRECISION):
    """Spectral projection of the constant-scaling action:
    (1/(q-1)) * sum over units b of chi_j(b) t_b."""
    weight = CycNumber.from_rational(_conductor(field),
                                     Fraction(1, field.order - 1))
    zero = RationalFunction.zero(field)
    terms = {}
    for b in field.units:
        label = (zero, RationalFunction.constant(field, b))
        terms[label] = CylFunction(field, field.char_value(j, b) * weight)
    return CrossedElement(field, terms, precision)


def char_corner_projection(field, j, precision=DEFAULT_PRECISION):
    """The corner projection: indicator of F_q[[T]] times char_projection."""
    return (level_projection(field, 0, precision)
            * char_projection(field, j, precision))


def digit_character_sum(field, j, precision=DEFAULT_PRECISION):
    """Sum over units b of chi_j(b) * indicator(b + T*F_q[[T]])."""
    items = {CylinderSet.digit_coset(field, b): field.char_value(j, b)
             for b in field.units}
    return CrossedElement(field,
                          {_unit_label(field): CylFunction(field, 0, items)},
                          precision)


def char_twist_unitary(field, j, precision=DEFAULT_PRECISION):
    """The twisted shift unitary attached to a nontrivial character:
    t_T per trivial-character corner, digit sum per chi-corner, t_T*
    back, and the identity off both corners."""
    if j % (field.order - 1) == 0:
        raise ValueError("the trivial character has no twist unitary")
    t_var = scaling_element(field, RationalFunction.variable(field), precision)
    corner_triv = char_corner_projection(field, 0, precision)
    corner_chi = char_corner_projection(field, j, precision)
    digits = digit_character_sum(field, field.char_conj_index(j), precision)
    rest = (unit_element(field, precision) - corner_triv - corner_chi)
    return (t_var * corner_triv
            + digits * char_projection(field, j, precision)
            + corner_chi * t_var.star()
            + rest)


def corner_scaling_unitary(field, j, d, precision=DEFAULT_PRECISION):
    """The scaling unitary compressed to the chi_j corner:
    t_d * corner + (1 - corner)."""
    d = _as_rf(field, d)
    if d.is_zero():
        raise ValueError("corner scaling needs a nonzero multiplier")
    corner = char_corner_projection(field, j, precision)
    return (scaling_element(field, d, precision) * corner
            + unit_element(field, precision) - corner)


_BUILDERS = {
    "unit": unit_element,
    "level_projection": level_projection,
    "translation": translation_element,
    "scaling": scaling_element,
    "char_projection": char_projection,
    "char_corner_projection": char_corner_projection,
    "digit_character_sum": digit_character_sum,
    "char_twist_unitary": char_twist_unitary,
    "corner_scaling_unitary": corner_scaling_unitary,
}


def build_named(field, name, precision=DEFAULT_PRECISION, **params):
    """Construct a named element by keyword parameters (n, a, b, j, d)."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError("unknown element name %r" % (name,)) from None
    return builder(field, precision=precision, **params)


def _shifted_annulus_sum(field, j, n, precision):
    """Sum over units b of chi_j(b) v^{b T^n} 1_{n+1} v^{-b T^n}."""
    inner = level_projection(field, n + 1, precision)
    total = CrossedElement.zero(field, precision)
    for b in field.units:
        shift = RationalFunction(Poly.t_power(field, n) * b)
        v = translation_element(field, shift, precision)
        total = total + (v * inner * v.star()).scale(field.char_value(j, b))
    return total


def identity_checks(field, precision=DEFAULT_PRECISION, negative_control=False):
    """Run the element-level identity suite; returns (name, ok, detail) rows.

    The suite covers projection algebra, unitarity of the twist and
    corner-scaling unitaries, invariance under the scaling endomorphisms
    of the first five normalized irreducibles, the level-shift images,
    the partition of the unit ball by shifted range projections, and the
    intertwining relations behind the equivalence of corner projections.
    With negative_control a deliberately corrupted unitarity row is
    appended; it must fail, exercising downstream failure reporting.
    """
    q = field.order
    rows = []

    def record(name, lhs, rhs):
        ok, detail = check_identity(lhs, rhs)
        rows.append((name, ok, detail))

    one = unit_element(field, precision)
    t_var = scaling_element(field, RationalFunction.variable(field), precision)
    nontrivial = range(1, q - 1)

    for n in (0, 1, 2):
        P = level_projection(field, n, precision)
        record("ball(%d) idempotent" % n, P * P, P)
        record("ball(%d) self-adjoint" % n, P.star(), P)
    corners = {}
    for j in range(q - 1):
        P = char_projection(field, j, precision)
        record("char(%d) idempotent" % j, P * P, P)
        record("char(%d) self-adjoint" % j, P.star(), P)
        corners[j] = char_corner_projection(field, j, precision)
        record("corner(%d) idempotent" % j, corners[j] * corners[j], corners[j])
        record("corner(%d) self-adjoint" % j, corners[j].star(), corners[j])

    total = CrossedElement.zero(field, precision)
    for j in range(q - 1):
        total = total + char_projection(field, j, precision)
    record("char projections sum to the unit", total, one)

    twists = {}
    for j in nontrivial:
        twists[j] = char_twist_unitary(field, j, precision)
        record("twist(%d) unitary, left" % j, twists[j].star() * twists[j], one)
        record("twist(%d) unitary, right" % j, twists[j] * twists[j].star(), one)

    for i, poly in enumerate(irreducibles_normalized(field, 5), start=1):
        d = RationalFunction(poly)
        for j in range(q - 1):
            record("mu(irr%d) fixes corner(%d)" % (i, j),
                   corners[j].mu(d), corners[j])
            x = digit_character_sum(field, field.char_conj_index(j), precision)
            record("mu(irr%d) fixes digit sum(%d)" % (i, j), x.mu(d), x)
        for j in nontrivial:
            record("mu(irr%d) fixes twist(%d)" % (i, j),
                   twists[j].mu(d), twists[j])
            u = corner_scaling_unitary(field, j, d, precision)
            record("corner scaling(%d, irr%d) unitary, left" % (j, i),
                   u.star() * u, one)
            record("corner scaling(%d, irr%d) unitary, right" % (j, i),
                   u * u.star(), one)

    t_rf = RationalFunction.variable(field)
    for n in (-1, 0, 1, 2):
        record("mu(T) shifts ball(%d)" % n,
               level_projection(field, n, precision).mu(t_rf),
               level_projection(field, n + 1, precision))
    for j in range(q - 1):
        record("mu(T) sends corner(%d) to level 1" % j,
               corners[j].mu(t_rf),
               level_projection(field, 1, precision)
               * char_projection(field, j, precision))

    ball = level_projection(field, 0, precision)
    acc = CrossedElement.zero(field, precision)
    for a in field.elements:
        iso = translation_element(field, a, precision) * t_var
        acc = acc + iso * ball * iso.star()
    record("shifted range projections partition the ball", acc, ball)

    for n in (0, 1):
        annulus = (level_projection(field, n, precision)
                   - level_projection(field, n + 1, precision))
        for jpsi in range(q - 1):
            shifted = _shifted_annulus_sum(field, jpsi, n, precision)
            for jchi in range(q - 1):
                jtarget = (jchi - jpsi) % (q - 1)
                p_chi = char_projection(field, jchi, precision)
                p_target = char_projection(field, jtarget, precision)
                record("intertwine level %d chars (%d, %d)" % (n, jpsi, jchi),
                       p_chi * shifted, shifted * p_target)
                s = p_chi * shifted
                record("equivalence range, level %d chars (%d, %d)"
                       % (n, jpsi, jchi), s * s.star(), annulus * p_chi)
                record("equivalence support, level %d chars (%d, %d)"
                       % (n, jpsi, jchi), s.star() * s, annulus * p_target)

    if negative_control:
        if q > 2:
            bad = twists[1] + corners[1]
            record("corrupted twist unitary (control)", bad.star() * bad, one)
        else:
            bad = ball + one
            record("corrupted projection (control)", bad * bad, bad)
    return rows
