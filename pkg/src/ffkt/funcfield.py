"""Polynomials and rational functions in one variable over F_q.

Poly stores coefficients lowest degree first with trailing zeros
stripped; the zero polynomial has an empty coefficient tuple and degree
-1.  RationalFunction keeps a reduced fraction num/den with den monic,
so equal fractions have equal representations and can key dictionaries.

Every nonzero rational function factors uniquely as

    c * T^k * product of f_i^(e_i)

with c a nonzero constant, k an integer, and the f_i irreducible
polynomials normalized to constant term 1.  The f_i are enumerated by
degree and then lexicographically on coefficients read from the highest
degree down; gamma_factorize computes the exponents and multiply_back
reassembles the function, which is the round-trip the tests pin down.

laurent_expand gives the T-adic expansion of a rational function: the
exact order at T = 0 plus the coefficient run up to a requested degree.
The expansion of 1/(1 - T) is the geometric series, a handy oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction


class Poly:
    """Polynomial over a finite field, lowest-degree-first coefficients."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        coeffs = tuple(coeffs)
        while coeffs and coeffs[-1] == field.zero:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *_):
        raise AttributeError("Poly is immutable")

    @staticmethod
    def zero(field):
        return Poly(field, ())

    @staticmethod
    def one(field):
        return Poly(field, (field.one,))

    @staticmethod
    def constant(field, c):
        return Poly(field, (c,))

    @staticmethod
    def variable(field):
        return Poly(field, (field.zero, field.one))

    @staticmethod
    def t_power(field, k):
        if k < 0:
            raise ValueError("negative power of T is not a polynomial")
        return Poly(field, (field.zero,) * k + (field.one,))

    @staticmethod
    def from_ints(field, ints):
        """Coefficients given by their integer encodings, lowest first."""
        return Poly(field, (field.decode(i) for i in ints))

    @property
    def degree(self):
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def leading_coeff(self):
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def constant_coeff(self):
        return self.coeffs[0] if self.coeffs else self.field.zero

    def order_at_zero(self):
        """Multiplicity of the root T = 0."""
        if self.is_zero():
            raise ValueError("zero polynomial has infinite order")
        return next(i for i, c in enumerate(self.coeffs)
                    if c != self.field.zero)

    def __add__(self, other):
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (f.zero,) * (n - len(self.coeffs))
        b = other.coeffs + (f.zero,) * (n - len(other.coeffs))
        return Poly(f, (f.add(x, y) for x, y in zip(a, b)))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly(self.field, (self.field.neg(c) for c in self.coeffs))

    def __mul__(self, other):
        f = self.field
        if not isinstance(other, Poly):
            # scalar (field element) multiple
            return Poly(f, (f.mul(other, c) for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return Poly.zero(f)
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x != f.zero:
                for j, y in enumerate(other.coeffs):
                    out[i + j] = f.add(out[i + j], f.mul(x, y))
        return Poly(f, out)

    def __rmul__(self, other):
        return self * other

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        inv_lead = f.inv(other.leading_coeff())
        rem = list(self.coeffs)
        d = other.degree
        q = [f.zero] * max(len(rem) - d, 1)
        for k in range(len(rem) - 1, d - 1, -1):
            c = f.mul(rem[k], inv_lead)
            if c != f.zero:
                q[k - d] = c
                for j, y in enumerate(other.coeffs):
                    rem[k - d + j] = f.sub(rem[k - d + j], f.mul(c, y))
        return Poly(f, q), Poly(f, rem[:d])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def divides(self, other):
        return (other % self).is_zero()

    def shift(self, k):
        """Multiply by T^k, k >= 0."""
        if self.is_zero():
            return self
        return Poly(self.field, (self.field.zero,) * k + self.coeffs)

    def evaluate(self, a):
        f = self.field
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, a), c)
        return acc

    def reversed_coeffs(self):
        """T^deg * self(1/T); zero maps to zero."""
        return Poly(self.field, tuple(reversed(self.coeffs)))

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.field is other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field.p, self.field.degree, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "Poly<0>"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == self.field.zero:
                continue
            e = self.field.encode(c)
            if i == 0:
                parts.append(str(e))
            elif i == 1:
                parts.append("T" if e == 1 else "%d*T" % e)
            else:
                parts.append("T^%d" % i if e == 1 else "%d*T^%d" % (e, i))
        return "Poly<%s>" % " + ".join(parts)


def poly_gcd(a, b):
    """Monic greatest common divisor."""
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a * a.field.inv(a.leading_coeff())


def enumeration_key(poly):
    """Sort key: degree, then coefficients from the top degree down."""
    f = poly.field
    return (poly.degree, tuple(f.encode(c) for c in reversed(poly.coeffs)))


class RationalFunction:
    """Reduced fraction of polynomials over F_q with a monic denominator."""

    __slots__ = ("field", "num", "den")

    def __init__(self, num, den=None):
        field = num.field
        if den is None:
            den = Poly.one(field)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        if not g.is_zero():
            num, den = num // g, den // g
        scale = field.inv(den.leading_coeff())
        num, den = num * scale, den * scale
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *_):
        raise AttributeError("RationalFunction is immutable")

    @staticmethod
    def zero(field):
        return RationalFunction(Poly.zero(field))

    @staticmethod
    def one(field):
        return RationalFunction(Poly.one(field))

    @staticmethod
    def constant(field, c):
        return RationalFunction(Poly.constant(field, c))

    @staticmethod
    def variable(field):
        return RationalFunction(Poly.variable(field))

    @staticmethod
    def t_power(field, k):
        """T^k for any integer k."""
        if k >= 0:
            return RationalFunction(Poly.t_power(field, k))
        return RationalFunction(Poly.one(field), Poly.t_power(field, -k))

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num == Poly.one(self.field) and \
            self.den == Poly.one(self.field)

    def is_polynomial(self):
        return self.den == Poly.one(self.field)

    def __add__(self, other):
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other):
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero function")
        return RationalFunction(self.den, self.num)

    def order_at_zero(self):
        """Order of vanishing at T = 0 (negative at a pole)."""
        return self.num.order_at_zero() - self.den.order_at_zero()

    def invert_variable(self):
        """The involution T -> 1/T."""
        if self.is_zero():
            return self
        rn, rd = self.num.reversed_coeffs(), self.den.reversed_coeffs()
        k = self.den.degree - self.num.degree
        if k >= 0:
            return RationalFunction(rn.shift(k), rd)
        return RationalFunction(rn, rd.shift(-k))

    def abs_at_infinity(self):
        """Modulus at the infinite place: q^(deg num - deg den)."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.field.order) ** (self.num.degree -
                                              self.den.degree)

    def __eq__(self, other):
        return (isinstance(other, RationalFunction)
                and self.field is other.field
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_polynomial():
            return "Rat<%s>" % repr(self.num)[5:-1]
        return "Rat<(%s)/(%s)>" % (repr(self.num)[5:-1], repr(self.den)[5:-1])


def normalized_irreducibles(field):
    """All irreducible polynomials with constant term 1, in canonical order.

    Within each degree the enumeration is lexicographic on coefficients
    read from the highest degree down, matching enumeration_key.
    """
    q = field.order
    for degree in itertools.count(1):
        # vary the leading coefficient slowest, then c_{d-1}, ..., c_1
        for lead in range(1, q):
            for mids in itertools.product(*[range(q)] * (degree - 1)):
                coeffs = [field.one]
                coeffs.extend(field.decode(e) for e in reversed(mids))
                coeffs.append(field.decode(lead))
                yield Poly(field, coeffs)


def _irreducible(poly, field):
    for d in range(1, poly.degree // 2 + 1):
        for tail in itertools.product(*[range(field.order)] * d):
            divisor = Poly(field, [field.decode(e) for e in tail]
                           + [field.one])
            if divisor.divides(poly):
                return False
    return poly.degree >= 1


def irreducibles_normalized(field, count):
    """The first `count` normalized irreducibles f_1, f_2, ..."""
    out = []
    for poly in normalized_irreducibles(field):
        if _irreducible(poly, field):
            out.append(poly)
            if len(out) == count:
                return tuple(out)
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class GammaFactorization:
    """r = unit * T^t_exponent * prod f^e over the normalized irreducibles.

    factors holds (f, e) pairs with e != 0, sorted by enumeration_key.
    """

    unit: tuple
    t_exponent: int
    factors: tuple

    def multiply_back(self, field):
        num = Poly.constant(field, self.unit)
        den = Poly.one(field)
        if self.t_exponent >= 0:
            num = num.shift(self.t_exponent)
        else:
            den = den.shift(-self.t_exponent)
        for f, e in self.factors:
            for _ in range(abs(e)):
                if e > 0:
                    num = num * f
                else:
                    den = den * f
        return RationalFunction(num, den)


def _factor_constant_term_one(poly):
    """Factor a constant-term-1 polynomial into normalized irreducibles.

    The normalized irreducible factors multiply back to the input with
    no stray unit: the constant terms on both sides are 1.
    """
    field = poly.field
    counts = {}
    for f in normalized_irreducibles(field):
        if f.degree > poly.degree:
            break
        while f.divides(poly):
            counts[f] = counts.get(f, 0) + 1
            poly = poly // f
    assert poly.degree == 0, "factorization must exhaust the polynomial"
    return counts


def gamma_factorize(r):
    """Canonical factorization c * T^k * prod f_i^(e_i) of a nonzero r."""
    if r.is_zero():
        raise ValueError("zero has no factorization")
    field = r.field
    counts = {}
    unit = field.one
    t_exp = 0
    for poly, sign in ((r.num, 1), (r.den, -1)):
        v = poly.order_at_zero()
        t_exp += sign * v
        body = Poly(field, poly.coeffs[v:])
        c = body.constant_coeff()
        unit = field.mul(unit, c if sign > 0 else field.inv(c))
        for f, e in _factor_constant_term_one(body * field.inv(c)).items():
            counts[f] = counts.get(f, 0) + sign * e
    factors = tuple(sorted(((f, e) for f, e in counts.items() if e),
                           key=lambda fe: enumeration_key(fe[0])))
    return GammaFactorization(unit=unit, t_exponent=t_exp, factors=factors)


def laurent_expand(r, n_max):
    """T-adic expansion of r: (order, coefficients of T^order .. T^n_max).

    The order is the exact order at T = 0 for nonzero r, and 0 for the
    zero function (with an all-zero coefficient run).  The coefficient
    tuple is empty when the order already exceeds n_max.
    """
    field = r.field
    if r.is_zero():
        return 0, (field.zero,) * (n_max + 1)
    vn = r.num.order_at_zero()
    vd = r.den.order_at_zero()
    order = vn - vd
    terms = n_max - order + 1
    if terms <= 0:
        return order, ()
    n0 = r.num.coeffs[vn:]
    d0 = r.den.coeffs[vd:]
    inv0 = field.inv(d0[0])
    out = []
    for k in range(terms):
        acc = n0[k] if k < len(n0) else field.zero
        for j in range(1, min(k, len(d0) - 1) + 1):
            acc = field.sub(acc, field.mul(d0[j], out[k - j]))
        out.append(field.mul(acc, inv0))
    return order, tuple(out)
