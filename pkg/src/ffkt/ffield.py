"""Arithmetic in the finite field with q = p^k elements.

Elements are coefficient tuples of length k over Z/p, lowest degree
first, representing residues modulo a fixed monic irreducible of degree
k.  The modulus is the irreducible with the smallest integer encoding
sum(c_i * p^i), so a field is reproducible from (p, k) alone.

The unit group is cyclic of order q - 1; we fix the generator with the
smallest integer encoding and define the multiplicative characters by
chi_j(g^k) = zeta_{q-1}^(j*k) for j = 0 .. q-2, values living in the
cyclotomic field Q(zeta_{q-1}).  Index 0 is the trivial character, and
the complex conjugate of chi_j is chi_{-j mod (q-1)}.
"""

from __future__ import annotations

import functools
import itertools

from .exactla import CycNumber


def _is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _poly_mul_mod_p(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _poly_rem(a, mod, p):
    """Remainder of a modulo a monic polynomial, coefficients in Z/p."""
    a = list(a)
    d = len(mod) - 1
    for k in range(len(a) - 1, d - 1, -1):
        c = a[k]
        if c:
            for j in range(d + 1):
                a[k - d + j] = (a[k - d + j] - c * mod[j]) % p
    return a[:d] + [0] * (d - len(a))


def _is_irreducible(poly, p):
    """Trial division by all lower-degree monic polynomials."""
    k = len(poly) - 1
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not any(_poly_rem(poly, divisor, p)):
                return False
    return True


class FiniteField:
    """The field F_q, q = p^k, with its canonical character basis."""

    def __init__(self, p, k):
        if not _is_prime(p):
            raise ValueError("characteristic must be prime, got %r" % (p,))
        if k < 1:
            raise ValueError("extension degree must be at least 1")
        self.p = p
        self.degree = k
        self.order = p ** k
        self.modulus = self._smallest_irreducible()
        self.zero = (0,) * k
        self.one = (1,) + (0,) * (k - 1)
        self.elements = tuple(self.decode(i) for i in range(self.order))
        self.units = self.elements[1:]
        self.generator = self._find_generator()
        self._dlog = {}
        x = self.one
        for e in range(self.order - 1):
            self._dlog[x] = e
            x = self.mul(x, self.generator)
        assert x == self.one, "generator order must be q - 1"

    def _smallest_irreducible(self):
        p, k = self.p, self.degree
        for m in range(p ** k):
            poly = tuple(self._digits(m, k)) + (1,)
            if _is_irreducible(poly, p):
                return poly
        raise AssertionError("no irreducible of degree %d found" % k)

    def _find_generator(self):
        target = self.order - 1
        for a in self.units:
            x, n = a, 1
            while x != self.one:
                x = self.mul(x, a)
                n += 1
            if n == target:
                return a
        raise AssertionError("unit group must be cyclic")

    def _digits(self, m, k):
        out = []
        for _ in range(k):
            m, r = divmod(m, self.p)
            out.append(r)
        return out

    # ----------------------------------------------------- element encoding

    def encode(self, a):
        return sum(c * self.p ** i for i, c in enumerate(a))

    def decode(self, m):
        if not 0 <= m < self.order:
            raise ValueError("encoding out of range")
        return tuple(self._digits(m, self.degree))

    def embed_scalar(self, c):
        """The prime-field element c mod p inside F_q."""
        return (c % self.p,) + (0,) * (self.degree - 1)

    # ---------------------------------------------------------- arithmetic

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        prod = _poly_mul_mod_p(a, b, self.p)
        return tuple(_poly_rem(prod, self.modulus, self.p))

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.order)
        return self.power(self.generator, -self.dlog(a))

    def power(self, a, n):
        if a == self.zero:
            if n <= 0:
                raise ZeroDivisionError("0 ** nonpositive")
            return self.zero
        n %= self.order - 1
        out, base = self.one, a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def dlog(self, a):
        """Exponent e with generator ** e == a, for a != 0."""
        if a == self.zero:
            raise ValueError("discrete log of zero")
        return self._dlog[a]

    # ---------------------------------------------------------- characters

    def char_value(self, j, a):
        """chi_j(a) in Q(zeta_{q-1}); a must be a unit."""
        return CycNumber.zeta(self.order - 1, j * self.dlog(a))

    def char_conj_index(self, j):
        return (-j) % (self.order - 1) if self.order > 2 else 0

    def __repr__(self):
        return "FiniteField(p=%d, k=%d)" % (self.p, self.degree)


@functools.cache
def make_field(p, k=1):
    """The finite field of order p^k (cached; fields are immutable)."""
    return FiniteField(p, k)


def field_of_order(q):
    """The finite field with q elements; q must be a prime power."""
    if q < 2:
        raise ValueError("field order must be at least 2, got %r" % (q,))
    p = 2
    while p * p <= q and q % p != 0:
        p += 1
    if p * p > q:
        p = q
    k, m = 0, q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError("%d is not a prime power" % q)
    return make_field(p) if k == 1 else make_field(p, k)
