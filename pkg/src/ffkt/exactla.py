"""Exact linear algebra over Z, Q, and the cyclotomic fields Q(zeta_n).

Integer matrices are immutable tuples of tuples of Python ints, so every
operation is arbitrary precision; nothing in this module ever rounds.
Smith normal form is computed by elementary row/column operations with
pivot-magnitude minimization, which is entirely adequate at the sizes
met here (a few hundred rows at the very most).

Cyclotomic numbers are residues in Q[x]/Phi_n(x), stored as a conductor
n plus a coefficient vector of Fractions of length deg Phi_n.  Phi_n is
irreducible over Q, so the quotient is a field: every nonzero element
has an inverse and matrix rank over Q(zeta_n) is well defined.

CycMatrix keeps only its nonzero entries (dict of rows) because the
finite models built on top of it are generalized permutation matrices;
rank extraction works row by row and never densifies.
"""

from __future__ import annotations

import functools
from fractions import Fraction


class IntMatrix:
    """Immutable rectangular matrix of arbitrary-precision integers."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, entries):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("matrix must have positive dimensions")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("matrix must be rectangular")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", len(rows[0]))
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("IntMatrix is immutable")

    @staticmethod
    def identity(n):
        return IntMatrix([[int(i == j) for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(r, c):
        return IntMatrix([[0] * c for _ in range(r)])

    @staticmethod
    def all_ones(n):
        return IntMatrix([[1] * n for _ in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.entries == other.entries)

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.entries))
        return self._hash

    def __repr__(self):
        return "IntMatrix(%s)" % (list(list(r) for r in self.entries),)

    def __add__(self, other):
        self._check_same_shape(other)
        return IntMatrix([[a + b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._check_same_shape(other)
        return IntMatrix([[a - b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self):
        return IntMatrix([[-a for a in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, int):
            return IntMatrix([[other * a for a in row] for row in self.entries])
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        bt = list(zip(*other.entries))
        return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in bt]
                          for row in self.entries])

    __rmul__ = __mul__

    def __pow__(self, k):
        if self.rows != self.cols or k < 0:
            raise ValueError("power needs a square matrix and k >= 0")
        result = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def transpose(self):
        return IntMatrix(list(zip(*self.entries)))

    def _check_same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def det(self):
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self):
        return self.rows == self.cols and self.det() in (1, -1)

    def apply(self, vector):
        """Matrix times integer/rational vector, returned as a tuple."""
        if len(vector) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * x for a, x in zip(row, vector))
                     for row in self.entries)


def snf(matrix):
    """Smith normal form of an IntMatrix.

    Returns (U, S, V) with U, V unimodular, S = U*matrix*V diagonal with
    nonnegative entries d_1 | d_2 | ... forming a divisibility chain.
    """
    r, c = matrix.rows, matrix.cols
    a = [list(row) for row in matrix.entries]
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    def row_add(i, j, k):
        a[i] = [x + k * y for x, y in zip(a[i], a[j])]
        u[i] = [x + k * y for x, y in zip(u[i], u[j])]

    def col_add(i, j, k):
        for row in a:
            row[i] += k * row[j]
        for row in v:
            row[i] += k * row[j]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                if a[i][j] and (best is None
                                or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        while True:
            restart = False
            for i in range(t + 1, r):
                if a[i][t]:
                    row_add(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        row_swap(i, t)
                        restart = True
            if restart:
                continue
            for j in range(t + 1, c):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        col_swap(j, t)
                        restart = True
            if restart:
                continue
            # pivot must divide the whole trailing block
            offender = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if a[i][j] % a[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return IntMatrix(u), IntMatrix(a), IntMatrix(v)


def int_kernel(matrix):
    """Basis of {x in Z^c : matrix @ x = 0}, as a tuple of int tuples."""
    _, s, v = snf(matrix)
    d = min(matrix.rows, matrix.cols)
    free = [j for j in range(matrix.cols) if j >= d or s[j, j] == 0]
    return tuple(tuple(v[i, j] for i in range(matrix.cols)) for j in free)


def int_solve(matrix, b):
    """One integer solution of matrix @ x = b, or None."""
    if len(b) != matrix.rows:
        raise ValueError("vector length mismatch")
    u, s, v = snf(matrix)
    ub = u.apply(b)
    d = min(matrix.rows, matrix.cols)
    y = [0] * matrix.cols
    for i in range(matrix.rows):
        di = s[i, i] if i < d else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % di:
                return None
            y[i] = ub[i] // di
    return v.apply(y)


def rat_solve(rows, b):
    """One rational solution x of A x = b (A given as rows), or None."""
    m = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(rows, b)]
    nrows = len(m)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    rank = 0
    for j in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][j]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][j]
        m[rank] = [x * inv for x in m[rank]]
        for i in range(nrows):
            if i != rank and m[i][j]:
                f = m[i][j]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        pivots.append(j)
        rank += 1
        if rank == nrows:
            break
    for i in range(rank, nrows):
        if m[i][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for i, j in enumerate(pivots):
        x[j] = m[i][ncols]
    return tuple(x)


def rat_nullspace(rows):
    """Basis of the rational nullspace of A (given as rows of Fractions)."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    m = [list(map(Fraction, row)) for row in rows]
    pivots = []
    rank = 0
    for j in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][j]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][j]
        m[rank] = [x * inv for x in m[rank]]
        for i in range(nrows):
            if i != rank and m[i][j]:
                f = m[i][j]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        pivots.append(j)
        rank += 1
    basis = []
    pivot_set = set(pivots)
    for j in range(ncols):
        if j in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[j] = Fraction(1)
        for i, pj in enumerate(pivots):
            vec[pj] = -m[i][j]
        basis.append(tuple(vec))
    return tuple(basis)


def lattice_basis(vectors):
    """Canonical (Hermite) basis of the lattice spanned by integer vectors.

    Accepts arbitrarily many possibly dependent integer vectors and
    returns an independent basis as a tuple of tuples, normalized so two
    generating sets span the same lattice iff the results are equal.
    Column operations only, so the spanned lattice never changes.
    """
    cols = []
    dim = None
    for v in vectors:
        v = [int(x) for x in v]
        if dim is None:
            dim = len(v)
        elif len(v) != dim:
            raise ValueError("mixed vector lengths")
        if any(v):
            cols.append(v)
    if not cols:
        return ()
    basis = []
    pivot_rows = []
    for row in range(dim):
        live = [c for c in cols if c[row] != 0]
        rest = [c for c in cols if c[row] == 0]
        while len(live) > 1:
            live.sort(key=lambda c: abs(c[row]))
            a = live[0]
            nxt = [a]
            for c in live[1:]:
                k = c[row] // a[row]
                c2 = [x - k * y for x, y in zip(c, a)]
                if c2[row]:
                    nxt.append(c2)
                elif any(c2):
                    rest.append(c2)
            live = nxt
        if live:
            piv = live[0]
            if piv[row] < 0:
                piv = [-x for x in piv]
            basis.append(piv)
            pivot_rows.append(row)
        cols = rest
    # reduce entries above each pivot so the basis is canonical
    for idx in range(len(basis)):
        for jdx in range(idx):
            prow = pivot_rows[idx]
            k = basis[jdx][prow] // basis[idx][prow]
            if k:
                basis[jdx] = [x - k * y
                              for x, y in zip(basis[jdx], basis[idx])]
    return tuple(tuple(c) for c in basis)


def _zpoly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _zpoly_exact_div(a, b):
    # exact division of integer polynomials, lowest degree first
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for k in range(len(out) - 1, -1, -1):
        coef, rem = divmod(a[k + len(b) - 1], b[-1])
        assert rem == 0, "division is not exact"
        out[k] = coef
        if coef:
            for j, y in enumerate(b):
                a[k + j] -= coef * y
    assert all(x == 0 for x in a), "division is not exact"
    return out


@functools.cache
def cyclotomic_polynomial(n):
    """Coefficients of Phi_n, lowest degree first, as a tuple of ints.

    Computed by exact division of x^n - 1 by Phi_d over proper divisors
    d of n; no factorization tables.
    """
    if n < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (n - 1) + [1]           # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _zpoly_exact_div(num, cyclotomic_polynomial(d))
    return tuple(num)


def _phi_degree(n):
    return len(cyclotomic_polynomial(n)) - 1


def _reduce_mod_phi(coeffs, n):
    """Reduce a Fraction-coefficient polynomial mod Phi_n."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    a = list(coeffs)
    for k in range(len(a) - 1, deg - 1, -1):
        coef = a[k]
        if coef:
            # phi is monic, so the reduction stays exact
            for j, y in enumerate(phi):
                a[k - deg + j] -= coef * y
    a = a[:deg]
    a += [Fraction(0)] * (deg - len(a))
    return tuple(a)


class CycNumber:
    """An element of Q(zeta_n) = Q[x]/Phi_n(x)."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor, coeffs):
        deg = _phi_degree(conductor)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != deg:
            raise ValueError("coefficient vector must have length deg Phi_n")
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *_):
        raise AttributeError("CycNumber is immutable")

    @staticmethod
    def from_rational(conductor, value):
        deg = _phi_degree(conductor)
        return CycNumber(conductor,
                         (Fraction(value),) + (Fraction(0),) * (deg - 1))

    @staticmethod
    def zero(conductor):
        return CycNumber.from_rational(conductor, 0)

    @staticmethod
    def one(conductor):
        return CycNumber.from_rational(conductor, 1)

    @staticmethod
    def zeta(conductor, power=1):
        """zeta_n^power as an element of Q(zeta_n)."""
        k = power % conductor
        mono = [Fraction(0)] * k + [Fraction(1)]
        return CycNumber(conductor, _reduce_mod_phi(mono, conductor))

    def _coerce(self, other):
        if isinstance(other, CycNumber):
            if other.conductor != self.conductor:
                raise ValueError("mixed conductors")
            return other
        if isinstance(other, (int, Fraction)):
            return CycNumber.from_rational(self.conductor, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycNumber(self.conductor,
                         tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycNumber(self.conductor,
                         tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CycNumber(self.conductor, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prod = [Fraction(0)] * (2 * len(self.coeffs))
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycNumber(self.conductor, _reduce_mod_phi(prod, self.conductor))

    __rmul__ = __mul__

    def conjugate(self):
        """The automorphism zeta -> zeta^(-1) (complex conjugation)."""
        n = self.conductor
        out = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            out[(n - i) % n] += c
        return CycNumber(n, _reduce_mod_phi(out, n))

    def inverse(self):
        """Multiplicative inverse via extended Euclid mod Phi_n."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n = self.conductor
        # invariant: r_i = s_i * self  (mod Phi_n)
        r0 = [Fraction(c) for c in cyclotomic_polynomial(n)]
        s0 = [Fraction(0)]
        r1 = list(self.coeffs)
        s1 = [Fraction(1)]
        while True:
            while r1 and not r1[-1]:
                r1.pop()
            assert r1, "Phi_n is irreducible, gcd cannot vanish"
            if len(r1) == 1:
                break
            q, rem = _qpoly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _qpoly_sub(s0, _qpoly_mul(q, s1))
        inv = 1 / r1[0]
        return CycNumber(n, _reduce_mod_phi([c * inv for c in s1], n))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_one(self):
        return self == CycNumber.one(self.conductor)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coeffs[0]

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycNumber.from_rational(self.conductor, other)
        return (isinstance(other, CycNumber)
                and self.conductor == other.conductor
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.conductor, self.coeffs))

    def __repr__(self):
        return "CycNumber(%d, %s)" % (self.conductor, list(self.coeffs))


def _qpoly_divmod(a, b):
    a = list(a)
    b = list(b)
    while b and not b[-1]:
        b.pop()
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    q = [Fraction(0)] * max(len(a) - db, 1)
    inv = 1 / b[-1]
    for k in range(len(a) - 1, db - 1, -1):
        coef = a[k] * inv
        q[k - db] = coef
        if coef:
            for j, y in enumerate(b):
                a[k - db + j] -= coef * y
    rem = a[:db]
    return q, rem


def _qpoly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1 if a and b else 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _qpoly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    return [x - (b[i] if i < len(b) else 0) for i, x in enumerate(a)]


class CycMatrix:
    """Sparse exact matrix over Q(zeta_n); zero entries are not stored."""

    __slots__ = ("conductor", "nrows", "ncols", "rows")

    def __init__(self, conductor, nrows, ncols, rows=None):
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        clean = {}
        for i, row in (rows or {}).items():
            r = {j: v for j, v in row.items() if not v.is_zero()}
            if r:
                if not (0 <= i < nrows):
                    raise ValueError("row index out of range")
                if any(not (0 <= j < ncols) for j in r):
                    raise ValueError("column index out of range")
                if any(v.conductor != conductor for v in r.values()):
                    raise ValueError("mixed conductors")
                clean[i] = r
        object.__setattr__(self, "rows", clean)

    def __setattr__(self, *_):
        raise AttributeError("CycMatrix is immutable")

    @staticmethod
    def from_dense(conductor, entries):
        entries = [list(row) for row in entries]
        rows = {}
        for i, row in enumerate(entries):
            for j, v in enumerate(row):
                if not isinstance(v, CycNumber):
                    v = CycNumber.from_rational(conductor, v)
                if not v.is_zero():
                    rows.setdefault(i, {})[j] = v
        return CycMatrix(conductor, len(entries), len(entries[0]), rows)

    @staticmethod
    def identity(conductor, n):
        one = CycNumber.one(conductor)
        return CycMatrix(conductor, n, n, {i: {i: one} for i in range(n)})

    @staticmethod
    def zeros(conductor, nrows, ncols):
        return CycMatrix(conductor, nrows, ncols, {})

    def entry(self, i, j):
        return self.rows.get(i, {}).get(j, CycNumber.zero(self.conductor))

    def nnz(self):
        return sum(len(r) for r in self.rows.values())

    def __add__(self, other):
        self._check(other)
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            tgt = rows.setdefault(i, {})
            for j, v in r.items():
                w = tgt.get(j)
                tgt[j] = v if w is None else w + v
        return CycMatrix(self.conductor, self.nrows, self.ncols, rows)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CycMatrix(self.conductor, self.nrows, self.ncols,
                         {i: {j: -v for j, v in r.items()}
                          for i, r in self.rows.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNumber)):
            if isinstance(other, (int, Fraction)):
                other = CycNumber.from_rational(self.conductor, other)
            return CycMatrix(self.conductor, self.nrows, self.ncols,
                             {i: {j: v * other for j, v in r.items()}
                              for i, r in self.rows.items()})
        if self.ncols != other.nrows or self.conductor != other.conductor:
            raise ValueError("shape or conductor mismatch in product")
        rows = {}
        for i, r in self.rows.items():
            acc = {}
            for k, v in r.items():
                orow = other.rows.get(k)
                if orow:
                    for j, w in orow.items():
                        prod = v * w
                        cur = acc.get(j)
                        acc[j] = prod if cur is None else cur + prod
            if acc:
                rows[i] = acc
        return CycMatrix(self.conductor, self.nrows, other.ncols, rows)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CycNumber)):
            return self * other
        return NotImplemented

    def conjugate_transpose(self):
        rows = {}
        for i, r in self.rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v.conjugate()
        return CycMatrix(self.conductor, self.ncols, self.nrows, rows)

    def is_zero(self):
        return not self.rows

    def __eq__(self, other):
        return (isinstance(other, CycMatrix)
                and self.conductor == other.conductor
                and self.nrows == other.nrows and self.ncols == other.ncols
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.conductor, self.nrows, self.ncols,
                     tuple(sorted((i, j, v) for i, r in self.rows.items()
                                  for j, v in r.items()))))

    def __repr__(self):
        return "CycMatrix(%d, %dx%d, nnz=%d)" % (
            self.conductor, self.nrows, self.ncols, self.nnz())

    def _check(self, other):
        if (self.nrows, self.ncols, self.conductor) != \
                (other.nrows, other.ncols, other.conductor):
            raise ValueError("shape or conductor mismatch")


def cyc_rank(matrix):
    """Rank of a CycMatrix over the field Q(zeta_n).

    Fraction-free elimination: each incoming row is reduced against the
    stored pivot rows by cross-multiplication only, and exact zero tests
    decide dependence.
    """
    pivots = []  # (pivot column, reduced row dict)
    for i in sorted(matrix.rows):
        row = dict(matrix.rows[i])
        for pc, prow in pivots:
            f = row.get(pc)
            if f is None or f.is_zero():
                continue
            pv = prow[pc]
            new = {}
            for j, v in row.items():
                new[j] = pv * v
            for j, v in prow.items():
                w = new.get(j, CycNumber.zero(matrix.conductor)) - f * v
                if w.is_zero():
                    new.pop(j, None)
                else:
                    new[j] = w
            row = {j: v for j, v in new.items() if not v.is_zero()}
        if row:
            pivots.append((min(row), row))
    return len(pivots)
