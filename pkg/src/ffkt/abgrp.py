"""Finitely generated subgroups of Q^n mixing integer and base-divisible lines.

Groups here are spans  sum_i Z v_i + sum_j Z[1/q] w_j  inside Q^n, with all
generators Q-linearly independent and q a fixed base.  That class is closed
under everything the tower computations need: kernels and cokernels of
homomorphisms, and colimits of the repeated self-embedding of Z^n along an
integer matrix whose determinant is a power of q.  All arithmetic is exact.
Filtered computations inspect one divisibility level at a time and accept an
answer only once a window of consecutive levels agrees; running past the
level cap raises StabilizationError instead of returning a guess.
"""

import collections
import math
from fractions import Fraction

from .errors import StabilizationError
from .exactla import (IntMatrix, int_kernel, int_solve, lattice_basis,
                      rat_nullspace, rat_solve, snf)
from .ffield import field_of_order

LATTICE = "lattice"
DIVISIBLE = "q-divisible"

DEFAULT_WINDOW = 3
LEVEL_CAP = 12


def _fracvec(values):
    return tuple(Fraction(v) for v in values)


def _base_exponent(value, base):
    """Smallest e with base**e * value integral, or None if the denominator
    carries a prime not dividing the base."""
    d = Fraction(value).denominator
    e = 0
    while d > 1:
        g = math.gcd(d, base)
        if g == 1:
            return None
        d //= g
        e += 1
    return e


def _base_scaled(values, base):
    """The vector cleared to integers by the smallest power of the base."""
    e = 0
    for v in values:
        ev = _base_exponent(v, base)
        if ev is None:
            raise ArithmeticError("denominator prime to the base")
        e = max(e, ev)
    out = []
    for v in values:
        w = Fraction(v) * base ** e
        if w.denominator != 1:
            raise ArithmeticError("scaling did not clear the denominator")
        out.append(int(w))
    return out


def _strip_base(n, base):
    """Split n > 0 as (part coprime to base, remaining cofactor)."""
    rest = n
    while True:
        g = math.gcd(rest, base)
        if g == 1:
            return rest, n // rest
        rest //= g


def _least_prime_factor(n):
    p = 2
    while p * p <= n:
        if n % p == 0:
            return p
        p += 1
    return n


def _exact_div(num, den):
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError("expected exact division")
    return q


class FracGroup:
    """Subgroup of Q^ambient spanned by independent flagged generators.

    A LATTICE generator contributes its integer multiples, a DIVISIBLE one
    contributes Z[1/base] multiples.  Generators must be Q-linearly
    independent; that keeps coordinates unique and makes the rank split
    readable straight off the flags.
    """

    def __init__(self, ambient, generators, base):
        if ambient < 1:
            raise ValueError("ambient dimension must be positive")
        if base < 2:
            raise ValueError("base must be at least 2")
        gens = []
        for vec, flag in generators:
            vec = _fracvec(vec)
            if len(vec) != ambient:
                raise ValueError("generator length %d does not match ambient "
                                 "dimension %d" % (len(vec), ambient))
            if flag not in (LATTICE, DIVISIBLE):
                raise ValueError("unknown generator flag %r" % (flag,))
            if not any(vec):
                raise ValueError("zero vector cannot be a generator")
            gens.append((vec, flag))
        self.ambient = ambient
        self.generators = tuple(gens)
        self.base = base
        if gens and rat_nullspace(self._gen_rows()):
            raise ValueError("generators are linearly dependent")

    def _gen_rows(self):
        return [[vec[i] for vec, _ in self.generators]
                for i in range(self.ambient)]

    @property
    def rank(self):
        return len(self.generators)

    def coordinates(self, x):
        """Coefficients of x in the generator basis, None outside the span."""
        x = _fracvec(x)
        if len(x) != self.ambient:
            raise ValueError("vector length %d does not match ambient "
                             "dimension %d" % (len(x), self.ambient))
        if not self.generators:
            return () if not any(x) else None
        return rat_solve(self._gen_rows(), x)

    def contains(self, x):
        coords = self.coordinates(x)
        if coords is None:
            return False
        for c, (_, flag) in zip(coords, self.generators):
            if flag == LATTICE:
                if c.denominator != 1:
                    return False
            elif _base_exponent(c, self.base) is None:
                return False
        return True

    def contains_divisibly(self, x):
        """Whether the whole line Z[1/base]*x stays inside the group."""
        coords = self.coordinates(x)
        if coords is None:
            return False
        for c, (_, flag) in zip(coords, self.generators):
            if flag == LATTICE:
                if c != 0:
                    return False
            elif _base_exponent(c, self.base) is None:
                return False
        return True

    def contains_group(self, other):
        """Whether other, with its own flags, is a subgroup of this group."""
        if other.ambient != self.ambient or other.base != self.base:
            return False
        for vec, flag in other.generators:
            inside = (self.contains_divisibly(vec) if flag == DIVISIBLE
                      else self.contains(vec))
            if not inside:
                return False
        return True

    def same_group(self, other):
        return self.contains_group(other) and other.contains_group(self)


def membership(group, x):
    """Exact membership test for a rational vector in a flagged group."""
    return group.contains(x)


def max_divisible(group):
    """Rank pair (base-divisible part, lattice complement) of the group.

    Both numbers depend only on the group, not the presentation: the
    divisible generators span the maximal base-divisible subgroup because
    the generators are independent.
    """
    a = sum(1 for _, flag in group.generators if flag == DIVISIBLE)
    return (a, len(group.generators) - a)


class GroupHom:
    """Homomorphism of flagged groups restricted from a rational ambient map.

    rows is a target_ambient x source_ambient matrix.  Construction fails
    unless every source generator lands in the target group, with divisible
    generators landing divisibly.
    """

    def __init__(self, source, target, rows):
        if source.base != target.base:
            raise ValueError("source and target use different bases")
        matrix = tuple(_fracvec(r) for r in rows)
        if len(matrix) != target.ambient or any(len(r) != source.ambient
                                                for r in matrix):
            raise ValueError("matrix shape does not match the ambient spaces")
        self.source = source
        self.target = target
        self.matrix = matrix
        for idx, (vec, flag) in enumerate(source.generators):
            image = self.apply(vec)
            inside = (target.contains_divisibly(image) if flag == DIVISIBLE
                      else target.contains(image))
            if not inside:
                raise ValueError("image of generator %d lies outside the "
                                 "target" % idx)

    def apply(self, x):
        x = _fracvec(x)
        if len(x) != self.source.ambient:
            raise ValueError("vector length %d does not match the source "
                             "dimension %d" % (len(x), self.source.ambient))
        return tuple(sum(a * b for a, b in zip(row, x))
                     for row in self.matrix)


class ColimitTower:
    """Repeated self-embedding of Z^n along one integer matrix.

    The matrix must be square and invertible over Q, and |det| must be a
    power of the base so that every denominator the colimit creates is a
    power of the base.
    """

    def __init__(self, matrix, base):
        if not isinstance(matrix, IntMatrix):
            matrix = IntMatrix(matrix)
        if matrix.rows != matrix.cols:
            raise ValueError("connecting matrix must be square")
        if base < 2:
            raise ValueError("base must be at least 2")
        det = matrix.det()
        if det == 0:
            raise ValueError("connecting matrix must be invertible over Q")
        m = abs(det)
        while m % base == 0:
            m //= base
        if m != 1:
            raise ValueError("|det| = %d is not a power of the base %d"
                             % (abs(det), base))
        self.matrix = matrix
        self.base = base
        self.rank = matrix.rows
        self.det = det


def iota_image(tower, level, index):
    """Colimit coordinates of the standard basis vector e_index at a level.

    Level k sits inside the colimit through A^{-k}, so the image is the
    solution of A^level * x = e_index.
    """
    if level < 0:
        raise ValueError("level must be nonnegative")
    n = tower.rank
    if not 0 <= index < n:
        raise ValueError("basis index out of range")
    power = tower.matrix ** level
    rows = [list(r) for r in power.entries]
    image = rat_solve(rows, [Fraction(int(i == index)) for i in range(n)])
    assert image is not None
    return image


class ColimitStructure:
    """Colimit of a tower: the union of A^{-k} Z^n inside Q^n."""

    def __init__(self, tower, group):
        self.tower = tower
        self.group = group
        self._embeddings = {}

    def embedding(self, level):
        """Rows of A^{-level}, the embedding of that level into the colimit."""
        if level not in self._embeddings:
            n = self.tower.rank
            cols = [iota_image(self.tower, level, j) for j in range(n)]
            self._embeddings[level] = tuple(
                tuple(cols[j][i] for j in range(n)) for i in range(n))
        return self._embeddings[level]


def _unimodular_inverse(u):
    n = u.rows
    cols = []
    for j in range(n):
        col = int_solve(u, [int(i == j) for i in range(n)])
        if col is None:
            raise ArithmeticError("matrix is not unimodular")
        cols.append(col)
    return IntMatrix([[cols[j][i] for j in range(n)] for i in range(n)])


def colimit_structure(tower):
    """Identify the colimit of a tower as a flagged subgroup of Q^n.

    Directions with rational eigenvalue of modulus > 1 become
    base-divisible, the rest stay lattice directions.  Three exact
    certificates guard the identification: the rational spectrum accounts
    for the whole dimension, it reproduces the determinant, and the
    connecting matrix carries the candidate group onto itself bijectively
    while its inverse keeps integer vectors inside.  Any failure raises
    StabilizationError; nothing is guessed.
    """
    a = tower.matrix
    n = tower.rank
    base = tower.base
    p = _least_prime_factor(base)
    total = 0
    m = abs(tower.det)
    while m % p == 0:
        m //= p
        total += 1
    # rational eigenvalues of an integer matrix whose determinant is a
    # power of p can only be of the form +-p^j
    identity = IntMatrix.identity(n)
    spectrum = {}
    for j in range(total + 1):
        for sign in (1, -1):
            lam = sign * p ** j
            if lam in spectrum:
                continue
            kern = int_kernel((a - lam * identity) ** n)
            if kern:
                spectrum[lam] = kern
    counted = sum(len(v) for v in spectrum.values())
    if counted != n:
        raise StabilizationError(
            "rational spectrum covers %d of %d dimensions; colimit "
            "structure not certified" % (counted, n))
    prod = 1
    for lam, kern in spectrum.items():
        prod *= lam ** len(kern)
    if prod != tower.det:
        raise StabilizationError(
            "rational spectrum does not reproduce the determinant")
    growing = [lam for lam in spectrum if abs(lam) > 1]
    if growing:
        shrink = identity
        for lam in growing:
            shrink = shrink * (a - lam * identity) ** n
        div_basis = int_kernel(shrink)
    else:
        div_basis = ()
    gens = [(_fracvec(v), DIVISIBLE) for v in div_basis]
    if len(div_basis) == 0:
        for j in range(n):
            gens.append((tuple(Fraction(int(i == j)) for i in range(n)),
                         LATTICE))
    elif len(div_basis) < n:
        cols = IntMatrix([[vec[i] for vec in div_basis] for i in range(n)])
        u, s, _ = snf(cols)
        # int_kernel returns a saturated basis, so all invariant factors
        # are 1 and the first columns of u^{-1} span the same lattice;
        # the remaining columns complete it to a basis of Z^n
        for t in range(len(div_basis)):
            if s[t, t] != 1:
                raise StabilizationError("divisible directions are not "
                                         "saturated")
        uinv = _unimodular_inverse(u)
        for j in range(len(div_basis), n):
            gens.append((tuple(Fraction(uinv[i, j]) for i in range(n)),
                         LATTICE))
    group = FracGroup(n, gens, base)
    arows = [list(r) for r in a.entries]
    for j in range(n):
        back = rat_solve(arows, [Fraction(int(i == j)) for i in range(n)])
        if not group.contains(back):
            raise StabilizationError(
                "inverse image of a lattice vector escapes the candidate "
                "group")
    for vec, flag in group.generators:
        forward = tuple(sum(Fraction(a[i, k]) * vec[k] for k in range(n))
                        for i in range(n))
        back = rat_solve(arows, list(vec))
        test = (group.contains_divisibly if flag == DIVISIBLE
                else group.contains)
        if not (test(forward) and test(back)):
            raise StabilizationError(
                "connecting matrix is not bijective on the candidate group")
    return ColimitStructure(tower, group)


def refinement_tower(q):
    """Corner-class tower of the field with q elements.

    Basis: the class of the full level corner first, then one entry per
    nontrivial character of the unit group.  Refining by one level splits
    the full corner into q finer copies, while each character corner
    contributes one finer full corner plus the matching finer character
    corner.
    """
    field_of_order(q)
    n = q - 1
    entries = [[0] * n for _ in range(n)]
    entries[0][0] = q
    for j in range(1, n):
        entries[0][j] = 1
        entries[j][j] = 1
    return ColimitTower(entries, q)


def kernel(f, window=DEFAULT_WINDOW, cap=LEVEL_CAP):
    """Kernel of a hom between flagged groups, again a flagged group.

    Everything happens in source coordinates c, where f becomes the matrix
    N whose columns are the images of the source generators.  The divisible
    part is the saturated integer kernel of N with all lattice coordinates
    pinned to zero.  The lattice part comes from the integer kernels at
    successive divisibility levels: level k allows denominators base^k on
    divisible coordinates, and the projection of the level kernel to the
    lattice coordinates must agree over `window` consecutive levels before
    it is accepted and lifted.
    """
    src = f.source
    base = src.base
    g = len(src.generators)
    if g == 0:
        return FracGroup(src.ambient, (), base)
    images = [f.apply(vec) for vec, _ in src.generators]
    nrows = [[images[t][i] for t in range(g)]
             for i in range(f.target.ambient)]
    if not rat_nullspace(nrows):
        return FracGroup(src.ambient, (), base)
    int_rows = []
    for row in nrows:
        den = 1
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
        int_rows.append([int(x * den) for x in row])
    lat_idx = [t for t, (_, flag) in enumerate(src.generators)
               if flag == LATTICE]
    lat_set = set(lat_idx)
    pinned = [list(r) for r in int_rows]
    for t in lat_idx:
        pinned.append([int(i == t) for i in range(g)])
    div_coeffs = int_kernel(IntMatrix(pinned))
    history = []
    stable = None
    for k in range(cap):
        scale = base ** k
        a_k = IntMatrix([[row[t] * scale if t in lat_set else row[t]
                          for t in range(g)] for row in int_rows])
        coeffs = int_kernel(a_k)
        proj = [tuple(c[t] for t in lat_idx) for c in coeffs]
        live = [v for v in proj if any(v)]
        shadow = lattice_basis(live) if live else ()
        history.append(shadow)
        if len(history) >= window and all(h == shadow
                                          for h in history[-window:]):
            stable = (k, coeffs, shadow)
            break
    if stable is None:
        raise StabilizationError(
            "kernel lattice did not stabilize within %d levels" % cap)
    k, coeffs, shadow = stable
    lifts = []
    if shadow:
        pmat = IntMatrix([[c[t] for c in coeffs] for t in lat_idx])
        for y in shadow:
            combo = int_solve(pmat, list(y))
            assert combo is not None
            lift = [Fraction(0)] * g
            for w, c in zip(combo, coeffs):
                for t in range(g):
                    lift[t] += w * c[t]
            for t in range(g):
                if t not in lat_set:
                    lift[t] = Fraction(lift[t], base ** k)
            lifts.append(tuple(lift))
    vectors = [vec for vec, _ in src.generators]

    def to_ambient(c):
        return tuple(sum(Fraction(c[t]) * vectors[t][i] for t in range(g))
                     for i in range(src.ambient))

    gens = [(to_ambient(c), DIVISIBLE) for c in div_coeffs]
    gens.extend((to_ambient(c), LATTICE) for c in lifts)
    return FracGroup(src.ambient, gens, base)


CokernelReport = collections.namedtuple(
    "CokernelReport",
    ["divisible_rank", "free_rank", "torsion", "qprimary_rank"])
# divisible_rank : number of Z[1/base] summands
# free_rank      : number of plain Z summands
# torsion        : invariant factors of the finite torsion part
# qprimary_rank  : number of summands divisible by every power of the base
#                  but torsion, one per direction whose finite-level torsion
#                  grows by the base forever


def _lattice_intersection(gens_a, gens_b, dim):
    """Canonical basis of the intersection of two integer spans."""
    if not gens_a or not gens_b:
        return ()
    cols = [list(v) for v in gens_a] + [[-x for x in v] for v in gens_b]
    stack = IntMatrix([[cols[t][i] for t in range(len(cols))]
                       for i in range(dim)])
    vecs = []
    for combo in int_kernel(stack):
        v = [sum(combo[t] * gens_a[t][i] for t in range(len(gens_a)))
             for i in range(dim)]
        if any(v):
            vecs.append(tuple(v))
    return lattice_basis(vecs) if vecs else ()


def _saturation_exponent(vectors, base, dim):
    """Base-power exponent that pushes the saturation of an integer span
    back into the span, ignoring index prime to the base."""
    perp = rat_nullspace([list(v) for v in vectors])
    if perp:
        int_perp = []
        for cov in perp:
            den = 1
            for x in cov:
                den = den * x.denominator // math.gcd(den, x.denominator)
            int_perp.append([int(x * den) for x in cov])
        sat = int_kernel(IntMatrix(int_perp))
    else:
        sat = tuple(tuple(int(i == j) for j in range(dim))
                    for i in range(dim))
    sat_rows = [[s[i] for s in sat] for i in range(dim)]
    coords = []
    for v in vectors:
        c = rat_solve(sat_rows, [Fraction(x) for x in v])
        assert c is not None
        coords.append([int(x) for x in c])
    _, s, _ = snf(IntMatrix([[coords[t][i] for t in range(len(vectors))]
                             for i in range(len(sat))]))
    top = 0
    for i in range(min(len(sat), len(vectors))):
        if s[i, i] != 0:
            top = s[i, i]
    if top == 0:
        return 0
    e = 0
    rest = top
    while True:
        g = math.gcd(rest, base)
        if g == 1:
            return e
        rest //= g
        e += 1


def _split_record(factors, base):
    """Group torsion factors by their part prime to the base."""
    by_key = {}
    for d in factors:
        key, part = _strip_base(d, base)
        by_key.setdefault(key, []).append(part)
    for lst in by_key.values():
        lst.sort()
    return by_key


def _match_growth(recs, base):
    """Match torsion factors across a window of consecutive levels.

    Returns (final factors, growing count) when every consecutive pair of
    records splits each coprime-part class into a frozen prefix and a
    suffix multiplied by exactly the base; None while the window is still
    ambiguous.  Growing slots survive only through their part prime to the
    base.
    """
    if any(len(r) != len(recs[0]) for r in recs):
        return None
    keyed = [_split_record(r, base) for r in recs]
    if any(set(kd) != set(keyed[0]) for kd in keyed):
        return None
    frozen = []
    growing = 0
    for key in keyed[0]:
        lists = [kd[key] for kd in keyed]
        size = len(lists[0])
        if any(len(l) != size for l in lists):
            return None
        split = None
        for s in range(size + 1):
            ok = True
            for before, after in zip(lists, lists[1:]):
                for i in range(s):
                    ok = ok and after[i] == before[i]
                for i in range(s, size):
                    ok = ok and after[i] == before[i] * base
            if ok:
                split = s
                break
        if split is None:
            return None
        for i in range(split):
            frozen.append(key * lists[-1][i])
        growing += size - split
        if key > 1:
            frozen.extend([key] * (size - split))
    return tuple(f for f in frozen if f > 1), growing


def _invariant_factors(values):
    """Canonical divisibility chain with the given primary parts."""
    primary = {}
    for val in values:
        v = val
        p = 2
        while p * p <= v:
            if v % p == 0:
                e = 0
                while v % p == 0:
                    v //= p
                    e += 1
                primary.setdefault(p, []).append(e)
            p += 1
        if v > 1:
            primary.setdefault(v, []).append(1)
    if not primary:
        return ()
    depth = max(len(es) for es in primary.values())
    chain = [1] * depth
    for p, es in primary.items():
        padded = [0] * (depth - len(es)) + sorted(es)
        for i in range(depth):
            chain[i] *= p ** padded[i]
    return tuple(d for d in chain if d > 1)


def cokernel(f, window=DEFAULT_WINDOW, cap=LEVEL_CAP):
    """Cokernel of a hom, reported up to isomorphism as a CokernelReport.

    The free ranks come from two exact computations: Smith invariants after
    inverting the base split off the total torsion-free rank and the
    torsion prime to the base, and integer covectors on the lattice
    directions count the plain Z summands.  The torsion and the base-primary
    divisible part come from quotients at successive divisibility levels;
    a window of consecutive levels must agree on which invariant factors are
    frozen and which grow by exactly the base per level.
    """
    tgt = f.target
    base = tgt.base
    m = len(tgt.generators)
    if m == 0:
        return CokernelReport(0, 0, (), 0)
    lat_t = [i for i, (_, fl) in enumerate(tgt.generators) if fl == LATTICE]
    div_t = [i for i, (_, fl) in enumerate(tgt.generators) if fl == DIVISIBLE]
    images = []
    for vec, flag in f.source.generators:
        coords = tgt.coordinates(f.apply(vec))
        assert coords is not None
        images.append((coords, flag))
    if not images:
        return CokernelReport(len(div_t), len(lat_t), (), 0)
    g = len(images)
    scaled_cols = [_base_scaled(coords, base) for coords, _ in images]
    _, s1, _ = snf(IntMatrix([[scaled_cols[t][i] for t in range(g)]
                              for i in range(m)]))
    loc_factors = [s1[i, i] for i in range(min(m, g)) if s1[i, i] != 0]
    tf_total = m - len(loc_factors)
    prime_torsion = sorted(d for d in
                           (_strip_base(x, base)[0] for x in loc_factors)
                           if d > 1)
    if lat_t:
        lat_rows = [[images[t][0][i] for t in range(g)] for i in lat_t]
        rank_lat = g - len(rat_nullspace(lat_rows))
        free_rank = len(lat_t) - rank_lat
    else:
        free_rank = 0
    div_rank = tf_total - free_rank
    assert div_rank >= 0
    lam_a = [coords for coords, flag in images
             if flag == LATTICE and any(coords)]
    lam_b = [_base_scaled(coords, base) for coords, flag in images
             if flag == DIVISIBLE and any(coords)]
    e_a = 0
    for coords in lam_a:
        for x in coords:
            ex = _base_exponent(x, base)
            assert ex is not None
            e_a = max(e_a, ex)
    e_sat = _saturation_exponent(lam_b, base, m) if lam_b else 0
    lat_set = set(lat_t)
    records = []
    matched = None
    for k in range(cap):
        l_star = max(k, e_a) + e_sat
        scale_lat = base ** l_star
        scale_div = base ** (l_star - k)
        sgens = []
        for coords in lam_a:
            vec = []
            for x in coords:
                w = Fraction(x) * scale_lat
                assert w.denominator == 1
                vec.append(int(w))
            sgens.append(vec)
        sgens.extend(list(v) for v in lam_b)
        dgens = []
        for i in lat_t:
            dgens.append([scale_lat * int(i == j) for j in range(m)])
        for i in div_t:
            dgens.append([scale_div * int(i == j) for j in range(m)])
        cols = []
        for w in _lattice_intersection(sgens, dgens, m):
            y = [_exact_div(w[i], scale_lat if i in lat_set else scale_div)
                 for i in range(m)]
            cols.append(y)
        if cols:
            _, sk, _ = snf(IntMatrix([[cols[t][i] for t in range(len(cols))]
                                      for i in range(m)]))
            invs = [sk[i, i] for i in range(min(m, len(cols)))
                    if sk[i, i] != 0]
        else:
            invs = []
        assert m - len(invs) == tf_total
        records.append(tuple(d for d in invs if d != 1))
        if len(records) >= window:
            matched = _match_growth(records[-window:], base)
            if matched is not None:
                break
    if matched is None:
        raise StabilizationError(
            "cokernel torsion did not stabilize within %d levels" % cap)
    final_factors, qprimary = matched
    check = sorted(d for d in
                   (_strip_base(x, base)[0] for x in final_factors)
                   if d > 1)
    assert check == prime_torsion
    return CokernelReport(div_rank, free_rank,
                          _invariant_factors(final_factors), qprimary)
