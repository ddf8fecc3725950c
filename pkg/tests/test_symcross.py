"""Identity-level tests for the symbolic crossed-product calculus.

Hand-checked oracles first (cosets, canonical forms, named elements),
then the algebraic identity suites, then randomized structure tests.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffkt.errors import PrecisionError
from ffkt.exactla import CycNumber
from ffkt.ffield import make_field
from ffkt.funcfield import Poly, RationalFunction, irreducibles_normalized
from ffkt.symcross import (CrossedElement, CylFunction, CylinderSet,
                           affine_coset, build_named, char_corner_projection,
                           char_projection, char_twist_unitary, check_identity,
                           corner_scaling_unitary, digit_character_sum,
                           identity_checks, level_projection, scaling_element,
                           translation_element, unit_element)

F2 = make_field(2)
F3 = make_field(3)
F4 = make_field(2, 2)
F5 = make_field(5)
FIELDS = (F2, F3, F4, F5)


def rf(field, num, den=(1,)):
    return RationalFunction(Poly.from_ints(field, num),
                            Poly.from_ints(field, den))


def cyc(field, value):
    return CycNumber.from_rational(field.order - 1, Fraction(value))


def ball(field, level):
    return CylinderSet.ball(field, level)


def digit(field, b):
    return CylinderSet.digit_coset(field, field.decode(b) if isinstance(b, int) else b)


class TestCylinderSet:
    def test_zero_digits_dropped(self):
        c = CylinderSet(F3, 2, ((1, F3.zero), (0, F3.decode(2))))
        assert c.center == ((0, F3.decode(2)),)

    def test_digit_at_level_rejected(self):
        with pytest.raises(ValueError):
            CylinderSet(F3, 1, ((1, F3.one),))

    def test_duplicate_degree_rejected(self):
        with pytest.raises(ValueError):
            CylinderSet(F3, 2, ((0, F3.one), (0, F3.decode(2))))

    def test_zero_digit_coset_is_the_ball(self):
        assert CylinderSet.digit_coset(F3, F3.zero) == ball(F3, 1)

    def test_containment(self):
        assert ball(F3, 0).contains(ball(F3, 2))
        assert ball(F3, 0).contains(digit(F3, 2))
        assert not digit(F3, 1).contains(digit(F3, 2))
        assert not ball(F3, 2).contains(ball(F3, 0))

    def test_meet(self):
        assert ball(F3, 0).meet(ball(F3, 3)) == ball(F3, 3)
        assert digit(F3, 1).meet(digit(F3, 2)) is None
        deep = CylinderSet(F3, 2, ((0, F3.one), (1, F3.one)))
        assert digit(F3, 1).meet(deep) == deep

    def test_truncate_refuses_refinement(self):
        with pytest.raises(ValueError):
            ball(F3, 0).truncate(1)


class TestAffineCoset:
    def test_translation_by_one(self):
        image = affine_coset(ball(F3, 1), rf(F3, (1,)), rf(F3, (1,)))
        assert image == digit(F3, 1)

    def test_monomial_scaling(self):
        image = affine_coset(ball(F3, 2), rf(F3, (0,)), rf(F3, (0, 1)))
        assert image == ball(F3, 3)

    def test_unit_multiplier_fixes_the_ball(self):
        image = affine_coset(ball(F3, 0), rf(F3, (0,)), rf(F3, (1,), (1, 1)))
        assert image == ball(F3, 0)

    def test_unit_multiplier_with_denominator_on_digit_coset(self):
        image = affine_coset(digit(F3, 1), rf(F3, (0,)), rf(F3, (1,), (1, 1)))
        assert image == digit(F3, 1)

    def test_irreducibles_fix_digit_cosets(self):
        for field in FIELDS:
            for poly in irreducibles_normalized(field, 5):
                mult = RationalFunction(poly)
                for b in field.units:
                    coset = CylinderSet.digit_coset(field, b)
                    assert affine_coset(coset, rf(field, (0,)), mult) == coset

    def test_pole_translation_deepens_the_center(self):
        image = affine_coset(digit(F3, 2), rf(F3, (1,), (0, 1)), rf(F3, (1,)))
        assert image == CylinderSet(F3, 1, ((-1, F3.one), (0, F3.decode(2))))

    def test_level_overflow_raises(self):
        with pytest.raises(PrecisionError):
            affine_coset(ball(F3, 8), rf(F3, (0,)), rf(F3, (0, 1)))
        with pytest.raises(PrecisionError):
            affine_coset(ball(F3, -8), rf(F3, (0,)), rf(F3, (1,), (0, 1)))


class TestCanonicalForm:
    def test_digit_cosets_merge_to_the_parent(self):
        f = CylFunction(F3, 0, {CylinderSet.digit_coset(F3, b): 1
                                for b in F3.elements})
        assert f == CylFunction(F3, 0, {ball(F3, 0): 1})
        assert set(f.items) == {ball(F3, 0)}

    def test_nested_sum_splits_into_disjoint_cells(self):
        f = CylFunction(F3, 0, {ball(F3, 0): 1, ball(F3, 1): 1})
        assert f.items[ball(F3, 1)] == cyc(F3, 2)
        assert f.items[digit(F3, 1)] == cyc(F3, 1)
        assert f.items[digit(F3, 2)] == cyc(F3, 1)
        assert len(f.items) == 3

    def test_difference_leaves_the_complement(self):
        f = (CylFunction(F3, 0, {ball(F3, 0): 1})
             - CylFunction(F3, 0, {digit(F3, 1): 1}))
        assert f == CylFunction(F3, 0, {ball(F3, 1): 1, digit(F3, 2): 1})

    def test_two_level_grid_merges_to_the_ball(self):
        cells = {}
        for b0 in F3.elements:
            for b1 in F3.elements:
                cells[ball(F3, 0).child(b0).child(b1)] = 1
        assert CylFunction(F3, 0, cells) == CylFunction(F3, 0, {ball(F3, 0): 1})

    def test_cancellation_is_exact(self):
        f = CylFunction(F3, 0, {ball(F3, 0): 1})
        g = CylFunction(F3, 0, {CylinderSet.digit_coset(F3, b): 1
                                for b in F3.elements})
        assert (f - g).is_zero()

    def test_constant_does_not_merge_with_indicators(self):
        f = CylFunction(F3, 1)
        g = CylFunction(F3, 0, {ball(F3, 0): 1})
        assert f != g
        assert f * g == g


class TestElementaryProducts:
    def test_ball_products_take_the_deeper_level(self):
        for n, m in ((0, 0), (-2, 1), (1, 3), (2, 0)):
            lhs = level_projection(F3, n) * level_projection(F3, m)
            assert lhs == level_projection(F3, max(n, m))

    def test_group_law_on_labels(self):
        a, b = rf(F3, (0, 1)), rf(F3, (2,))
        c, d = rf(F3, (1,), (0, 1)), rf(F3, (1, 1))
        lhs = (translation_element(F3, a) * scaling_element(F3, b)
               * translation_element(F3, c) * scaling_element(F3, d))
        rhs = (translation_element(F3, a + b * c)
               * scaling_element(F3, b * d))
        assert lhs == rhs

    def test_unit_is_the_identity(self):
        one = unit_element(F3)
        for x in (char_twist_unitary(F3, 1), level_projection(F3, 2),
                  char_projection(F3, 1),
                  translation_element(F3, rf(F3, (0, 1)))):
            assert one * x == x
            assert x * one == x

    def test_unit_differs_from_the_ball_indicator(self):
        assert unit_element(F3) != level_projection(F3, 0)
        assert char_projection(F3, 1) != char_corner_projection(F3, 1)

    def test_char_projections_are_orthogonal(self):
        for field in (F3, F4, F5):
            projections = [char_projection(field, j)
                           for j in range(field.order - 1)]
            for i, p in enumerate(projections):
                for j, r in enumerate(projections):
                    expected = p if i == j else CrossedElement.zero(field)
                    assert p * r == expected

    def test_char_projections_resolve_the_unit(self):
        for field in (F2, F3, F4):
            total = CrossedElement.zero(field)
            for j in range(field.order - 1):
                total = total + char_projection(field, j)
            assert total == unit_element(field)

    def test_corner_projections_resolve_the_ball(self):
        for field in (F3, F4):
            total = CrossedElement.zero(field)
            for j in range(field.order - 1):
                total = total + char_corner_projection(field, j)
            assert total == level_projection(field, 0)

    def test_digit_character_sum_hand_values(self):
        x = digit_character_sum(F3, 1)
        func = x.terms[(rf(F3, (0,)), rf(F3, (1,)))]
        assert func.items[digit(F3, 1)] == cyc(F3, 1)
        assert func.items[digit(F3, 2)] == cyc(F3, -1)
        y = digit_character_sum(F4, 1)
        func = y.terms[(RationalFunction.zero(F4), RationalFunction.one(F4))]
        zeta = CycNumber.zeta(3)
        gen = F4.generator
        assert func.items[CylinderSet.digit_coset(F4, gen)] == zeta
        assert func.items[CylinderSet.digit_coset(F4, F4.mul(gen, gen))] == zeta * zeta


class TestStar:
    def test_projections_are_self_adjoint(self):
        for n in (-1, 0, 2):
            p = level_projection(F3, n)
            assert p.star() == p
        for field in (F2, F3, F4):
            for j in range(field.order - 1):
                assert char_projection(field, j).star() == char_projection(field, j)
                corner = char_corner_projection(field, j)
                assert corner.star() == corner

    def test_translation_adjoint_negates(self):
        a = rf(F3, (0, 2))
        assert translation_element(F3, a).star() == translation_element(F3, -a)

    def test_scaling_adjoint_inverts(self):
        b = rf(F3, (0, 1))
        assert scaling_element(F3, b).star() == scaling_element(F3, b.inverse())


class TestMu:
    def test_shifts_level_projections(self):
        t = rf(F3, (0, 1))
        for n in (-2, 0, 3):
            assert level_projection(F3, n).mu(t) == level_projection(F3, n + 1)

    def test_sends_corner_to_level_one(self):
        t = rf(F4, (0, 1))
        for j in range(3):
            lhs = char_corner_projection(F4, j).mu(t)
            rhs = level_projection(F4, 1) * char_projection(F4, j)
            assert lhs == rhs

    def test_transports_labels(self):
        a, b = rf(F3, (1, 1)), rf(F3, (2,))
        d = rf(F3, (1, 1, 1))
        x = translation_element(F3, a) * scaling_element(F3, b)
        assert x.mu(d) == (translation_element(F3, d * a)
                           * scaling_element(F3, b))

    def test_fixes_the_unit(self):
        one = unit_element(F3)
        assert one.mu(rf(F3, (1, 2))) == one

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            unit_element(F3).mu(rf(F3, (0,)))


class TestTwistUnitary:
    @pytest.mark.parametrize("field", (F3, F4, F5), ids=("q3", "q4", "q5"))
    def test_unitary(self, field):
        one = unit_element(field)
        for j in range(1, field.order - 1):
            w = char_twist_unitary(field, j)
            assert w.star() * w == one
            assert w * w.star() == one

    def test_label_support_q3(self):
        w = char_twist_unitary(F3, 1)
        zero = RationalFunction.zero(F3)
        expected = {(zero, rf(F3, scalars)) for scalars in ((1,), (2,))}
        expected |= {(zero, rf(F3, (0, c))) for c in (1, 2)}
        expected |= {(zero, rf(F3, (c,), (0, 1))) for c in (1, 2)}
        assert set(w.terms) == expected

    def test_trivial_character_rejected(self):
        with pytest.raises(ValueError):
            char_twist_unitary(F3, 0)
        with pytest.raises(ValueError):
            char_twist_unitary(F2, 1)


class TestScalingInvariance:
    @pytest.mark.parametrize("field", (F2, F3, F4), ids=("q2", "q3", "q4"))
    def test_first_five_irreducibles_fix_named_elements(self, field):
        twists = [char_twist_unitary(field, j)
                  for j in range(1, field.order - 1)]
        corners = [char_corner_projection(field, j)
                   for j in range(field.order - 1)]
        sums = [digit_character_sum(field, j)
                for j in range(field.order - 1)]
        for poly in irreducibles_normalized(field, 5):
            d = RationalFunction(poly)
            for corner in corners:
                assert corner.mu(d) == corner
            for x in sums:
                assert x.mu(d) == x
            for w in twists:
                assert w.mu(d) == w

    def test_corner_scaling_unitary(self):
        for field in (F3, F4):
            one = unit_element(field)
            for poly in irreducibles_normalized(field, 3):
                d = RationalFunction(poly)
                for j in range(1, field.order - 1):
                    u = corner_scaling_unitary(field, j, d)
                    assert u.star() * u == one
                    assert u * u.star() == one


class TestRangePartition:
    @pytest.mark.parametrize("field", FIELDS, ids=("q2", "q3", "q4", "q5"))
    def test_shifted_ranges_partition_the_ball(self, field):
        t = RationalFunction.variable(field)
        target = level_projection(field, 0)
        total = CrossedElement.zero(field)
        for a in field.elements:
            iso = translation_element(field, a) * scaling_element(field, t)
            total = total + iso * target * iso.star()
        assert total == target


class TestIntertwining:
    @pytest.mark.parametrize("field", (F3, F4), ids=("q3", "q4"))
    def test_char_projection_moves_through_character_sums(self, field):
        for jpsi in range(field.order - 1):
            x = digit_character_sum(field, jpsi)
            for jchi in range(field.order - 1):
                jtarget = (jchi - jpsi) % (field.order - 1)
                lhs = char_projection(field, jchi) * x
                rhs = x * char_projection(field, jtarget)
                assert lhs == rhs

    def test_partial_isometry_relations_q3(self):
        field = F3
        for n in (0, 1):
            annulus = (level_projection(field, n)
                       - level_projection(field, n + 1))
            inner = level_projection(field, n + 1)
            for jpsi in range(2):
                shifted = CrossedElement.zero(field)
                for b in field.units:
                    move = RationalFunction(Poly.t_power(field, n) * b)
                    v = translation_element(field, move)
                    shifted = shifted + (v * inner * v.star()).scale(
                        field.char_value(jpsi, b))
                for jchi in range(2):
                    jtarget = (jchi - jpsi) % 2
                    p = char_projection(field, jchi)
                    p_target = char_projection(field, jtarget)
                    assert p * shifted == shifted * p_target
                    s = p * shifted
                    assert s * s.star() == annulus * p
                    assert s.star() * s == annulus * p_target


class TestPrecision:
    def test_level_projection_guard(self):
        with pytest.raises(PrecisionError):
            level_projection(F3, 9)
        assert level_projection(F3, 8).precision == 8

    def test_mu_overflow(self):
        deep = level_projection(F3, 8)
        with pytest.raises(PrecisionError):
            deep.mu(rf(F3, (0, 1)))

    def test_product_overflow(self):
        t = scaling_element(F3, rf(F3, (0, 1)))
        x = level_projection(F3, 8)
        with pytest.raises(PrecisionError):
            t * x

    def test_labels_alone_do_not_overflow(self):
        spike = translation_element(F3, rf(F3, (1,), (0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1)))
        assert (spike * spike.star()) == unit_element(F3)


class TestCheckIdentity:
    def test_reflexive(self):
        w = char_twist_unitary(F3, 1)
        assert check_identity(w, w) == (True, None)

    def test_failure_names_a_term(self):
        ok, detail = check_identity(level_projection(F3, 0), unit_element(F3))
        assert not ok
        assert "differs" in detail


class TestBuildNamed:
    def test_dispatch(self):
        assert build_named(F3, "unit") == unit_element(F3)
        assert build_named(F3, "level_projection", n=0) == level_projection(F3, 0)
        assert build_named(F3, "char_twist_unitary", j=1) == char_twist_unitary(F3, 1)
        d = rf(F3, (1, 1))
        assert (build_named(F3, "corner_scaling_unitary", j=1, d=d)
                == corner_scaling_unitary(F3, 1, d))

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            build_named(F3, "mystery")


AFFINE_POOL = (
    (rf(F3, (0,)), rf(F3, (1,))),
    (rf(F3, (1,)), rf(F3, (2,))),
    (rf(F3, (0, 1)), rf(F3, (1, 1))),
    (rf(F3, (0,)), rf(F3, (0, 1))),
    (rf(F3, (2,)), rf(F3, (1,), (0, 1))),
)


@st.composite
def cosets(draw):
    level = draw(st.integers(-2, 2))
    degrees = draw(st.lists(st.integers(level - 3, level - 1),
                            max_size=2, unique=True))
    center = tuple((d, draw(st.sampled_from(F3.units))) for d in degrees)
    return CylinderSet(F3, level, center)


@st.composite
def cylfunctions(draw):
    constant = draw(st.integers(-2, 2))
    items = {}
    for _ in range(draw(st.integers(0, 3))):
        items[draw(cosets())] = draw(st.integers(-3, 3))
    return CylFunction(F3, constant, items)


class TestFunctionAlgebra:
    @given(cylfunctions(), cylfunctions(), cylfunctions())
    def test_pointwise_ring_axioms(self, f, g, h):
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h

    @given(cylfunctions(), cylfunctions())
    def test_conjugation_is_a_ring_map(self, f, g):
        assert (f * g).conjugate() == f.conjugate() * g.conjugate()
        assert (f + g).conjugate() == f.conjugate() + g.conjugate()
        assert f.conjugate().conjugate() == f

    @given(cylfunctions())
    def test_refining_items_is_invisible(self, f):
        refined = {}
        for coset, coeff in f.items.items():
            for b in F3.elements:
                refined[coset.child(b)] = coeff
        assert CylFunction(F3, f.constant, refined) == f

    @given(cylfunctions(), st.sampled_from(AFFINE_POOL),
           st.sampled_from(AFFINE_POOL))
    def test_transport_composes(self, f, first, second):
        a1, b1 = first
        a2, b2 = second
        chained = f.transport(a1, b1).transport(a2, b2)
        assert chained == f.transport(a2 + b2 * a1, b2 * b1)

    @given(cylfunctions(), cylfunctions(), st.sampled_from(AFFINE_POOL))
    def test_transport_is_multiplicative(self, f, g, affine):
        a, b = affine
        lhs = (f * g).transport(a, b)
        assert lhs == f.transport(a, b) * g.transport(a, b)


def _random_coset(rng, field):
    level = rng.randint(-2, 2)
    degrees = rng.sample(range(level - 3, level), rng.randint(0, 2))
    return CylinderSet(field, level,
                       tuple((d, rng.choice(field.units)) for d in degrees))


def _random_function(rng, field):
    coeffs = [cyc(field, 1), cyc(field, -1), cyc(field, 2),
              CycNumber.zeta(field.order - 1, 1)]
    items = {_random_coset(rng, field): rng.choice(coeffs)
             for _ in range(rng.randint(0, 2))}
    return CylFunction(field, rng.choice((0, 0, 1, -1)), items)


def _label_pool(field):
    t = RationalFunction.variable(field)
    one = RationalFunction.one(field)
    zero = RationalFunction.zero(field)
    unit = RationalFunction.constant(field, field.units[-1])
    return ((zero, one), (one, unit), (t, one + t),
            (zero, t), (zero, t.inverse()))


def _random_element(rng, field):
    pool = _label_pool(field)
    terms = {}
    for _ in range(rng.randint(1, 2)):
        a, b = rng.choice(pool)
        key = (a, b)
        func = _random_function(rng, field)
        terms[key] = terms[key] + func if key in terms else func
    return CrossedElement(field, terms)


class TestRandomizedStructure:
    def test_mul_associative_on_100_triples(self):
        rng = random.Random(20260819)
        for _ in range(100):
            field = rng.choice((F3, F4))
            x, y, z = (_random_element(rng, field) for _ in range(3))
            assert (x * y) * z == x * (y * z)

    def test_star_is_an_antihomomorphism(self):
        rng = random.Random(8191)
        for _ in range(100):
            field = rng.choice((F3, F4))
            x, y = _random_element(rng, field), _random_element(rng, field)
            assert (x * y).star() == y.star() * x.star()
            assert x.star().star() == x

    def test_mul_distributes_over_add(self):
        rng = random.Random(65537)
        for _ in range(60):
            field = rng.choice((F3, F4))
            x, y, z = (_random_element(rng, field) for _ in range(3))
            assert x * (y + z) == x * y + x * z

    def test_mu_is_multiplicative_in_the_multiplier(self):
        rng = random.Random(4099)
        multipliers = [rf(F3, (1, 1)), rf(F3, (2,)), rf(F3, (0, 1)),
                       rf(F3, (1, 0, 1))]
        for _ in range(50):
            x = _random_element(rng, F3)
            d1, d2 = rng.choice(multipliers), rng.choice(multipliers)
            assert x.mu(d1).mu(d2) == x.mu(d1 * d2)

    def test_mu_agrees_with_conjugation_by_the_scaling_unitary(self):
        rng = random.Random(911)
        multipliers = [rf(F4, (1, 1)), rf(F4, (0, 1)), rf(F4, (1, 1, 1))]
        for _ in range(50):
            x = _random_element(rng, F4)
            d = rng.choice(multipliers)
            t = scaling_element(F4, d)
            assert x.mu(d) == t * x * t.star()

    def test_mu_is_a_homomorphism(self):
        rng = random.Random(271828)
        d = rf(F3, (1, 2))
        for _ in range(50):
            x, y = _random_element(rng, F3), _random_element(rng, F3)
            assert (x * y).mu(d) == x.mu(d) * y.mu(d)
            assert (x + y).mu(d) == x.mu(d) + y.mu(d)


class TestIdentitySuite:
    @pytest.mark.parametrize("field", (F2, F3), ids=("q2", "q3"))
    def test_all_rows_pass(self, field):
        rows = identity_checks(field, 8)
        failures = [name for name, ok, _ in rows if not ok]
        assert failures == []
        assert len(rows) > 20

    def test_negative_control_fails_exactly_once(self):
        rows = identity_checks(F3, 8, negative_control=True)
        failures = [name for name, ok, _ in rows if not ok]
        assert failures == ["corrupted twist unitary (control)"]
        rows = identity_checks(F2, 8, negative_control=True)
        failures = [name for name, ok, _ in rows if not ok]
        assert failures == ["corrupted projection (control)"]
