"""Adele point arithmetic, norm, Haar volume and sampler tests.

Expected values below are frozen from hand computation: the constraint
exponents alpha_p = [[log_p r]] come straight from the bracket definition,
volumes from the literal phi product, and sampler laws from the exact
conditional probabilities they must realize.
"""
import math
from fractions import Fraction as F

import pytest

from adelic import adele as ad
from adelic import IndeterminateCancellation, is_prime_power, phi, prev_pp
from adelic.adele import (
    AdelePoint,
    PAdicComponent,
    RandomTail,
    ZeroTail,
    add,
    ball,
    ball_exponents,
    component_from_rational,
    component_from_residue,
    distance,
    format_point,
    haar_volume,
    negate,
    norm,
    parse_point,
    sample_uniform,
    sphere,
    sub,
)
from adelic.util import derive_rng

# ---- frozen expected values ----
DIST_DISJOINT_HALVES = F(3)       # ||(1/2 at 2) - (1/3 at 3)|| = max(2, 3)
NORM_UNIT_AT_3 = F(1, 3)          # integral point, unit 3-component
VOL_BALL_8 = F(840)               # 8 * 3 * 5 * 7
VOL_SPHERE_8 = F(420)             # 840 - 4*3*5*7
VOL_BALL_QUARTER = F(1, 6)
VOL_SPHERE_HALF = F(1, 2)         # 1 - 1/2
ALPHAS_8 = {2: 3, 3: 1, 5: 1, 7: 1}
ALPHAS_FIFTH = {2: -2, 3: -1}     # alpha_5(1/5) = [[-1]] = 0, so absent
# ball of radius 3: P(norm=3) = 2/3, P(norm=2) = 1/6, P(norm<=1/2) = 1/6
BALL3_LAW = {F(3): F(2, 3), F(2): F(1, 6)}

SPHERE_RADII = [
    F(2), F(3), F(4), F(5), F(7), F(8), F(9), F(16), F(25), F(27),
    F(1, 2), F(1, 3), F(1, 4), F(1, 5), F(1, 7), F(1, 8), F(1, 9),
    F(1, 16), F(1, 25), F(1, 32),
]


def primes_upto(n):
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i in range(2, n + 1) if sieve[i]]


def alpha_oracle(r, prime_bound=200):
    """Nonzero [[log_p r]] per definition, independent of the library."""
    r = F(r)
    out = {}
    for p in primes_upto(prime_bound):
        if r >= 1:
            a = 0
            while F(p) ** (a + 1) <= r:
                a += 1
        else:
            a = 0
            while F(p) ** a > r:
                a -= 1
            a += 1
        if a:
            out[p] = a
    return out


def pt(values, depth=16):
    return AdelePoint.from_components(
        {p: F(v) for p, v in values.items()}, depth
    )


# --------------------------------------------------------------------------


class TestComponents:
    def test_from_rational_exact(self):
        c = component_from_rational(2, F(1, 2))
        assert (c.p, c.valuation, c.digits, c.known_to) == (2, -1, (1,), None)
        assert c.value_fraction() == F(1, 2)
        c = component_from_rational(5, F(75))
        assert (c.valuation, c.digits) == (2, (3,))
        assert c.value_fraction() == 75

    def test_from_rational_inexact(self):
        c = component_from_rational(2, F(1, 3))
        assert c.valuation == 0 and not c.exact and c.known_to == 16
        # 3 * residue == 1 mod 2^16
        assert 3 * c.residue() % 2 ** 16 == 1
        c = component_from_rational(3, F(-1, 3), depth=4)
        assert c.valuation == -1 and c.known_to == 3
        assert (c.residue() + 1) % 3 ** 4 == 0

    def test_zero_and_partial(self):
        z = component_from_rational(7, F(0))
        assert z.is_zero and z.abs_value() == 0
        u = component_from_residue(2, -1, 0, 16)
        assert u.valuation is None and u.known_to == 15
        assert u.abs_value() is None and u.abs_bound() == F(1, 2 ** 15)

    def test_negate_round_trip(self):
        c = component_from_rational(3, F(7, 5), depth=8)
        n = ad._negate_component(c, 8)
        back = ad._negate_component(n, 8)
        assert (back.valuation, back.digits) == (c.valuation, c.digits)
        assert (c.residue() + n.residue()) % 3 ** 8 == 0

    def test_leading_digit_guard(self):
        with pytest.raises(ValueError):
            PAdicComponent(2, 0, (0, 1), None)


class TestArithmetic:
    def test_distance_disjoint_primes(self):
        x = pt({2: F(1, 2)})
        y = pt({3: F(1, 3)})
        assert distance(x, y) == DIST_DISJOINT_HALVES

    def test_add_halves_gives_unit(self):
        s = add(pt({2: F(1, 2)}), pt({2: F(1, 2)}))
        c = s.component(2)
        assert c.valuation == 0 and c.exact and c.value_fraction() == 1

    def test_cancellation_beyond_depth_raises(self):
        x = pt({2: F(1, 2)})
        with pytest.raises(IndeterminateCancellation):
            add(x, negate(x))
        with pytest.raises(IndeterminateCancellation):
            add(x, pt({2: F(-1, 2)}))

    def test_exact_twins_cancel_to_zero(self):
        x = pt({2: F(1, 2), 5: F(10)})
        y = pt({2: F(1, 2), 5: F(10)})
        d = sub(x, y)
        assert d.is_zero_point()
        assert distance(x, y) == 0

    def test_identical_inexact_prefixes_raise(self):
        c = component_from_residue(2, -1, 54321, 16)
        x = AdelePoint({2: c})
        y = AdelePoint({2: c})
        assert x is not y
        with pytest.raises(IndeterminateCancellation):
            distance(x, y)

    def test_self_distance_is_zero(self):
        x = sample_uniform(ball(8), seed=42)
        assert distance(x, x) == 0

    def test_exact_subtraction_keeps_exactness(self):
        d = sub(pt({3: F(5)}), pt({3: F(2)}))
        assert d.component(3).value_fraction() == 3

    def test_mixed_precision_add(self):
        # exact 1/4 + inexact 1/3 = 7/12 at p=2: valuation -2, and the
        # result is only known to the truncated summand's precision
        s = add(pt({2: F(1, 4)}), pt({2: F(1, 3)}))
        c = s.component(2)
        assert c.valuation == -2 and c.known_to == 14
        # unit part is 7/3: multiplying back by 3 must give 7 mod 2^16
        assert 3 * c.residue() % 2 ** 16 == 7


class TestNorm:
    def test_unit_three_component(self):
        assert norm(pt({3: F(2)})) == NORM_UNIT_AT_3

    def test_sup_branch(self):
        assert norm(pt({2: F(1, 4), 3: F(1, 3)})) == 4
        # 3 is a 2-adic unit: integral point, max |x_p|/p attained at p=2
        assert norm(pt({2: F(3), 3: F(9)})) == F(1, 2)

    def test_zero_point(self):
        assert norm(AdelePoint.zero()) == 0

    def test_integral_tail_scanned(self):
        x = sample_uniform(ball(F(1, 4)), seed=9)
        n = norm(x)
        assert n <= F(1, 4)
        assert n == 0 or is_prime_power(n)

    def test_undetermined_alone_raises(self):
        u = component_from_residue(3, 0, 0, 16)
        with pytest.raises(IndeterminateCancellation):
            norm(AdelePoint({3: u}))

    def test_undetermined_dominated_is_fine(self):
        u = component_from_residue(3, 0, 0, 16)
        c = component_from_rational(2, F(1, 4))
        assert norm(AdelePoint({2: c, 3: u})) == 4

    def test_norm_values_are_prime_powers(self):
        for seed in range(12):
            x = sample_uniform(ball(9), seed=seed)
            n = norm(x)
            assert n == 0 or is_prime_power(n)


class TestUltrametric:
    def test_strong_triangle(self):
        for seed in range(8):
            x = sample_uniform(ball(8), seed=3 * seed)
            y = sample_uniform(ball(8), seed=3 * seed + 1)
            z = sample_uniform(ball(8), seed=3 * seed + 2)
            dxy, dyz, dxz = distance(x, y), distance(y, z), distance(x, z)
            assert dxz <= max(dxy, dyz)
            assert distance(y, x) == dxy

    def test_isosceles(self):
        # unequal legs force the long one to win
        for seed in range(8):
            x = sample_uniform(ball(8), seed=100 + 3 * seed)
            y = sample_uniform(ball(8), seed=101 + 3 * seed)
            z = sample_uniform(ball(8), seed=102 + 3 * seed)
            dxy, dyz, dxz = distance(x, y), distance(y, z), distance(x, z)
            if dxy != dyz:
                assert dxz == max(dxy, dyz)


class TestVolume:
    def test_frozen(self):
        assert haar_volume(ball(8)) == VOL_BALL_8
        assert haar_volume(sphere(8)) == VOL_SPHERE_8
        assert haar_volume(ball(F(1, 4))) == VOL_BALL_QUARTER
        assert haar_volume(sphere(F(1, 2))) == VOL_SPHERE_HALF

    def test_matches_phi(self):
        for r in SPHERE_RADII:
            assert haar_volume(ball(r)) == phi(r)
            assert haar_volume(sphere(r)) == phi(r) - phi(prev_pp(r).value)

    def test_sphere_volumes_telescope(self):
        from adelic import pp_range

        total = sum(haar_volume(sphere(r.value)) for r in pp_range(F(1, 8), 8))
        assert total == phi(8) - phi(F(1, 8))

    def test_radius_must_be_prime_power(self):
        with pytest.raises(ValueError):
            ball(6)
        with pytest.raises(ValueError):
            sphere(F(3, 2))


class TestBallExponents:
    def test_frozen(self):
        assert ball_exponents(8) == ALPHAS_8
        assert ball_exponents(F(1, 5)) == ALPHAS_FIFTH

    def test_oracle(self):
        for r in SPHERE_RADII + [F(50), F(1, 50), F(100)]:
            assert ball_exponents(r) == alpha_oracle(r)

    def test_product_is_phi(self):
        for r in SPHERE_RADII:
            prod = F(1)
            for p, a in ball_exponents(r).items():
                prod *= F(p) ** a
            assert prod == phi(r)

    def test_sphere_is_one_digit_condition(self):
        # exponent vectors of B_r and B_prev(r) differ at exactly one prime,
        # by exactly 1: the sphere is a single leading-digit condition
        for r in SPHERE_RADII:
            hi = ball_exponents(r)
            lo = ball_exponents(prev_pp(r).value)
            diff = {
                p: hi.get(p, 0) - lo.get(p, 0)
                for p in set(hi) | set(lo)
                if hi.get(p, 0) != lo.get(p, 0)
            }
            assert len(diff) == 1
            (p, step), = diff.items()
            assert step == 1
            from adelic.primepow import prime_power_pairs

            assert p == prime_power_pairs(r)[0]


class TestSampler:
    def test_sphere_norm_exact(self):
        for r in SPHERE_RADII:
            for i in range(8):
                x = sample_uniform(sphere(r), seed=hash((r, i)) & 0xFFFF)
                assert norm(x) == r

    def test_ball_norm_bounded(self):
        for r in [F(8), F(1, 3), F(2)]:
            for i in range(20):
                x = sample_uniform(ball(r), seed=i)
                assert norm(x) <= r

    def test_ball3_law(self):
        n = 2500
        rng = derive_rng("ball3-law")
        counts = {F(3): 0, F(2): 0}
        for _ in range(n):
            v = norm(sample_uniform(ball(3), rng=rng))
            if v in counts:
                counts[v] += 1
        for val, prob in BALL3_LAW.items():
            p = float(prob)
            sigma = math.sqrt(p * (1 - p) / n)
            assert abs(counts[val] / n - p) < 3 * sigma, (val, counts)

    def test_sphere_nondefining_component_uniform(self):
        # within the sphere of radius 4 the 3-component is uniform in
        # (1/3) Z_3, so P(|x_3| = 3) = 2/3
        n = 1500
        rng = derive_rng("sphere4-law")
        hits = 0
        for _ in range(n):
            x = sample_uniform(sphere(4), rng=rng)
            c = x.component(3)
            if c.valuation == -1:
                hits += 1
        sigma = math.sqrt((2 / 3) * (1 / 3) / n)
        assert abs(hits / n - 2 / 3) < 3 * sigma

    def test_centered_regions(self):
        center = sample_uniform(ball(2), seed=77)
        for i in range(10):
            x = sample_uniform(ball(F(1, 4), center=center), seed=i)
            assert distance(x, center) <= F(1, 4)
            y = sample_uniform(sphere(F(1, 4), center=center), seed=1000 + i)
            assert distance(y, center) == F(1, 4)

    def test_prime_cutoff(self):
        x = sample_uniform(ball(8), seed=5, prime_cutoff=3)
        assert set(x.explicit) <= {2, 3}
        y = sample_uniform(sphere(25), seed=5, prime_cutoff=3)
        assert 5 in y.explicit  # defining prime always kept

    def test_determinism(self):
        a = sample_uniform(sphere(9), seed=123)
        b = sample_uniform(sphere(9), seed=123)
        assert a == b and a is not b
        c = sample_uniform(sphere(9), seed=124)
        assert a != c

    def test_tail_order_independence(self):
        x = sample_uniform(ball(2), seed=55)
        after = x.component(101)
        x.component(2)
        x.component(997)
        assert x.component(101) == after


class TestTailAlgebra:
    def test_sum_then_subtract_recovers(self):
        x = sample_uniform(ball(8), seed=1)
        y = sample_uniform(ball(8), seed=2)
        w = sub(add(x, y), y)
        for p in (2, 7, 101):
            cx, cw = x.component(p), w.component(p)
            assert cw.valuation == cx.valuation
            assert cw.digits[: len(cw.digits)] == cx.digits[: len(cw.digits)]

    def test_zero_tail_simplification(self):
        x = pt({2: F(1, 2)})
        y = pt({3: F(2)})
        assert isinstance(add(x, y).tail, ZeroTail)
        assert isinstance(negate(x).tail, ZeroTail)

    def test_random_tail_equality(self):
        assert RandomTail(5) == RandomTail(5)
        assert RandomTail(5) != RandomTail(6)


class TestTextFormat:
    def test_frozen_forms(self):
        assert format_point(pt({2: F(1, 2), 5: F(3)})) == "2:-1:1;5:0:3"
        assert format_point(AdelePoint.zero()) == "0"

    def test_round_trip(self):
        pts = [
            pt({2: F(1, 2), 5: F(3)}),
            pt({3: F(9, 1)}),
            AdelePoint.zero(),
            AdelePoint({7: component_from_rational(7, F(0))}),
            AdelePoint({2: component_from_residue(2, 0, 0, 16)}),
        ]
        for x in pts:
            assert parse_point(format_point(x)) == x

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_point("4:0:1")  # not prime
        with pytest.raises(ValueError):
            parse_point("3:0:5")  # digit out of range
        with pytest.raises(ValueError):
            parse_point("3:0:")  # no digits

    def test_sampled_digits_survive(self):
        x = sample_uniform(sphere(9), seed=8)
        y = parse_point(format_point(x))
        for p in x.explicit:
            assert y.component(p).digits == x.component(p).digits
            assert y.component(p).valuation == x.component(p).valuation
