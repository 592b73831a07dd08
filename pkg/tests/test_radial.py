"""Radial step algebra and exact Fourier transform tests.

The transform of a ball indicator is known in closed form, so the frozen
cases below are hand computations. The oracle re-evaluates transforms via
the radial sum formula sum_{q < 1/s} phi(q) (f(q) - f(next q)), which is an
independent code path from the ball-coefficient map the library uses.
"""
import math
import random
from fractions import Fraction as F

import pytest

from adelic import phi, pp_range, prev_pp
from adelic.radial import RadialStep, ft_ball_eval, integrate_radial

# ---- frozen expected values ----
FT_BALL_HALF = {F(1, 2): F(1)}          # self-dual
FT_BALL_2 = {F(1, 3): F(2)}             # phi(2) on B(prev(1/2))
FT_SPHERE_2 = {F(1, 3): F(2), F(1, 2): F(-1)}
INT_BALL_8 = F(840)

POOL = [
    F(1, 9), F(1, 8), F(1, 7), F(1, 5), F(1, 4), F(1, 3), F(1, 2),
    F(2), F(3), F(4), F(5), F(7), F(8), F(9), F(16),
]


def random_step(rng):
    radii = rng.sample(POOL, rng.randint(1, 5))
    coeffs = {}
    for r in radii:
        c = F(rng.randint(-9, 9), rng.randint(1, 7))
        if c:
            coeffs[r] = c
    return RadialStep(coeffs)


def ft_oracle_value(f: RadialStep, s):
    """Literal sum formula; the value differences f(q) - f(next q) are the
    ball coefficients, nonzero at finitely many prime powers."""
    s = F(s)
    total = F(0)
    for q, c in f.coeffs.items():
        if s == 0 or q < 1 / s:
            total += phi(q) * c
    return total


class TestClosedForms:
    def test_ball_indicators(self):
        assert RadialStep.ball_indicator(F(1, 2)).ft().coeffs == FT_BALL_HALF
        assert RadialStep.ball_indicator(2).ft().coeffs == FT_BALL_2

    def test_sphere_two(self):
        assert RadialStep.sphere_indicator(2).ft().coeffs == FT_SPHERE_2

    def test_integral(self):
        assert RadialStep.ball_indicator(8).integral() == INT_BALL_8
        assert RadialStep.sphere_indicator(8).integral() == INT_BALL_8 - phi(7)


class TestTransform:
    def test_involution(self):
        rng = random.Random(2024)
        for _ in range(50):
            f = random_step(rng)
            assert f.ft().ft() == f

    def test_parseval_exact(self):
        rng = random.Random(99)
        for _ in range(50):
            f, g = random_step(rng), random_step(rng)
            assert f.inner_product(g) == f.ft().inner_product(g.ft())
            assert f.l2_norm_sq() == f.ft().l2_norm_sq()

    def test_value_at_zero_is_integral(self):
        rng = random.Random(7)
        for _ in range(20):
            f = random_step(rng)
            assert f.ft().value_at_zero() == f.integral()
            assert f.value_at_zero() == f.ft().integral()

    def test_support_law(self):
        rng = random.Random(31)
        for _ in range(20):
            f = random_step(rng)
            if f.is_zero():
                continue
            expected = prev_pp(1 / f.min_radius()).value
            assert f.ft().support_radius() == expected

    def test_sum_formula_oracle(self):
        rng = random.Random(55)
        eval_points = [F(0)] + POOL + [F(27), F(1, 27)]
        for _ in range(20):
            f = random_step(rng)
            g = f.ft()
            for s in eval_points:
                assert g.value(s) == ft_oracle_value(f, s)

    def test_linearity(self):
        rng = random.Random(5)
        for _ in range(20):
            f, g = random_step(rng), random_step(rng)
            a, b = F(3, 2), F(-7, 5)
            assert (a * f + b * g).ft() == a * f.ft() + b * g.ft()


class TestStepAlgebra:
    def test_values(self):
        ball = RadialStep.ball_indicator(4)
        assert ball.value(0) == 1
        assert ball.value(F(1, 7)) == 1
        assert ball.value(4) == 1
        assert ball.value(5) == 0
        s = RadialStep.sphere_indicator(2)
        assert s.value(2) == 1
        assert s.value(F(1, 2)) == 0 and s.value(3) == 0 and s.value(0) == 0

    def test_sphere_values_roundtrip(self):
        rng = random.Random(11)
        for _ in range(20):
            f = random_step(rng)
            if f.is_zero():
                continue
            vals = dict(f.sphere_values())
            inner = f.value(prev_pp(f.min_radius()).value)
            assert RadialStep.from_sphere_values(vals, inner) == f

    def test_vector_space_ops(self):
        f = RadialStep.ball_indicator(2)
        g = RadialStep.sphere_indicator(2)
        assert f - g == RadialStep.ball_indicator(F(1, 2))
        assert -(-f) == f
        assert 2 * f - f == f
        assert f + RadialStep.zero() == f

    def test_mean_zero(self):
        f = RadialStep({F(2): 1, F(1, 2): -2})
        assert f.integral() == 0 and f.is_mean_zero()
        assert f.ft().value_at_zero() == 0
        assert not RadialStep.ball_indicator(2).is_mean_zero()

    def test_split_inner(self):
        f = RadialStep.ball_indicator(4) + RadialStep.sphere_indicator(8)
        c0, rho, rest = f.split_inner()
        assert c0 == 1
        assert rest.has_zero_inner_value()
        assert RadialStep({rho: c0}) + rest == f
        g = RadialStep.sphere_indicator(3)
        assert g.split_inner() == (0, None, g)

    def test_apply_multiplier(self):
        g = RadialStep.sphere_indicator(4) * 3
        h = g.apply_multiplier(lambda r: r * r)
        assert h.value(4) == 48
        assert h.value(2) == 0 and h.value(8) == 0
        with pytest.raises(ValueError):
            RadialStep.ball_indicator(2).apply_multiplier(lambda r: r)

    def test_multiplier_matches_manual_semigroup(self):
        # e^{-t r} per sphere, floats entering exactly as dyadics
        f = RadialStep.sphere_indicator(2) - RadialStep.sphere_indicator(4)
        t = 0.25
        h = f.apply_multiplier(lambda r: math.exp(-t * float(r)))
        assert h.value(2) == F(math.exp(-0.5))
        assert h.value(4) == -F(math.exp(-1.0))


class TestNumeric:
    def test_integrate_radial_exact(self):
        total = integrate_radial(lambda r: F(1), F(1, 8), 8)
        assert total == phi(8) - phi(F(1, 8))
        weighted = integrate_radial(lambda r: r, F(1, 2), 4)
        manual = sum(
            q.value * (phi(q.value) - phi(prev_pp(q.value).value))
            for q in pp_range(F(1, 2), 4)
        )
        assert weighted == manual

    def test_integrate_radial_float(self):
        total = integrate_radial(lambda r: float(r) ** 2, F(1, 8), 8)
        exact = integrate_radial(lambda r: r * r, F(1, 8), 8)
        assert math.isclose(total, float(exact), rel_tol=1e-12)

    def test_ft_ball_eval_constant_profile(self):
        # constant profile: transform of a plain ball indicator, known exactly
        expected = RadialStep.ball_indicator(4).ft()
        for s in [F(0), F(1, 9), F(1, 5), F(1, 4), F(1, 3), F(2)]:
            val, bound = ft_ball_eval(lambda q: 1.0, 4, s, 1.0, tol=1e-12)
            assert abs(val - float(expected.value(s))) <= bound + 1e-12

    def test_ft_ball_eval_exponential_profile(self):
        from adelic import next_pp

        prof = lambda q: math.exp(-float(q))
        val, bound = ft_ball_eval(prof, 4, F(1, 5), 1.0, tol=1e-13)
        # brute reference down to 1/2^10 plus its own telescoped tail bound
        cut = F(1, 1 << 10)
        radii = [q.value for q in pp_range(cut, 4)] + [cut]
        brute = math.fsum(
            float(phi(q))
            * (
                (prof(q) if q <= 4 else 0.0)
                - (prof(nxt) if (nxt := next_pp(q).value) <= 4 else 0.0)
            )
            for q in radii
        )
        brute_tail = float(phi(prev_pp(cut).value)) * (1.0 - prof(cut))
        assert abs(val - brute) <= bound + brute_tail + 1e-15
        assert bound < 1e-13

    def test_ft_ball_eval_outside_support(self):
        val, bound = ft_ball_eval(lambda q: 1.0, 2, F(1, 2), 1.0, tol=1e-12)
        assert val == 0.0  # transform supported in B(1/3)


class TestSerialization:
    def test_round_trip(self):
        rng = random.Random(17)
        for _ in range(20):
            f = random_step(rng)
            assert RadialStep.from_json(f.to_json()) == f

    def test_key_format(self):
        f = RadialStep({F(1, 9): F(3, 7), F(8): -2})
        d = f.to_dict()
        assert d["ball_coefficients"] == {"3^-2": "3/7", "2^3": "-2"}
