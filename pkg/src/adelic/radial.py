"""Exact radial step functions on the finite adeles and their Fourier
transforms.

A compactly supported radial step function is a finite linear combination
of closed-ball indicators with prime-power radii:

    f = sum_j c_j 1_{B(rho_j)},    f(x) = sum_{rho_j >= ||x||} c_j.

This basis is closed under the Fourier transform, which acts exactly:

    FT(1_{B(rho)}) = phi(rho) * 1_{B(prev_pp(1/rho))}.

Since phi(rho) * phi(prev_pp(1/rho)) = 1 and prev_pp(next_pp(rho)) = rho,
the transform is an exact involution on this space, Parseval holds as an
identity of rationals, and no numerical error enters until a function
leaves the step class (see ft_ball_eval for that case).

Coefficients are Fractions throughout; floats passed in are converted via
Fraction(float), which is lossless for binary floats.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .primepow import (
    RationalLike,
    as_fraction,
    next_pp,
    phi,
    pp_range,
    prev_pp,
    prime_power_pairs,
)

_NumberLike = (int, float, Fraction)


def _coeff(x) -> Fraction:
    return Fraction(x)


class RadialStep:
    """Finite combination of ball indicators; exact radial step function."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[Fraction, RationalLike] | None = None):
        canon: dict[Fraction, Fraction] = {}
        for r, c in (coeffs or {}).items():
            radius = as_fraction(r)
            prime_power_pairs(radius)  # radii must be prime powers
            c = _coeff(c)
            if c:
                canon[radius] = canon.get(radius, Fraction(0)) + c
        self.coeffs = {r: c for r, c in sorted(canon.items()) if c}

    # ---- constructors

    @classmethod
    def zero(cls) -> "RadialStep":
        return cls({})

    @classmethod
    def ball_indicator(cls, radius: RationalLike) -> "RadialStep":
        return cls({as_fraction(radius): 1})

    @classmethod
    def sphere_indicator(cls, radius: RationalLike) -> "RadialStep":
        r = as_fraction(radius)
        return cls({r: 1, prev_pp(r).value: -1})

    @classmethod
    def from_sphere_values(
        cls,
        values: Mapping[Fraction, RationalLike],
        inner: RationalLike = 0,
    ) -> "RadialStep":
        """Step with given values on the listed spheres, `inner` on all
        smaller norms (including 0) and 0 beyond the largest radius. Radii
        must be consecutive prime powers."""
        if not values:
            raise ValueError("need at least one sphere value")
        radii = sorted(as_fraction(r) for r in values)
        vals = {as_fraction(r): _coeff(v) for r, v in values.items()}
        for a, b in zip(radii, radii[1:]):
            if next_pp(a).value != b:
                raise ValueError("sphere radii must be consecutive")
        coeffs: dict[Fraction, Fraction] = {}
        for i, r in enumerate(radii):
            upper = vals[radii[i + 1]] if i + 1 < len(radii) else Fraction(0)
            coeffs[r] = vals[r] - upper
        coeffs[prev_pp(radii[0]).value] = _coeff(inner) - vals[radii[0]]
        return cls(coeffs)

    # ---- basic queries

    def is_zero(self) -> bool:
        return not self.coeffs

    def support_radius(self) -> Fraction | None:
        """Largest radius of the supporting ball; None for the zero map."""
        return max(self.coeffs) if self.coeffs else None

    def min_radius(self) -> Fraction | None:
        return min(self.coeffs) if self.coeffs else None

    def value(self, s: RationalLike) -> Fraction:
        """Value at any point of norm s (s = 0 gives the value at zero)."""
        s = as_fraction(s) if s else Fraction(0)
        return sum(
            (c for r, c in self.coeffs.items() if r >= s), Fraction(0)
        )

    def value_at_zero(self) -> Fraction:
        return sum(self.coeffs.values(), Fraction(0))

    def sphere_values(self) -> list[tuple[Fraction, Fraction]]:
        """(radius, value) on every sphere in the coefficient envelope."""
        if not self.coeffs:
            return []
        lo, hi = min(self.coeffs), max(self.coeffs)
        out = []
        acc = Fraction(0)
        vals = {}
        for r in sorted(self.coeffs, reverse=True):
            acc += self.coeffs[r]
            vals[r] = acc
        value = Fraction(0)
        radii = [lo] + [p.value for p in pp_range(lo, hi)]
        for r in reversed(radii):
            if r in vals:
                value = vals[r]
            out.append((r, value))
        return list(reversed(out))

    def is_mean_zero(self) -> bool:
        """True when the integral vanishes (transform vanishes at 0)."""
        return self.integral() == 0

    def has_zero_inner_value(self) -> bool:
        """True when the function vanishes on a ball around 0."""
        return self.value_at_zero() == 0

    # ---- exact calculus

    def integral(self) -> Fraction:
        return sum(
            (c * phi(r) for r, c in self.coeffs.items()), Fraction(0)
        )

    def inner_product(self, other: "RadialStep") -> Fraction:
        """integral of f * g: sum c_i d_j phi(min(rho_i, rho_j))."""
        total = Fraction(0)
        for r1, c1 in self.coeffs.items():
            for r2, c2 in other.coeffs.items():
                total += c1 * c2 * phi(min(r1, r2))
        return total

    def l2_norm_sq(self) -> Fraction:
        return self.inner_product(self)

    def ft(self) -> "RadialStep":
        """Exact Fourier transform (an involution on radial steps)."""
        return RadialStep(
            {
                prev_pp(1 / r).value: c * phi(r)
                for r, c in self.coeffs.items()
            }
        )

    def apply_multiplier(
        self, multiplier: Callable[[Fraction], RationalLike]
    ) -> "RadialStep":
        """Multiply by a radial factor, sphere by sphere. Only valid when
        the function vanishes near 0: otherwise infinitely many spheres
        carry distinct values and the result is not a finite step."""
        if not self.has_zero_inner_value():
            raise ValueError(
                "multiplier would produce infinitely many sphere values; "
                "split off the inner ball first"
            )
        new_vals = {
            r: _coeff(multiplier(r)) * v
            for r, v in self.sphere_values()
        }
        if not new_vals:
            return RadialStep.zero()
        return RadialStep.from_sphere_values(new_vals, inner=0)

    def split_inner(self) -> tuple[Fraction, Fraction | None, "RadialStep"]:
        """(c0, rho, remainder): f = c0 * 1_{B(rho)} + remainder, where the
        remainder vanishes near 0. rho is None when f is zero near 0."""
        c0 = self.value_at_zero()
        if c0 == 0:
            return Fraction(0), None, self
        rho = prev_pp(self.min_radius()).value
        rest = self - RadialStep({rho: c0})
        return c0, rho, rest

    # ---- algebra

    def _combined(self, other: "RadialStep", sign: int) -> "RadialStep":
        merged = dict(self.coeffs)
        for r, c in other.coeffs.items():
            merged[r] = merged.get(r, Fraction(0)) + sign * c
        return RadialStep(merged)

    def __add__(self, other):
        if not isinstance(other, RadialStep):
            return NotImplemented
        return self._combined(other, 1)

    def __sub__(self, other):
        if not isinstance(other, RadialStep):
            return NotImplemented
        return self._combined(other, -1)

    def __neg__(self):
        return RadialStep({r: -c for r, c in self.coeffs.items()})

    def __mul__(self, scalar):
        if not isinstance(scalar, _NumberLike):
            return NotImplemented
        s = _coeff(scalar)
        return RadialStep({r: c * s for r, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RadialStep):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def __repr__(self):
        inside = ", ".join(f"{r}: {c}" for r, c in self.coeffs.items())
        return f"RadialStep({{{inside}}})"

    # ---- serialization

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_dict(self) -> dict:
        return {
            "ball_coefficients": {
                _radius_key(r): str(c) for r, c in self.coeffs.items()
            }
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RadialStep":
        return cls(
            {
                _radius_from_key(k): Fraction(v)
                for k, v in data["ball_coefficients"].items()
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "RadialStep":
        return cls.from_dict(json.loads(text))


def _radius_key(r: Fraction) -> str:
    p, k = prime_power_pairs(r)
    return f"{p}^{k}"


def _radius_from_key(key: str) -> Fraction:
    p, k = key.split("^")
    return Fraction(int(p)) ** int(k)


# --------------------------------------------------------------------------
# numeric radial integration and transform evaluation


def integrate_radial(
    fn: Callable[[Fraction], RationalLike],
    lo: RationalLike,
    hi: RationalLike,
):
    """sum of fn(r) * vol(S_r) over prime powers r in (lo, hi]. Exact when
    fn returns Fractions/ints, compensated float summation otherwise."""
    terms = []
    exact = True
    for r in pp_range(lo, hi):
        vol = phi(r.value) - phi(prev_pp(r.value).value)
        val = fn(r.value)
        if isinstance(val, float):
            exact = False
        terms.append(val * vol)
    if exact:
        return sum(terms, Fraction(0))
    return math.fsum(float(t) for t in terms)


def ft_ball_eval(
    profile: Callable[[Fraction], float],
    rho: RationalLike,
    s: RationalLike,
    profile_at_zero: float,
    tol: float = 1e-12,
    max_terms: int = 100000,
) -> tuple[float, float]:
    """Transform of profile(||xi||) * 1_{B(rho)}(xi) evaluated at norm s.

    Sums phi(q) * (f(q) - f(next q)) over prime powers q < 1/s descending
    until the truncation bound phi(q) * |profile(q) - profile_at_zero|
    drops below tol. The bound is certified for profiles monotone on
    (0, rho]. Returns (value, remainder_bound).
    """
    rho = as_fraction(rho)
    s = as_fraction(s) if s else Fraction(0)
    if s > 0:
        top = min(rho, prev_pp(1 / s).value)
    else:
        top = rho

    def f_at(q: Fraction) -> float:
        return float(profile(q)) if q <= rho else 0.0

    terms = []
    q = top
    bound = math.inf
    for _ in range(max_terms):
        up = next_pp(q).value
        terms.append(float(phi(q)) * (f_at(q) - f_at(up)))
        # remainder below q telescopes: |sum| <= phi(prev q) |g(q) - g(0+)|
        prev_q = prev_pp(q).value
        bound = float(phi(prev_q)) * abs(f_at(q) - profile_at_zero)
        if bound < tol:
            break
        q = prev_q
    else:
        raise ValueError("transform evaluation did not reach tolerance")
    return math.fsum(terms), bound
