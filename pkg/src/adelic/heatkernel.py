"""Certified heat kernel evaluation on the finite adeles and the real line.

The finite-adele kernel with exponent alpha > 1 is radial:

    Z(r, t) = sum_{q prime power, q < 1/r} phi(q) (e^{-t q^alpha} - e^{-t (next q)^alpha})

(full sum at r = 0). All truncations carry certified remainder bounds:

  * small radii: the tail below rho telescopes to at most
    phi(prev rho) * (1 - e^{-t rho^alpha});
  * large radii (needed only at r = 0): phi(q) <= e^{1.04 q} (effective
    Chebyshev bound), so once t((n+1)^alpha - n^alpha) >= 2.08 the terms
    are dominated by a geometric series of ratio e^{-1.04}.

Sphere masses m(r) = Z(r,t) * vol(S_r) involve huge volumes against tiny
kernel values, so the mass engine works in logarithms throughout, stepping
the radius down one prime power at a time (which grows the defining sum by
exactly one term). Cumulative ball masses obey the exact identity

    sum_{r <= rho} m(r) = phi(rho) Z(rho, t) + e^{-t rho^{-alpha}},

obtained by swapping the two absolutely convergent sums and telescoping
with phi(rho) phi(prev_pp(1/rho)) = 1. The identity (validated against
slow high-precision sums) supplies both tails of the normalization
integral and exact ball transition probabilities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import ToleranceError
from .primepow import (
    RationalLike,
    as_fraction,
    log_phi,
    next_pp,
    phi,
    pp_range,
    prev_pp,
    prime_power_pairs,
)
from .util import clamp_nonnegative

_CHEB = 1.04  # effective bound: ln phi(x) <= 1.04 x for x >= 2
_LOG_GEO = -math.expm1(-_CHEB)  # 1 - e^{-1.04}


@dataclass(frozen=True)
class KernelParams:
    """Time/exponent bundle. t = 0 is admitted only as the degenerate
    identity element of the semigroup (transition probabilities become
    indicators); every kernel evaluation requires t > 0."""

    t: float
    alpha: float
    beta: Optional[float] = None

    def __post_init__(self):
        if not self.t >= 0:
            raise ValueError("time must be nonnegative")
        if not self.alpha > 1:
            raise ValueError("finite-adele exponent must exceed 1")
        if self.beta is not None and not 0 < self.beta <= 2:
            raise ValueError("real exponent must lie in (0, 2]")

    def require_positive_time(self):
        if self.t == 0:
            raise ValueError("operation requires t > 0")


def _to_radius(radius: RationalLike) -> Fraction:
    # attainable norms only: 0, 1, or a prime power
    if not radius:
        return Fraction(0)
    s = as_fraction(radius)
    if s != 1:
        prime_power_pairs(s)
    return s


def _ln_delta(q: Fraction, t: float, alpha: float) -> float:
    """ln(e^{-t q^alpha} - e^{-t (next q)^alpha}), computed stably."""
    a = float(q) ** alpha
    b = float(next_pp(q).value) ** alpha
    gap = -math.expm1(-t * (b - a))  # 1 - e^{-t(b-a)} > 0
    if gap <= 0.0:
        return -math.inf
    return -t * a + math.log(gap)


def _low_remainder_ln(q: Fraction, t: float, alpha: float) -> float:
    """ln bound for the sum over prime powers strictly below q."""
    gap = -math.expm1(-t * float(q) ** alpha)
    if gap <= 0.0:
        return -math.inf
    return log_phi(prev_pp(q).value) + math.log(gap)


def _upper_start(t: float, alpha: float, tol: float) -> Fraction:
    """Integer prime power M so the sum above M is below tol, certified
    by the e^{1.04 q} envelope and a geometric ratio argument."""
    qstar = max(2.0, (_CHEB / (t * alpha)) ** (1.0 / (alpha - 1.0)))
    lmax = _CHEB * qstar - t * qstar ** alpha
    if lmax > 700.0:
        raise OverflowError(
            "kernel value exceeds the double range for these parameters "
            f"(peak term ~ e^{lmax:.0f}); t is too small for alpha={alpha}"
        )
    base = max(2.0, (2 * _CHEB / (t * alpha)) ** (1.0 / (alpha - 1.0)))
    m = next_pp(base) if base > 2 else Fraction(2)
    m = as_fraction(m)
    while True:
        nxt = float(m) + 1.0
        ln_tail = _CHEB * nxt - t * nxt ** alpha - math.log(_LOG_GEO)
        if ln_tail < math.log(tol):
            return m
        m = next_pp(m).value


def _ln_terms(s: Fraction, t: float, alpha: float, rel_tol: float):
    """Descending ln-terms of the defining series at norm s, truncated at
    relative accuracy rel_tol; yields floats."""
    if s > 0:
        top = prev_pp(1 / s).value
    else:
        top = _upper_start(t, alpha, rel_tol * 0.25)
    q = top
    acc = -math.inf
    while True:
        term = log_phi(q) + _ln_delta(q, t, alpha)
        yield term
        acc = _logaddexp(acc, term)
        rem = _low_remainder_ln(q, t, alpha)
        if rem < acc + math.log(rel_tol * 0.5) or rem == -math.inf:
            return
        q = prev_pp(q).value


def _logaddexp(a: float, b: float) -> float:
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def ln_z_finite(radius: RationalLike, params: KernelParams,
                rel_tol: float = 1e-13) -> float:
    """ln Z(radius, t); usable even where Z itself over/underflows floats."""
    params.require_positive_time()
    s = _to_radius(radius)
    acc = -math.inf
    for term in _ln_terms(s, params.t, params.alpha, rel_tol):
        acc = _logaddexp(acc, term)
    return acc


def z_finite(radius: RationalLike, params: KernelParams,
             tol: float = 1e-12) -> float:
    """Kernel value at any point of the given norm, within tol (relative
    for the dominant part, with the certified series remainders added on
    both ends). Always nonnegative: the series has positive terms."""
    params.require_positive_time()
    s = _to_radius(radius)
    terms = list(_ln_terms(s, params.t, params.alpha, min(tol, 1e-13)))
    peak = max(terms)
    if peak > 709.0:
        raise OverflowError(
            "kernel value exceeds the double range; use ln_z_finite"
        )
    return math.fsum(math.exp(l) for l in terms)


# --------------------------------------------------------------------------
# sphere masses and the normalization integral


@dataclass(frozen=True)
class SphereMasses:
    """Masses m(r) = Z(r,t) vol(S_r) on a window of prime-power radii,
    with the two exact tail sums (identity above)."""

    radii: tuple[Fraction, ...]
    masses: tuple[float, ...]
    low_tail: float   # sum over radii < radii[0]
    up_tail: float    # sum over radii > radii[-1]

    def total(self) -> float:
        return self.low_tail + math.fsum(self.masses) + self.up_tail


def _ln_vol_sphere(r: Fraction) -> float:
    p, _ = prime_power_pairs(r)
    return log_phi(r) + math.log1p(-1.0 / p)


def _validate_ball_radius(r: Fraction):
    # balls exist at radius 1 (the integral points) even though no norm
    # takes that value; spheres do not
    if r != 1:
        prime_power_pairs(r)


def _boundary_exponent(r: Fraction) -> float:
    # the cumulative identity telescopes from the first prime power >= 1/r
    q0 = Fraction(2) if r == 1 else 1 / r
    return float(q0)


def sphere_masses(
    params: KernelParams,
    r_min: RationalLike,
    r_max: RationalLike,
    rel_tol: float = 1e-13,
) -> SphereMasses:
    params.require_positive_time()
    t, alpha = params.t, params.alpha
    lo, hi = as_fraction(r_min), as_fraction(r_max)
    prime_power_pairs(lo), prime_power_pairs(hi)
    if lo > hi:
        raise ValueError("empty radius window")
    radii = [lo] + [q.value for q in pp_range(lo, hi)]
    ln_z_hi = ln_z_finite(hi, params, rel_tol)
    # descending sweep: stepping the radius down one prime power adds the
    # single series term q = 1/r, since prev_pp(1/prev_pp(r)) = 1/r
    ln_masses: dict[Fraction, float] = {}
    acc = ln_z_hi
    for r in reversed(radii):
        ln_masses[r] = _ln_vol_sphere(r) + acc
        acc = _logaddexp(acc, log_phi(1 / r) + _ln_delta(1 / r, t, alpha))
    ln_z_below = acc  # ln Z(prev_pp(lo), t)
    rho = prev_pp(lo).value
    low_tail = math.exp(log_phi(rho) + ln_z_below) + math.exp(
        -t * float(rho) ** -alpha
    )
    up_tail = -math.expm1(-t * float(hi) ** -alpha) - math.exp(
        log_phi(hi) + ln_z_hi
    )
    up_tail = clamp_nonnegative(up_tail, scale=max(1.0, t))
    masses = tuple(math.exp(ln_masses[r]) for r in radii)
    return SphereMasses(tuple(radii), masses, low_tail, up_tail)


def ball_mass(radius: RationalLike, params: KernelParams,
              rel_tol: float = 1e-13) -> float:
    """Exact-identity cumulative mass: integral of Z over the closed ball."""
    params.require_positive_time()
    r = as_fraction(radius)
    _validate_ball_radius(r)
    ln_z = ln_z_finite(r, params, rel_tol)
    return math.exp(log_phi(r) + ln_z) + math.exp(
        -params.t * _boundary_exponent(r) ** params.alpha
    )


def upper_tail_mass(radius: RationalLike, params: KernelParams,
                    rel_tol: float = 1e-13) -> float:
    """Mass outside the closed ball, via the same identity (stable form)."""
    params.require_positive_time()
    r = as_fraction(radius)
    _validate_ball_radius(r)
    ln_z = ln_z_finite(r, params, rel_tol)
    value = -math.expm1(
        -params.t * _boundary_exponent(r) ** params.alpha
    ) - math.exp(log_phi(r) + ln_z)
    return clamp_nonnegative(value, scale=max(1.0, params.t))


_NORM_WINDOW = (Fraction(1, 64), Fraction(1024))


def normalization(params: KernelParams, tol: float = 1e-6) -> float:
    """Windowed sphere-mass sum plus the two exact tails; the kernel
    integrates to 1, so the return value checks the whole numeric pipeline
    (window sums and identity tails come from independent evaluations)."""
    table = sphere_masses(params, *_NORM_WINDOW, rel_tol=min(tol, 1e-10))
    total = table.total()
    if not math.isfinite(total):
        raise ToleranceError("normalization sum did not converge")
    return total


def moment_integral(params: KernelParams, beta_weight: float,
                    tol: float = 1e-10) -> float:
    """integral of ||y||^w e^{-t ||y||^alpha} over the finite adeles,
    as a certified sphere sum (w = beta_weight >= 0)."""
    params.require_positive_time()
    if beta_weight < 0:
        raise ValueError("weight must be nonnegative")
    t, alpha, w = params.t, params.alpha, float(beta_weight)

    # upper start: beyond M the ln-terms 1.04 q + w ln q - t q^alpha drop
    # by at least 1.04 per unit step, giving a geometric tail
    qstar = max(2.0, (2 * _CHEB / (t * alpha)) ** (1.0 / (alpha - 1.0)))
    m = as_fraction(next_pp(qstar) if qstar > 2 else Fraction(2))
    while True:
        n = float(m) + 1.0
        if t * alpha * n ** (alpha - 1.0) - w / n >= 2 * _CHEB:
            ln_tail = (
                _CHEB * n + w * math.log(n) - t * n ** alpha
                - math.log(_LOG_GEO)
            )
            if ln_tail < math.log(tol * 0.5):
                break
        m = next_pp(m).value
    terms = []
    q = m
    while True:
        lt = (
            _ln_vol_sphere(q)
            + (w * math.log(float(q)) if w else 0.0)
            - t * float(q) ** alpha
        )
        if lt > 709.0:
            raise OverflowError("moment integral exceeds the double range")
        terms.append(math.exp(lt))
        # remaining lower radii: integrand <= down^w there, volumes
        # telescope to phi(down)
        down = prev_pp(q).value
        ln_rem = (w * math.log(float(down)) if w else 0.0) + log_phi(down)
        if ln_rem < math.log(tol * 0.5):
            break
        q = down
    return math.fsum(terms)


def tail_mass_bound(epsilon: RationalLike, params: KernelParams) -> float:
    """Certified upper bound 2t * sum_{prime powers q > eps} q^{-alpha}
    for the kernel mass outside the closed ball of radius eps. The prime
    power sum is taken exactly to a cutoff and majorized beyond it by the
    integer integral test."""
    eps = as_fraction(epsilon)
    _validate_ball_radius(eps)
    t, alpha = params.t, params.alpha
    cutoff = max(Fraction(64), 4 * (eps if eps >= 1 else Fraction(1)))
    body = math.fsum(
        float(q.value) ** -alpha for q in pp_range(eps, cutoff)
    )
    integral_tail = float(cutoff) ** (1.0 - alpha) / (alpha - 1.0)
    return 2.0 * t * (body + integral_tail)


# --------------------------------------------------------------------------
# real line and product kernels


def z_real(x: float, params: KernelParams, tol: float = 1e-10) -> float:
    """Real stable kernel under the character e^{2 pi i x xi}:
    the inverse transform of e^{-t |xi|^beta}. Closed forms for beta in
    {1, 2}; adaptive cosine quadrature otherwise (reduced precision)."""
    params.require_positive_time()
    if params.beta is None:
        raise ValueError("params.beta is required for the real kernel")
    t, beta = params.t, params.beta
    x = float(x)
    if beta == 2.0:
        return math.sqrt(math.pi / t) * math.exp(
            -math.pi ** 2 * x * x / t
        )
    if beta == 1.0:
        return 2.0 * t / (t * t + 4.0 * math.pi ** 2 * x * x)
    if x == 0.0:
        return 2.0 * math.gamma(1.0 + 1.0 / beta) / t ** (1.0 / beta)
    from scipy.integrate import quad

    val, err = quad(
        lambda xi: math.exp(-t * xi ** beta),
        0.0,
        math.inf,
        weight="cos",
        wvar=2.0 * math.pi * x,
        limit=400,
    )
    if err > max(tol, 1e-6) * max(1.0, abs(val)):
        raise ToleranceError(
            f"oscillatory quadrature error {err:.2e} above tolerance"
        )
    return clamp_nonnegative(2.0 * val, scale=1.0 + abs(2.0 * val))


def z_adelic(
    x_real: float,
    x_fin_radius: RationalLike,
    params: KernelParams,
    tol: float = 1e-10,
) -> float:
    """Product kernel on R x A_f: z_real(x_real) * z_finite(radius)."""
    return z_real(x_real, params, tol) * z_finite(x_fin_radius, params, tol)
