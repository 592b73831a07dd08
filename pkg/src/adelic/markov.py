"""Jump-process simulation driven by the finite-adele heat semigroup.

The kernel is radial, so a time-dt increment factors into two draws: a
radius r with probability Z(r,dt) vol(S_r) (the sphere masses), then a
Haar-uniform point on S_r. Increments accumulate by ultrametric addition;
with a real exponent beta present, an independent real coordinate moves by
a matching stable increment (Gaussian for beta=2, Cauchy for beta=1).

Radii are drawn from a finite window [r_min, r_max] of prime powers; the
leftover tail mass is certified small and triggers a logged resample, so
the sampled law is biased by at most the tail mass per step. Stored points
are truncated (prime cutoff and digit depth); the radii sequence is the
authoritative statistical record of the path.
"""
from __future__ import annotations

import csv
import io
import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import accumulate
from typing import Optional

from .adele import (
    AdelePoint,
    add,
    distance,
    format_point,
    sample_uniform,
    sphere,
)
from .errors import IndeterminateCancellation, ToleranceError
from .heatkernel import (
    KernelParams,
    ball_mass,
    sphere_masses,
    tail_mass_bound,
    z_finite,
)
from .primepow import RationalLike, as_fraction, phi, prime_power_pairs
from .util import derive_rng


@dataclass(frozen=True)
class RadiusDistribution:
    """Increment-radius law on a prime-power window plus combined tail."""

    entries: tuple[tuple[Fraction, float], ...]
    tail_mass: float
    params: KernelParams

    def __post_init__(self):
        total = math.fsum(m for _, m in self.entries) + self.tail_mass
        if abs(total - 1.0) > 1e-9:
            raise ToleranceError(
                f"radius masses sum to {total!r}, not 1 within 1e-9"
            )
        if self.tail_mass < 0 or any(m < 0 for _, m in self.entries):
            raise ToleranceError("negative probability mass")

    @cached_property
    def _cumulative(self) -> tuple[float, ...]:
        return tuple(accumulate(m for _, m in self.entries))

    def sample(self, rng) -> Optional[Fraction]:
        """One radius draw; None signals a tail hit (caller resamples)."""
        u = rng.random()
        idx = bisect_right(self._cumulative, u)
        if idx >= len(self.entries):
            return None
        return self.entries[idx][0]

    def mass_of(self, radius: Fraction) -> float:
        for r, m in self.entries:
            if r == radius:
                return m
        return 0.0


def radius_distribution(
    params: KernelParams,
    r_min: RationalLike,
    r_max: RationalLike,
) -> RadiusDistribution:
    params.require_positive_time()
    lo, hi = as_fraction(r_min), as_fraction(r_max)
    if lo > hi:
        raise ValueError("r_min must not exceed r_max")
    table = sphere_masses(params, lo, hi)
    if table.up_tail > tail_mass_bound(hi, params) * (1 + 1e-9) + 1e-15:
        raise ToleranceError("upper tail exceeds its certified bound")
    return RadiusDistribution(
        entries=tuple(zip(table.radii, table.masses)),
        tail_mass=table.low_tail + table.up_tail,
        params=params,
    )


@dataclass(frozen=True)
class Truncation:
    """Path truncation: radius window, stored-prime cutoff, digit depth."""

    r_min: Fraction = Fraction(1, 128)
    r_max: Fraction = Fraction(1024)
    prime_cutoff: int = 131
    depth: int = 12

    def validate(self):
        prime_power_pairs(self.r_min), prime_power_pairs(self.r_max)
        if self.r_min >= 1 or self.r_max <= 1:
            raise ValueError("radius window must straddle 1")
        # dropping a zero-forced component would corrupt sphere norms,
        # so every prime constrained at the smallest radius must be kept
        if self.prime_cutoff < 1 / self.r_min:
            raise ValueError(
                "prime_cutoff must reach 1/r_min to preserve sphere norms"
            )
        if self.depth < 4:
            raise ValueError("depth < 4 leaves too little digit precision")


@dataclass(frozen=True)
class PathSample:
    """One simulated path. radii[i] is the norm of the i-th increment,
    known exactly from the draw; points are truncated representations."""

    times: tuple[float, ...]
    points: tuple[AdelePoint, ...]
    radii: tuple[Fraction, ...]
    seed: int
    real_coords: Optional[tuple[float, ...]] = None
    tail_resamples: int = 0
    cancel_resamples: int = 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["step", "time", "radius"]
        if self.real_coords is not None:
            header.append("real_coord")
        header.append("point")
        writer.writerow(header)
        for i, (tm, pt) in enumerate(zip(self.times, self.points)):
            row = [str(i), f"{tm:.10g}", str(self.radii[i - 1]) if i else ""]
            if self.real_coords is not None:
                row.append(f"{self.real_coords[i]:.17g}")
            row.append(format_point(pt))
            writer.writerow(row)
        return buf.getvalue()


def _real_increment(rng, dt: float, beta: float) -> float:
    # scales matched to the closed-form real kernels: beta=2 is Gaussian
    # with variance dt/(2 pi^2), beta=1 Cauchy with scale dt/(2 pi)
    if beta == 2.0:
        return rng.gauss(0.0, math.sqrt(dt) / (math.pi * math.sqrt(2.0)))
    if beta == 1.0:
        return dt / (2.0 * math.pi) * math.tan(math.pi * (rng.random() - 0.5))
    raise ValueError("real increments are sampled only for beta in {1, 2}")


def sample_path(
    params: KernelParams,
    n_steps: int,
    dt: float,
    trunc: Truncation = Truncation(),
    seed: int = 0,
    path_index: int = 0,
    start: Optional[AdelePoint] = None,
) -> PathSample:
    """Simulate one path of n_steps increments of duration dt each.

    Independent paths come from distinct path_index values under one master
    seed; the stream split is derive_rng(seed, "path", path_index). Tail
    hits and indeterminate cancellations are resampled and counted.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    if not dt > 0:
        raise ValueError("dt must be positive")
    trunc.validate()
    step_params = KernelParams(t=dt, alpha=params.alpha, beta=params.beta)
    dist = radius_distribution(step_params, trunc.r_min, trunc.r_max)
    if dist.tail_mass > 1e-6:
        raise ToleranceError(
            f"truncation window leaks {dist.tail_mass:.2e} > 1e-6 of "
            "increment mass per step"
        )
    rng = derive_rng(seed, "path", path_index)
    with_real = params.beta is not None
    if with_real and params.beta not in (1.0, 2.0):
        raise ValueError("real increments are sampled only for beta in {1, 2}")

    points = [start if start is not None else AdelePoint.zero()]
    times = [0.0]
    radii: list[Fraction] = []
    coords = [0.0] if with_real else None
    tails = cancels = 0
    for i in range(1, n_steps + 1):
        while True:
            r = dist.sample(rng)
            if r is None:
                tails += 1
                continue
            inc = sample_uniform(
                sphere(r), depth=trunc.depth, rng=rng,
                prime_cutoff=trunc.prime_cutoff,
            )
            try:
                nxt = add(points[-1], inc)
            except IndeterminateCancellation:
                cancels += 1
                continue
            break
        points.append(nxt)
        radii.append(r)
        times.append(i * dt)
        if with_real:
            coords.append(coords[-1] + _real_increment(rng, dt, params.beta))
    return PathSample(
        times=tuple(times),
        points=tuple(points),
        radii=tuple(radii),
        seed=seed,
        real_coords=tuple(coords) if with_real else None,
        tail_resamples=tails,
        cancel_resamples=cancels,
    )


def transition_prob_ball(
    params: KernelParams,
    x: AdelePoint,
    center: AdelePoint,
    eps: RationalLike,
) -> float:
    """P(t, x, B_eps(center)): probability the process started at x sits in
    the closed ball after time t. Space homogeneity makes this a function
    of ||x - center|| alone; the kernel is constant on the shifted ball
    when x lies outside it (ultrametric), and integrates sphere by sphere
    when x is inside. t = 0 degenerates to the indicator."""
    radius = as_fraction(eps)
    if radius != 1:
        prime_power_pairs(radius)
    d = distance(x, center)
    if params.t == 0:
        return 1.0 if d <= radius else 0.0
    if d > radius:
        return float(phi(radius)) * z_finite(d, params)
    return ball_mass(radius, params)


def radius_law_chisquare(
    observed: dict[Optional[Fraction], int],
    dist: RadiusDistribution,
    min_expected: float = 5.0,
) -> tuple[float, float, int]:
    """Goodness-of-fit of observed radius counts (None key = tail/other)
    against the analytic law. Adjacent low-expectation radii are pooled so
    every bin has expected count >= min_expected. Returns (stat, p, dof)."""
    from scipy.stats import chi2

    n = sum(observed.values())
    if n == 0:
        raise ValueError("no observations")
    bins: list[tuple[list[Optional[Fraction]], float]] = []
    cur_keys: list[Optional[Fraction]] = []
    cur_exp = 0.0
    for r, m in dist.entries:
        cur_keys.append(r)
        cur_exp += n * m
        if cur_exp >= min_expected:
            bins.append((cur_keys, cur_exp))
            cur_keys, cur_exp = [], 0.0
    # leftovers and everything outside the window share the tail bin
    tail_exp = cur_exp + n * dist.tail_mass
    if bins and tail_exp < min_expected:
        keys, exp = bins.pop()
        bins.append((keys + cur_keys + [None], exp + tail_exp))
    else:
        bins.append((cur_keys + [None], tail_exp))
    index = {}
    for i, (keys, _) in enumerate(bins):
        for k in keys:
            index[k] = i
    obs_counts = [0.0] * len(bins)
    for r, c in observed.items():
        obs_counts[index.get(r, index[None])] += c
    stat = math.fsum(
        (o - e) ** 2 / e for o, (_, e) in zip(obs_counts, bins)
    )
    dof = len(bins) - 1
    return stat, float(chi2.sf(stat, dof)), dof
