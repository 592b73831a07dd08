"""Truncated points of the finite adeles with exact norm and Haar sampling.

A point is a finite map prime -> truncated Q_p component plus a rule for
every other prime (the implicit part): either exactly zero, or a lazily
materialized uniform element of Z_p. Components store (valuation, residue
digits, absolute precision): the value is known modulo p^known_to, and
digits beyond that are unknown unless the component is exact (tail of
zeros). Arithmetic is exact modular arithmetic on residues; when a sum
cancels past the stored precision the valuation of the result is
undecidable and IndeterminateCancellation is raised - never silent
rounding.

The norm is computed from valuations only:

    ||x|| = max_p |x_p|_p            if some |x_p|_p > 1
    ||x|| = max_p |x_p|_p / p        otherwise (x integral)

equivalently max_p p^(-[[ord_p(x_p)]]). Values are 0 or a prime power, the
induced distance is an ultrametric, and balls/spheres of prime-power radius
r have exact Haar volumes phi(r) and phi(r) - phi(prev_pp(r)).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Literal, Optional

from .errors import IndeterminateCancellation
from .primepow import (
    PrimePower,
    RationalLike,
    as_fraction,
    bracket_log,
    is_prime,
    iter_int_prime_powers,
    phi,
    prev_pp,
    prime_power_pairs,
)
from .util import derive_rng

DEFAULT_DEPTH = 16

# Bail out of norm resolution after this many implicit primes; reaching it
# means every materialized component vanished to stored depth, probability
# below p^(-depth) per prime.
_NORM_SCAN_CAP = 300


# --------------------------------------------------------------------------
# components


@dataclass(frozen=True)
class PAdicComponent:
    """One truncated Q_p coordinate.

    valuation None with known_to None: exactly zero.
    valuation None with known_to k: only known to lie in p^k Z_p.
    valuation v: value = p^v * (digits as little-endian base-p integer),
    exact when known_to is None, else correct modulo p^known_to.
    digits[0] != 0 whenever digits are present.
    """

    p: int
    valuation: Optional[int]
    digits: tuple[int, ...]
    known_to: Optional[int]  # None = exact (tail of zeros)

    def __post_init__(self):
        if self.digits and self.digits[0] == 0:
            raise ValueError("leading digit must be nonzero")

    @property
    def exact(self) -> bool:
        return self.known_to is None

    @property
    def is_zero(self) -> bool:
        return self.valuation is None and self.exact

    def residue(self) -> int:
        m = 0
        for d in reversed(self.digits):
            m = m * self.p + d
        return m

    def abs_value(self) -> Optional[Fraction]:
        """|x_p|_p when determined, None when only a bound is known."""
        if self.valuation is not None:
            return Fraction(self.p) ** (-self.valuation)
        if self.exact:
            return Fraction(0)
        return None

    def abs_bound(self) -> Fraction:
        """Certified upper bound on |x_p|_p."""
        av = self.abs_value()
        if av is not None:
            return av
        return Fraction(self.p) ** (-self.known_to)

    def value_fraction(self) -> Fraction:
        if not self.exact:
            raise ValueError("component is not exact")
        if self.valuation is None:
            return Fraction(0)
        return Fraction(self.p) ** self.valuation * self.residue()


def _digits_of(m: int, p: int) -> tuple[int, ...]:
    out = []
    while m:
        m, d = divmod(m, p)
        out.append(d)
    return tuple(out)


def _strip_valuation(m: int, p: int) -> tuple[int, int]:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return m, v


def component_zero(p: int) -> PAdicComponent:
    return PAdicComponent(p, None, (), None)


def component_from_residue(
    p: int, value_exponent: int, residue: int, prec: int
) -> PAdicComponent:
    """Component p^value_exponent * residue with residue known mod p^prec."""
    known_to = value_exponent + prec
    residue %= p ** prec
    if residue == 0:
        return PAdicComponent(p, None, (), known_to)
    unit, v = _strip_valuation(residue, p)
    return PAdicComponent(
        p, value_exponent + v, _digits_of(unit, p), known_to
    )


def component_from_rational(
    p: int, x: Fraction, depth: int = DEFAULT_DEPTH
) -> PAdicComponent:
    """Truncated expansion of a rational in Q_p; exact when the expansion
    terminates within depth digits (positive, p-power denominator)."""
    x = Fraction(x)
    if x == 0:
        return component_zero(p)
    num, den = x.numerator, x.denominator
    vn = 0
    while num % p == 0:
        num //= p
        vn += 1
    vd = 0
    while den % p == 0:
        den //= p
        vd += 1
    v = vn - vd
    if den == 1 and 0 < num < p ** depth:
        return PAdicComponent(p, v, _digits_of(num, p), None)
    unit = num * pow(den, -1, p ** depth) % p ** depth
    return component_from_residue(p, v, unit, depth)


def _combine_components(
    a: PAdicComponent, b: PAdicComponent, sign: int, depth: int
) -> PAdicComponent:
    """a + sign*b with exactness tracking; raises on total cancellation."""
    p = a.p
    assert p == b.p
    if a.is_zero:
        return _negate_component(b, depth) if sign < 0 else b
    if b.is_zero:
        return a
    if a.exact and b.exact:
        val = a.value_fraction() + sign * b.value_fraction()
        return component_from_rational(p, val, depth)
    # modular path: each side known modulo p^prec_i
    prec_a = a.known_to if a.known_to is not None else _abs_exp(a) + depth
    prec_b = b.known_to if b.known_to is not None else _abs_exp(b) + depth
    prec = min(prec_a, prec_b)
    base = min(_abs_exp(a), _abs_exp(b), prec)
    width = prec - base
    if width <= 0:
        # both sides already vanish modulo p^prec: nothing cancelled, the
        # sum is simply still unknown past that precision
        return PAdicComponent(p, None, (), prec)
    total = (_shifted_residue(a, base) + sign * _shifted_residue(b, base)) % (
        p ** width
    )
    if total == 0:
        raise IndeterminateCancellation(
            f"cancellation beyond stored depth at p={p}"
        )
    return component_from_residue(p, base, total, width)


def _abs_exp(c: PAdicComponent) -> int:
    """Exponent e with value in p^e Z_p (valuation when known)."""
    if c.valuation is not None:
        return c.valuation
    return c.known_to  # zero to stored precision


def _shifted_residue(c: PAdicComponent, base: int) -> int:
    """Residue r with value = p^base * r (mod the caller's modulus)."""
    if c.valuation is None:
        return 0
    return c.residue() * c.p ** (c.valuation - base)


def _negate_component(c: PAdicComponent, depth: int) -> PAdicComponent:
    """p-adic negation. Modular complement keeps full stored precision (the
    digit-level view: complement every digit, add 1, carries absorbed by the
    modulus - no guard digits needed). Exact nonzero components become
    inexact: a negative value has no terminating digit expansion."""
    if c.is_zero:
        return c
    p = c.p
    if c.valuation is None:
        return c  # zero to known precision: unchanged by negation
    prec = (c.known_to if c.known_to is not None else c.valuation + depth)
    width = prec - c.valuation
    unit = c.residue()
    return component_from_residue(
        p, c.valuation, p ** width - unit, width
    )


# --------------------------------------------------------------------------
# implicit tails


class ZeroTail:
    """Implicit components are exactly zero."""

    def component(self, p: int, depth: int) -> PAdicComponent:
        return component_zero(p)

    def __eq__(self, other):
        return isinstance(other, ZeroTail)

    def __hash__(self):
        return hash("ZeroTail")

    def __repr__(self):
        return "ZeroTail()"


ZERO_TAIL = ZeroTail()


class RandomTail:
    """Implicit components are uniform in Z_p, materialized on demand.

    Digits for prime p come from a child stream keyed by (seed, p), so the
    materialization order never matters and re-reads are consistent without
    any stored state.
    """

    __slots__ = ("seed", "depth")

    def __init__(self, seed: int, depth: int = DEFAULT_DEPTH):
        self.seed = seed
        self.depth = depth

    def component(self, p: int, depth: int) -> PAdicComponent:
        rng = derive_rng(self.seed, "tail", p)
        t = rng.randrange(p ** self.depth)
        return component_from_residue(p, 0, t, self.depth)

    def __eq__(self, other):
        return (
            isinstance(other, RandomTail)
            and self.seed == other.seed
            and self.depth == other.depth
        )

    def __hash__(self):
        return hash(("RandomTail", self.seed, self.depth))

    def __repr__(self):
        return f"RandomTail(seed={self.seed})"


class SumTail:
    __slots__ = ("a", "b", "sign")

    def __init__(self, a, b, sign: int = 1):
        self.a = a
        self.b = b
        self.sign = sign

    def component(self, p: int, depth: int) -> PAdicComponent:
        return _combine_components(
            self.a.component(p, depth), self.b.component(p, depth),
            self.sign, depth,
        )

    def __eq__(self, other):
        return (
            isinstance(other, SumTail)
            and (self.a, self.b, self.sign) == (other.a, other.b, other.sign)
        )

    def __hash__(self):
        return hash(("SumTail", self.a, self.b, self.sign))


class NegTail:
    __slots__ = ("a",)

    def __init__(self, a):
        self.a = a

    def component(self, p: int, depth: int) -> PAdicComponent:
        return _negate_component(self.a.component(p, depth), depth)

    def __eq__(self, other):
        return isinstance(other, NegTail) and self.a == other.a

    def __hash__(self):
        return hash(("NegTail", self.a))


def _combine_tails(ta, tb, sign: int):
    if isinstance(ta, ZeroTail) and isinstance(tb, ZeroTail):
        return ZERO_TAIL
    if isinstance(tb, ZeroTail):
        return ta
    if isinstance(ta, ZeroTail):
        return NegTail(tb) if sign < 0 else tb
    return SumTail(ta, tb, sign)


# --------------------------------------------------------------------------
# points


class AdelePoint:
    """Explicit components plus an implicit-tail rule for all other primes."""

    __slots__ = ("explicit", "tail", "depth")

    def __init__(
        self,
        explicit: dict[int, PAdicComponent] | None = None,
        tail=ZERO_TAIL,
        depth: int = DEFAULT_DEPTH,
    ):
        self.explicit = dict(sorted((explicit or {}).items()))
        self.tail = tail
        self.depth = depth

    @classmethod
    def zero(cls, depth: int = DEFAULT_DEPTH) -> "AdelePoint":
        return cls({}, ZERO_TAIL, depth)

    @classmethod
    def from_components(
        cls, values: dict[int, Fraction | int], depth: int = DEFAULT_DEPTH
    ) -> "AdelePoint":
        """Point with the given exact rational p-components, zero elsewhere."""
        comps = {}
        for p, val in values.items():
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            c = component_from_rational(p, Fraction(val), depth)
            comps[p] = c
        return cls(comps, ZERO_TAIL, depth)

    def component(self, p: int) -> PAdicComponent:
        c = self.explicit.get(p)
        if c is not None:
            return c
        return self.tail.component(p, self.depth)

    def is_zero_point(self) -> bool:
        return isinstance(self.tail, ZeroTail) and all(
            c.is_zero for c in self.explicit.values()
        )

    def __eq__(self, other):
        if not isinstance(other, AdelePoint):
            return NotImplemented
        return (
            self.explicit == other.explicit
            and self.tail == other.tail
            and self.depth == other.depth
        )

    def __repr__(self):
        return f"AdelePoint({format_point(self)!r})"


def add(x: AdelePoint, y: AdelePoint) -> AdelePoint:
    """Componentwise sum; raises IndeterminateCancellation when any
    component cancels past its stored precision."""
    return _combine_points(x, y, 1)


def sub(x: AdelePoint, y: AdelePoint) -> AdelePoint:
    return _combine_points(x, y, -1)


def _combine_points(x: AdelePoint, y: AdelePoint, sign: int) -> AdelePoint:
    depth = min(x.depth, y.depth)
    out = {}
    for p in sorted(set(x.explicit) | set(y.explicit)):
        out[p] = _combine_components(
            x.component(p), y.component(p), sign, depth
        )
    return AdelePoint(out, _combine_tails(x.tail, y.tail, sign), depth)


def negate(x: AdelePoint) -> AdelePoint:
    comps = {
        p: _negate_component(c, x.depth) for p, c in x.explicit.items()
    }
    tail = ZERO_TAIL if isinstance(x.tail, ZeroTail) else NegTail(x.tail)
    return AdelePoint(comps, tail, x.depth)


def norm(x: AdelePoint) -> Fraction:
    """||x||: 0 or a prime power; raises when undecidable at stored depth."""
    undetermined: list[Fraction] = []  # certified bounds on |x_p|_p
    sup_abs = Fraction(0)
    for c in x.explicit.values():
        av = c.abs_value()
        if av is None:
            undetermined.append(c.abs_bound())
        elif av > sup_abs:
            sup_abs = av
    if sup_abs > 1:
        # non-integral: sup norm of |x_p|_p; implicit parts are integral,
        # and an undetermined bound <= sup cannot move the max
        if any(b > sup_abs for b in undetermined):
            raise IndeterminateCancellation(
                "norm bound overlaps an undetermined component"
            )
        return sup_abs
    if any(b > 1 for b in undetermined):
        raise IndeterminateCancellation(
            "cannot decide whether the point is integral"
        )
    # integral branch: max_p |x_p|_p / p
    best = Fraction(0)
    pending: list[Fraction] = []
    for p, c in x.explicit.items():
        av = c.abs_value()
        if av is None:
            pending.append(c.abs_bound() / p)
        else:
            best = max(best, av / p)
    if not isinstance(x.tail, ZeroTail):
        scanned = 0
        for q in _primes_ascending():
            if q in x.explicit:
                continue
            if Fraction(1, q) <= best:
                break
            scanned += 1
            if scanned > _NORM_SCAN_CAP:
                raise IndeterminateCancellation(
                    "implicit components vanish past stored depth"
                )
            c = x.tail.component(q, x.depth)
            av = c.abs_value()
            if av is None:
                pending.append(c.abs_bound() / q)
            else:
                best = max(best, av / q)
    if any(b > best for b in pending):
        raise IndeterminateCancellation(
            "norm dominated by a component with unknown valuation"
        )
    return best


def _primes_ascending() -> Iterator[int]:
    for limit in itertools.count(1):
        chunk = iter_int_prime_powers(1 << (9 + limit))
        for value, base, k in chunk:
            if k == 1 and value > (1 << (8 + limit) if limit > 1 else 0):
                yield value


def distance(x: AdelePoint, y: AdelePoint) -> Fraction:
    """Ultrametric distance ||x - y||.

    A point subtracted from itself cancels its own unknown tail digits
    exactly, so identity short-circuits to 0; two distinct points with
    merely identical stored prefixes have independent tails and raise.
    """
    if x is y:
        return Fraction(0)
    return norm(sub(x, y))


# --------------------------------------------------------------------------
# regions, volume, sampling


@dataclass(frozen=True)
class Region:
    """Ball (closed, ||y - center|| <= radius) or sphere (= radius) of
    prime-power radius."""

    kind: Literal["ball", "sphere"]
    radius: Fraction
    center: Optional[AdelePoint] = None

    def __post_init__(self):
        object.__setattr__(self, "radius", as_fraction(self.radius))
        prime_power_pairs(self.radius)  # validates
        if self.kind not in ("ball", "sphere"):
            raise ValueError(f"unknown region kind {self.kind!r}")


def ball(radius: RationalLike, center: AdelePoint | None = None) -> Region:
    return Region("ball", as_fraction(radius), center)


def sphere(radius: RationalLike, center: AdelePoint | None = None) -> Region:
    return Region("sphere", as_fraction(radius), center)


def haar_volume(region: Region) -> Fraction:
    """Exact Haar measure: phi(r) for balls, phi(r) - phi(prev_pp(r)) for
    spheres; independent of center by translation invariance."""
    if region.kind == "ball":
        return phi(region.radius)
    return phi(region.radius) - phi(prev_pp(region.radius).value)


def ball_exponents(radius: RationalLike) -> dict[int, int]:
    """Nonzero alpha_p = [[log_p r]]: the ball of radius r is the product
    of p^(-alpha_p) Z_p over these primes (Z_p at every other prime)."""
    r = as_fraction(radius)
    out: dict[int, int] = {}
    if r >= 2:
        bound = int(r)
    else:
        inv = 1 / r
        bound = int(inv) if inv.denominator > 1 else int(inv) - 1
    for value, base, k in iter_int_prime_powers(max(bound, 1)):
        if k != 1:
            continue
        a = bracket_log(base, r)
        if a != 0:
            out[base] = a
    return out


def sample_uniform(
    region: Region,
    depth: int = DEFAULT_DEPTH,
    rng=None,
    seed: int | None = None,
    prime_cutoff: int | None = None,
) -> AdelePoint:
    """Haar-uniform sample from a ball or sphere.

    Ball: independent uniform draws in p^(-alpha_p) Z_p for the finitely
    many constrained primes, lazy uniform Z_p elsewhere. Sphere of radius
    p^k: the ball draw conditioned on a nonzero leading digit of the
    p-component, which is exactly the complement of the next smaller ball
    (the constraint vectors of B_r and B_prev(r) differ only at p, by 1 -
    verified exhaustively in the test suite). Sphere samples therefore have
    norm exactly r, always.

    prime_cutoff drops explicit components at primes beyond the cutoff
    (truncated representation for path storage); the defining prime of a
    sphere is always kept.
    """
    if rng is None:
        rng = derive_rng(seed if seed is not None else 0, "sample")
    r = region.radius
    alphas = dict(ball_exponents(r))
    sphere_prime = None
    if region.kind == "sphere":
        sphere_prime = prime_power_pairs(r)[0]
        alphas.setdefault(sphere_prime, bracket_log(sphere_prime, r))
    comps: dict[int, PAdicComponent] = {}
    for q in sorted(alphas):
        a = alphas[q]
        if (
            prime_cutoff is not None
            and q > prime_cutoff
            and q != sphere_prime
        ):
            continue
        if q == sphere_prime:
            lead = rng.randrange(1, q)
            rest = rng.randrange(q ** (depth - 1))
            comps[q] = component_from_residue(q, -a, lead + q * rest, depth)
        else:
            comps[q] = component_from_residue(
                q, -a, rng.randrange(q ** depth), depth
            )
    tail = RandomTail(rng.getrandbits(63), depth)
    point = AdelePoint(comps, tail, depth)
    if region.center is not None:
        point = add(point, region.center)
    return point


# --------------------------------------------------------------------------
# text format


def format_point(x: AdelePoint) -> str:
    """Canonical text form: semicolon-separated `p:v:d0,d1,...` per explicit
    component (digits little-endian), `p:z` for an exact zero component,
    `p:z:K` for zero-to-precision-K, and `0` for the zero point."""
    if x.is_zero_point() and not x.explicit:
        return "0"
    parts = []
    for p, c in x.explicit.items():
        if c.valuation is None:
            parts.append(f"{p}:z" if c.exact else f"{p}:z:{c.known_to}")
        else:
            parts.append(
                f"{p}:{c.valuation}:{','.join(str(d) for d in c.digits)}"
            )
    return ";".join(parts) if parts else "0"


def parse_point(text: str, depth: int = DEFAULT_DEPTH) -> AdelePoint:
    """Inverse of format_point. Digit components parse as exact values
    (terminating expansions); implicit components are exactly zero."""
    text = text.strip()
    if text == "0":
        return AdelePoint.zero(depth)
    comps: dict[int, PAdicComponent] = {}
    for part in text.split(";"):
        fields = part.split(":")
        p = int(fields[0])
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if fields[1] == "z":
            if len(fields) > 2 and fields[2]:
                comps[p] = PAdicComponent(p, None, (), int(fields[2]))
            else:
                comps[p] = component_zero(p)
            continue
        v = int(fields[1])
        digits = tuple(int(d) for d in fields[2].split(",")) if fields[2] else ()
        if not digits:
            raise ValueError(f"component {part!r} has no digits")
        if any(d < 0 or d >= p for d in digits):
            raise ValueError(f"digit out of range in {part!r}")
        comps[p] = PAdicComponent(p, v, digits, None)
    return AdelePoint(comps, ZERO_TAIL, depth)
