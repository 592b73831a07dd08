"""Exact arithmetic on the ordered set of nonzero prime powers.

The values p^k (p prime, k a nonzero integer) form a discrete totally
ordered subset of the positive rationals,

    ... 1/9, 1/8, 1/7, 1/5, 1/4, 1/3, 1/2, 2, 3, 4, 5, 7, 8, 9, 11, ...

1 = p^0 is excluded, so the gap (1/2, 2) contains no elements and the set
is closed under x -> 1/x. next_pp / prev_pp are the successor and
predecessor in this order; they satisfy the duality
(next_pp(n))^-1 = prev_pp(n^-1).

phi is the multiplicative bracket product

    phi(x) = prod_p p^[[log_p x]],    [[t]] = floor(t) shifted by +1 for t < 0,

an exact positive rational for every positive rational x. phi is piecewise
constant and right-continuous with jumps exactly at prime powers, phi == 1
on [1/2, 2), and log(phi(x)) equals the second Chebyshev function psi(x)
for x >= 2. Key identities used throughout the package (and re-verified in
tests):

    phi(prev_pp(p^k)) = phi(p^k) / p
    phi(p^-j) = p / phi(p^j)
    phi(x) <= exp(1.04 * x)          (effective Chebyshev bound, x > 0)

All comparisons are exact big-integer arithmetic; floats never decide
membership or order.
"""
from __future__ import annotations

import bisect
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

RationalLike = Union["PrimePower", Fraction, int, float]

# Exact cumulative phi values are cached only up to this table index bound
# (values <= _EXACT_CACHE_LIMIT); larger exact queries are computed on the
# fly without caching so a single huge query cannot pin gigabytes.
_EXACT_CACHE_LIMIT = 1 << 14

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for all n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimePower:
    """p^k with p prime and k a nonzero integer; ordered by value."""

    p: int
    k: int

    def __post_init__(self):
        if self.k == 0:
            raise ValueError("exponent 0 is excluded (1 is not a prime power)")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def value(self) -> Fraction:
        if self.k > 0:
            return Fraction(self.p ** self.k)
        return Fraction(1, self.p ** (-self.k))

    def reciprocal(self) -> "PrimePower":
        return PrimePower(self.p, -self.k)

    @classmethod
    def from_value(cls, x: RationalLike) -> "PrimePower":
        frac = as_fraction(x)
        pk = _as_prime_power(frac)
        if pk is None:
            raise ValueError(f"{x} is not a nonzero prime power")
        return cls(*pk)

    def __float__(self) -> float:
        return float(self.value)

    def _cmp_value(self, other) -> Fraction:
        if isinstance(other, PrimePower):
            return other.value
        return as_fraction(other)

    def __eq__(self, other):
        if isinstance(other, PrimePower):
            return (self.p, self.k) == (other.p, other.k)
        if isinstance(other, (int, Fraction, float)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        return self.value < self._cmp_value(other)

    def __le__(self, other):
        return self.value <= self._cmp_value(other)

    def __gt__(self, other):
        return self.value > self._cmp_value(other)

    def __ge__(self, other):
        return self.value >= self._cmp_value(other)

    def __repr__(self):
        return f"PrimePower({self.p}, {self.k})"

    def __str__(self):
        return f"{self.p}^{self.k}" if self.k != 1 else str(self.p)


def as_fraction(x: RationalLike) -> Fraction:
    """Exact positive rational from any accepted radius-like input."""
    if isinstance(x, PrimePower):
        return x.value
    frac = Fraction(x)  # Fraction(float) is the exact binary value
    if frac <= 0:
        raise ValueError(f"expected a positive rational, got {x}")
    return frac


def _as_prime_power(x: Fraction) -> tuple[int, int] | None:
    """(p, k) if x = p^k with k != 0, else None. Exact integer factor test."""
    if x >= 1:
        n = x.numerator
        if x.denominator != 1 or n < 2:
            return None
    else:
        if x.numerator != 1:
            return None
        n = x.denominator
    # strip the smallest prime factor; n = p^a exactly or it is not a power
    p = _least_factor(n)
    a = 0
    while n % p == 0:
        n //= p
        a += 1
    if n != 1:
        return None
    return (p, a) if x >= 1 else (p, -a)


def _least_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


def double_bracket(t) -> int:
    """[[t]]: floor(t) for t >= 0, floor(t) + 1 for t < 0.

    Integer-valued on the whole line; [[t]] = 0 exactly on (-1, 1).
    """
    if isinstance(t, float):
        t = Fraction(t)
    f = math.floor(t)
    return f if t >= 0 else f + 1


def bracket_log(p: int, x: RationalLike) -> int:
    """[[log_p x]] by exact comparison (no floating logs).

    This is the ball exponent alpha_p(x): the p-component of the ball of
    radius x is p^(-alpha_p(x)) Z_p.
    """
    frac = as_fraction(x)
    if frac >= 1:
        # floor(log_p x): largest a >= 0 with p^a <= x
        a = 0
        pw = p
        while pw <= frac:
            pw *= p
            a += 1
        return a
    # x < 1: [[log_p x]] = floor(log_p x) + 1 = 1 - min{j >= 1 : p^-j <= x}
    j = 1
    pw = p
    while pw * frac < 1:  # p^-j > x  <=>  1 > x p^j
        pw *= p
        j += 1
    return 1 - j


class _PowerTable:
    """Sorted integer prime powers >= 2 with cumulative log-phi.

    Lazily extended by re-sieving to a doubled bound; extension is
    serialized by a lock while readers work on immutable snapshots, so
    concurrent reads during extension are safe. The doubling step also
    guarantees (by Bertrand's postulate: there is a prime in (n, 2n)) that
    after extending past 2x the table always contains a successor for x.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._exact_lock = threading.Lock()
        self._snapshot: tuple = ((), (), (), ())  # values, bases, exps, logphi
        self._limit = 1
        self._exact: list[int] = []  # cumulative exact phi, prefix of values
        self.extend_to(512)

    def snapshot(self) -> tuple:
        return self._snapshot

    def extend_to(self, limit: int) -> tuple:
        limit = max(limit, 2)
        if self._limit >= limit:
            return self._snapshot
        with self._lock:
            if self._limit >= limit:
                return self._snapshot
            new_limit = max(limit, 2 * self._limit)
            sieve = bytearray([1]) * (new_limit + 1)
            sieve[0:2] = b"\x00\x00"
            for i in range(2, int(new_limit ** 0.5) + 1):
                if sieve[i]:
                    sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
            entries = []
            for p in range(2, new_limit + 1):
                if sieve[p]:
                    pw, k = p, 1
                    while pw <= new_limit:
                        entries.append((pw, p, k))
                        pw *= p
                        k += 1
            entries.sort()
            values = tuple(e[0] for e in entries)
            bases = tuple(e[1] for e in entries)
            exps = tuple(e[2] for e in entries)
            logphi = []
            acc = 0.0
            for b in bases:
                acc += math.log(b)
                logphi.append(acc)
            self._snapshot = (values, bases, exps, tuple(logphi))
            self._limit = new_limit
            return self._snapshot

    def ensure(self, x: Fraction) -> tuple:
        """Snapshot guaranteed to cover integer prime powers past x."""
        need = int(x) + 1
        if self._limit <= 2 * need:
            return self.extend_to(2 * need)
        return self._snapshot

    # --- integer prime-power order primitives (x any positive rational) ---

    def succ_int(self, x: Fraction) -> int:
        """Smallest integer prime power strictly greater than x."""
        values = self.ensure(x)[0]
        i = bisect.bisect_right(values, x)
        return values[i]

    def pred_int(self, x: Fraction) -> int | None:
        """Largest integer prime power strictly less than x (None if < 2)."""
        values = self.ensure(x)[0]
        i = bisect.bisect_left(values, x)
        return values[i - 1] if i > 0 else None

    def floor_int(self, x: Fraction) -> int | None:
        """Largest integer prime power <= x (None if x < 2)."""
        values = self.ensure(x)[0]
        i = bisect.bisect_right(values, x)
        return values[i - 1] if i > 0 else None

    def index_of(self, n: int) -> int:
        values = self.ensure(Fraction(n))[0]
        i = bisect.bisect_left(values, n)
        if i == len(values) or values[i] != n:
            raise ValueError(f"{n} is not a prime power")
        return i

    def pair_at(self, i: int) -> tuple[int, int]:
        snap = self._snapshot
        return snap[1][i], snap[2][i]

    def exact_phi_int(self, n: int) -> int:
        """phi(n) for an integer prime power n: product of bases of all
        prime powers <= n."""
        i = self.index_of(n)
        bases = self._snapshot[1]
        values = self._snapshot[0]
        with self._exact_lock:
            if i < len(self._exact):
                return self._exact[i]
            acc = self._exact[-1] if self._exact else 1
            start = len(self._exact)
            if n <= _EXACT_CACHE_LIMIT:
                for j in range(start, i + 1):
                    acc *= bases[j]
                    self._exact.append(acc)
                return acc
            # cache the prefix up to the limit, finish without caching
            for j in range(start, i + 1):
                acc *= bases[j]
                if values[j] <= _EXACT_CACHE_LIMIT:
                    self._exact.append(acc)
            return acc

    def log_phi_int(self, n: int) -> float:
        return self._snapshot[3][self.index_of(n)]


_TABLE = _PowerTable()


def next_pp(x: RationalLike) -> PrimePower:
    """Successor: the smallest prime power strictly greater than x."""
    frac = as_fraction(x)
    if frac < Fraction(1, 2):
        # prime powers below 1 are 1/m; the next one above x is the
        # reciprocal of the largest integer prime power strictly below 1/x
        m = _TABLE.pred_int(1 / frac)
        if m is not None:
            return PrimePower(_base_of(m), -_exp_of(m))
        return PrimePower(2, 1)
    if frac < 2:
        return PrimePower(2, 1)
    n = _TABLE.succ_int(frac)
    return PrimePower(_base_of(n), _exp_of(n))


def prev_pp(x: RationalLike) -> PrimePower:
    """Predecessor: the largest prime power strictly less than x."""
    frac = as_fraction(x)
    if frac > 2:
        n = _TABLE.pred_int(frac)
        return PrimePower(_base_of(n), _exp_of(n))
    if frac > Fraction(1, 2):
        return PrimePower(2, -1)
    m = _TABLE.succ_int(1 / frac)
    return PrimePower(_base_of(m), -_exp_of(m))


def pp_range(a: RationalLike, b: RationalLike) -> list[PrimePower]:
    """All prime powers v with a < v <= b, ascending."""
    lo = as_fraction(a)
    hi = as_fraction(b)
    out: list[PrimePower] = []
    if lo >= hi:
        return out
    # reciprocal part: 1/m with lo < 1/m <= hi  <=>  1/hi <= m < 1/lo
    if lo < 1:
        m_lo = 1 / hi if hi < 1 else Fraction(1)
        values = _TABLE.ensure(1 / lo)[0]
        i = bisect.bisect_left(values, m_lo)
        j = bisect.bisect_left(values, 1 / lo)
        for idx in range(j - 1, i - 1, -1):  # descending m -> ascending 1/m
            base, k = _TABLE.pair_at(idx)
            out.append(PrimePower(base, -k))
    # integer part: prime powers in (max(lo, 1), hi]
    if hi >= 2:
        values = _TABLE.ensure(hi)[0]
        i = bisect.bisect_right(values, lo)
        j = bisect.bisect_right(values, hi)
        for idx in range(i, j):
            out.append(PrimePower(*_TABLE.pair_at(idx)))
    return out


def _base_of(n: int) -> int:
    return _TABLE.pair_at(_TABLE.index_of(n))[0]


def _exp_of(n: int) -> int:
    return _TABLE.pair_at(_TABLE.index_of(n))[1]


def phi(x: RationalLike) -> Fraction:
    """The bracket product prod_p p^[[log_p x]], exactly.

    Piecewise constant with jumps at prime powers: phi(x) = phi(n) for the
    largest prime power n <= x, phi == 1 on [1/2, 2), and
    phi(1/m) = base(m)/phi(m) for integer prime powers m.
    """
    frac = as_fraction(x)
    if frac >= 2:
        return Fraction(_TABLE.exact_phi_int(_TABLE.floor_int(frac)))
    if frac >= Fraction(1, 2):
        return Fraction(1)
    # largest prime power <= x is 1/m for the smallest integer prime
    # power m >= 1/x
    inv = 1 / frac
    m = _TABLE.floor_int(inv)
    if m is None or Fraction(m) != inv:
        m = _TABLE.succ_int(inv)
    return Fraction(_base_of(m), _TABLE.exact_phi_int(m))


def log_phi(x: RationalLike) -> float:
    """log(phi(x)) as a float; equals the Chebyshev function psi(x) for
    x >= 2. Safe for arguments far beyond float overflow of phi itself."""
    frac = as_fraction(x)
    if frac >= 2:
        return _TABLE.log_phi_int(_TABLE.floor_int(frac))
    if frac >= Fraction(1, 2):
        return 0.0
    inv = 1 / frac
    m = _TABLE.floor_int(inv)
    if m is None or Fraction(m) != inv:
        m = _TABLE.succ_int(inv)
    return math.log(_base_of(m)) - _TABLE.log_phi_int(m)


def is_prime_power(x: RationalLike) -> bool:
    try:
        return _as_prime_power(as_fraction(x)) is not None
    except (ValueError, ZeroDivisionError):
        return False


def prime_power_pairs(x: RationalLike) -> tuple[int, int]:
    """(p, k) of a prime-power value; ValueError otherwise."""
    pk = _as_prime_power(as_fraction(x))
    if pk is None:
        raise ValueError(f"{x} is not a prime power")
    return pk


def iter_int_prime_powers(limit: int) -> Iterable[tuple[int, int, int]]:
    """(value, p, k) for all integer prime powers <= limit, ascending."""
    values, bases, exps, _ = _TABLE.extend_to(limit)
    i = bisect.bisect_right(values, limit)
    return list(zip(values[:i], bases[:i], exps[:i]))
