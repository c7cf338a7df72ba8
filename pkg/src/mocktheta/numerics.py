"""Arbitrary-precision substrate.

Real and complex values are mpmath ``mpf``/``mpc`` numbers; the working
precision (in bits) is passed explicitly to every function and applied with
``mpmath.workprec`` so callers never depend on the global context.

Sums of roots of unity are kept exact in :class:`RootOfUnityAccumulator`
until a single final evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import mpmath
from mpmath import mp

DEFAULT_PREC = 192


class PrecisionError(ArithmeticError):
    """A numerical self-check (e.g. vanishing imaginary part) failed."""


@dataclass(frozen=True)
class PrecisionPolicy:
    base_bits: int = 64
    guard_bits: int = 64

    def bits(self, n: int, N: float = 0) -> int:
        """Working precision for argument ``n`` and truncation point ``N``.

        The dominant Bessel term grows like exp(pi*sqrt(24n-1)/6), so that
        many bits are needed just to resolve the integer part of the sum.
        """
        dynamic = 0
        if n > 0:
            dynamic = math.ceil(math.pi * math.sqrt(24 * n - 1) / (6 * math.log(2)))
        extra = math.ceil(10 * math.log2(max(N, 0) + 2))
        return max(self.base_bits, dynamic + self.guard_bits + extra)


DEFAULT_POLICY = PrecisionPolicy()


def as_turn(x) -> Fraction:
    """Reduce a rational number of turns into [0, 1)."""
    x = Fraction(x)
    return x - math.floor(x)


@lru_cache(maxsize=1 << 16)
def _unit(num: int, den: int, prec: int):
    # num/den reduced, 0 <= num < den
    with mp.workprec(prec + 8):
        t = mpmath.mpf(2 * num) / den
        c, s = mpmath.cospi(t), mpmath.sinpi(t)
    with mp.workprec(prec):
        return +c, +s


def e_of(x, prec: int = DEFAULT_PREC):
    """exp(2*pi*i*x) for rational ``x``; x and x+1 give identical results."""
    r = as_turn(x)
    c, s = _unit(r.numerator, r.denominator, prec)
    with mp.workprec(prec):
        return mpmath.mpc(c, s)


class RootOfUnityAccumulator:
    """Exact integer combination sum(counts[k] * e(k/M)) of M-th roots of unity.

    Instances are immutable; every operation returns a new accumulator.
    """

    __slots__ = ("modulus", "_counts")

    def __init__(self, modulus: int, counts: Mapping[int, int] | None = None):
        if modulus < 1:
            raise ValueError("modulus must be positive")
        self.modulus = int(modulus)
        acc: dict[int, int] = {}
        for k, v in (counts or {}).items():
            k %= self.modulus
            acc[k] = acc.get(k, 0) + int(v)
        self._counts = {k: v for k, v in sorted(acc.items()) if v}

    @classmethod
    def from_turns(cls, modulus: int, terms: Iterable) -> "RootOfUnityAccumulator":
        """Build from rational turns, each optionally paired with an integer weight."""
        acc: dict[int, int] = {}
        for term in terms:
            if isinstance(term, tuple):
                turn, weight = term
            else:
                turn, weight = term, 1
            k = index_of(turn, modulus)
            acc[k] = acc.get(k, 0) + weight
        return cls(modulus, acc)

    @property
    def counts(self) -> dict[int, int]:
        return dict(self._counts)

    def items(self):
        return self._counts.items()

    def __len__(self):
        return len(self._counts)

    def __eq__(self, other):
        if not isinstance(other, RootOfUnityAccumulator):
            return NotImplemented
        return self.modulus == other.modulus and self._counts == other._counts

    def __hash__(self):
        return hash((self.modulus, tuple(self._counts.items())))

    def __repr__(self):
        return f"RootOfUnityAccumulator({self.modulus}, {self._counts})"

    def lift(self, factor: int) -> "RootOfUnityAccumulator":
        """Re-index to modulus factor*M without changing the represented value."""
        if factor < 1:
            raise ValueError("lift factor must be a positive integer")
        return RootOfUnityAccumulator(
            self.modulus * factor, {k * factor: v for k, v in self._counts.items()}
        )

    def __add__(self, other: "RootOfUnityAccumulator") -> "RootOfUnityAccumulator":
        m = math.lcm(self.modulus, other.modulus)
        a, b = self.lift(m // self.modulus), other.lift(m // other.modulus)
        merged = dict(a._counts)
        for k, v in b._counts.items():
            merged[k] = merged.get(k, 0) + v
        return RootOfUnityAccumulator(m, merged)

    def __neg__(self):
        return RootOfUnityAccumulator(self.modulus, {k: -v for k, v in self._counts.items()})

    def conjugate(self) -> "RootOfUnityAccumulator":
        return RootOfUnityAccumulator(self.modulus, {-k: v for k, v in self._counts.items()})

    def rotate(self, turn) -> "RootOfUnityAccumulator":
        """Multiply by e(turn); the modulus grows if the turn needs it."""
        turn = as_turn(turn)
        acc = self
        if self.modulus % turn.denominator:
            m = math.lcm(self.modulus, turn.denominator)
            acc = self.lift(m // self.modulus)
        shift = index_of(turn, acc.modulus)
        return RootOfUnityAccumulator(acc.modulus, {k + shift: v for k, v in acc._counts.items()})

    def folded(self) -> "RootOfUnityAccumulator":
        """Use e(1/2) = -1 to move every index into [0, M/2) (M even)."""
        if self.modulus % 2:
            return self
        half = self.modulus // 2
        acc: dict[int, int] = {}
        for k, v in self._counts.items():
            if k >= half:
                k, v = k - half, -v
            acc[k] = acc.get(k, 0) + v
        return RootOfUnityAccumulator(self.modulus, acc)

    def is_zero(self) -> bool:
        """True if the folded form vanishes; a False answer is not a proof of nonvanishing."""
        return not self.folded()._counts

    def evaluate(self, prec: int = DEFAULT_PREC):
        """Sum in ascending residue order with exact-then-round summation."""
        re, im = [], []
        with mp.workprec(prec):
            for k, v in self._counts.items():
                g = math.gcd(k, self.modulus)
                c, s = _unit(k // g, self.modulus // g, prec)
                re.append(c * v)
                im.append(s * v)
            return mpmath.mpc(mpmath.fsum(re), mpmath.fsum(im))


def index_of(turn, modulus: int) -> int:
    """Residue k with e(turn) = e(k/modulus); the turn's denominator must divide modulus."""
    turn = Fraction(turn)
    if modulus % turn.denominator:
        raise ValueError(f"turn {turn} is not a {modulus}-th root of unity")
    return turn.numerator * (modulus // turn.denominator) % modulus


def accumulator_eval(acc: RootOfUnityAccumulator, prec: int = DEFAULT_PREC):
    return acc.evaluate(prec)


def _check_positive(x):
    if x <= 0:
        raise ValueError(f"argument must be positive, got {x}")


def bessel_I_half(x, prec: int = DEFAULT_PREC):
    """I_{1/2}(x) = sqrt(2/(pi x)) sinh x."""
    with mp.workprec(prec + 16):
        x = mpmath.mpf(x)
        _check_positive(x)
        val = mpmath.sqrt(2 / (mpmath.pi * x)) * mpmath.sinh(x)
    with mp.workprec(prec):
        return +val


def _bessel_I_three_half_series(x):
    # sum_k (x/2)^(2k+3/2) / (k! Gamma(k+5/2)), Gamma(5/2) = 3 sqrt(pi)/4
    h2 = (x / 2) ** 2
    term = (x / 2) ** mpmath.mpf(1.5) * 4 / (3 * mpmath.sqrt(mpmath.pi))
    total, k = term, 0
    eps = mpmath.eps
    while abs(term) > eps * abs(total):
        term = term * h2 / ((k + 1) * (k + mpmath.mpf(5) / 2))
        total += term
        k += 1
    return total


def bessel_I_three_half(x, prec: int = DEFAULT_PREC):
    """I_{3/2}(x) = sqrt(2/(pi x)) (cosh x - sinh(x)/x).

    The closed form cancels badly for x < 1, where the power series is used.
    """
    with mp.workprec(prec + 16):
        x = mpmath.mpf(x)
        _check_positive(x)
        if x < 1:
            val = _bessel_I_three_half_series(x)
        else:
            val = mpmath.sqrt(2 / (mpmath.pi * x)) * (mpmath.cosh(x) - mpmath.sinh(x) / x)
    with mp.workprec(prec):
        return +val


def _half_odd(order) -> Fraction:
    nu = Fraction(order).limit_denominator(2)
    if nu.denominator != 2 or nu < Fraction(1, 2) or float(nu) != float(order):
        raise ValueError(f"order must be a half-odd integer >= 1/2, got {order}")
    return nu


def bessel_J_half_odd(order, x, prec: int = DEFAULT_PREC):
    """J_nu(x) for nu in {1/2, 3/2, ...} by upward recurrence from J_{-1/2}, J_{1/2}.

    The recurrence loses about 2*nu*log2(nu/x) bits when x < nu; the working
    precision is raised by that amount before rounding back.
    """
    nu = _half_odd(order)
    x_f = float(x)
    if not x_f > 0:
        raise ValueError(f"argument must be positive, got {x}")
    extra = int(2 * nu * math.ceil(math.log2(max(1.0, float(nu) / x_f)))) + 16
    with mp.workprec(prec + extra):
        x = mpmath.mpf(x)
        pref = mpmath.sqrt(2 / (mpmath.pi * x))
        j_prev, j_cur = pref * mpmath.cos(x), pref * mpmath.sin(x)
        v = Fraction(1, 2)
        while v < nu:
            j_prev, j_cur = j_cur, (2 * v.numerator / (v.denominator * x)) * j_cur - j_prev
            v += 1
    with mp.workprec(prec):
        return +j_cur


LANDAU_C0 = 0.7857468704  # sup_{v>0, x>0} |J_v(x)| x^(1/3)


def nearest_int(x) -> int:
    """Exact nearest integer to an mpf (ties round up), independent of the context precision."""
    if not isinstance(x, mpmath.mpf):
        with mp.workprec(256):
            x = mpmath.mpf(x)
    if not mpmath.isfinite(x):
        raise ValueError(f"cannot round {x}")
    sign, man, exp, _ = x._mpf_
    man = -int(man) if sign else int(man)
    if exp >= 0:
        return man << exp
    return math.floor(Fraction(man, 1 << -exp) + Fraction(1, 2))
