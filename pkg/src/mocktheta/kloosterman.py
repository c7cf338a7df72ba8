"""Finite exponential sums: S(m,n,c,nu), A_c(n), F_c(n), Gauss sums and Weil-type bounds.

Every summand is a root of unity of known order, so sums are accumulated
exactly and rounded once at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp

from .arith import factorint, kronecker, omega_odd, sqrt_mod_all
from .modular import MULTIPLIERS, PSI, Multiplier, dedekind_sum, enumerate_gamma0
from .numerics import DEFAULT_PREC, RootOfUnityAccumulator, e_of, index_of


def tolerance(prec: int, slack_bits: int = 16):
    return mpmath.ldexp(1, slack_bits - prec)


@dataclass(frozen=True)
class KloostermanValue:
    """An exponential sum: ``scale * exact`` evaluated to ``value``."""

    kind: str
    m: int | None
    n: int
    c: int
    exact: RootOfUnityAccumulator
    value: mpmath.mpc
    scale: mpmath.mpf | None = None

    def __abs__(self):
        return abs(self.value)

    def __complex__(self):
        return complex(self.value)


@lru_cache(maxsize=4096)
def _kloosterman_table(c: int, name: str, conjugated: bool) -> tuple[tuple[int, int, int], ...]:
    # (a, d, index of conj(nu(gamma)) mod 24c) for each gamma in ascending d
    mult = MULTIPLIERS[name]
    if conjugated:
        mult = mult.conjugate()
    M = 24 * c
    return tuple(
        (g.a, g.d, index_of(-mult(g), M)) for g in enumerate_gamma0(c, mult.level)
    )


def kloosterman_acc(m: int, n: int, c: int, mult: Multiplier = PSI) -> RootOfUnityAccumulator:
    """S(m, n, c, nu) as an exact sum of 24c-th roots of unity."""
    if c < 1 or c % mult.level:
        raise ValueError(f"c = {c} is not a positive multiple of the level {mult.level}")
    base = mult.name[:-4] if mult.conjugated else mult.name
    table = _kloosterman_table(c, base, mult.conjugated)
    # e((m_nu a + n_nu d)/c) = e((24 m_nu a + 24 n_nu d) / (24c)); 24 alpha is integral
    mu = 24 * mult.shifted(m)
    nu = 24 * mult.shifted(n)
    assert mu.denominator == 1 and nu.denominator == 1
    mu, nu = mu.numerator, nu.numerator
    M = 24 * c
    counts: dict[int, int] = {}
    for a, d, k in table:
        idx = (k + mu * a + nu * d) % M
        counts[idx] = counts.get(idx, 0) + 1
    return RootOfUnityAccumulator(M, counts)


def kloosterman_S(m: int, n: int, c: int, mult: Multiplier = PSI, prec: int = DEFAULT_PREC) -> KloostermanValue:
    acc = kloosterman_acc(m, n, c, mult)
    return KloostermanValue(f"S[{mult.name}]", m, n, c, acc, acc.evaluate(prec))


@lru_cache(maxsize=4096)
def _dedekind_indices(c: int) -> tuple[tuple[int, int], ...]:
    # (d, 6c s(d,c)) over reduced residues d mod c
    if c == 1:
        return ((0, 0),)
    out = []
    for d in range(1, c):
        if math.gcd(d, c) == 1:
            s = dedekind_sum(d, c) * 6 * c
            assert s.denominator == 1
            out.append((d, s.numerator))
    return tuple(out)


def A_c_acc(c: int, n: int) -> RootOfUnityAccumulator:
    """A_c(n) = sum_d e^{pi i s(d,c)} e(-dn/c) as 12c-th roots of unity."""
    if c < 1:
        raise ValueError("c must be positive")
    M = 12 * c
    counts: dict[int, int] = {}
    for d, k in _dedekind_indices(c):
        # e(s/2) = e(6c s / 12c), e(-dn/c) = e(-12 d n / 12c)
        idx = (k - 12 * d * n) % M
        counts[idx] = counts.get(idx, 0) + 1
    return RootOfUnityAccumulator(M, counts)


def A_c_direct(c: int, n: int, prec: int = DEFAULT_PREC) -> KloostermanValue:
    acc = A_c_acc(c, n)
    return KloostermanValue("A_direct", None, n, c, acc, acc.evaluate(prec))


def _residue_scan(t: int, modulus: int, factors=None) -> list[int]:
    return sqrt_mod_all(t, modulus, factors)


def A_c_selberg_whiteman(c: int, n: int, prec: int = DEFAULT_PREC) -> KloostermanValue:
    """sqrt(c/48) * sum_{x mod 24c, x^2 = 1-24n} (12/x) e(x/(12c))."""
    if c < 1:
        raise ValueError("c must be positive")
    M = 12 * c
    counts: dict[int, int] = {}
    for x in _residue_scan(1 - 24 * n, 24 * c):
        k = x % M
        counts[k] = counts.get(k, 0) + kronecker(12, x)
    acc = RootOfUnityAccumulator(M, counts)
    with mp.workprec(prec + 8):
        scale = mpmath.sqrt(mpmath.mpf(c) / 48)
        value = scale * acc.evaluate(prec + 8)
    with mp.workprec(prec):
        return KloostermanValue("A_selberg_whiteman", None, n, c, acc, +value, +scale)


def F_c_acc(c: int, n: int, factors=None) -> RootOfUnityAccumulator:
    """sum_{x mod 24c, x^2 = 1-24n} (-12/x) e(x/(12c)), folded with e(1/2) = -1."""
    M = 12 * c
    counts: dict[int, int] = {}
    for x in _residue_scan(1 - 24 * n, 24 * c, factors):
        k = x % M
        counts[k] = counts.get(k, 0) + kronecker(-12, x)
    return RootOfUnityAccumulator(M, counts).folded()


def F_c(c: int, n: int, prec: int = DEFAULT_PREC):
    if c < 1:
        raise ValueError("c must be positive")
    return F_c_acc(c, n).evaluate(prec)


def F_2a_pairing(a: int, n: int, prec: int = DEFAULT_PREC):
    """F_{2a}(n) = 2 sum_{b mod 24a, b^2 = -D_n (mod 48a)} (-12/b) e(b/(24a))."""
    M = 24 * a
    counts: dict[int, int] = {}
    for b in _residue_scan(1 - 24 * n, 48 * a):
        if b < M:
            counts[b] = counts.get(b, 0) + 2 * kronecker(-12, b)
    return RootOfUnityAccumulator(M, counts).evaluate(prec)


def shifted_A_argument(c: int, n: int) -> int:
    """n - c(1 + (-1)^c)/4, i.e. n for odd c and n - c/2 for even c."""
    return n - (c // 2 if c % 2 == 0 else 0)


def andrews_sign(c: int) -> int:
    return -1 if ((c + 1) // 2) % 2 else 1


def lemma_fq_kloos_sides(c: int, n: int, prec: int = DEFAULT_PREC):
    """Both sides of (-1)^floor((c+1)/2) A_2c(n - c(1+(-1)^c)/4) = e(1/8) conj(S(0,n,2c,psi))."""
    lhs_acc = A_c_acc(2 * c, shifted_A_argument(c, n))
    if andrews_sign(c) < 0:
        lhs_acc = -lhs_acc
    rhs_acc = kloosterman_acc(0, n, 2 * c, PSI).conjugate().rotate(Fraction(1, 8))
    return lhs_acc.evaluate(prec), rhs_acc.evaluate(prec)


def lemma_fq_kloos_check(c: int, n: int, prec: int = DEFAULT_PREC) -> bool:
    lhs, rhs = lemma_fq_kloos_sides(c, n, prec)
    with mp.workprec(prec):
        return abs(lhs - rhs) <= tolerance(prec)


def fkmk_sides(c: int, n: int, prec: int = DEFAULT_PREC):
    """F_{2c}(n) and sqrt(24/c) e(-1/8) conj(S(0, n, 2c, psi))."""
    lhs = F_c(2 * c, n, prec)
    acc = kloosterman_acc(0, n, 2 * c, PSI).conjugate().rotate(Fraction(-1, 8))
    with mp.workprec(prec + 8):
        rhs = mpmath.sqrt(mpmath.mpf(24) / c) * acc.evaluate(prec + 8)
    with mp.workprec(prec):
        return lhs, +rhs


def fkmk_check(c: int, n: int, prec: int = DEFAULT_PREC) -> bool:
    lhs, rhs = fkmk_sides(c, n, prec)
    with mp.workprec(prec):
        return abs(lhs - rhs) <= tolerance(prec)


def selberg_whiteman_check(c: int, n: int, prec: int = DEFAULT_PREC) -> bool:
    a = A_c_direct(c, n, prec).value
    b = A_c_selberg_whiteman(c, n, prec).value
    with mp.workprec(prec):
        return abs(a - b) <= tolerance(prec)


# Gauss sums -----------------------------------------------------------------


@dataclass(frozen=True)
class GaussSumValue:
    a: int
    b: int
    c: int
    value: mpmath.mpc
    method: str  # "closed", "zero" or "brute"


def gauss_sum_brute(a: int, b: int, c: int, prec: int = DEFAULT_PREC):
    counts: dict[int, int] = {}
    for x in range(c):
        k = (a * x * x + b * x) % c
        counts[k] = counts.get(k, 0) + 1
    return RootOfUnityAccumulator(c, counts).evaluate(prec)


def _eps(d: int) -> Fraction:
    # eps_d as a turn: 1 if d = 1 (mod 4), i if d = 3 (mod 4)
    return Fraction(0) if d % 4 == 1 else Fraction(1, 4)


def _gauss_closed(a: int, b: int, c: int):
    """(turn, sqrt_arg) with G(a,b,c) = e(turn) sqrt(sqrt_arg) for (a,c) = 1, or None."""
    if c % 2:
        sym = kronecker(a, c)
        inv = pow(4 * a, -1, c) if c > 1 else 0
        turn = Fraction(-inv * b * b, c) + _eps(c) + (Fraction(1, 2) if sym < 0 else 0)
        return turn, c
    if c % 4 == 0:
        # b even here; (1 + i) = sqrt(2) e(1/8)
        sym = kronecker(c, a)
        inv = pow(a, -1, c)
        turn = Fraction(-inv * (b // 2) ** 2, c) + Fraction(1, 8) - _eps(a) + (Fraction(1, 2) if sym < 0 else 0)
        return turn, 2 * c
    return None


def gauss_sum(a: int, b: int, c: int, prec: int = DEFAULT_PREC) -> GaussSumValue:
    """G(a,b,c) = sum_{x mod c} e((a x^2 + b x)/c).

    After removing d = (a, c) (the sum vanishes unless d | b), the closed forms
    cover odd c and 4 | c; c = 2 (mod 4) falls back to direct summation.
    """
    if c < 1 or a == 0:
        raise ValueError("need c > 0 and a != 0")
    d = math.gcd(a, c)
    with mp.workprec(prec):
        zero = mpmath.mpc(0)
    if b % d:
        return GaussSumValue(a, b, c, zero, "zero")
    a1, b1, c1 = a // d, b // d, c // d
    if c1 % 4 == 0 and b1 % 2:
        return GaussSumValue(a, b, c, zero, "zero")
    closed = _gauss_closed(a1, b1, c1)
    with mp.workprec(prec + 8):
        if closed is None:
            val, method = d * gauss_sum_brute(a1, b1, c1, prec + 8), "brute"
        else:
            turn, root = closed
            val, method = d * mpmath.sqrt(root) * e_of(turn, prec + 8), "closed"
    with mp.workprec(prec):
        return GaussSumValue(a, b, c, +val, method)


# Bounds ---------------------------------------------------------------------


def lehmer_bound(c: int, prec: int = DEFAULT_PREC):
    """2^omega_o(c) sqrt(2c), bounding |A_2c(n - c(1+(-1)^c)/4)|."""
    with mp.workprec(prec):
        return 2 ** omega_odd(c) * mpmath.sqrt(2 * c)


def weil_psi_bound(c: int, prec: int = DEFAULT_PREC):
    """2^omega_o(c) sqrt(2c/(3,c)), bounding |S(0, n, 2c, psi)|."""
    with mp.workprec(prec):
        return 2 ** omega_odd(c) * mpmath.sqrt(mpmath.mpf(2 * c) / math.gcd(3, c))


def weil_bound(n: int, c: int, prec: int = DEFAULT_PREC):
    """tau(c) (n,c)^(1/2) c^(1/2) for quadratic twists of the theta multiplier."""
    tau = math.prod(k + 1 for k in factorint(c).values())
    with mp.workprec(prec):
        return tau * mpmath.sqrt(math.gcd(n, c)) * mpmath.sqrt(c)


def abs_S_psi_via_F(c: int, n: int, prec: int = DEFAULT_PREC):
    """|S(0, n, 2c, psi)| = sqrt(c/24) |F_2c(n)|, from the residue scan instead of the matrix sum."""
    F = F_c(2 * c, n, prec + 8)
    with mp.workprec(prec):
        return mpmath.sqrt(mpmath.mpf(c) / 24) * abs(F)


def weil_psi_ratio(c: int, n: int, prec: int = DEFAULT_PREC, via: str = "F"):
    """|S(0, n, 2c, psi)| divided by its Weil-type bound."""
    if via == "F":
        s = abs_S_psi_via_F(c, n, prec)
    elif via == "direct":
        S = kloosterman_S(0, n, 2 * c, PSI, prec).value
        with mp.workprec(prec):
            s = abs(S)
    else:
        raise ValueError(f"unknown route {via!r}")
    with mp.workprec(prec):
        return s / weil_psi_bound(c, prec)
