"""Dedekind sums, the eta/theta/psi multipliers and Gamma_0(N) enumeration.

Multiplier values are roots of unity and are returned exactly as a
``Fraction`` of a turn in [0, 1): the value is e(turn).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Iterator

from .arith import kronecker
from .numerics import as_turn

HALF = Fraction(1, 2)

#: psi((1 1; 0 1)) = e(-1/24)
ALPHA_PSI = Fraction(1, 24)
#: psi at the cusp 0: psi((1 0; -2 1)) = e(-1/3); recorded, no general cusp machinery
PSI_CUSP_ZERO_TURN = Fraction(2, 3)


@dataclass(frozen=True)
class GammaZeroMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"not unimodular: {self}")

    def __matmul__(self, other: "GammaZeroMatrix") -> "GammaZeroMatrix":
        return GammaZeroMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self):
        return GammaZeroMatrix(-self.a, -self.b, -self.c, -self.d)

    def in_level(self, N: int) -> bool:
        return self.c % N == 0


def _sign_turn(symbol: int) -> Fraction:
    if symbol == 0:
        raise ValueError("symbol vanishes; matrix entries not coprime")
    return Fraction(0) if symbol == 1 else HALF


@lru_cache(maxsize=1 << 18)
def dedekind_sum(d: int, c: int) -> Fraction:
    """s(d, c) via the reciprocity law, O(log c) steps. Requires gcd(d, c) = 1."""
    if c < 1:
        raise ValueError("c must be positive")
    if gcd(d, c) != 1:
        raise ValueError(f"gcd({d}, {c}) != 1")
    d %= c
    total, sign = Fraction(0), 1
    # s(d,c) + s(c,d) = -1/4 + (d/c + c/d + 1/(cd))/12, and s(c,d) = s(c mod d, d)
    while c > 1:
        total += sign * (Fraction(d * d + c * c + 1, 12 * c * d) - Fraction(1, 4))
        sign = -sign
        d, c = c % d, d
    return total


def dedekind_sum_direct(d: int, c: int) -> Fraction:
    """The defining O(c) sawtooth sum, used as an oracle."""
    total = Fraction(0)
    for r in range(1, c):
        x = Fraction(d * r, c)
        total += Fraction(r, c) * (x - (x.numerator // x.denominator) - HALF)
    return total


def eta_multiplier(g: GammaZeroMatrix) -> Fraction:
    """nu_eta(g) as a turn, from e(-1/8) e(-s(d,c)/2) e((a+d)/(24c)) for c > 0.

    c = 0 uses the translation rule and c < 0 uses nu_eta(-g) = i nu_eta(g).
    """
    a, b, c, d = g.a, g.b, g.c, g.d
    if c == 0:
        # eta(tau + b) = e(b/24) eta(tau); sqrt(-1) = i for d = -1
        return as_turn(Fraction(b * d, 24) + (Fraction(-1, 4) if d < 0 else 0))
    if c < 0:
        return as_turn(eta_multiplier(-g) + Fraction(1, 4))
    return as_turn(Fraction(-1, 8) - dedekind_sum(d, c) / 2 + Fraction(a + d, 24 * c))


def eta_multiplier_kronecker(g: GammaZeroMatrix) -> Fraction:
    """nu_eta(g) for c > 0 from the Kronecker-symbol formula, split by parity of c."""
    a, b, c, d = g.a, g.b, g.c, g.d
    if c <= 0:
        raise ValueError("the Kronecker-symbol formula needs c > 0")
    if c % 2:
        sym = kronecker(d, c)
        phase = Fraction((a + d) * c - b * d * (c * c - 1) - 3 * c, 24)
    else:
        sym = kronecker(c, d)
        phase = Fraction((a + d) * c - b * d * (c * c - 1) + 3 * d - 3 - 3 * c * d, 24)
    return as_turn(_sign_turn(sym) + phase)


def theta_multiplier(g: GammaZeroMatrix) -> Fraction:
    """nu_theta(g) = (c/d) eps_d^{-1} on Gamma_0(4)."""
    if g.c % 4:
        raise ValueError("theta multiplier needs 4 | c")
    eps_inv = Fraction(0) if g.d % 4 == 1 else Fraction(-1, 4)
    return as_turn(_sign_turn(kronecker(g.c, g.d)) + eps_inv)


def twisted_theta_multiplier(g: GammaZeroMatrix, D: int = 12) -> Fraction:
    """(D/d) nu_theta(g), a quadratic twist of the theta multiplier."""
    return as_turn(_sign_turn(kronecker(D, g.d)) + theta_multiplier(g))


def psi_multiplier(g: GammaZeroMatrix) -> Fraction:
    """psi on Gamma_0(2): i^(c/2) [(-1/d) if 4 | c] conj(nu_eta(g))."""
    if g.c % 2:
        raise ValueError("psi needs 2 | c")
    turn = Fraction(g.c, 8) - eta_multiplier(g)
    if g.c % 4 == 0:
        turn += _sign_turn(kronecker(-1, g.d))
    return as_turn(turn)


@dataclass(frozen=True)
class Multiplier:
    """A multiplier system on Gamma_0(level) with its cusp parameter alpha at infinity."""

    name: str
    level: int
    alpha: Fraction
    turn: Callable[[GammaZeroMatrix], Fraction] = field(repr=False)
    conjugated: bool = False

    def __call__(self, g: GammaZeroMatrix) -> Fraction:
        t = self.turn(g)
        return as_turn(-t) if self.conjugated else t

    def conjugate(self) -> "Multiplier":
        alpha = 1 - self.alpha if self.alpha else Fraction(0)
        name = self.name[:-4] if self.conjugated else self.name + "_bar"
        return Multiplier(name, self.level, alpha, self.turn, not self.conjugated)

    def shifted(self, m: int) -> Fraction:
        """m_nu = m - alpha_nu."""
        return m - self.alpha


ETA = Multiplier("eta", 1, Fraction(23, 24), eta_multiplier)
THETA = Multiplier("theta", 4, Fraction(0), theta_multiplier)
PSI = Multiplier("psi", 2, ALPHA_PSI, psi_multiplier)
THETA12 = Multiplier("theta12", 24, Fraction(0), twisted_theta_multiplier)

MULTIPLIERS = {m.name: m for m in (ETA, THETA, PSI, THETA12)}


def enumerate_gamma0(c: int, N: int = 1) -> Iterator[GammaZeroMatrix]:
    """Matrices (a b; c d) with 0 <= a, d < c and ad = 1 (mod c), in ascending d."""
    if c < 1:
        raise ValueError("c must be positive")
    if c % N:
        raise ValueError(f"level {N} does not divide c = {c}")
    if c == 1:
        yield GammaZeroMatrix(0, -1, 1, 0)
        return
    for d in range(1, c):
        if gcd(d, c) == 1:
            a = pow(d, -1, c)
            yield GammaZeroMatrix(a, (a * d - 1) // c, c, d)
