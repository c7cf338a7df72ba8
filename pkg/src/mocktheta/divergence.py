"""Primes p where F_{2p}(n) stays large, and the divergent absolute series.

For primes p >= 5 with ((1-24n)/p) = 1 pick m_p with 48^2 m_p^2 = 1-24n (mod p).
Then F_{2p}(n) = 2 sqrt(24) i (-1)^n (-12/p) e((p^2-1)/48) cos(4 pi m_p/p), so
|F_{2p}(n)| >= 2 sqrt(24) cos(pi/4) whenever 0 < m_p/p <= 1/16.
"""

from __future__ import annotations

import bisect
import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
from mpmath import mp
from sympy import primepi, primerange

from .arith import kronecker, legendre, sqrt_mod_p
from .kloosterman import F_c_acc
from .numerics import bessel_I_half, e_of

__all__ = [
    "PrimeWitness",
    "sqrt_mod_p",
    "square_roots_m",
    "F2p_closed_form",
    "F2p_floor",
    "scan_set_S",
    "density_table",
    "absolute_partial_sums",
    "absolute_partial_sum",
    "lower_bound_constant",
]

S_THRESHOLD = Fraction(1, 16)


@dataclass(frozen=True)
class PrimeWitness:
    p: int
    m_p: int
    eps_np: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.m_p, self.p)

    def check(self, n: int) -> bool:
        """Exact congruence checks on the witness."""
        p, m = self.p, self.m_p
        return (
            p >= 5
            and 0 < m < p
            and (48 * 48 * m * m - (1 - 24 * n)) % p == 0
            and legendre(1 - 24 * n, p) == 1
            and (1 + 24 * self.eps_np - p * p * (1 - 24 * n)) % 48 == 0
        )


def eps_np(n: int, p: int) -> int:
    """epsilon in {0, 1} with 1 + 24 epsilon = p^2 (1 - 24n) (mod 48)."""
    r = p * p * (1 - 24 * n) % 48
    if r not in (1, 25):
        raise ValueError(f"p^2(1-24n) = {r} (mod 48) for p={p}")
    return (r - 1) // 24


def square_roots_m(n: int, p: int) -> tuple[int, int] | None:
    """Both solutions 0 < m < p of 48^2 m^2 = 1-24n (mod p), smaller first."""
    if p < 5:
        raise ValueError("p must be a prime >= 5")
    r = sqrt_mod_p((1 - 24 * n) % p, p)
    if r is None or r == 0:
        return None
    m = r * pow(48, -1, p) % p
    return tuple(sorted((m, p - m)))


def F2p_closed_form(p: int, n: int, prec: int = 192):
    if p < 5 or legendre(1 - 24 * n, p) != 1:
        raise ValueError(f"((1-24n)/p) != 1 for p={p}, n={n}")
    m = square_roots_m(n, p)[0]
    with mp.workprec(prec + 16):
        sign = (-1) ** n * kronecker(-12, p)
        val = (2 * mpmath.sqrt(24) * sign * mpmath.cos(4 * mpmath.pi * m / p)
               * e_of(Fraction(p * p - 1, 48), prec + 16) * mpmath.mpc(0, 1))
    with mp.workprec(prec):
        return +val


def F2p_abs(p: int, m: int, prec: int = 192):
    with mp.workprec(prec):
        return 2 * mpmath.sqrt(24) * abs(mpmath.cos(4 * mpmath.pi * m / p))


def F2p_floor(prec: int = 192):
    """2 sqrt(24) cos(pi/4) = 4 sqrt(3), the lower bound of |F_{2p}(n)| on S."""
    with mp.workprec(prec):
        return 2 * mpmath.sqrt(24) * mpmath.cos(mpmath.pi / 4)


def witness(n: int, p: int) -> PrimeWitness | None:
    """The smallest m_p with m_p/p <= 1/16, or None if p is not in S."""
    if legendre(1 - 24 * n, p) != 1:
        return None
    m = square_roots_m(n, p)[0]
    if Fraction(m, p) > S_THRESHOLD:
        return None
    return PrimeWitness(p, m, eps_np(n, p))


def scan_set_S(n: int, p_max: int) -> list[PrimeWitness]:
    """All primes 5 <= p <= p_max in S, ascending."""
    if n < 1:
        raise ValueError("n must be positive")
    return [w for p in primerange(5, p_max + 1) if (w := witness(n, p)) is not None]


def density_table(witnesses: Sequence[PrimeWitness], grid: Iterable[int]) -> list[dict]:
    """#S(X)/pi(X) on the grid, with pi(X) counting all primes up to X."""
    ps = [w.p for w in witnesses]
    rows = []
    for X in grid:
        count = bisect.bisect_right(ps, X)
        total = int(primepi(X))
        rows.append({"X": X, "count_S": count, "pi_X": total, "density": count / total})
    return rows


def lower_bound_constant(n: int, prec: int = 192):
    """kappa with c^{-1}|S(0,n,c,psi)| I_{1/2}(pi sqrt(D)/(6c)) >= kappa/p at c = 2p, p in S.

    From |S(0,n,2p,psi)| = sqrt(p/24)|F_{2p}(n)|, |F_{2p}| >= 2 sqrt(24) cos(pi/4) and
    I_{1/2}(x) >= sqrt(2x/pi) one gets kappa = D^(1/4)/sqrt(12).
    """
    with mp.workprec(prec):
        return mpmath.root(24 * n - 1, 4) / mpmath.sqrt(12)


def absolute_partial_sums(n: int, grid: Sequence[int], prec: int = 96) -> list[dict]:
    """sum_{c <= 2X, c even} c^{-1}|S(0,n,c,psi)| I_{1/2}(pi sqrt(D)/(6c)) for each X in the grid.

    |S(0,n,2a,psi)| is taken as sqrt(a/24)|F_{2a}(n)|, and the comparison sum
    sum_{p <= X, p in S} 1/p is reported next to it.
    """
    if n < 1:
        raise ValueError("n must be positive")
    grid = sorted(grid)
    if not grid or grid[0] < 2:
        raise ValueError("need X >= 2")
    D = 24 * n - 1
    S_primes = {w.p for w in scan_set_S(n, grid[-1])}
    rows = []
    with mp.workprec(prec):
        x0 = mpmath.pi * mpmath.sqrt(D) / 6
        kappa = lower_bound_constant(n, prec)
        total, recip, increments = mpmath.mpf(0), mpmath.mpf(0), []
        gi, a = 0, 0
        while gi < len(grid):
            X = grid[gi]
            while a < X:
                a += 1
                c = 2 * a
                F = F_c_acc(c, n).evaluate(prec)
                term = mpmath.sqrt(mpmath.mpf(a) / 24) * abs(F) / c * bessel_I_half(x0 / c, prec)
                increments.append(term)
                total += term
                if a in S_primes:
                    recip += mpmath.mpf(1) / a
            rows.append({
                "X": X,
                "partial_sum": +total,
                "sum_S_recip": +recip,
                "lower_bound": kappa * recip,
                "min_increment": min(increments),
            })
            gi += 1
    return rows


def absolute_partial_sum(n: int, X: int, prec: int = 96):
    return absolute_partial_sums(n, [X], prec)[0]["partial_sum"]


CSV_FIELDS = ("p", "m_p", "ratio", "F2p_abs")


def write_witness_csv(fh, witnesses: Iterable[PrimeWitness], digits: int = 20) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for wit in witnesses:
        w.writerow({
            "p": wit.p,
            "m_p": wit.m_p,
            "ratio": mpmath.nstr(mpmath.mpf(wit.m_p) / wit.p, digits),
            "F2p_abs": mpmath.nstr(F2p_abs(wit.p, wit.m_p), digits),
        })


def summary_json(n: int, witnesses: Sequence[PrimeWitness], density: list[dict], sums: list[dict],
                 digits: int = 20) -> str:
    def fmt(row):
        return {k: (mpmath.nstr(v, digits) if isinstance(v, mpmath.mpf) else v) for k, v in row.items()}

    return json.dumps(
        {
            "n": n,
            "count_S": len(witnesses),
            "floor_F2p": mpmath.nstr(F2p_floor(), digits),
            "kappa": mpmath.nstr(lower_bound_constant(n), digits),
            "density": density,
            "partial_sums": [fmt(r) for r in sums],
        },
        indent=2,
        sort_keys=True,
    )
