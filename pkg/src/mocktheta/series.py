"""Truncated Andrews and Rademacher series, their residuals, and decay fits."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Sequence

import mpmath
import numpy as np
from mpmath import mp

from .arith import is_squarefree
from .kloosterman import A_c_acc, andrews_sign, kloosterman_acc, shifted_A_argument
from .modular import PSI
from .numerics import DEFAULT_POLICY, PrecisionError, bessel_I_half, bessel_I_three_half, e_of
from .qseries import alpha_exact, partition_exact

Kind = Literal["mock", "partition"]
IMAG_SLACK_BITS = 24


def floor_truncation(N) -> int:
    """Largest integer c with c <= N."""
    return math.floor(Fraction(N))


def truncation_cmax(n: int, gamma) -> int:
    """Largest c with c <= gamma * sqrt(n), decided exactly for rational gamma."""
    g = Fraction(gamma)
    if g <= 0:
        raise ValueError("gamma must be positive")
    # c <= g sqrt(n)  <=>  c^2 <= g^2 n
    bound = g * g * n
    c = math.isqrt(bound.numerator // bound.denominator)
    while (c + 1) ** 2 <= bound:
        c += 1
    return c


def _check_real(value, terms, prec: int, what: str):
    scale = max([mpmath.mpf(1)] + [abs(t) for t in terms])
    if abs(value.imag) > mpmath.ldexp(scale, IMAG_SLACK_BITS - prec):
        raise PrecisionError(f"{what}: imaginary part {mpmath.nstr(value.imag, 5)} does not vanish")
    return value.real


def _with_retry(fn, n: int, cmax: int, prec: int | None):
    prec = prec or DEFAULT_POLICY.bits(n, cmax)
    try:
        return fn(n, cmax, prec)
    except PrecisionError:
        return fn(n, cmax, 2 * prec)


def _andrews_A_form(n: int, cmax: int, prec: int):
    D = 24 * n - 1
    with mp.workprec(prec):
        x0 = mpmath.pi * mpmath.sqrt(D) / 12
        terms = []
        for c in range(1, cmax + 1):
            A = A_c_acc(2 * c, shifted_A_argument(c, n)).evaluate(prec)
            terms.append(andrews_sign(c) * A / c * bessel_I_half(x0 / c, prec))
        total = mpmath.pi / mpmath.root(D, 4) * mpmath.fsum(terms)
        return _check_real(total, terms, prec, "andrews A-form")


def _andrews_psi_form(n: int, cmax: int, prec: int):
    D = 24 * n - 1
    with mp.workprec(prec):
        x0 = mpmath.pi * mpmath.sqrt(D) / 6
        terms = []
        for C in range(2, 2 * cmax + 1, 2):
            S = kloosterman_acc(0, n, C, PSI).evaluate(prec)
            terms.append(S / C * bessel_I_half(x0 / C, prec))
        total = 2 * mpmath.pi / mpmath.root(D, 4) * e_of(Fraction(-1, 8), prec) * mpmath.fsum(terms)
        return _check_real(total, terms, prec, "andrews psi-form")


def andrews_truncated(n: int, N, prec: int | None = None, form: str = "A"):
    """Andrews' sum over the A_{2c} index c <= N (equivalently even moduli <= 2N).

    ``form="A"`` sums the A_{2c} expression, ``form="psi"`` the S(0, n, c, psi) one.
    """
    if n < 1 or Fraction(N) < 1:
        raise ValueError("need n >= 1 and N >= 1")
    fn = {"A": _andrews_A_form, "psi": _andrews_psi_form}[form]
    return _with_retry(fn, n, floor_truncation(N), prec)


def _rademacher(n: int, cmax: int, prec: int):
    D = 24 * n - 1
    with mp.workprec(prec):
        x0 = mpmath.pi * mpmath.sqrt(D) / 6
        terms = [
            A_c_acc(c, n).evaluate(prec) / c * bessel_I_three_half(x0 / c, prec)
            for c in range(1, cmax + 1)
        ]
        total = 2 * mpmath.pi / mpmath.mpf(D) ** mpmath.mpf(0.75) * mpmath.fsum(terms)
        return _check_real(total, terms, prec, "rademacher")


def rademacher_truncated(n: int, N, prec: int | None = None):
    """Rademacher's series for p(n) truncated to c <= N."""
    if n < 1 or Fraction(N) < 1:
        raise ValueError("need n >= 1 and N >= 1")
    return _with_retry(_rademacher, n, floor_truncation(N), prec)


@lru_cache(maxsize=8)
def _alpha_table(max_n: int):
    return alpha_exact(max_n)


@lru_cache(maxsize=8)
def _partition_table(max_n: int):
    return partition_exact(max_n)


def _table_size(n: int) -> int:
    return max(64, 1 << (n - 1).bit_length())


def alpha_value(n: int) -> int:
    return _alpha_table(_table_size(n))[n]


def partition_value(n: int) -> int:
    return _partition_table(_table_size(n))[n]


@dataclass(frozen=True)
class TruncationReport:
    n: int
    N: int
    gamma: Fraction
    kind: Kind
    exact_value: int
    series_value: mpmath.mpf
    residual: mpmath.mpf
    precision_bits: int
    squarefree_flag: bool | None

    FIELDS = ("n", "N", "gamma", "kind", "exact", "series", "residual", "squarefree", "prec_bits")

    def row(self, digits: int = 30) -> dict:
        flag = {True: "true", False: "false", None: "unknown"}[self.squarefree_flag]
        return {
            "n": self.n,
            "N": self.N,
            "gamma": str(self.gamma),
            "kind": self.kind,
            "exact": self.exact_value,
            "series": mpmath.nstr(self.series_value, digits),
            "residual": mpmath.nstr(self.residual, digits),
            "squarefree": flag,
            "prec_bits": self.precision_bits,
        }


def residual_report(n: int, gamma=1, kind: Kind = "mock", prec: int | None = None) -> TruncationReport:
    """R(n, gamma sqrt n) for ``kind="mock"``, the partition residual for ``kind="partition"``."""
    if n < 1:
        raise ValueError("n must be positive")
    gamma = Fraction(gamma)
    cmax = truncation_cmax(n, gamma)
    if cmax < 1:
        raise ValueError(f"gamma*sqrt(n) < 1 leaves an empty sum (n={n}, gamma={gamma})")
    prec = prec or DEFAULT_POLICY.bits(n, cmax)
    if kind == "mock":
        exact, series = alpha_value(n), andrews_truncated(n, cmax, prec)
        flag = is_squarefree(24 * n - 1)
    elif kind == "partition":
        exact, series = partition_value(n), rademacher_truncated(n, cmax, prec)
        flag = is_squarefree(24 * n - 23)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    with mp.workprec(prec):
        residual = exact - series
    return TruncationReport(n, cmax, gamma, kind, exact, series, residual, prec, flag)


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    slope_stderr: float


def exponent_fit(reports: Sequence[TruncationReport]) -> ExponentFit:
    """Least-squares fit of log|residual| = slope * log n + intercept."""
    if len(reports) < 8:
        raise ValueError("need at least 8 reports")
    if len({(r.kind, r.gamma) for r in reports}) != 1:
        raise ValueError("reports must share kind and gamma")
    if any(r.residual == 0 for r in reports):
        raise ValueError("zero residual has no logarithm")
    x = np.array([math.log(r.n) for r in reports])
    y = np.array([float(mpmath.log(abs(r.residual))) for r in reports])
    if np.ptp(x) == 0:
        raise ValueError("degenerate design: all n equal")
    design = np.column_stack([x, np.ones_like(x)])
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    dof = len(x) - 2
    sigma2 = float(resid @ resid) / dof if dof > 0 else 0.0
    cov = sigma2 * np.linalg.inv(design.T @ design)
    return ExponentFit(float(coef[0]), float(coef[1]), math.sqrt(max(cov[0, 0], 0.0)))


def report_as_dict(report: TruncationReport) -> dict:
    return asdict(report)
