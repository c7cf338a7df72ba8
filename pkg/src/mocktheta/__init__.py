"""Exact and high-precision tools for the mock theta function f(q).

Coefficients alpha(n) and p(n), the Andrews and Rademacher series, the
Kloosterman, Selberg-Whiteman and Gauss sums behind them, Heegner-point
sums on Gamma_0(12), the divergence construction for the absolute series,
and the Bessel transforms of the Kuznetsov test function.
"""

from .numerics import DEFAULT_PREC, PrecisionError, PrecisionPolicy, RootOfUnityAccumulator, nearest_int
from .qseries import alpha_exact, partition_exact
from .series import andrews_truncated, rademacher_truncated, residual_report

__all__ = [
    "DEFAULT_PREC",
    "PrecisionError",
    "PrecisionPolicy",
    "RootOfUnityAccumulator",
    "nearest_int",
    "alpha_exact",
    "partition_exact",
    "andrews_truncated",
    "rademacher_truncated",
    "residual_report",
]

__version__ = "0.1.0"
