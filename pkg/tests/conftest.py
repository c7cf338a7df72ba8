import mpmath
from mpmath import mp


def close(x, y, prec: int, slack_bits: int = 16, scale=1) -> bool:
    """|x - y| <= 2^(slack - prec) * max(1, scale), evaluated at ``prec`` bits."""
    with mp.workprec(prec):
        return abs(mpmath.mpmathify(x) - mpmath.mpmathify(y)) <= mpmath.ldexp(max(1, abs(scale)), slack_bits - prec)
