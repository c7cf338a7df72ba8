"""Heegner points of discriminant -D on Gamma_0(12) and their exponential sum.

Forms [12a, b, c] modulo translation are represented by pairs (a, b) with
0 <= b < 24a and b^2 = -D (mod 48a).  Their roots are
tau_Q = (-b + i sqrt(D)) / (24a), so Im tau_Q = sqrt(D)/(24a) depends on a only.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import mpmath
from mpmath import mp

from .arith import kronecker, sqrt_mod_all
from .kloosterman import kloosterman_acc, tolerance
from .modular import PSI
from .numerics import DEFAULT_POLICY, PrecisionError, e_of
from .series import IMAG_SLACK_BITS


@dataclass(frozen=True, order=True)
class QuadForm12:
    a: int
    b: int
    c_coeff: int

    def __post_init__(self):
        if self.a < 1 or not 0 <= self.b < 24 * self.a:
            raise ValueError(f"not a reduced representative: {self}")

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 48 * self.a * self.c_coeff

    @property
    def chi(self) -> int:
        """chi_{-12}(Q) = (-12/b)."""
        return kronecker(-12, self.b)

    def im_tau_squared(self) -> Fraction:
        return Fraction(-self.discriminant, (24 * self.a) ** 2)

    def tau(self, prec: int):
        with mp.workprec(prec):
            D = -self.discriminant
            return mpmath.mpc(-self.b, mpmath.sqrt(D)) / (24 * self.a)

    def term(self, prec: int):
        """chi(Q) (e(tau_Q) - e(conj tau_Q)) = -2 chi(Q) e(-b/(24a)) sinh(2 pi Im tau_Q)."""
        with mp.workprec(prec + 16):
            D = -self.discriminant
            sh = mpmath.sinh(mpmath.pi * mpmath.sqrt(D) / (12 * self.a))
            val = -2 * self.chi * sh * e_of(Fraction(-self.b, 24 * self.a), prec + 16)
        with mp.workprec(prec):
            return +val


def _above(D: int, a: int, t: Fraction, strict: bool) -> bool:
    # sqrt(D)/(24a) >= t  <=>  D >= (24 a t)^2, exact for rational t
    rhs = (24 * a * t) ** 2
    return D > rhs if strict else D >= rhs


def max_a(D: int, min_im, strict: bool = False) -> int:
    """Largest a with sqrt(D)/(24a) >= min_im (or > with ``strict``)."""
    t = Fraction(min_im)
    if t <= 0:
        raise ValueError("min_im must be positive")
    a = math.floor(Fraction(math.isqrt(D) + 1) / (24 * t)) + 1
    while a >= 1 and not _above(D, a, t, strict):
        a -= 1
    return a


def forms_for_a(D: int, a: int) -> list[QuadForm12]:
    out = []
    for b in sqrt_mod_all(-D, 48 * a):
        if b < 24 * a:
            out.append(QuadForm12(a, b, (b * b + D) // (48 * a)))
    return sorted(out)


def enumerate_forms(D: int, min_im, strict: bool = False) -> list[QuadForm12]:
    """Representatives of Gamma_infty \\ Q_{-D,12} with Im tau_Q >= min_im.

    ``strict`` switches the threshold to Im tau_Q > min_im.
    """
    if D < 1 or (-D) % 4 not in (0, 1):
        raise ValueError(f"-{D} is not a discriminant")
    forms: list[QuadForm12] = []
    for a in range(1, max_a(D, min_im, strict) + 1):
        forms.extend(forms_for_a(D, a))
    return forms


def brute_force_forms(D: int, a_max: int) -> list[QuadForm12]:
    """Scan every [12a, b, c] with |b| <= 48a and reduce b modulo 24a; an oracle."""
    seen = set()
    for a in range(1, a_max + 1):
        for b in range(-48 * a, 48 * a + 1):
            if (b * b + D) % (48 * a) == 0:
                r = b % (24 * a)
                seen.add(QuadForm12(a, r, (r * r + D) // (48 * a)))
    return sorted(seen)


def boundary_forms(D: int, min_im) -> list[QuadForm12]:
    """Forms with Im tau_Q exactly min_im, where the >= and > conventions differ."""
    t = Fraction(min_im)
    return [q for q in enumerate_forms(D, t) if q.im_tau_squared() == t * t]


def _real_part(value, scale, prec: int, what: str):
    if abs(value.imag) > mpmath.ldexp(max(scale, 1), IMAG_SLACK_BITS - prec):
        raise PrecisionError(f"{what}: imaginary part {mpmath.nstr(value.imag, 5)} does not vanish")
    return value.real


def heegner_sum(D: int, min_im, strict: bool = False, prec: int = 192):
    """(i/sqrt D) sum_{Im tau_Q >= min_im} chi(Q) (e(tau_Q) - e(conj tau_Q)), as a real number."""
    forms = enumerate_forms(D, min_im, strict)
    with mp.workprec(prec):
        terms = [q.term(prec) for q in forms]
        total = mpmath.mpc(0, 1) / mpmath.sqrt(D) * mpmath.fsum(terms)
        scale = max([abs(t) for t in terms], default=mpmath.mpf(0))
        return _real_part(total, scale, prec, "heegner sum")


def _prec_for(n: int, cmax: int, prec: int | None) -> int:
    return prec or DEFAULT_POLICY.bits(n, cmax)


def heegner_alpha(n: int, gamma, mode: str = "prop", prec: int | None = None):
    """The Heegner-point approximation to alpha(n).

    ``mode="prop"`` keeps Im tau_Q >= gamma/24, ``mode="theorem"`` keeps Im tau_Q > gamma.
    """
    if n < 1:
        raise ValueError("n must be positive")
    gamma = Fraction(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    D = 24 * n - 1
    if mode == "prop":
        t, strict = gamma / 24, False
    elif mode == "theorem":
        t, strict = gamma, True
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return heegner_sum(D, t, strict, _prec_for(n, 2 * max(max_a(D, t, strict), 1), prec))


def kloosterman_cmax(n: int, gamma) -> int:
    """Largest even-or-odd c with c <= 2 sqrt(D_n)/gamma, decided exactly."""
    g = Fraction(gamma)
    bound = 4 * (24 * n - 1) / (g * g)  # c^2 <= bound
    c = math.isqrt(bound.numerator // bound.denominator)
    while (c + 1) ** 2 <= bound:
        c += 1
    return c


def kloosterman_side(n: int, gamma, prec: int | None = None):
    """(2 pi / D^(1/4)) e(-1/8) sum_{c <= 2 sqrt(D)/gamma, c even} S(0,n,c,psi)/c I_{1/2}(pi sqrt(D)/(6c))."""
    D = 24 * n - 1
    cmax = kloosterman_cmax(n, gamma)
    prec = _prec_for(n, cmax, prec)
    with mp.workprec(prec):
        x0 = mpmath.pi * mpmath.sqrt(D) / 6
        terms = []
        for c in range(2, cmax + 1, 2):
            S = kloosterman_acc(0, n, c, PSI).evaluate(prec)
            x = x0 / c
            terms.append(S / c * mpmath.sqrt(2 / (mpmath.pi * x)) * mpmath.sinh(x))
        total = 2 * mpmath.pi / mpmath.root(D, 4) * e_of(Fraction(-1, 8), prec) * mpmath.fsum(terms)
        scale = max([abs(t) for t in terms], default=mpmath.mpf(0))
        return _real_part(total, scale, prec, "kloosterman side")


def algtoan_sides(n: int, gamma, prec: int | None = None):
    D = 24 * n - 1
    prec = _prec_for(n, kloosterman_cmax(n, gamma), prec)
    return kloosterman_side(n, gamma, prec), heegner_sum(D, Fraction(gamma) / 24, False, prec), prec


def algtoan_check(n: int, gamma, prec: int | None = None, slack_bits: int = 32) -> bool:
    left, right, prec = algtoan_sides(n, gamma, prec)
    with mp.workprec(prec):
        scale = max(1, abs(left))
        return abs(left - right) <= tolerance(prec, slack_bits) * scale


def iter_rows(D: int, forms: Iterable[QuadForm12], prec: int = 192, digits: int = 30) -> Iterator[dict]:
    for q in forms:
        term = q.term(prec)
        with mp.workprec(prec):
            im_tau = mpmath.sqrt(D) / (24 * q.a)
        yield {
            "D": D,
            "a": q.a,
            "b": q.b,
            "im_tau": mpmath.nstr(im_tau, digits),
            "chi": q.chi,
            "re_term": mpmath.nstr(term.real, digits),
            "im_term": mpmath.nstr(term.imag, digits),
        }


CSV_FIELDS = ("D", "a", "b", "im_tau", "chi", "re_term", "im_term")


def write_csv(fh, D: int, forms: Iterable[QuadForm12], prec: int = 192) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in iter_rows(D, forms, prec):
        w.writerow(row)
