"""Bessel transforms of the test function Phi(u) = (1/8) sqrt(pi/2) u^(-1/2) J_{9/2}(u).

phi_tilde(s) = int_0^oo J_s(u) Phi(u) du/u is computed two ways: by quadrature
and from the closed forms in s = 2it and in real order l.  phi_hat assembles
the transform that enters the Kuznetsov formula for weights k = +-1/2.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .numerics import bessel_J_half_odd

SPECTRAL_PREC = 256
U_MAX = 200
QUAD_PANEL = 10  # panel width for tanh-sinh on the oscillatory body
SMALL_U = mpmath.ldexp(1, -8)
POLE_ORDERS = (1, 3, 5)


def _phi_const():
    return mpmath.sqrt(mpmath.pi / 2) / 8


def phi_series(u, prec: int = SPECTRAL_PREC):
    """sum_k (-1)^k (1/8) sqrt(pi/2) 2^(-2k-9/2) u^(2k+4) / (k! Gamma(k+11/2)); leading term u^4/7560."""
    with mp.workprec(prec + 16):
        u = mpmath.mpf(u)
        h2 = (u / 2) ** 2
        term = _phi_const() * u ** 4 / (2 ** mpmath.mpf(4.5) * mpmath.gamma(mpmath.mpf(11) / 2))
        total, k = term, 0
        while term and abs(term) > mpmath.eps * abs(total):
            term = -term * h2 / ((k + 1) * (k + mpmath.mpf(11) / 2))
            total += term
            k += 1
    with mp.workprec(prec):
        return +total


def phi_eval(u, prec: int = SPECTRAL_PREC):
    """Phi(u) for u >= 0."""
    with mp.workprec(prec):
        u = mpmath.mpf(u)
    if u < 0:
        raise ValueError("u must be nonnegative")
    if u == 0:
        return mpmath.mpf(0)
    if u < SMALL_U:
        return phi_series(u, prec)
    j = bessel_J_half_odd(Fraction(9, 2), u, prec + 16)
    with mp.workprec(prec + 16):
        val = _phi_const() * j / mpmath.sqrt(u)
    with mp.workprec(prec):
        return +val


def phi_tilde_imag_closed(t, prec: int = SPECTRAL_PREC):
    """phi_tilde(2it) = -i t(1+t^2) ch(pi t) / ((1+4t^2)(9+4t^2)(25+4t^2)); analytic in t."""
    with mp.workprec(prec + 16):
        t = mpmath.mpmathify(t)
        t2 = t * t
        val = -1j * t * (1 + t2) * mpmath.cosh(mpmath.pi * t) / ((1 + 4 * t2) * (9 + 4 * t2) * (25 + 4 * t2))
    with mp.workprec(prec):
        return +val


def _cos_over(l, m):
    # cos(pi l/2)/(l^2 - m^2) at l = m odd, by l'Hopital
    return -mpmath.pi / 2 * mpmath.sinpi(mpmath.mpf(m) / 2) / (2 * m)


def phi_tilde_real_closed(l, prec: int = SPECTRAL_PREC) -> tuple:
    """phi_tilde(l) = -(1/8) l(l^2-4) cos(pi l/2) / ((l^2-1)(l^2-9)(l^2-25)) for real l >= 1.

    Returns (value, is_limit); at l in {1, 3, 5} the removable singularity is
    evaluated by its limit and ``is_limit`` is True.
    """
    with mp.workprec(prec + 16):
        l = mpmath.mpf(l)
        if l < 1:
            raise ValueError("l must be >= 1")
        num = -l * (l * l - 4) / 8
        pole = next((m for m in POLE_ORDERS if l == m), None)
        if pole is None:
            val = num * mpmath.cospi(l / 2) / ((l * l - 1) * (l * l - 9) * (l * l - 25))
        else:
            rest = [m for m in POLE_ORDERS if m != pole]
            val = num * _cos_over(l, pole) / ((l * l - rest[0] ** 2) * (l * l - rest[1] ** 2))
    with mp.workprec(prec):
        return +val, pole is not None


def _hankel_coeffs(nu, u_min, eps):
    # a_k(nu) = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (k! 8^k), truncated where a_k u_min^-k < eps
    coeffs = [mpmath.mpc(1)]
    mu = 4 * nu * nu
    k = 0
    while True:
        k += 1
        nxt = coeffs[-1] * (mu - (2 * k - 1) ** 2) / (8 * k)
        if nxt == 0:
            break
        coeffs.append(nxt)
        if abs(nxt) / mpmath.mpf(u_min) ** k < eps:
            break
        if k > 4 * u_min:
            raise ArithmeticError("Hankel expansion does not settle at this cutoff")
    return coeffs


def _tail(s, U):
    """int_U^oo J_s(u) Phi(u) du/u from the Hankel expansions of J_s and J_{9/2}.

    The expansion of J_{9/2} terminates, so the only truncation is in J_s.
    """
    eps = mpmath.eps * 2 ** -8
    a_s = _hankel_coeffs(s, U, eps)
    a_9 = _hankel_coeffs(mpmath.mpf(9) / 2, U, eps)
    U = mpmath.mpf(U)
    total = mpmath.mpc(0)
    for s1 in (1, -1):
        for s2 in (1, -1):
            phase = mpmath.expj(s1 * (-s * mpmath.pi / 2 - mpmath.pi / 4)
                                + s2 * (-mpmath.mpf(9) / 4 * mpmath.pi - mpmath.pi / 4))
            lam = s1 + s2
            # product of the two polynomials in 1/u
            prod: dict[int, mpmath.mpc] = {}
            for i, ai in enumerate(a_s):
                for j, aj in enumerate(a_9):
                    prod[i + j] = prod.get(i + j, 0) + (1j * s1) ** i * ai * (1j * s2) ** j * aj
            for j, coef in prod.items():
                p = mpmath.mpf(5) / 2 + j
                if lam == 0:
                    integral = U ** (1 - p) / (p - 1)
                else:
                    integral = U ** (1 - p) * mpmath.expint(p, -1j * lam * U)
                total += phase * coef * integral
    return _phi_const() / (2 * mpmath.pi) * total


@dataclass(frozen=True)
class QuadratureResult:
    value: mpmath.mpc
    error: mpmath.mpf
    tail: mpmath.mpc
    converged: bool


def phi_tilde_quadrature(s, u_max=U_MAX, prec: int = SPECTRAL_PREC, tol=1e-12) -> QuadratureResult:
    """phi_tilde(s) by tanh-sinh quadrature on [0, u_max] plus an asymptotic tail."""
    with mp.workprec(prec):
        s = mpmath.mpmathify(s)
        C = _phi_const()

        def f(u):
            if u == 0:
                return mpmath.mpf(0)
            return mpmath.besselj(s, u) * C * mpmath.besselj(mpmath.mpf(9) / 2, u) / u ** mpmath.mpf(1.5)

        nodes = mpmath.linspace(0, u_max, int(u_max // QUAD_PANEL) + 1)
        body, err = mpmath.quad(f, nodes, error=True)
        tail = _tail(s, u_max)
        value = body + tail
        return QuadratureResult(value, err, tail, err <= tol * max(1, abs(value)))


def D_k(t, k, prec: int = SPECTRAL_PREC):
    """(1/(2 pi^2)) Gamma((1+k)/2 + it) Gamma((1+k)/2 - it)."""
    with mp.workprec(prec):
        a = (1 + mpmath.mpf(k)) / 2
        t = mpmath.mpmathify(t)
        return mpmath.gamma(a + 1j * t) * mpmath.gamma(a - 1j * t) / (2 * mpmath.pi ** 2)


def _check_k(k):
    if Fraction(k) not in (Fraction(1, 2), Fraction(-1, 2)):
        raise ValueError("k must be 1/2 or -1/2")


def phi_hat(t, k, prec: int = SPECTRAL_PREC):
    """i (phi_tilde(2it) cos pi(k/2+it) - phi_tilde(-2it) cos pi(k/2-it)) D_k(t) / sh(pi t).

    t is real or in i(0, 1/4]; t = 0 is the removable limit sqrt(2) D_k(0)/(225 pi).
    """
    _check_k(k)
    with mp.workprec(prec + 16):
        t = mpmath.mpmathify(t)
        kk = mpmath.mpf(Fraction(k).numerator) / Fraction(k).denominator
        if t == 0:
            val = mpmath.sqrt(2) * D_k(0, kk, prec + 16) / (225 * mpmath.pi)
        else:
            if Fraction(k) < 0 and t == mpmath.mpc(0, 0.25):
                raise ZeroDivisionError("phi_hat has a pole at t = i/4 when k = -1/2")
            a = phi_tilde_imag_closed(t, prec + 16)
            b = phi_tilde_imag_closed(-t, prec + 16)
            val = (1j * (a * mpmath.cos(mpmath.pi * (kk / 2 + 1j * t)) - b * mpmath.cos(mpmath.pi * (kk / 2 - 1j * t)))
                   * D_k(t, kk, prec + 16) / mpmath.sinh(mpmath.pi * t))
    with mp.workprec(prec):
        return +val


def phi_hat_reduced(t, k, prec: int = SPECTRAL_PREC):
    """sqrt(2) t(1+t^2) ch(pi t)^2 D_k(t) / ((1+4t^2)(9+4t^2)(25+4t^2) sh(pi t)), valid for k = +-1/2."""
    _check_k(k)
    with mp.workprec(prec + 16):
        t = mpmath.mpmathify(t)
        kk = mpmath.mpf(Fraction(k).numerator) / Fraction(k).denominator
        t2 = t * t
        val = (mpmath.sqrt(2) * t * (1 + t2) * mpmath.cosh(mpmath.pi * t) ** 2 * D_k(t, kk, prec + 16)
               / ((1 + 4 * t2) * (9 + 4 * t2) * (25 + 4 * t2) * mpmath.sinh(mpmath.pi * t)))
    with mp.workprec(prec):
        return +val


def phi_hat_floor_constant(prec: int = SPECTRAL_PREC):
    """lim_{t -> oo} phi_hat(t) t^(3-k) = sqrt(2)/(128 pi), from Stirling's formula."""
    with mp.workprec(prec):
        return mpmath.sqrt(2) / (128 * mpmath.pi)


def is_positive_real(z, prec: int = SPECTRAL_PREC) -> bool:
    with mp.workprec(prec):
        z = mpmath.mpmathify(z)
        return z.real > 0 and abs(z.imag) <= mpmath.ldexp(abs(z.real), 24 - prec)


def reflection_residual(z, prec: int = SPECTRAL_PREC):
    """|Gamma(z) Gamma(1-z) sin(pi z)/pi - 1|."""
    with mp.workprec(prec):
        z = mpmath.mpmathify(z)
        return abs(mpmath.gamma(z) * mpmath.gamma(1 - z) * mpmath.sin(mpmath.pi * z) / mpmath.pi - 1)


CSV_FIELDS = ("kind", "arg", "closed_form", "quadrature", "abs_err", "limit")


def comparison_rows(ts=(1, 2, 5), ls=(Fraction(5, 2), Fraction(9, 2), Fraction(13, 2)),
                    prec: int = SPECTRAL_PREC, digits: int = 25) -> list[dict]:
    rows = []
    for t in ts:
        closed = phi_tilde_imag_closed(t, prec)
        q = phi_tilde_quadrature(mpmath.mpc(0, 2 * t), prec=prec)
        with mp.workprec(prec):
            err = abs(closed - q.value)
        rows.append({"kind": "2it", "arg": str(t), "closed_form": mpmath.nstr(closed, digits),
                     "quadrature": mpmath.nstr(q.value, digits), "abs_err": mpmath.nstr(err, 5),
                     "limit": "false"})
    for l in ls:
        l = Fraction(l)
        with mp.workprec(prec):
            arg = mpmath.mpf(l.numerator) / l.denominator
        closed, lim = phi_tilde_real_closed(arg, prec)
        q = phi_tilde_quadrature(arg, prec=prec)
        with mp.workprec(prec):
            err = abs(closed - q.value)
        rows.append({"kind": "real", "arg": str(l), "closed_form": mpmath.nstr(closed, digits),
                     "quadrature": mpmath.nstr(q.value, digits), "abs_err": mpmath.nstr(err, 5),
                     "limit": "true" if lim else "false"})
    return rows


def write_csv(fh, rows) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
