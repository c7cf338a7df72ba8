from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from conftest import close
from mocktheta.arith import omega_odd
from mocktheta.kloosterman import (
    A_c_direct,
    A_c_selberg_whiteman,
    F_2a_pairing,
    F_c,
    F_c_acc,
    abs_S_psi_via_F,
    fkmk_check,
    gauss_sum,
    gauss_sum_brute,
    kloosterman_S,
    lehmer_bound,
    lemma_fq_kloos_check,
    selberg_whiteman_check,
    shifted_A_argument,
    weil_bound,
    weil_psi_bound,
    weil_psi_ratio,
)
from mocktheta.modular import ETA, PSI, THETA, THETA12, GammaZeroMatrix, psi_multiplier
from mocktheta.numerics import e_of

PREC = 192


def test_A1_and_A2():
    for n in range(-5, 6):
        assert close(A_c_direct(1, n, PREC).value, 1, PREC)
    assert close(A_c_direct(2, 1, PREC).value, -1, PREC)


def test_selberg_whiteman_small_grid():
    for c in range(1, 40):
        for n in range(-6, 7):
            assert selberg_whiteman_check(c, n, PREC)


def test_lemma_and_fkmk_small_grid():
    for c in range(1, 30):
        for n in range(1, 12):
            assert lemma_fq_kloos_check(c, n, PREC)
            assert fkmk_check(c, n, PREC)


def test_lemma_c1_n1_by_hand():
    # -A_2(1) = 1 and e(1/8) conj(S(0,1,2,psi)) with the single matrix (1 0; 2 1)
    g = GammaZeroMatrix(1, 0, 2, 1)
    turn = -psi_multiplier(g) + (PSI.shifted(0) * g.a + PSI.shifted(1) * g.d) / 2
    with mp.workprec(PREC):
        rhs = e_of(Fraction(1, 8), PREC) * mpmath.conj(e_of(turn, PREC))
        lhs = -A_c_direct(2, shifted_A_argument(1, 1), PREC).value
    assert close(rhs, lhs, PREC)
    assert close(kloosterman_S(0, 1, 2, PSI, PREC).value, e_of(turn, PREC), PREC)


def test_F_odd_vanishes_exactly():
    for c in range(1, 80, 2):
        for n in range(1, 8):
            assert F_c_acc(c, n).is_zero()
    assert F_c(3, 5, PREC) == 0


def test_F_pairing():
    for a in range(1, 40):
        for n in range(1, 8):
            assert close(F_c(2 * a, n, PREC), F_2a_pairing(a, n, PREC), PREC)


def test_F_period_in_n():
    for c in range(2, 30, 2):
        for n in range(1, 6):
            assert F_c_acc(c, n) == F_c_acc(c, n + c)


@pytest.mark.parametrize("c", [2, 4, 6, 10, 24])
def test_conjugation_symmetry(c):
    for m in range(-2, 3):
        for n in range(-2, 3):
            s = kloosterman_S(m, n, c, PSI, PREC).value
            t = kloosterman_S(1 - m, 1 - n, c, PSI.conjugate(), PREC).value
            with mp.workprec(PREC):
                assert close(mpmath.conj(s), t, PREC)


def test_level_mismatch():
    with pytest.raises(ValueError):
        kloosterman_S(0, 1, 3, PSI)
    with pytest.raises(ValueError):
        kloosterman_S(0, 1, 6, THETA)


def test_trivial_bound():
    for c in range(1, 30):
        v = kloosterman_S(0, 1, c, ETA, PREC)
        assert abs(v.value) <= c


def test_lehmer_and_weil_psi_bounds():
    for c in range(1, 120):
        for n in range(1, 20):
            s = abs_S_psi_via_F(c, n, PREC)
            with mp.workprec(PREC):
                assert s <= weil_psi_bound(c, PREC) * (1 + mpmath.ldexp(1, 16 - PREC))
                A = abs(A_c_direct(2 * c, shifted_A_argument(c, n), PREC).value)
                assert A <= lehmer_bound(c, PREC) * (1 + mpmath.ldexp(1, 16 - PREC))


def test_psi_abs_routes_agree():
    for c in range(1, 40):
        for n in (1, 2, 7):
            with mp.workprec(PREC):
                direct = abs(kloosterman_S(0, n, 2 * c, PSI, PREC).value)
            assert close(direct, abs_S_psi_via_F(c, n, PREC), PREC)


def test_weil_bound_twisted_theta():
    for c in range(24, 24 * 8 + 1, 24):
        for n in range(1, 25):
            v = kloosterman_S(n, n, c, THETA12, PREC).value
            with mp.workprec(PREC):
                assert abs(v) <= weil_bound(n, c, PREC)


def test_near_extremal_ratio():
    r = weil_psi_ratio(15552, 8278)
    assert abs(r - mpmath.mpf("0.99992")) < 1e-4
    assert omega_odd(15552) == 1
    assert close(weil_psi_ratio(15552, 8278, PREC, via="direct"), weil_psi_ratio(15552, 8278, PREC), PREC)


def test_gauss_sum_zero_cases():
    assert gauss_sum(1, 1, 8).method == "zero"
    assert gauss_sum(2, 1, 4).method == "zero"
    assert gauss_sum(3, 1, 12).value == 0


@given(st.integers(-60, 60).filter(bool), st.integers(-60, 60), st.integers(1, 64))
@settings(max_examples=400, deadline=None)
def test_gauss_sum_matches_brute(a, b, c):
    g = gauss_sum(a, b, c, PREC)
    assert close(g.value, gauss_sum_brute(a, b, c, PREC), PREC, scale=c)


def test_gauss_odd_closed_form():
    # G(a, b, c) = e(-bar(4a) b^2 / c) eps_c sqrt(c) (a/c) for odd c
    a, b, c = 5, 3, 21
    assert gauss_sum(a, b, c).method == "closed"
    assert close(gauss_sum(a, b, c, PREC).value, gauss_sum_brute(a, b, c, PREC), PREC)
