import io
import math
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from mocktheta.arith import is_squarefree, kronecker
from mocktheta.heegner import (
    QuadForm12,
    algtoan_check,
    boundary_forms,
    brute_force_forms,
    enumerate_forms,
    forms_for_a,
    heegner_alpha,
    heegner_sum,
    kloosterman_cmax,
    max_a,
    write_csv,
)
from mocktheta.numerics import nearest_int
from mocktheta.series import alpha_value


def test_d23_first_layer():
    forms = forms_for_a(23, 1)
    assert [q.b for q in forms] == [5, 11, 13, 19]
    for q in forms:
        assert q.discriminant == -23
        assert (q.b * q.b + 23) % 48 == 0


def test_brute_force_bijection():
    fast = [q for a in range(1, 5) for q in forms_for_a(23, a)]
    assert fast == brute_force_forms(23, 4)
    assert len(set(fast)) == len(fast)


def test_threshold_selection():
    D = 23
    assert enumerate_forms(D, Fraction(1, 4)) == []  # sqrt(23)/24 < 1/4
    assert enumerate_forms(D, Fraction(1, 6)) == forms_for_a(D, 1)
    assert enumerate_forms(D, Fraction(1, 5)) == []
    assert max_a(D, Fraction(1, 24)) == 4  # a <= sqrt(23)
    assert max_a(96 * 96, Fraction(1, 24)) == 96  # boundary included
    assert max_a(96 * 96, Fraction(1, 24), strict=True) == 95
    assert boundary_forms(23, Fraction(1, 24)) == []


def test_every_form_satisfies_congruence():
    for n in (1, 5, 17, 40):
        D = 24 * n - 1
        for q in enumerate_forms(D, Fraction(1, 24)):
            assert (q.b ** 2 + D) % (48 * q.a) == 0
            assert 0 <= q.b < 24 * q.a


def test_translation_invariance_of_summand():
    prec = 128
    for q in forms_for_a(95, 2):
        shifted_b = q.b + 24 * q.a
        assert kronecker(-12, shifted_b) == q.chi
        with mp.workprec(prec):
            tau = mpmath.mpc(-shifted_b, mpmath.sqrt(95)) / (24 * q.a)
            term = q.chi * (mpmath.expjpi(2 * tau) - mpmath.expjpi(2 * mpmath.conj(tau)))
            assert abs(term - q.term(prec)) < mpmath.ldexp(abs(term), 16 - prec)


def test_conjugate_pair_sum_is_imaginary():
    # b and 24a - b pair into a purely imaginary contribution
    prec = 128
    for a in range(1, 6):
        forms = {q.b: q for q in forms_for_a(24 * 30 - 1, a)}
        for b, q in forms.items():
            other = forms[24 * a - b]
            with mp.workprec(prec):
                s = q.term(prec) + other.term(prec)
                mag = 2 * mpmath.sinh(mpmath.pi * mpmath.sqrt(719) / (12 * a))
                assert abs(s.real) < mpmath.ldexp(mag, 16 - prec)
                assert abs(abs(q.term(prec)) - mag) < mpmath.ldexp(mag, 16 - prec)


def test_prop_identity_small():
    for n in range(1, 40):
        for gamma in (1, 2, Fraction(1, 2)):
            assert algtoan_check(n, gamma)


def test_kloosterman_cmax():
    assert kloosterman_cmax(1, 1) == 9  # 2 sqrt(23) = 9.59
    assert kloosterman_cmax(1, 2) == 4


def test_heegner_alpha_rounds_to_alpha():
    for n in range(1, 80):
        if is_squarefree(24 * n - 1):
            assert nearest_int(heegner_alpha(n, 1)) == alpha_value(n)


def test_theorem_mode_is_prop_with_scaled_gamma():
    for n in (3, 11, 26):
        a = heegner_alpha(n, Fraction(1, 24), mode="theorem")
        b = heegner_alpha(n, 1, mode="prop")
        # no ties for D = 23 (mod 24), so strict and weak selections coincide
        assert a == b


def test_bad_arguments():
    with pytest.raises(ValueError):
        enumerate_forms(22, 1)
    with pytest.raises(ValueError):
        heegner_alpha(1, 0)
    with pytest.raises(ValueError):
        heegner_alpha(1, 1, mode="x")
    with pytest.raises(ValueError):
        QuadForm12(1, 24, 0)


def test_csv():
    buf = io.StringIO()
    write_csv(buf, 23, forms_for_a(23, 1))
    lines = buf.getvalue().splitlines()
    assert lines[0] == "D,a,b,im_tau,chi,re_term,im_term"
    assert len(lines) == 5 and lines[1].startswith("23,1,5,")
