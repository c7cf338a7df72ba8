import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import jacobi_symbol, primerange

from mocktheta.arith import (
    is_squarefree,
    kronecker,
    omega_odd,
    sqrt_mod_all,
    sqrt_mod_p,
)


def test_kronecker_matches_jacobi_for_odd_moduli():
    for b in range(1, 200, 2):
        for a in range(-50, 50):
            assert kronecker(a, b) == jacobi_symbol(a, b)


def test_kronecker_special_values():
    assert kronecker(-1, -1) == -1
    assert kronecker(1, 0) == 1 and kronecker(2, 0) == 0
    assert kronecker(-12, 5) == -1
    assert kronecker(12, 5) == -1
    assert kronecker(-12, 7) == 1
    assert kronecker(2, 4) == 0


def test_kronecker_at_two():
    # (a/2) = 0 for even a, 1 for a = +-1 (mod 8), -1 for a = +-3 (mod 8)
    for a in range(-40, 40):
        expected = 0 if a % 2 == 0 else (1 if a % 8 in (1, 7) else -1)
        assert kronecker(a, 2) == expected


def test_sqrt_mod_p_examples():
    assert sqrt_mod_p(4, 7) in (2, 5)
    assert sqrt_mod_p(3, 7) is None
    assert sqrt_mod_p(14, 7) == 0
    with pytest.raises(ValueError):
        sqrt_mod_p(1, 15)
    with pytest.raises(ValueError):
        sqrt_mod_p(1, 2)


def test_sqrt_mod_p_random():
    rng = random.Random(0)
    primes = list(primerange(3, 20000))
    for _ in range(10 ** 4):
        p = rng.choice(primes)
        t = rng.randrange(p)
        r = sqrt_mod_p(t, p)
        if r is None:
            assert pow(t, (p - 1) // 2, p) == p - 1
        else:
            assert r * r % p == t


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(1, 3000))
@settings(max_examples=300, deadline=None)
def test_sqrt_mod_all_matches_scan(t, m):
    assert sqrt_mod_all(t, m) == [x for x in range(m) if (x * x - t) % m == 0]


def test_sqrt_mod_all_large_prime_powers():
    m = 48 * 13 ** 4
    sols = sqrt_mod_all(-23, m)
    assert sols and all((x * x + 23) % m == 0 for x in sols)
    m = 2 ** 15 * 3
    assert sqrt_mod_all(1 - 24 * 7, m) == [x for x in range(m) if (x * x - 1 + 24 * 7) % m == 0]


def test_squarefree_flags():
    assert is_squarefree(23) is True
    assert is_squarefree(575) is False
    assert is_squarefree(0) is None


def test_omega_odd():
    assert omega_odd(2 ** 5) == 0
    assert omega_odd(2 * 3 * 9 * 5) == 2
