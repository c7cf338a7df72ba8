"""Integer helpers: Kronecker symbol, modular square roots, small factorizations."""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt, prod

from sympy import factorint, isprime


def kronecker(a: int, b: int) -> int:
    """Extended Kronecker symbol (a/b), with (a/0) = [a = +-1] and (a/-1) = sign(a)."""
    if b == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and b % 2 == 0:
        return 0
    k = 1
    if b < 0:
        b = -b
        if a < 0:
            k = -k
    v = (b & -b).bit_length() - 1
    b >>= v
    if v % 2 and a % 8 in (3, 5):
        k = -k
    # b is now odd and positive: Jacobi symbol with a possibly negative
    a %= b
    while a:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                k = -k
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            k = -k
        a %= b
    return k if b == 1 else 0


def legendre(a: int, p: int) -> int:
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def sqrt_mod_p(t: int, p: int) -> int | None:
    """A square root of t modulo the odd prime p (Tonelli-Shanks), or None."""
    if p == 2 or not isprime(p):
        raise ValueError(f"{p} is not an odd prime")
    t %= p
    if t == 0:
        return 0
    if legendre(t, p) != 1:
        return None
    if p % 4 == 3:
        return pow(t, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, x, r = s, pow(z, q, p), pow(t, q, p), pow(t, (q + 1) // 2, p)
    while x != 1:
        i, x2 = 0, x
        while x2 != 1:
            x2 = x2 * x2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        x, r = x * c % p, r * b % p
    return r


def _sqrt_mod_prime_power(t: int, p: int, k: int) -> list[int]:
    mod = p**k
    t %= mod
    if mod <= 1 << 12:
        return [x for x in range(mod) if x * x % mod == t]
    if p != 2 and t % p:
        r = sqrt_mod_p(t, p)
        if r is None:
            return []
        sols, cur = {r, (-r) % p}, p
        for _ in range(1, k):
            # Hensel: x + y*cur with 2*x*y = (t - x^2)/cur (mod p)
            sols = {(x + (t - x * x) // cur * pow(2 * x, -1, p) % p * cur) % (cur * p) for x in sols}
            cur *= p
        return sorted(sols)
    # p = 2 or p | t: every root mod p^(j+1) reduces to a root mod p^j
    sols, cur = [x for x in range(p) if x * x % p == t % p], p
    for _ in range(1, k):
        nxt = cur * p
        sols = [y for x in sols for y in range(x, nxt, cur) if y * y % nxt == t % nxt]
        cur = nxt
    return sorted(sols)


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    return (r1 + m1 * ((r2 - r1) * pow(m1, -1, m2) % m2)) % (m1 * m2)


def sqrt_mod_all(t: int, m: int, factors: dict[int, int] | None = None) -> list[int]:
    """All x in [0, m) with x^2 = t (mod m), lifted prime by prime and joined by CRT."""
    if m == 1:
        return [0]
    factors = factors if factors is not None else factorint(m)
    sols, mod = [0], 1
    for p, k in sorted(factors.items()):
        pk = p**k
        local = _sqrt_mod_prime_power(t, p, k)
        if not local:
            return []
        sols = [crt_pair(s, mod, r, pk) for s in sols for r in local]
        mod *= pk
    return sorted(sols)


def omega_odd(n: int) -> int:
    """Number of distinct odd primes dividing n."""
    return sum(1 for p in factorint(n) if p != 2)


def num_divisors(n: int) -> int:
    return prod(k + 1 for k in factorint(n).values())


def totient(n: int) -> int:
    return prod((p - 1) * p ** (k - 1) for p, k in factorint(n).items())


@lru_cache(maxsize=4096)
def is_squarefree(n: int) -> bool | None:
    """Squarefree test by full factorization; None if the input is not positive."""
    if n < 1:
        return None
    return all(k == 1 for k in factorint(n).values())


def inverse_mod(a: int, m: int) -> int:
    if m == 1:
        return 0
    return pow(a, -1, m)


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


__all__ = [
    "crt_pair",
    "gcd",
    "inverse_mod",
    "is_square",
    "is_squarefree",
    "isprime",
    "kronecker",
    "legendre",
    "num_divisors",
    "omega_odd",
    "sqrt_mod_all",
    "sqrt_mod_p",
    "totient",
]
