"""Exact integer helpers: primality, factoring, Kronecker symbols,
fundamental-discriminant splitting, and one certified irrational floor.

Everything here is arbitrary-precision and deterministic.  The only place the
number pi appears in the whole package is `floor_two_over_pi_sqrt`, which
brackets it by a 50-digit rational so the floor is provably exact.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt

# floor(pi * 10**49); the next digit of pi is 0, so PI_NUM/PI_DEN < pi < (PI_NUM+1)/PI_DEN
PI_NUM = 31415926535897932384626433832795028841971693993751
PI_DEN = 10**49

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.3 * 10**24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as a sorted tuple of (prime, exponent)."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out = []
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    p = 5
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 2 if p % 3 == 2 else 4  # 5, 7, 11, 13, 17, 19, ... wheel
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_factors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factorize(n))


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def valuation(n: int, p: int) -> int:
    """Largest v with p**v | n (n != 0)."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def kronecker(D: int, m: int) -> int:
    """The Kronecker symbol (D/m) for m >= 0, fully multiplicative in m."""
    if m < 0:
        raise ValueError("kronecker is defined here for m >= 0")
    if m == 0:
        return 1 if D in (1, -1) else 0
    result = 1
    # factor out 2 with the standard (D/2) rule
    while m % 2 == 0:
        m //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    # now m odd: Jacobi symbol via reciprocity
    a = D % m
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def squarefree_part(n: int) -> int:
    """The squarefree kernel of n (sign preserved)."""
    if n == 0:
        return 0
    sf = -1 if n < 0 else 1
    for p, e in factorize(abs(n)):
        if e % 2:
            sf *= p
    return sf


def split_discriminant(disc: int) -> tuple[int, int]:
    """Write a negative discriminant as f**2 * D0 with D0 fundamental.

    `disc` must be negative and congruent to 0 or 1 mod 4.  Returns (D0, f).
    """
    if disc >= 0:
        raise ValueError("expected a negative discriminant")
    if disc % 4 not in (0, 1):
        raise ValueError("discriminants are 0 or 1 mod 4")
    d = squarefree_part(disc)
    if d % 4 == 1:  # Python mod keeps this correct for negative d
        D0 = d
    else:
        D0 = 4 * d
    f2 = disc // D0
    f = isqrt(f2)
    assert f * f == f2, (disc, D0)
    return D0, f


def floor_two_over_pi_sqrt(x: int) -> int:
    """floor((2/pi) * sqrt(x)) for an integer x >= 0, provably exact.

    Uses the 50-digit bracketing PI_NUM/PI_DEN < pi < (PI_NUM+1)/PI_DEN and
    compares squares, so no floating point enters the decision path.  The
    condition m <= (2/pi)sqrt(x) is equivalent (pi irrational, x integer,
    hence never equality for m > 0) to m**2 * pi**2 < 4x.
    """
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return 0
    # float seed, then correct with exact comparisons
    m = isqrt(4 * x * PI_DEN**2 // PI_NUM**2)
    four_x = 4 * x * PI_DEN**2

    def definitely_valid(k: int) -> bool:
        return k * k * (PI_NUM + 1) ** 2 < four_x

    def definitely_invalid(k: int) -> bool:
        return k * k * PI_NUM**2 > four_x

    while definitely_valid(m + 1):
        m += 1
    while m > 0 and definitely_invalid(m):
        m -= 1
    # the 50-digit window decides every m in desk range; assert no straddle
    if m > 0 and not definitely_valid(m):
        raise AssertionError(f"pi bracketing too coarse for x={x}")
    return m


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    """Combine r mod m1 and r mod m2 (coprime moduli) into r mod m1*m2."""
    g = gcd(m1, m2)
    if g != 1:
        raise ValueError("moduli must be coprime")
    r = (r1 + (r2 - r1) * pow(m1, -1, m2) % m2 * m1) % (m1 * m2)
    return r, m1 * m2


def sqrt_mod_prime_power(a: int, ell: int, e: int) -> list[int]:
    """All solutions x of x**2 = a mod ell**e (small ell**e, brute force)."""
    mod = ell**e
    a %= mod
    return [x for x in range(mod) if x * x % mod == a]


def multiplicative_order(a: int, m: int) -> int:
    """Order of a in (Z/m)*.  ValueError unless gcd(a, m) = 1."""
    if m < 1:
        raise ValueError("modulus must be positive")
    a %= m
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit mod {m}")
    order, x = 1, a % m
    while x != 1 % m:
        x = x * a % m
        order += 1
    return order
