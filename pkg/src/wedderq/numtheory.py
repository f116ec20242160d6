"""Exact integer number theory: totient, p-adic valuations, multiplicative orders.

Everything here works on arbitrary-precision Python ints.  Inputs stay at
desk scale (well below 10**6), so primality is plain trial division.
"""

from __future__ import annotations

from math import gcd, isqrt


def is_prime(n: int) -> bool:
    """Deterministic trial division primality test."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d <= isqrt(n):
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    """Sorted list of positive divisors of n >= 1."""
    if n < 1:
        raise ValueError(f"divisors of {n} undefined")
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def euler_phi(n: int) -> int:
    """Euler totient: the number of 1 <= a <= n coprime to n."""
    if n < 1:
        raise ValueError(f"euler_phi requires n >= 1, got {n}")
    result = n
    for p in factorize(n):
        result = result // p * (p - 1)
    return result


def p_adic_val(p: int, m: int) -> int:
    """Largest k with p**k dividing m, for p prime and m >= 1."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1:
        raise ValueError(f"p_adic_val requires m >= 1, got {m}")
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return k


def mult_order(r: int, m: int) -> int:
    """Least k >= 1 with r**k = 1 mod m; returns 1 when m = 1."""
    if m < 1:
        raise ValueError(f"mult_order requires m >= 1, got {m}")
    if m == 1:
        return 1
    r = r % m
    if gcd(r, m) != 1:
        raise ValueError(f"mult_order requires gcd(r, m) = 1, got r={r}, m={m}")
    k, x = 1, r
    while x != 1:
        x = (x * r) % m
        k += 1
    return k


def units_mod(k: int) -> tuple[int, ...]:
    """The unit group of Z/k as a sorted tuple of residues; (1,) for k <= 2."""
    if k < 1:
        raise ValueError(f"units_mod requires k >= 1, got {k}")
    if k <= 2:
        return (1,)
    return tuple(a for a in range(1, k) if gcd(a, k) == 1)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), extending the Jacobi symbol to all integers."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    # factor out twos of n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t and a % 2 == 0:
        return 0
    if t % 2 == 1 and a % 8 in (3, 5):
        sign = -sign
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0
