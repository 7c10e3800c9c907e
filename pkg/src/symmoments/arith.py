"""Small elementary number theory helpers: sieves, factorization, divisor sums."""
from __future__ import annotations

from functools import lru_cache
from math import isqrt

import numpy as np


@lru_cache(maxsize=4)
def smallest_prime_factors(N: int) -> np.ndarray:
    """spf[n] for 0 <= n <= N, with spf[0] = 0 and spf[1] = 1."""
    spf = np.arange(N + 1, dtype=np.int64)
    for p in range(2, isqrt(N) + 1):
        if spf[p] == p:
            block = spf[p * p :: p]
            np.minimum(block, p, out=block)
    spf.setflags(write=False)
    return spf


def primes_upto(N: int) -> np.ndarray:
    if N < 2:
        return np.zeros(0, dtype=np.int64)
    spf = smallest_prime_factors(N)
    n = np.arange(N + 1)
    return n[(spf == n) & (n >= 2)]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
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


@lru_cache(maxsize=4)
def prime_power_split(N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """For 2 <= n <= N write n = q * m with q = p^a || n, p = spf(n).

    Returns (spf, q, m) as arrays indexed by n; entries 0 and 1 are 1.
    """
    spf = smallest_prime_factors(N).copy()
    spf[:2] = 1
    n = np.arange(N + 1, dtype=np.int64)
    q = spf.copy()
    m = n // spf
    m[0] = 1
    mask = (m % spf == 0) & (spf > 1)
    while mask.any():
        q[mask] *= spf[mask]
        m[mask] //= spf[mask]
        mask = (m % spf == 0) & (spf > 1)
    for arr in (spf, q, m):
        arr.setflags(write=False)
    return spf, q, m


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def sigma(n: int, k: int) -> int:
    return sum(d**k for d in divisors(n))


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(abs(n)).values())


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a / n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a / n) for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0
