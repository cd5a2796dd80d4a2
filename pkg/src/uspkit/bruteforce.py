"""Brute-force reference implementations.

Each function here recomputes a quantity by direct enumeration, with no
shared logic with the fast paths it is used to check (multiplicative sieves,
order-based primitive-divisor search, certified exponential bounds).  They
are deliberately simple and are used by the test suite and by the CLI
``report`` command.
"""

from __future__ import annotations

from math import gcd, isqrt

import numpy as np

from . import arith
from .arith import factorize


def sigma_brute(n: int) -> int:
    """sigma(n) by enumerating divisor pairs up to sqrt(n)."""
    total = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            total += d
            if d != n // d:
                total += n // d
    return total


def sigma_star_brute(n: int) -> int:
    """sigma*(n) by enumerating divisors and keeping the unitary ones."""
    total = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            e = n // d
            if gcd(d, e) == 1:
                total += d
                if d != e:
                    total += e
    return total


def unitary_divisors_brute(n: int) -> list[int]:
    """All d | n with gcd(d, n/d) = 1, ascending."""
    return sorted(
        d for d in range(1, n + 1) if n % d == 0 and gcd(d, n // d) == 1
    )


def divisor_sum_tables(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """(sigma, sigma*) tables for 0..limit via a divisor-pair sweep.

    Adds every divisor d to all its multiples; independent of the
    least-prime-factor segment sieve used by the search engine.
    """
    sig = np.zeros(limit + 1, dtype=np.int64)
    usig = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        mult = np.arange(d, limit + 1, d, dtype=np.int64)
        sig[mult] += d
        unit = mult[np.gcd(mult // d, d) == 1]
        usig[unit] += d
    return sig, usig


def classify_brute(limit: int) -> dict[str, list[int]]:
    """Perfect-variant hit lists up to limit from the divisor-sweep tables."""
    # second applications need sigma values a few times past limit
    top = 0
    sig, usig = divisor_sum_tables(limit)
    top = int(max(sig[1:].max(initial=1), usig[1:].max(initial=1)))
    sig2, usig2 = divisor_sum_tables(top)
    ns = np.arange(limit + 1)
    out = {
        "usp": np.nonzero(usig2[usig[: limit + 1]] == 2 * ns)[0],
        "unitary_perfect": np.nonzero(usig[: limit + 1] == 2 * ns)[0],
        "super_perfect": np.nonzero(sig2[sig[: limit + 1]] == 2 * ns)[0],
        "perfect": np.nonzero(sig[: limit + 1] == 2 * ns)[0],
    }
    return {k: [int(x) for x in v if x >= 1] for k, v in out.items()}


def zsigmondy_brute(a: int, b: int, n: int):
    """Least prime factor of a**n - b**n dividing no earlier a**m - b**m.

    Returns the prime, or None when every prime factor already divides some
    a**m - b**m with m < n.  Pure divisibility trial, no order computation.
    """
    value = a**n - b**n
    for r, _ in factorize(value).entries:
        if all((a**m - b**m) % r != 0 for m in range(1, n)):
            return r
    return None


def exp_reference(x, dps: int = 50):
    """exp(x) to dps significant digits via mpmath, as an exact Fraction.

    The returned rational is the exact value of the high-precision float, so
    comparisons against certified rational bounds need no further rounding.
    """
    import mpmath
    from fractions import Fraction

    with mpmath.workdps(dps):
        v = mpmath.exp(mpmath.mpf(x.numerator) / x.denominator)
    sign, man, exp, _ = v._mpf_
    frac = Fraction(man) * Fraction(2) ** exp
    return -frac if sign else frac


def jacobi_euler(a: int, p: int) -> int:
    """(a/p) for odd prime p via Euler's criterion mapped onto {-1, 0, 1}."""
    r = arith.pow_mod(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r
