"""Exact multiplicative-function arithmetic on machine-range integers.

Everything here is pure integer math on Python ints: Mobius, Euler phi,
squarefree tests, divisor enumeration and primorials, backed by trial
division against a shared small-prime table with a deterministic
Miller-Rabin fallback for larger cofactors.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

__all__ = [
    "Factorization",
    "factorize",
    "is_prime",
    "is_squarefree",
    "mobius",
    "mu_squared_via_divisors",
    "euler_phi",
    "divisors",
    "squarefree_divisors",
    "primorial",
    "nth_prime",
    "small_primes",
]

_SMALL_LIMIT = 1 << 20
_small_primes: list[int] | None = None

# Verified deterministic witness set for n < 3.3 * 10^24 (Sorenson-Webster).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def small_primes() -> list[int]:
    """Shared prime table below 2^20 (built once, read-only afterwards)."""
    global _small_primes
    if _small_primes is None:
        flags = bytearray([1]) * _SMALL_LIMIT
        flags[0] = flags[1] = 0
        for p in range(2, isqrt(_SMALL_LIMIT - 1) + 1):
            if flags[p]:
                flags[p * p :: p] = bytes(len(range(p * p, _SMALL_LIMIT, p)))
        _small_primes = [i for i in range(_SMALL_LIMIT) if flags[i]]
    return _small_primes


def _miller_rabin(n: int) -> bool:
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Deterministic primality for 64-bit-range integers."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    if n < 17 * 17:
        return True
    if n < _SMALL_LIMIT:
        for p in small_primes():
            if p * p > n:
                return True
            if n % p == 0:
                return False
        return True
    return _miller_rabin(n)


@dataclass(frozen=True)
class Factorization:
    """Certified factorization: value == prod(p^e), primes strictly increasing."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def prime_factors(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(n: int) -> Factorization:
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    m = n
    factors = []
    for p in small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    if m > 1:
        if not is_prime(m):
            raise ValueError(f"cofactor {m} of {n} is not certifiably prime")
        factors.append((m, 1))
    return Factorization(value=n, factors=tuple(factors))


def mobius(n: int) -> int:
    """Mobius mu(n): 0 on non-squarefree n, else (-1)^(number of prime factors)."""
    if n < 1:
        raise ValueError(f"mobius requires n >= 1, got {n}")
    f = factorize(n)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def is_squarefree(n: int) -> bool:
    return mobius(n) != 0


def mu_squared_via_divisors(n: int) -> int:
    """Squarefree indicator through the identity mu^2(n) = sum over a^2 | n of mu(a).

    Deliberately takes the divisor-sum route so it can cross-check mobius().
    """
    if n < 1:
        raise ValueError(f"mu_squared_via_divisors requires n >= 1, got {n}")
    total = 0
    for a in range(1, isqrt(n) + 1):
        if n % (a * a) == 0:
            total += mobius(a)
    return total


def euler_phi(n: int) -> int:
    """Euler totient via the factored product formula."""
    if n < 1:
        raise ValueError(f"euler_phi requires n >= 1, got {n}")
    result = n
    for p, _ in factorize(n).factors:
        result -= result // p
    return result


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    ds = [1]
    for p, e in factorize(n).factors:
        ds = [d * p**j for d in ds for j in range(e + 1)]
    return sorted(ds)


def squarefree_divisors(k: int) -> list[int]:
    """The 2^omega(k) divisors of a squarefree k, ascending.

    Each divisor d is itself squarefree, so mobius(d) is (-1)^omega(d);
    callers needing the sign pair it with mobius().
    """
    if k < 1:
        raise ValueError(f"squarefree_divisors requires k >= 1, got {k}")
    f = factorize(k)
    if any(e > 1 for _, e in f.factors):
        raise ValueError(f"{k} is not squarefree")
    ds = [1]
    for p, _ in f.factors:
        ds = ds + [d * p for d in ds]
    return sorted(ds)


def primorial(m: int) -> int:
    """Product of the first m primes.

    Capped at m = 15 so the result always fits a signed 64-bit word
    (p_16# already overflows); the cap is an explicit error, never a wrap.
    """
    if m < 1:
        raise ValueError(f"primorial requires m >= 1, got {m}")
    if m > 15:
        raise OverflowError(f"primorial({m}) exceeds the 64-bit word range")
    out = 1
    for p in small_primes()[:m]:
        out *= p
    return out


def nth_prime(i: int) -> int:
    """The i-th prime (1-based), i limited to the shared small-prime table."""
    sp = small_primes()
    if not 1 <= i <= len(sp):
        raise ValueError(f"nth_prime supports 1 <= i <= {len(sp)}")
    return sp[i - 1]
