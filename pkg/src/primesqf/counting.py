"""Exact evaluation of the log-weighted representation counts.

Every operation here sums log p over primes by direct enumeration; the
divisor/progression decomposition is kept as an algebraically independent
path so the two can be compared term-for-term in tests.

Conventions. A representation of n is n = p + eta with p prime and eta a
squarefree number, eta >= 1.  Since 0 is not squarefree, p = n never
contributes (equivalently mu^2(0) = 0), and the decomposition path below
excludes p = n from its progression sums for the same reason.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import numpy as np

from . import arith, sieve

__all__ = [
    "WeightedCount",
    "Representation",
    "theta_ap",
    "R",
    "R_k",
    "R_de",
    "R_k_decomposed",
    "R_bar_k",
    "R_k_l",
    "enumerate_representations",
]


@dataclass(frozen=True)
class WeightedCount:
    """Sum of natural logs of the contributing primes plus their count.

    `value` is nonnegative for the top-level counts; the progression pieces
    carry Mobius signs, so for those `value` may be negative and `terms`
    counts contributing (a, p) pairs.
    """

    value: float
    terms: int


@dataclass(frozen=True)
class Representation:
    """Witness triple: p prime, eta squarefree, p + eta = n."""

    n: int
    p: int
    eta: int


# ---------------------------------------------------------------------------
# shared caches (grow-only; idempotent fills, safe under process parallelism)

_PRIMES = {"limit": 0, "primes": None, "logs": None}
_SQF = {"limit": 0, "flags": None}


def _primes_upto(n: int):
    if n > _PRIMES["limit"]:
        limit = max(1 << 12, 1 << (n - 1).bit_length())
        bm = sieve.sieve_primes(1, limit, max_span=limit + 1)
        primes = bm.positions().astype(np.int64)
        _PRIMES.update(limit=limit, primes=primes, logs=np.log(primes.astype(np.float64)))
    k = int(np.searchsorted(_PRIMES["primes"], n, side="right"))
    return _PRIMES["primes"][:k], _PRIMES["logs"][:k]


def _squarefree_flags(n: int) -> np.ndarray:
    if n > _SQF["limit"]:
        limit = max(1 << 12, 1 << (n - 1).bit_length())
        flags = np.zeros(limit + 1, dtype=bool)
        flags[1:] = sieve.sieve_squarefree(1, limit, max_span=limit + 1).to_array()
        _SQF.update(limit=limit, flags=flags)
    return _SQF["flags"]


class _Context:
    """Per-n scratch state: primes below n and memoized progression sums."""

    def __init__(self, n: int):
        primes, logs = _primes_upto(n - 1)
        self.n = n
        self.P = primes
        self.logs = logs
        self.D = n - primes  # eta values, all >= 1
        self.dmax = int(self.D[0]) if len(self.D) else 0
        self._theta = {}
        self._r_de = {}

    def sqf_mask(self) -> np.ndarray:
        return _squarefree_flags(self.n)[self.D]

    def theta_excl(self, m: int):
        """(sum of log p, count) over primes p < n with p = n (mod m)."""
        hit = self._theta.get(m)
        if hit is None:
            if m > self.dmax:
                hit = (0.0, 0)
            else:
                mask = self.D % m == 0
                hit = (math.fsum(self.logs[mask].tolist()), int(mask.sum()))
            self._theta[m] = hit
        return hit

    def r_de(self, d: int, e: int):
        hit = self._r_de.get((d, e))
        if hit is None:
            parts = []
            terms = 0
            for a in range(e, isqrt(self.n) + 1, e):
                if math.gcd(a, d) != e:
                    continue
                mu_a = arith.mobius(a)
                if mu_a == 0:
                    continue
                s, t = self.theta_excl(d * a * a // e)
                if t:
                    parts.append(mu_a * s)
                    terms += t
            hit = (math.fsum(parts), terms)
            self._r_de[(d, e)] = hit
        return hit


@lru_cache(maxsize=4)
def _context(n: int) -> _Context:
    return _Context(n)


def _require_squarefree(k: int, name: str = "k") -> None:
    if k < 1 or arith.mobius(k) == 0:
        raise ValueError(f"{name} = {k} must be a positive squarefree integer")


# ---------------------------------------------------------------------------
# operations

def theta_ap(x: int, m: int, residue_source: int) -> WeightedCount:
    """Chebyshev theta over a progression: sum of log p, p <= x, p = residue_source (mod m)."""
    if x < 2:
        raise ValueError(f"theta_ap requires x >= 2, got {x}")
    if m < 1:
        raise ValueError(f"theta_ap requires m >= 1, got {m}")
    primes, logs = _primes_upto(x)
    mask = primes % m == residue_source % m
    return WeightedCount(math.fsum(logs[mask].tolist()), int(mask.sum()))


def R(n: int) -> WeightedCount:
    """Log-weighted count of representations n = p + eta, eta squarefree."""
    return R_k(n, 1)


def R_k(n: int, k: int) -> WeightedCount:
    """As R, restricted to eta coprime to the squarefree modulus k."""
    if n < 3:
        raise ValueError(f"R_k requires n >= 3, got {n}")
    _require_squarefree(k)
    ctx = _context(n)
    mask = ctx.sqf_mask()
    if k > 1:
        mask = mask & (np.gcd(ctx.D, k) == 1)
    return WeightedCount(math.fsum(ctx.logs[mask].tolist()), int(mask.sum()))


def R_bar_k(n: int, k: int) -> WeightedCount:
    """As R_k, additionally dropping the trivial eta = 1 representation."""
    if n < 3:
        raise ValueError(f"R_bar_k requires n >= 3, got {n}")
    _require_squarefree(k)
    ctx = _context(n)
    mask = ctx.sqf_mask() & (ctx.D != 1)
    if k > 1:
        mask = mask & (np.gcd(ctx.D, k) == 1)
    return WeightedCount(math.fsum(ctx.logs[mask].tolist()), int(mask.sum()))


def R_k_l(n: int, k: int, l: int) -> WeightedCount:
    """As R_k with the extra constraint l | eta (i.e. p = n mod l)."""
    if n < 3:
        raise ValueError(f"R_k_l requires n >= 3, got {n}")
    _require_squarefree(k)
    _require_squarefree(l, "l")
    if math.gcd(k, l) != 1:
        raise ValueError(f"k = {k} and l = {l} must be coprime (the count is trivially 0 otherwise)")
    ctx = _context(n)
    mask = ctx.sqf_mask()
    if k > 1:
        mask = mask & (np.gcd(ctx.D, k) == 1)
    if l > 1:
        mask = mask & (ctx.D % l == 0)
    return WeightedCount(math.fsum(ctx.logs[mask].tolist()), int(mask.sum()))


def R_de(n: int, d: int, e: int) -> WeightedCount:
    """Signed progression sum: sum over a <= sqrt(n), (a, d) = e, of
    mu(a) * theta(n; d a^2 / e, n), with the p = n term excluded.

    The Mobius signs make this a signed quantity; `terms` counts the
    contributing (a, p) pairs.
    """
    if n < 3:
        raise ValueError(f"R_de requires n >= 3, got {n}")
    _require_squarefree(d, "d")
    if e < 1 or d % e != 0:
        raise ValueError(f"e = {e} must divide d = {d}")
    value, terms = _context(n).r_de(d, e)
    return WeightedCount(value, terms)


def R_k_decomposed(n: int, k: int) -> WeightedCount:
    """R_k evaluated through the divisor/progression decomposition
    sum over d | k of mu(d) * sum over e | d of R_de(n, d, e).

    Agrees with the direct R_k up to floating accumulation; kept as an
    independent evaluation path.
    """
    if n < 3:
        raise ValueError(f"R_k_decomposed requires n >= 3, got {n}")
    _require_squarefree(k)
    ctx = _context(n)
    parts = []
    terms = 0
    for d in arith.squarefree_divisors(k):
        mu_d = arith.mobius(d)
        for e in arith.squarefree_divisors(d):
            v, t = ctx.r_de(d, e)
            parts.append(mu_d * v)
            terms += t
    return WeightedCount(math.fsum(parts), terms)


def enumerate_representations(
    n: int, k: int, exclude_one: bool, limit: int, *, l: int = 1
) -> list[Representation]:
    """Up to `limit` witnesses in increasing p; exhaustive when fewer exist."""
    if n < 3:
        raise ValueError(f"enumerate_representations requires n >= 3, got {n}")
    _require_squarefree(k)
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    ctx = _context(n)
    flags = _squarefree_flags(n)
    out = []
    for p, eta in zip(ctx.P.tolist(), ctx.D.tolist()):
        if not flags[eta]:
            continue
        if exclude_one and eta == 1:
            continue
        if k > 1 and math.gcd(eta, k) != 1:
            continue
        if l > 1 and eta % l != 0:
            continue
        out.append(Representation(n, p, eta))
        if len(out) == limit:
            break
    return out
