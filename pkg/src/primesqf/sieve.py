"""Segmented sieves producing primality / squarefreeness / Mobius bitmaps.

Segments are numpy-backed: prime and squarefree bitmaps are packed into
little-endian 64-bit words (bit j of word i marks offset 64*i + j),
Mobius segments are int8 arrays.  Disjoint segments share only the
read-only base prime table, so they can be built in parallel workers.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import Enum
from math import isqrt

import numpy as np

__all__ = [
    "Kind",
    "SegmentBitmap",
    "SieveRangeError",
    "sieve_primes",
    "sieve_squarefree",
    "sieve_mobius",
    "dump_bitmap",
    "load_bitmap",
    "DEFAULT_SEGMENT_SIZE",
    "MAX_SEGMENT_SPAN",
]

DEFAULT_SEGMENT_SIZE = 1 << 22
# Hard cap on a single segment's element count (memory budget guard).
MAX_SEGMENT_SPAN = 1 << 26

_MAGIC = b"SQFSEGB1"


class SieveRangeError(ValueError):
    pass


class Kind(Enum):
    PRIME = 1
    SQUAREFREE = 2
    MOBIUS = 3


_base_primes = np.array([2, 3], dtype=np.int64)
_base_limit = 3


def base_primes(limit: int) -> np.ndarray:
    """Primes <= limit from a shared table, regrown geometrically on demand."""
    global _base_primes, _base_limit
    if limit > _base_limit:
        new_limit = max(limit, 2 * _base_limit, 1 << 16)
        flags = np.ones(new_limit + 1, dtype=bool)
        flags[:2] = False
        for p in range(2, isqrt(new_limit) + 1):
            if flags[p]:
                flags[p * p :: p] = False
        _base_primes = np.nonzero(flags)[0].astype(np.int64)
        _base_limit = new_limit
    return _base_primes[: int(np.searchsorted(_base_primes, limit, side="right"))]


def _pack(flags: np.ndarray) -> np.ndarray:
    bits = np.packbits(flags, bitorder="little")
    pad = (-len(bits)) % 8
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    return bits.view("<u8")


def _unpack(words: np.ndarray, length: int) -> np.ndarray:
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")
    return bits[:length].astype(bool)


@dataclass
class SegmentBitmap:
    """Bit- or byte-vector over the inclusive integer interval [lo, hi]."""

    lo: int
    hi: int
    kind: Kind
    data: np.ndarray  # uint64 packed words, or int8 for Kind.MOBIUS

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def get(self, n: int):
        """Value at absolute position n: bool for bitmaps, int for Mobius."""
        if not self.lo <= n <= self.hi:
            raise IndexError(f"{n} outside segment [{self.lo}, {self.hi}]")
        i = n - self.lo
        if self.kind is Kind.MOBIUS:
            return int(self.data[i])
        return bool((int(self.data[i >> 6]) >> (i & 63)) & 1)

    def to_array(self) -> np.ndarray:
        """Unpacked values: bool array for bitmaps, int8 array for Mobius."""
        if self.kind is Kind.MOBIUS:
            return self.data
        return _unpack(self.data, len(self))

    def count(self) -> int:
        """Set bits (bitmaps) or nonzero entries (Mobius), word-parallel."""
        if self.kind is Kind.MOBIUS:
            return int(np.count_nonzero(self.data))
        return int(np.bitwise_count(self.data).sum())

    def positions(self) -> np.ndarray:
        """Absolute positions of set bits / nonzero entries."""
        arr = self.to_array()
        return np.nonzero(arr)[0] + self.lo


def _check_range(lo: int, hi: int, max_span: int) -> None:
    if lo < 1 or hi < lo:
        raise SieveRangeError(f"need 1 <= lo <= hi, got [{lo}, {hi}]")
    if hi - lo + 1 > max_span:
        raise SieveRangeError(
            f"segment span {hi - lo + 1} exceeds the configured budget {max_span}"
        )


def sieve_primes(lo: int, hi: int, max_span: int = MAX_SEGMENT_SPAN) -> SegmentBitmap:
    """Eratosthenes over [lo, hi] using base primes up to sqrt(hi)."""
    _check_range(lo, hi, max_span)
    n = hi - lo + 1
    flags = np.ones(n, dtype=bool)
    if lo == 1:
        flags[0] = False
    for p in base_primes(isqrt(hi)).tolist():
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start > hi:
            continue
        flags[start - lo :: p] = False
    return SegmentBitmap(lo, hi, Kind.PRIME, _pack(flags))


def sieve_squarefree(lo: int, hi: int, max_span: int = MAX_SEGMENT_SPAN) -> SegmentBitmap:
    """Clear exactly the multiples of p^2 for each prime p <= sqrt(hi)."""
    _check_range(lo, hi, max_span)
    n = hi - lo + 1
    flags = np.ones(n, dtype=bool)
    for p in base_primes(isqrt(hi)).tolist():
        q = p * p
        start = ((lo + q - 1) // q) * q
        if start > hi:
            continue
        flags[start - lo :: q] = False
    return SegmentBitmap(lo, hi, Kind.SQUAREFREE, _pack(flags))


def sieve_mobius(lo: int, hi: int, max_span: int = MAX_SEGMENT_SPAN) -> SegmentBitmap:
    """Per-element Mobius values over [lo, hi]."""
    _check_range(lo, hi, max_span)
    n = hi - lo + 1
    mu = np.ones(n, dtype=np.int8)
    rem = np.arange(lo, hi + 1, dtype=np.int64)
    for p in base_primes(isqrt(hi)).tolist():
        start = ((lo + p - 1) // p) * p
        if start > hi:
            continue
        sl = slice(start - lo, None, p)
        mu[sl] *= -1
        rem[sl] //= p
        q = p * p
        start2 = ((lo + q - 1) // q) * q
        if start2 <= hi:
            mu[start2 - lo :: q] = 0
    # a leftover rem > 1 is a single prime factor above sqrt(hi)
    mu[rem > 1] *= -1
    if lo == 1:
        mu[0] = 1
    return SegmentBitmap(lo, hi, Kind.MOBIUS, mu)


def dump_bitmap(bm: SegmentBitmap, path) -> None:
    """Binary checkpoint: magic, kind, lo, hi, then little-endian payload."""
    header = _MAGIC + struct.pack("<BQQ", bm.kind.value, bm.lo, bm.hi)
    payload = bm.data.astype("<u8").tobytes() if bm.kind is not Kind.MOBIUS else bm.data.tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def load_bitmap(path) -> SegmentBitmap:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[: len(_MAGIC)] != _MAGIC:
        raise ValueError(f"{path}: not a segment bitmap file")
    kind_v, lo, hi = struct.unpack_from("<BQQ", raw, len(_MAGIC))
    kind = Kind(kind_v)
    payload = raw[len(_MAGIC) + 17 :]
    if kind is Kind.MOBIUS:
        data = np.frombuffer(payload, dtype=np.int8).copy()
        if len(data) != hi - lo + 1:
            raise ValueError(f"{path}: payload length mismatch")
    else:
        data = np.frombuffer(payload, dtype="<u8").copy()
        if len(data) != (hi - lo + 1 + 63) // 64:
            raise ValueError(f"{path}: payload length mismatch")
    return SegmentBitmap(int(lo), int(hi), kind, data)
