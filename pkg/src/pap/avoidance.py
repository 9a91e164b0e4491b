"""Avoider sets Av_n(F): generation, counting, legality, and the
monotone-forcing threshold of B_k."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import vec
from .perm import Perm, PermError, patterns_of

log = logging.getLogger(__name__)

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1


def _normalize(forbidden: Iterable) -> tuple[Perm, ...]:
    pats = tuple(sorted({tuple(p) for p in forbidden}))
    if len({len(p) for p in pats}) > 1:
        raise PermError("forbidden patterns must share one length")
    if any(len(p) == 0 for p in pats):
        raise PermError("empty pattern in forbidden set")
    return pats


def fingerprint(n: int, ranks: Iterable[int]) -> int:
    """64-bit FNV-1a digest, word-wise, of (n, count, sorted ranks).

    Only the surviving set enters the digest, so two forbidden sets with
    the same avoiders share a fingerprint.
    """
    ranks = sorted(ranks)
    h = FNV_OFFSET
    for w in (n, len(ranks)):
        h = ((h ^ w) * FNV_PRIME) & _U64
    for r in ranks:
        while True:
            h = ((h ^ (r & _U64)) * FNV_PRIME) & _U64
            r >>= 64
            if not r:
                break
    return h


@dataclass
class AvoiderSet:
    n: int
    forbidden: tuple[Perm, ...]
    array: np.ndarray = field(repr=False)  # (count, n) uint8, lexicographic order
    _fingerprint: Optional[int] = field(default=None, repr=False)

    @property
    def count(self) -> int:
        return int(self.array.shape[0])

    def __len__(self) -> int:
        return self.count

    @property
    def members(self) -> list[Perm]:
        return [tuple(row) for row in self.array.tolist()]

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, perm) -> bool:
        if len(perm) != self.n:
            return False
        return bool((self.array == np.asarray(perm, dtype=np.uint8)).all(axis=1).any())

    @property
    def ranks(self) -> list[int]:
        return vec.ranks(self.array)

    @property
    def fingerprint(self) -> int:
        if self._fingerprint is None:
            self._fingerprint = fingerprint(self.n, self.ranks)
        return self._fingerprint


def _levels(n: int, pats: tuple[Perm, ...]):
    """Yield the avoider frontier for lengths 1..n."""
    arr = np.zeros((1, 0), dtype=np.uint8)
    for m in range(1, n + 1):
        arr = vec.extend_by_maximum(arr, pats)
        yield m, arr


_CACHE_LIMIT = 256
_cache: dict[tuple[int, tuple[Perm, ...]], AvoiderSet] = {}


def _enumerate(n: int, pats: tuple[Perm, ...]) -> AvoiderSet:
    key = (n, pats)
    av = _cache.get(key)
    if av is None:
        arr = np.zeros((1, 0), dtype=np.uint8)
        for _, arr in _levels(n, pats):
            pass
        av = AvoiderSet(n, pats, vec.sort_lex(arr))
        if len(_cache) >= _CACHE_LIMIT:
            _cache.clear()
        _cache[key] = av
    return av


def enumerate_avoiders(n: int, forbidden: Iterable = ()) -> AvoiderSet:
    if n < 1:
        raise PermError(f"length must be positive, got {n}")
    return _enumerate(n, _normalize(forbidden))


def count_avoiders(n: int, forbidden: Iterable = ()) -> int:
    """|Av_n(F)|, streaming the generation tree unless the set is cached."""
    if n < 1:
        raise PermError(f"length must be positive, got {n}")
    pats = _normalize(forbidden)
    cached = _cache.get((n, pats))
    if cached is not None:
        return cached.count
    count = 0
    for _, arr in _levels(n, pats):
        count = arr.shape[0]
    return count


def count_sequence(n_max: int, forbidden: Iterable = ()) -> list[int]:
    """|Av_m(F)| for m = 1..n_max, streaming one frontier at a time."""
    pats = _normalize(forbidden)
    return [arr.shape[0] for _, arr in _levels(n_max, pats)]


def is_legal(n: int, forbidden: Iterable, p) -> bool:
    """Does some member of Av_n(F) contain p?"""
    pats = _normalize(forbidden)
    p = tuple(p)
    if pats and len(p) != len(pats[0]):
        raise PermError(f"pattern {p} has length {len(p)}, forbidden set has length {len(pats[0])}")
    if p in pats or len(p) > n:
        return False
    av = _enumerate(n, pats)
    return bool(vec.contains_rows(av.array, p, stop_early=True).any())


def legal_patterns(n: int, forbidden: Iterable, k: int) -> list[Perm]:
    """All length-k patterns legal from Av_n(F)."""
    av = enumerate_avoiders(n, forbidden)
    if av.count == 0 or k > n:
        return []
    words = vec.shadow_words(av.array, k)
    union = np.bitwise_or.reduce(words, axis=0)
    return patterns_of(vec.words_to_int(union), k)


def _only_monotone(arr: np.ndarray) -> bool:
    n = arr.shape[1]
    if n <= 1:
        return arr.shape[0] == 1
    if arr.shape[0] != 2:
        return False
    rows = {tuple(r) for r in arr.tolist()}
    return rows == {tuple(range(n)), tuple(range(n - 1, -1, -1))}


def threshold(k: int, n_max: int, counts: Optional[list] = None) -> Optional[int]:
    """Least N <= n_max with Av_n(B_k) = {id_n, id_n^r} for all n in [N, n_max].

    Stops at the first qualifying length m >= k, since the property
    persists from there.  ``counts``, if given, receives |Av_n(B_k)| per
    scanned length.
    """
    from .catalog import build_bk

    if k < 3:
        raise PermError(f"threshold needs k >= 3, got {k}")
    pats = _normalize(build_bk(k).members)
    start: Optional[int] = None
    for m, arr in _levels(n_max, pats):
        if counts is not None:
            counts.append(arr.shape[0])
        log.debug("k=%d n=%d |Av|=%d", k, m, arr.shape[0])
        if _only_monotone(arr):
            if start is None:
                start = m
            if m >= k:
                return start
        else:
            start = None
    return start
