"""Vectorized permutation kernels over numpy arrays.

A batch of permutations of a common length is an ``(N, n)`` uint8 array of
0-based values.  Order types of column subsets are read off through the
pairwise inversion pattern, so every kernel here is a loop over column
subsets with whole-batch array operations inside.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .perm import Perm, all_perms


@lru_cache(maxsize=None)
def _pairs(k: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(k), 2))


def inversion_key(p: Sequence[int]) -> int:
    key = 0
    for b, (x, y) in enumerate(_pairs(len(p))):
        if p[x] > p[y]:
            key |= 1 << b
    return key


@lru_cache(maxsize=None)
def key_to_rank(k: int) -> np.ndarray:
    """Lookup from inversion key to lexicographic rank (-1 if inconsistent)."""
    table = np.full(1 << len(_pairs(k)), -1, dtype=np.int16)
    for r, p in enumerate(all_perms(k)):
        table[inversion_key(p)] = r
    return table


def key_dtype(k: int):
    bits = len(_pairs(k))
    return np.uint8 if bits <= 8 else np.uint16 if bits <= 16 else np.uint32


class _Planes:
    """Lazily computed comparison planes ``arr[:, x] > arr[:, y]``."""

    def __init__(self, arr: np.ndarray, dtype):
        self.arr = arr
        self.dtype = dtype
        self._cache: dict[tuple[int, int], np.ndarray] = {}

    def get(self, x: int, y: int) -> np.ndarray:
        plane = self._cache.get((x, y))
        if plane is None:
            plane = (self.arr[:, x] > self.arr[:, y]).astype(self.dtype)
            self._cache[(x, y)] = plane
        return plane

    def key(self, cols: Sequence[int]) -> np.ndarray:
        key = np.zeros(self.arr.shape[0], dtype=self.dtype)
        for b, (x, y) in enumerate(_pairs(len(cols))):
            plane = self.get(cols[x], cols[y])
            if b:
                key |= plane << self.dtype(b)
            else:
                key |= plane
        return key


def all_perms_array(n: int) -> np.ndarray:
    """S_n in lexicographic order as an ``(n!, n)`` uint8 array."""
    arr = np.zeros((1, 0), dtype=np.uint8)
    for m in range(1, n + 1):
        # prepend a first value v to every permutation of the rest
        blocks = []
        for v in range(m):
            rest = arr + (arr >= v).astype(np.uint8)
            blocks.append(np.hstack([np.full((rest.shape[0], 1), v, dtype=np.uint8), rest]))
        arr = np.vstack(blocks)
    return arr


def to_array(perms: Iterable[Perm], n: int) -> np.ndarray:
    rows = list(perms)
    if not rows:
        return np.zeros((0, n), dtype=np.uint8)
    return np.array(rows, dtype=np.uint8).reshape(len(rows), n)


def ranks(arr: np.ndarray) -> list[int]:
    """Lexicographic ranks (exact Python ints for any length)."""
    n_rows, n = arr.shape
    if n == 0:
        return [0] * n_rows
    if n <= 20:
        total = np.zeros(n_rows, dtype=np.int64)
        for i in range(n):
            smaller = (arr[:, i + 1:] < arr[:, i:i + 1]).sum(axis=1, dtype=np.int64)
            total += smaller * math.factorial(n - 1 - i)
        return total.tolist()
    out = []
    for row in arr.tolist():
        r = 0
        for i, v in enumerate(row):
            r = r * (n - i) + sum(1 for w in row[i + 1:] if w < v)
        out.append(r)
    return out


def sort_lex(arr: np.ndarray) -> np.ndarray:
    if arr.shape[0] <= 1 or arr.shape[1] == 0:
        return arr
    order = np.lexsort(arr.T[::-1])
    return arr[order]


def shadow_words(arr: np.ndarray, k: int) -> np.ndarray:
    """k-shadow of every row as a bitmask over S_k ranks.

    Returns an ``(N, W)`` uint64 array with ``W = ceil(k!/64)``.
    """
    n_rows, n = arr.shape
    n_words = (math.factorial(k) + 63) // 64
    words = np.zeros((n_rows, n_words), dtype=np.uint64)
    if k > n or n_rows == 0:
        return words
    table = key_to_rank(k)
    planes = _Planes(arr, key_dtype(k))
    one = np.uint64(1)
    for cols in itertools.combinations(range(n), k):
        r = table[planes.key(cols)].astype(np.int64)
        if n_words == 1:
            words[:, 0] |= one << r.astype(np.uint64)
        else:
            wi = r >> 6
            bit = one << (r & 63).astype(np.uint64)
            for w in range(n_words):
                sel = wi == w
                if sel.any():
                    words[sel, w] |= bit[sel]
    return words


def words_to_int(row: np.ndarray) -> int:
    m = 0
    for w, val in enumerate(row.tolist()):
        m |= int(val) << (64 * w)
    return m


def shadow_masks(arr: np.ndarray, k: int) -> list[int]:
    words = shadow_words(arr, k)
    if words.shape[1] == 1:
        return [int(v) for v in words[:, 0].tolist()]
    return [words_to_int(row) for row in words]


def contains_rows(arr: np.ndarray, patt: Sequence[int], stop_early: bool = False) -> np.ndarray:
    """Boolean vector: which rows contain ``patt``."""
    n_rows, n = arr.shape
    k = len(patt)
    hit = np.zeros(n_rows, dtype=bool)
    if k > n or n_rows == 0:
        return hit
    if k == 1:
        hit[:] = True
        return hit
    target = inversion_key(patt)
    planes = _Planes(arr, key_dtype(k))
    for cols in itertools.combinations(range(n), k):
        hit |= planes.key(cols) == target
        if stop_early and hit.any():
            break
    return hit


def _slot_rules(patterns: Sequence[Perm]) -> dict[int, list[tuple[int, int]]]:
    """Map inversion key of (pattern minus its maximum) to (k-1, split) pairs.

    ``split`` is the position of the maximum in the pattern: the new point
    must sit after ``split`` of the matched parent entries.
    """
    rules: dict[int, list[tuple[int, int]]] = {}
    for p in patterns:
        k = len(p)
        a = p.index(k - 1)
        rest = p[:a] + p[a + 1:]
        rules.setdefault(inversion_key(rest) if k > 1 else 0, []).append((k - 1, a))
    return rules


def extend_by_maximum(parents: np.ndarray, patterns: Sequence[Perm]) -> np.ndarray:
    """Children of avoiders obtained by inserting a new maximum.

    ``parents`` must avoid every pattern; a child avoids them iff no
    occurrence uses the new maximum, so only those occurrences are tested.
    The result is grouped by insertion slot, not sorted.
    """
    n_rows, m1 = parents.shape
    m = m1 + 1
    allowed = np.ones((n_rows, m), dtype=bool)
    by_len: dict[int, list[Perm]] = {}
    for p in patterns:
        by_len.setdefault(len(p), []).append(p)
    for k, group in by_len.items():
        if k - 1 > m1:
            continue
        rules = _slot_rules(group)
        if k == 1:
            allowed[:] = False
            continue
        planes = _Planes(parents, key_dtype(k - 1))
        for cols in itertools.combinations(range(m1), k - 1):
            if k - 1 == 1:
                key = np.zeros(n_rows, dtype=np.uint8)
            else:
                key = planes.key(cols)
            for rkey, splits in rules.items():
                rows = None
                for _, a in splits:
                    lo = cols[a - 1] + 1 if a > 0 else 0
                    hi = cols[a] if a < k - 1 else m1
                    if rows is None:
                        rows = key == rkey
                        if not rows.any():
                            break
                    allowed[rows, lo:hi + 1] = False
    pieces = []
    for j in range(m):
        sel = allowed[:, j]
        if not sel.any():
            continue
        par = parents[sel]
        col = np.full((par.shape[0], 1), m1, dtype=np.uint8)
        pieces.append(np.hstack([par[:, :j], col, par[:, j:]]))
    if not pieces:
        return np.zeros((0, m), dtype=np.uint8)
    return np.vstack(pieces)
