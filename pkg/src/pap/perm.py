"""Permutation arithmetic.

Permutations are plain tuples of 0-based values in one-line notation, so
``(1, 3, 0, 2)`` is the permutation written ``2413``.  Text I/O (``parse`` /
``display``) is 1-based.  Sets of length-k patterns are Python ints used as
bitmasks over the lexicographic ranks of S_k.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Sequence

Perm = tuple[int, ...]

MAX_LENGTH = 64


class PermError(ValueError):
    pass


def _check_length(n: int) -> None:
    if n > MAX_LENGTH:
        raise PermError(f"length {n} exceeds the engine cap of {MAX_LENGTH}")


def standardize(seq: Sequence[int]) -> Perm:
    """Return the permutation order-isomorphic to ``seq``."""
    if len(seq) == 0:
        raise PermError("cannot standardize an empty sequence")
    _check_length(len(seq))
    order = sorted(range(len(seq)), key=seq.__getitem__)
    out = [0] * len(seq)
    for r, idx in enumerate(order):
        out[idx] = r
    if len(set(seq)) != len(seq):
        raise PermError(f"duplicate entries in {list(seq)}")
    return tuple(out)


def is_perm(seq: Sequence[int]) -> bool:
    return sorted(seq) == list(range(len(seq)))


def identity(n: int) -> Perm:
    return tuple(range(n))


def decreasing(n: int) -> Perm:
    return tuple(range(n - 1, -1, -1))


def is_monotone(p: Sequence[int]) -> bool:
    return tuple(p) == identity(len(p)) or tuple(p) == decreasing(len(p))


# --- text I/O -------------------------------------------------------------

def parse(text: str) -> Perm:
    """Parse ``"2413"`` or ``"10,11,12,7,..."`` (1-based) into a permutation."""
    text = text.strip()
    if not text:
        raise PermError("empty permutation text")
    try:
        if "," in text:
            values = [int(tok) for tok in text.split(",")]
        else:
            if not text.isdigit():
                raise ValueError
            values = [int(ch) for ch in text]
    except ValueError:
        raise PermError(f"malformed permutation text {text!r}") from None
    perm = tuple(v - 1 for v in values)
    if not is_perm(perm):
        raise PermError(f"{text!r} is not a permutation of 1..{len(values)}")
    _check_length(len(perm))
    return perm


def display(p: Sequence[int]) -> str:
    if len(p) <= 9:
        return "".join(str(v + 1) for v in p)
    return ",".join(str(v + 1) for v in p)


def parse_list(text: str) -> list[Perm]:
    """Comma-separated short patterns, e.g. ``"1234,4321,1324"``."""
    text = text.strip()
    if not text:
        return []
    return [parse(tok) for tok in text.split(",")]


# --- symmetries -----------------------------------------------------------

def reverse(p: Sequence[int]) -> Perm:
    return tuple(reversed(p))


def complement(p: Sequence[int]) -> Perm:
    n = len(p)
    return tuple(n - 1 - v for v in p)


def inverse(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def _rc(p: Sequence[int]) -> Perm:
    return complement(reverse(p))


# The dihedral group of the square acting on permutations.  Index 0 is the
# identity; 1, 2, 3 are reverse, complement and reverse-complement (these
# four commute with reverse); 4..7 are the same composed with inverse.
SYMMETRIES = (
    tuple,
    reverse,
    complement,
    _rc,
    inverse,
    lambda p: reverse(inverse(p)),
    lambda p: complement(inverse(p)),
    lambda p: _rc(inverse(p)),
)
SYMMETRY_NAMES = ("id", "r", "c", "rc", "i", "ri", "ci", "rci")


# --- containment ----------------------------------------------------------

def contains(perm: Sequence[int], patt: Sequence[int]) -> bool:
    """True iff some subsequence of ``perm`` is order-isomorphic to ``patt``."""
    k = len(patt)
    n = len(perm)
    if k > n:
        return False
    if k == 0:
        return True
    # For each pattern position, the earlier positions whose values are the
    # nearest below / above it; checking those two neighbours suffices.
    below = []
    above = []
    for j in range(k):
        lo = hi = -1
        for i in range(j):
            if patt[i] < patt[j] and (lo < 0 or patt[i] > patt[lo]):
                lo = i
            if patt[i] > patt[j] and (hi < 0 or patt[i] < patt[hi]):
                hi = i
        below.append(lo)
        above.append(hi)
    chosen = [0] * k

    def extend(j: int, start: int) -> bool:
        if j == k:
            return True
        lo, hi = below[j], above[j]
        for idx in range(start, n - (k - j) + 1):
            v = perm[idx]
            if lo >= 0 and v < chosen[lo]:
                continue
            if hi >= 0 and v > chosen[hi]:
                continue
            chosen[j] = v
            if extend(j + 1, idx + 1):
                return True
        return False

    return extend(0, 0)


def avoids(perm: Sequence[int], patterns: Iterable[Sequence[int]]) -> bool:
    return not any(contains(perm, p) for p in patterns)


def shadow(perm: Sequence[int], length: int) -> set[Perm]:
    """All ``length``-patterns contained in ``perm``."""
    if not 1 <= length <= len(perm):
        raise PermError(f"shadow length {length} out of range for a length-{len(perm)} permutation")
    seen: set[tuple[int, ...]] = set()
    out: set[Perm] = set()
    for idx in itertools.combinations(range(len(perm)), length):
        sub = tuple(perm[i] for i in idx)
        if sub in seen:
            continue
        seen.add(sub)
        out.add(standardize(sub))
    return out


# --- statistics -----------------------------------------------------------

def lis(perm: Sequence[int]) -> int:
    import bisect

    tails: list[int] = []
    for v in perm:
        pos = bisect.bisect_left(tails, v)
        if pos == len(tails):
            tails.append(v)
        else:
            tails[pos] = v
    return len(tails)


def lds(perm: Sequence[int]) -> int:
    return lis([-v for v in perm])


# --- sums and insertions --------------------------------------------------

def direct_sum(a: Sequence[int], b: Sequence[int]) -> Perm:
    _check_length(len(a) + len(b))
    return tuple(a) + tuple(v + len(a) for v in b)


def skew_sum(a: Sequence[int], b: Sequence[int]) -> Perm:
    _check_length(len(a) + len(b))
    return tuple(v + len(b) for v in a) + tuple(b)


def insert_into_cell(r: int, i: int, j: int) -> Perm:
    """Insert one point into the increasing r-pattern with i points to its
    left and j points below it."""
    if not (0 <= i <= r and 0 <= j <= r):
        raise PermError(f"cell ({i},{j}) outside the grid of an increasing {r}-pattern")
    _check_length(r + 1)
    base = [v if v < j else v + 1 for v in range(r)]
    return tuple(base[:i] + [j] + base[i:])


# --- ranks and pattern masks ----------------------------------------------

@lru_cache(maxsize=None)
def all_perms(k: int) -> tuple[Perm, ...]:
    """S_k in lexicographic order."""
    return tuple(itertools.permutations(range(k)))


@lru_cache(maxsize=None)
def _rank_table(k: int) -> dict[Perm, int]:
    return {p: i for i, p in enumerate(all_perms(k))}


def rank(p: Sequence[int]) -> int:
    """Lexicographic rank of ``p`` within S_|p|."""
    k = len(p)
    if k <= 8:
        return _rank_table(k)[tuple(p)]
    r = 0
    for i, v in enumerate(p):
        smaller = sum(1 for w in p[i + 1:] if w < v)
        r = r * (k - i) + smaller
    return r


def unrank(k: int, r: int) -> Perm:
    return all_perms(k)[r]


def mask_of(patterns: Iterable[Sequence[int]]) -> int:
    m = 0
    for p in patterns:
        m |= 1 << rank(p)
    return m


def patterns_of(mask: int, k: int) -> list[Perm]:
    out = []
    while mask:
        low = mask & -mask
        out.append(unrank(k, low.bit_length() - 1))
        mask ^= low
    return out


def monotone_mask(k: int) -> int:
    return mask_of([identity(k), decreasing(k)])


@lru_cache(maxsize=None)
def symmetry_rank_maps(k: int) -> tuple[tuple[int, ...], ...]:
    """For each dihedral symmetry, the induced permutation of S_k ranks."""
    perms = all_perms(k)
    table = _rank_table(k)
    return tuple(tuple(table[f(p)] for p in perms) for f in SYMMETRIES)


@lru_cache(maxsize=None)
def _byte_tables(k: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    # image of each byte-chunk of a mask, per symmetry
    maps = symmetry_rank_maps(k)
    nbytes = (len(maps[0]) + 7) // 8
    out = []
    for m in maps:
        chunks = []
        for b in range(nbytes):
            row = []
            for byte in range(256):
                img = 0
                for bit in range(8):
                    src = 8 * b + bit
                    if byte >> bit & 1 and src < len(m):
                        img |= 1 << m[src]
                row.append(img)
            chunks.append(tuple(row))
        out.append(tuple(chunks))
    return tuple(out)


def map_mask(mask: int, k: int, sym: int) -> int:
    """Image of a pattern mask under symmetry number ``sym``."""
    tables = _byte_tables(k)[sym]
    img = 0
    for b, row in enumerate(tables):
        byte = mask >> (8 * b) & 0xFF
        if byte:
            img |= row[byte]
    return img


def canonical_mask(mask: int, k: int, group: Sequence[int] = range(8)) -> int:
    return min(map_mask(mask, k, s) for s in group)


def reverse_mask(mask: int, k: int) -> int:
    return map_mask(mask, k, 1)
