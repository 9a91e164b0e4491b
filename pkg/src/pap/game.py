"""The PAP game: positions, Sprague-Grundy values and play statistics.

A position is given by (n, k, F).  What matters for play is only the set of
surviving permutations, and a move only looks at which k-patterns those
permutations contain.  So each permutation of S_n is reduced to its k-shadow
mask, and a position is identified with the union U of the shadows of its
survivors: the survivors of F are exactly the shadows contained in U, and
the legal moves are the bits of U.  Two forbidden sets with the same U are
the same position.  The representative forbidden set of U is its complement
``full & ~U``, which is what the cache stores.
"""

from __future__ import annotations

import json
import logging
import math
import random
import sys
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import vec
from .perm import (
    Perm,
    PermError,
    all_perms,
    canonical_mask,
    map_mask,
    mask_of,
    patterns_of,
    rank,
    reverse,
)

log = logging.getLogger(__name__)

MAX_GAME_K = 4
MAX_GAME_N = 10
CACHE_VERSION = 1

# below this many survivors, filtering is done on Python int lists
_LIST_CUTOFF = 3000

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10_000))


def mex(values: Iterable[int]) -> int:
    seen = set(values)
    g = 0
    while g in seen:
        g += 1
    return g


@dataclass(frozen=True)
class Position:
    n: int
    k: int
    forbidden: int = 0  # bitmask over lexicographic ranks of S_k

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise PermError("n and k must be positive")
        if self.forbidden >> math.factorial(self.k):
            raise PermError(f"forbidden mask has bits outside S_{self.k}")

    @classmethod
    def of(cls, n: int, k: int, patterns: Iterable = ()) -> "Position":
        pats = [tuple(p) for p in patterns]
        for p in pats:
            if len(p) != k:
                raise PermError(f"pattern {p} does not have length {k}")
        return cls(n, k, mask_of(pats))

    @property
    def patterns(self) -> list[Perm]:
        return patterns_of(self.forbidden, self.k)

    def with_pattern(self, p) -> "Position":
        return Position(self.n, self.k, self.forbidden | 1 << rank(p))


class ShadowSpace:
    """Distinct k-shadows of S_n, the data every PAP computation runs on."""

    def __init__(self, n: int, k: int, long_run: bool = False):
        if k > MAX_GAME_K:
            raise PermError(f"the game solver handles k <= {MAX_GAME_K}")
        if n > MAX_GAME_N and not long_run:
            raise PermError(f"n = {n} is beyond the default envelope n <= {MAX_GAME_N}")
        self.n = n
        self.k = k
        self.full = (1 << math.factorial(k)) - 1
        if n < k:
            self.masks = np.zeros(1, dtype=np.uint64)
        else:
            arr = vec.all_perms_array(n)
            self.masks = np.unique(vec.shadow_words(arr, k)[:, 0])
            del arr
        self.start = int(np.bitwise_or.reduce(self.masks))

    def __len__(self) -> int:
        return len(self.masks)

    def survivors(self, union: int):
        sub = self.masks[(self.masks & np.uint64(self.full & ~union)) == 0]
        return _shrink(sub)

    def union_of(self, forbidden: int) -> int:
        """Union of survivor shadows after forbidding ``forbidden``."""
        sub = self.masks[(self.masks & np.uint64(forbidden)) == 0]
        return int(np.bitwise_or.reduce(sub)) if len(sub) else 0

    def survivor_count(self, union: int) -> int:
        """Number of permutations of S_n alive at this position (slow path)."""
        if self.n < self.k:
            return math.factorial(self.n)
        arr = vec.all_perms_array(self.n)
        words = vec.shadow_words(arr, self.k)[:, 0]
        return int(((words & np.uint64(self.full & ~union)) == 0).sum())


def _shrink(sub):
    if isinstance(sub, np.ndarray) and len(sub) < _LIST_CUTOFF:
        return [int(x) for x in sub.tolist()]
    return sub


def _after(sub, bit: int):
    """Survivors and their union after forbidding the pattern ``bit``."""
    if isinstance(sub, list):
        child = [m for m in sub if not m & bit]
        u = 0
        for m in child:
            u |= m
        return u, child
    child = sub[(sub & np.uint64(bit)) == 0]
    u = int(np.bitwise_or.reduce(child)) if len(child) else 0
    return u, _shrink(child)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


class GrundyCache:
    """Sprague-Grundy values keyed by (n, k, canonical forbidden mask).

    The stored mask is the largest forbidden set giving the position,
    minimized over the dihedral group when ``symmetry`` is on.
    """

    def __init__(self, symmetry: bool = True):
        self.symmetry = symmetry
        self.tables: dict[tuple[int, int], dict[int, int]] = {}
        self.computed = 0
        self.hits = 0

    def table(self, n: int, k: int) -> dict[int, int]:
        return self.tables.setdefault((n, k), {})

    def key(self, k: int, union: int) -> int:
        full = (1 << math.factorial(k)) - 1
        f = full & ~union
        return canonical_mask(f, k) if self.symmetry else f

    def __len__(self) -> int:
        return sum(len(t) for t in self.tables.values())

    def items(self):
        for (n, k), table in sorted(self.tables.items()):
            for f, g in sorted(table.items()):
                yield n, k, f, g

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(json.dumps({"pap_cache": CACHE_VERSION, "symmetry": self.symmetry}) + "\n")
            for n, k, f, g in self.items():
                fh.write(json.dumps({"n": n, "k": k, "f": format(f, "x"), "sg": g}) + "\n")

    @classmethod
    def load(cls, path) -> "GrundyCache":
        with open(path) as fh:
            header = json.loads(fh.readline())
            if header.get("pap_cache") != CACHE_VERSION:
                raise ValueError(f"{path}: not a version-{CACHE_VERSION} PAP cache")
            cache = cls(symmetry=header.get("symmetry", True))
            for lineno, line in enumerate(fh, start=2):
                if not line.strip():
                    continue
                rec = json.loads(line)
                n, k, f, g = rec["n"], rec["k"], int(rec["f"], 16), rec["sg"]
                if not 1 <= k <= MAX_GAME_K:
                    raise ValueError(f"{path}:{lineno}: k = {k} outside 1..{MAX_GAME_K}")
                if f >> math.factorial(k):
                    raise ValueError(f"{path}:{lineno}: mask {rec['f']} does not fit S_{k}")
                if g < 0:
                    raise ValueError(f"{path}:{lineno}: negative Grundy value")
                cache.table(n, k)[f] = g
        return cache


class Solver:
    """Memoized game evaluation for one (n, k)."""

    def __init__(self, n: int, k: int, cache: Optional[GrundyCache] = None,
                 space: Optional[ShadowSpace] = None, long_run: bool = False):
        self.n = n
        self.k = k
        self.cache = cache if cache is not None else GrundyCache()
        self.space = space if space is not None else _space(n, k, long_run)
        self.memo = self.cache.table(n, k)

    # -- positions ---------------------------------------------------------

    def union(self, pos: Position) -> int:
        self._check(pos)
        return self.space.union_of(pos.forbidden)

    def _check(self, pos: Position) -> None:
        if (pos.n, pos.k) != (self.n, self.k):
            raise PermError(f"position ({pos.n},{pos.k}) does not belong to solver ({self.n},{self.k})")

    def legal_moves(self, pos: Position) -> list[Perm]:
        return patterns_of(self.union(pos), self.k)

    def apply_move(self, pos: Position, p) -> Position:
        bit = 1 << rank(p)
        if len(p) != self.k or not self.union(pos) & bit:
            raise PermError(f"{p} is not a legal move")
        return pos.with_pattern(p)

    # -- Grundy values ----------------------------------------------------

    def grundy_union(self, union: int, sub=None) -> int:
        if not union:
            return 0
        if self.n == self.k:
            # each survivor is its own single pattern: a heap of ones
            return bin(union).count("1") & 1
        key = self.cache.key(self.k, union)
        g = self.memo.get(key)
        if g is not None:
            self.cache.hits += 1
            return g
        if sub is None:
            sub = self.space.survivors(union)
        values = set()
        for bit in _bits(union):
            u2, child = _after(sub, bit)
            values.add(self.grundy_union(u2, child) if u2 else 0)
        g = mex(values)
        self.memo[key] = g
        self.cache.computed += 1
        return g

    def grundy(self, pos: Position) -> int:
        return self.grundy_union(self.union(pos))

    def followers(self, union: int, sub=None):
        """(move bit, follower union, follower survivors) for every legal move."""
        if sub is None:
            sub = self.space.survivors(union)
        for bit in _bits(union):
            u2, child = _after(sub, bit)
            yield bit, u2, child

    def follower_profile(self, pos: Position) -> Counter:
        union = self.union(pos)
        return Counter(self.grundy_union(u2, child) for _, u2, child in self.followers(union))

    def winning_replies(self, pos: Position) -> list[Perm]:
        union = self.union(pos)
        out = []
        for bit, u2, child in self.followers(union):
            if self.grundy_union(u2, child) == 0:
                out.append(all_perms(self.k)[bit.bit_length() - 1])
        return out

    def audit(self, samples: int = 100, seed: int = 0) -> list[int]:
        """Recompute mex for random cached entries; returns mismatching keys."""
        rng = random.Random(seed)
        keys = list(self.memo)
        bad = []
        full = self.space.full
        for f in rng.sample(keys, min(samples, len(keys))):
            union = self.space.union_of(f)
            if union != full & ~f:
                # the stored mask is always a maximal forbidden set
                bad.append(f)
                continue
            vals = {self.grundy_union(u2, child) if u2 else 0
                    for _, u2, child in self.followers(union)}
            if mex(vals) != self.memo[f]:
                bad.append(f)
        return bad

    # -- optimal play ------------------------------------------------------

    def optimal_lines(self) -> dict[int, int]:
        """Number of complete optimal play lines from S_n, by length.

        From a position with nonzero value the mover plays only moves to
        value 0; from a zero position every legal move is counted.
        """
        memo: dict[int, tuple[int, ...]] = {}
        width = math.factorial(self.k) + 1

        def lines(union: int, sub) -> tuple[int, ...]:
            if not union:
                return (1,) + (0,) * (width - 1)
            key = self.cache.key(self.k, union)
            got = memo.get(key)
            if got is not None:
                return got
            winning = self.grundy_union(union, sub) != 0
            acc = [0] * width
            for _, u2, child in self.followers(union, sub):
                if winning and self.grundy_union(u2, child) != 0:
                    continue
                sub_lines = lines(u2, child)
                for length in range(width - 1):
                    if sub_lines[length]:
                        acc[length + 1] += sub_lines[length]
            result = tuple(acc)
            memo[key] = result
            return result

        start = self.space.start
        counts = lines(start, self.space.survivors(start))
        return {length: c for length, c in enumerate(counts) if c}

    # -- reverse strategy --------------------------------------------------

    def reverse_strategy(self) -> "ReverseCheck":
        """Player II answers every p with p^r; search all Player I lines."""
        k = self.k
        rev_bit = {1 << r: 1 << rank(reverse(p)) for r, p in enumerate(all_perms(k))}
        memo: dict[int, Optional[tuple[int, ...]]] = {}
        visited = 0

        def fail(union: int, sub) -> Optional[tuple[int, ...]]:
            # shortest failing continuation (as move bits) from a Player I turn
            nonlocal visited
            if union in memo:
                return memo[union]
            visited += 1
            best: Optional[tuple[int, ...]] = None
            for bit, u1, child in self.followers(union, sub):
                reply = rev_bit[bit]
                if not u1 & reply:
                    line: Optional[tuple[int, ...]] = (bit,)
                else:
                    u2, grand = _after(child, reply)
                    rest = fail(u2, grand) if u2 else None
                    line = None if rest is None else (bit, reply) + rest
                if line is not None and (best is None or len(line) < len(best)):
                    best = line
                    if len(best) == 1:
                        break
            memo[union] = best
            return best

        start = self.space.start
        bad = fail(start, self.space.survivors(start)) if start else None
        moves = None
        if bad is not None:
            moves = [all_perms(k)[b.bit_length() - 1] for b in bad]
        return ReverseCheck(self.n, k, bad is None, moves, visited)


@dataclass
class ReverseCheck:
    n: int
    k: int
    holds: bool
    counterexample: Optional[list[Perm]] = None
    states: int = field(default=0, compare=False)


_spaces: dict[tuple[int, int], ShadowSpace] = {}


def _space(n: int, k: int, long_run: bool = False) -> ShadowSpace:
    sp = _spaces.get((n, k))
    if sp is None:
        sp = ShadowSpace(n, k, long_run=long_run)
        if len(_spaces) > 4:
            _spaces.clear()
        _spaces[(n, k)] = sp
    return sp


_default_cache = GrundyCache()


def solver(n: int, k: int, cache: Optional[GrundyCache] = None) -> Solver:
    return Solver(n, k, cache if cache is not None else _default_cache)


# -- module-level API --------------------------------------------------------

def legal_moves(pos: Position) -> list[Perm]:
    return solver(pos.n, pos.k).legal_moves(pos)


def apply_move(pos: Position, p) -> Position:
    return solver(pos.n, pos.k).apply_move(pos, p)


def grundy(pos: Position, cache: Optional[GrundyCache] = None) -> int:
    return solver(pos.n, pos.k, cache).grundy(pos)


def follower_profile(pos: Position, cache: Optional[GrundyCache] = None) -> Counter:
    return solver(pos.n, pos.k, cache).follower_profile(pos)


def winning_replies(pos: Position, cache: Optional[GrundyCache] = None) -> list[Perm]:
    return solver(pos.n, pos.k, cache).winning_replies(pos)


def sg_table(n_max: int, k_max: int, cache: Optional[GrundyCache] = None) -> list[list[int]]:
    """Rows [n, sg(S_n,1), ..., sg(S_n,k_max)] for n = 1..n_max."""
    rows = []
    for n in range(1, n_max + 1):
        row = [n]
        for k in range(1, k_max + 1):
            row.append(grundy(Position(n, k), cache))
        rows.append(row)
    return rows


def reverse_strategy_check(n: int, k: int) -> ReverseCheck:
    return solver(n, k).reverse_strategy()


def optimal_play_distribution(n: int, k: int, cache: Optional[GrundyCache] = None) -> dict[int, int]:
    return solver(n, k, cache).optimal_lines()


def symmetric_images(pos: Position) -> list[Position]:
    return [Position(pos.n, pos.k, map_mask(pos.forbidden, pos.k, s)) for s in range(8)]
