"""One-entry inflations I_t(beta, i, eps) and their stable shadows."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import vec
from .perm import (
    MAX_LENGTH,
    Perm,
    PermError,
    all_perms,
    display,
    is_monotone,
    mask_of,
    monotone_mask,
    reverse,
    shadow,
)


@dataclass(frozen=True, order=True)
class InflationTriple:
    base: Perm
    index: int  # 1-based entry of base to inflate
    sign: int  # +1 increasing block, -1 decreasing block

    def __post_init__(self):
        if not 1 <= self.index <= len(self.base):
            raise PermError(f"entry index {self.index} outside 1..{len(self.base)}")
        if self.sign not in (1, -1):
            raise PermError(f"sign must be +1 or -1, got {self.sign}")

    def __str__(self) -> str:
        return f"({display(self.base)},{self.index},{'+' if self.sign > 0 else '-'})"


def inflate(triple: InflationTriple, t: int) -> Perm:
    """Replace entry ``index`` of the base by a monotone block of length t."""
    if t < 1:
        raise PermError(f"block length must be positive, got {t}")
    beta = triple.base
    if len(beta) + t - 1 > MAX_LENGTH:
        raise PermError("inflation exceeds the length cap")
    pos = triple.index - 1
    v = beta[pos]
    block = range(v, v + t) if triple.sign > 0 else range(v + t - 1, v - 1, -1)
    out = [w + t - 1 if w > v else w for w in beta[:pos]]
    out.extend(block)
    out.extend(w + t - 1 if w > v else w for w in beta[pos + 1:])
    return tuple(out)


def reverse_triple(triple: InflationTriple) -> InflationTriple:
    n = len(triple.base)
    return InflationTriple(reverse(triple.base), n + 1 - triple.index, -triple.sign)


def _pair_key(p: Perm) -> frozenset:
    return frozenset((p, reverse(p)))


@dataclass(frozen=True)
class StableShadow:
    k: int
    patterns: frozenset
    pairs: frozenset  # unordered reverse pairs, each a frozenset {p, p^r}

    @classmethod
    def from_patterns(cls, k: int, patterns) -> "StableShadow":
        pats = frozenset(tuple(p) for p in patterns if not is_monotone(p))
        return cls(k, pats, frozenset(_pair_key(p) for p in pats))

    @property
    def mask(self) -> int:
        return mask_of(self.patterns)


def stable_shadow(triple: InflationTriple, k: int) -> StableShadow:
    """Union over block sizes t = 1..k of the non-monotone k-shadow."""
    if k < 3:
        raise PermError(f"stable shadows need k >= 3, got {k}")
    if len(triple.base) + k - 1 > MAX_LENGTH:
        raise PermError("inflation exceeds the length cap")
    pats: set[Perm] = set()
    for t in range(1, k + 1):
        perm = inflate(triple, t)
        if len(perm) >= k:
            pats |= shadow(perm, k)
    return StableShadow.from_patterns(k, pats)


def all_triples(base_len: int):
    for beta in all_perms(base_len):
        for i in range(1, base_len + 1):
            for sign in (1, -1):
                yield InflationTriple(beta, i, sign)


@lru_cache(maxsize=None)
def stable_shadow_table(base_len: int, k: int) -> tuple[tuple[InflationTriple, ...], tuple[int, ...]]:
    """Stable non-monotone k-shadow masks of every triple with base in S_base_len.

    Shadows only grow with the block size, so the union over t = 1..k is
    the shadow at t = k; the sweep evaluates that one inflation per triple.
    """
    triples = tuple(all_triples(base_len))
    arr = vec.to_array((inflate(tr, k) for tr in triples), base_len + k - 1)
    words = vec.shadow_words(arr, k)
    mono = monotone_mask(k)
    if words.shape[1] == 1:
        masks = tuple(int(m) & ~mono for m in words[:, 0].tolist())
    else:
        masks = tuple(vec.words_to_int(row) & ~mono for row in words)
    return triples, masks


def shadow_sequence(triple: InflationTriple, k: int, t_max: int) -> list[int]:
    """Non-monotone k-shadow masks of I_t for t = 1..t_max."""
    mono = monotone_mask(k)
    out = []
    for t in range(1, t_max + 1):
        perm = inflate(triple, t)
        out.append(mask_of(shadow(perm, k)) & ~mono if len(perm) >= k else 0)
    return out
