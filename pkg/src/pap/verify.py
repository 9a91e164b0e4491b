"""Exhaustive finite checks behind the reverse-reply results for k = 3, 4, 5."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from . import vec
from .avoidance import enumerate_avoiders, threshold
from .catalog import (
    WITNESS_FAMILIES,
    build_bk,
    companions,
    extended_witness,
    extended_witness_table,
    layered,
    staircase,
    verify_recursive_bk,
    witness,
    witness_shadow_expected,
)
from .game import reverse_strategy_check
from .inflation import InflationTriple, inflate, stable_shadow_table
from .perm import (
    Perm,
    PermError,
    all_perms,
    contains,
    decreasing,
    identity,
    is_monotone,
    lds,
    lis,
    map_mask,
    mask_of,
    parse,
    parse_list,
    patterns_of,
    rank,
    reverse,
    shadow,
)

HARD_PAIR = (parse("2413"), parse("3142"))


# --- reverse-pair states ----------------------------------------------------

@lru_cache(maxsize=None)
def reverse_pairs(k: int) -> tuple[tuple[Perm, Perm], ...]:
    """Non-monotone reverse pairs of S_k, each as (smaller, larger) by rank."""
    out = []
    for p in all_perms(k):
        if is_monotone(p):
            continue
        q = reverse(p)
        if p < q:
            out.append((p, q))
    return tuple(out)


def pair_mask(pair: tuple[Perm, Perm]) -> int:
    return mask_of(pair)


@dataclass(frozen=True)
class ReversePairState:
    """A reverse-closed, monotone-free pattern set, held as a mask."""

    k: int
    mask: int

    def __post_init__(self):
        if map_mask(self.mask, self.k, 1) != self.mask:
            raise PermError("state is not reverse-closed")
        if self.mask & mask_of([identity(self.k), decreasing(self.k)]):
            raise PermError("state contains a monotone pattern")

    @classmethod
    def from_pairs(cls, k: int, pairs: Iterable) -> "ReversePairState":
        m = 0
        for pair in pairs:
            for p in pair:
                m |= 1 << rank(p)
                m |= 1 << rank(reverse(p))
        return cls(k, m)

    @property
    def patterns(self) -> list[Perm]:
        return patterns_of(self.mask, self.k)

    @property
    def pairs(self) -> frozenset:
        return frozenset(pr for pr in reverse_pairs(self.k) if self.mask >> rank(pr[0]) & 1)


def canonical_state(state: ReversePairState) -> ReversePairState:
    """Least image of the state mask under the dihedral group.

    The image under an inverse-type symmetry is reverse-closed only when the
    state is also complement-closed; such images are skipped.
    """
    best = state.mask
    for s in range(1, 8):
        img = map_mask(state.mask, state.k, s)
        if map_mask(img, state.k, 1) == img and img < best:
            best = img
    return ReversePairState(state.k, best)


# --- shared k = 4 data --------------------------------------------------------

@lru_cache(maxsize=None)
def _shadows_at(n: int, k: int) -> np.ndarray:
    arr = vec.all_perms_array(n)
    return np.unique(vec.shadow_words(arr, k)[:, 0])


def union_after(n: int, k: int, forbidden: int) -> int:
    """Union of the k-shadows of Av_n(F), as a mask; its bits are the legal moves."""
    masks = _shadows_at(n, k)
    alive = masks[(masks & np.uint64(forbidden)) == 0]
    return int(np.bitwise_or.reduce(alive)) if len(alive) else 0


def legal_at(n: int, k: int, forbidden: int, p) -> bool:
    return bool(union_after(n, k, forbidden) >> rank(p) & 1)


@lru_cache(maxsize=None)
def _stable_k4() -> tuple[tuple[InflationTriple, ...], np.ndarray]:
    triples, masks = stable_shadow_table(6, 4)
    return triples, np.array(masks, dtype=np.uint64)


def _find_triple(need: int, forbid: int) -> Optional[InflationTriple]:
    """First S_6-based triple whose stable shadow contains ``need`` and
    misses every pattern of ``forbid``."""
    triples, sig = _stable_k4()
    ok = ((sig & np.uint64(need)) == need) & ((sig & np.uint64(forbid)) == 0)
    hits = np.flatnonzero(ok)
    return triples[hits[0]] if len(hits) else None


# --- k = 3 --------------------------------------------------------------------

@dataclass
class Report:
    name: str
    ok: bool
    values: dict
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "ok" if self.ok else "MISMATCH"
        vals = " ".join(f"{k}={v}" for k, v in self.values.items())
        return f"{self.name} {status} {vals}".rstrip()

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, **self.values}


def verify_k3(n_max: int = 8) -> Report:
    empty1 = parse_list("123,321,132,231")
    empty2 = parse_list("123,321,213,312")
    mono = parse_list("132,231,213,312")
    failures = []
    for n in range(4, n_max + 1):
        if enumerate_avoiders(n, empty1).count != 0:
            failures.append(f"Av_{n}(123,321,132,231) nonempty")
        if enumerate_avoiders(n, empty2).count != 0:
            failures.append(f"Av_{n}(123,321,213,312) nonempty")
        if set(enumerate_avoiders(n, mono).members) != {identity(n), decreasing(n)}:
            failures.append(f"Av_{n}(132,231,213,312) is not the two monotones")
    strategy = {}
    for n in range(3, n_max + 1):
        strategy[n] = reverse_strategy_check(n, 3).holds
        if not strategy[n]:
            failures.append(f"reverse strategy fails at n={n}, k=3")
    return Report("k3", not failures, {"lengths": f"4..{n_max}"},
                  {"failures": failures, "reverse_strategy": strategy})


# --- k = 4, residual non-hard cases -------------------------------------------

@dataclass
class GapCase:
    state: ReversePairState
    pattern: Perm
    triple: Optional[InflationTriple]


def gap_cases_k4() -> Report:
    k = 4
    pairs = reverse_pairs(k)
    b4 = build_bk(4).members
    hard = set(HARD_PAIR)
    targets = [p for p in all_perms(k)
               if not is_monotone(p) and p not in b4 and p not in hard]
    cases: list[GapCase] = []
    for bits in range(1 << len(pairs)):
        state = ReversePairState.from_pairs(k, [pairs[i] for i in range(len(pairs)) if bits >> i & 1])
        f = state.mask
        legal = union_after(7, k, f)
        for p in targets:
            comp = mask_of(companions(p))
            comp |= map_mask(comp, k, 1)
            if comp & ~f:
                continue
            if not legal >> rank(p) & 1:
                continue
            pr = 1 << rank(reverse(p))
            triple = _find_triple(pr, f | 1 << rank(p))
            cases.append(GapCase(state, p, triple))
    classes = {_case_class(c.state.mask, c.pattern) for c in cases}
    resolved = all(c.triple is not None for c in cases)
    ok = len(cases) == 1156 and len(classes) == 297 and resolved
    rep = Report("gap_cases", ok, {"checks": len(cases)},
                 {"symmetry_classes": len(classes), "all_resolved": resolved, "cases": cases})
    return rep


def _case_class(mask: int, p: Perm) -> tuple[int, int]:
    """Orbit representative of (F, p) under the symmetries preserving
    reverse-closure, applied jointly."""
    k = len(p)
    pm = 1 << rank(p)
    best = None
    for s in range(8):
        img = map_mask(mask, k, s)
        if map_mask(img, k, 1) != img:
            continue
        cand = (img, map_mask(pm, k, s))
        if best is None or cand < best:
            best = cand
    return best


# --- k = 4, the hard pair -------------------------------------------------------

def _pair_set(mask: int, k: int) -> frozenset[int]:
    """Indices of the reverse pairs meeting ``mask``."""
    return frozenset(i for i, pr in enumerate(reverse_pairs(k))
                     if mask & pair_mask(pr))


def external_supports(target: Perm) -> set[frozenset[int]]:
    """Reverse-pair supports of stable shadows containing target but not its
    reverse, with the hard pair removed."""
    k = 4
    hard = mask_of(HARD_PAIR)
    t = 1 << rank(target)
    tr = 1 << rank(reverse(target))
    _, sig = _stable_k4()
    keep = sig[((sig & np.uint64(t)) != 0) & ((sig & np.uint64(tr)) == 0)]
    return {_pair_set(int(m) & ~hard, k) for m in np.unique(keep).tolist()}


def hard_pair_supports() -> Report:
    k = 4
    pairs = reverse_pairs(k)
    hard_idx = {i for i, pr in enumerate(pairs) if set(pr) == set(HARD_PAIR)}
    others = [i for i in range(len(pairs)) if i not in hard_idx]
    e1 = external_supports(HARD_PAIR[0])
    e2 = external_supports(HARD_PAIR[1])
    legal_states = []
    uncovered = []
    for bits in range(1 << len(others)):
        chosen = [others[j] for j in range(len(others)) if bits >> j & 1]
        state = ReversePairState.from_pairs(k, [pairs[i] for i in chosen])
        if not legal_at(7, k, state.mask, HARD_PAIR[0]):
            continue
        legal_states.append(state)
        if not any(not (sup & set(chosen)) for sup in e1):
            uncovered.append(state)
    covered = not uncovered
    equal = e1 == e2
    ok = len(e1) == 138 and len(legal_states) == 543 and covered and equal
    return Report("hard_pair", ok, {"supports": len(e1), "legal_states": len(legal_states)},
                  {"covered": covered, "collections_equal": equal,
                   "states": legal_states, "supports": e1})


def k4_endgame_witness(n: int, state: ReversePairState, p) -> Perm:
    """A length-n one-entry inflation in Av_n(F + p) containing p^r, for p in
    the hard pair."""
    p = tuple(p)
    if p not in HARD_PAIR:
        raise PermError(f"{p} is not in the hard pair")
    if n < 10:
        raise PermError(f"the endgame witness needs n >= 10, got {n}")
    if state.mask & mask_of(HARD_PAIR):
        raise PermError("state already forbids the hard pair")
    if not legal_at(7, 4, state.mask, p):
        raise PermError(f"{p} is not legal from this state")
    pr = 1 << rank(reverse(p))
    triple = _find_triple(pr, state.mask | 1 << rank(p))
    if triple is None:
        raise PermError("no external support is disjoint from the state")
    return inflate(triple, n - 5)


# --- k = 5 full-space data ------------------------------------------------------

@dataclass
class K5Report:
    one_companion_targets: int
    total_nonB5_nonmonotone: int
    separable_pairs: int
    total_pairs: int
    targets: list = field(default_factory=list)
    base_len: int = 7

    @property
    def ok(self) -> bool:
        return (self.one_companion_targets, self.total_nonB5_nonmonotone,
                self.separable_pairs, self.total_pairs) == (28, 110, 59, 59)

    def lines(self) -> list[str]:
        return [
            f"one_companion_targets={self.one_companion_targets} "
            f"total_nonB5_nonmonotone={self.total_nonB5_nonmonotone}",
            f"full_space_separable_pairs={self.separable_pairs} "
            f"total_nonmonotone_pairs={self.total_pairs}",
        ]


def one_companion_targets(base_len: int = 7) -> list[tuple[Perm, Perm, InflationTriple]]:
    """Non-B_5 patterns p with a triple whose stable 5-shadow is exactly {p, q},
    q in B_5.  Returns one (p, q, triple) per target."""
    k = 5
    b5 = build_bk(k).members
    triples, masks = stable_shadow_table(base_len, k)
    two = {}
    for tr, m in zip(triples, masks):
        if m.bit_count() == 2:
            two.setdefault(m, tr)
    found = {}
    for m, tr in two.items():
        a, b = patterns_of(m, k)
        for p, q in ((a, b), (b, a)):
            if p not in b5 and q in b5 and p not in found:
                found[p] = (p, q, tr)
    return [found[p] for p in sorted(found)]


def separating_permutation(p: Perm, length: int = 8) -> Optional[Perm]:
    """Some permutation of the given length containing p and avoiding p^r."""
    arr = vec.all_perms_array(length)
    has = vec.contains_rows(arr, p)
    miss = ~vec.contains_rows(arr, reverse(p))
    hits = np.flatnonzero(has & miss)
    return tuple(arr[hits[0]].tolist()) if len(hits) else None


def k5_fullspace(base_len: int = 7) -> K5Report:
    k = 5
    b5 = build_bk(k).members
    non_b5 = [p for p in all_perms(k) if not is_monotone(p) and p not in b5]
    pairs = reverse_pairs(k)
    separable = sum(1 for p, _ in pairs if separating_permutation(p) is not None)
    targets = one_companion_targets(base_len)
    return K5Report(len(targets), len(non_b5), separable, len(pairs), targets, base_len)


def witness_rechecks(case: GapCase, t: Optional[int] = None) -> bool:
    """Independent re-check of a gap-case witness at one block size."""
    if case.triple is None:
        return False
    t = t if t is not None else 5
    perm = inflate(case.triple, t)
    p = case.pattern
    if not contains(perm, reverse(p)) or contains(perm, p):
        return False
    return not any(contains(perm, q) for q in case.state.patterns)



# --- catalog checks -------------------------------------------------------------

def verify_recursive(ks: Iterable[int] = range(4, 8)) -> Report:
    ks = list(ks)
    bad = [k for k in ks if not verify_recursive_bk(k)]
    return Report("recursive_bk", not bad, {"k": f"{ks[0]}..{ks[-1]}"}, {"failures": bad})


def verify_witnesses(ks: Iterable[int] = (4, 5), n_max: int = 12) -> Report:
    """Shadow identities of the witness families and the extended k=4 rows."""
    failures = []
    checks = 0
    for k in ks:
        for fam in WITNESS_FAMILIES:
            want = witness_shadow_expected(fam, k)
            q = witness(fam, k)
            for n in range(k + 1, n_max + 1):
                checks += 1
                w = witness(fam, n)
                if shadow(w, k) != want:
                    failures.append(f"{fam} n={n} k={k}")
                if contains(w, reverse(q)):
                    failures.append(f"{fam} n={n} contains the reverse of its target")
    mono = {identity(4), decreasing(4)}
    for (p, q) in extended_witness_table():
        for n in range(7, n_max + 1):
            checks += 1
            sh = shadow(extended_witness(p, q, n), 4)
            if sh - mono != {p, q}:
                failures.append(f"E_{n}({''.join(str(v + 1) for v in p)},{''.join(str(v + 1) for v in q)})")
    return Report("witnesses", not failures, {"checks": checks}, {"failures": failures})


def verify_bounds(ks: Iterable[int] = range(4, 8)) -> Report:
    """Lower-bound constructions avoid B_k; LIS/LDS bounds on small avoider
    sets; thresholds sit between the lower and upper bounds."""
    failures = []
    for k in ks:
        bk = build_bk(k).members
        e, h = staircase(k), layered(k)
        if len(e) != k * k - 2 * k - 2 or any(contains(e, q) for q in bk):
            failures.append(f"staircase k={k}")
        if len(h) != 2 * (k - 2) * (k - 3) or any(contains(h, q) for q in bk):
            failures.append(f"layered k={k}")
    b4 = build_bk(4).members
    for n in range(1, 7):
        for perm in enumerate_avoiders(n, b4):
            if not is_monotone(perm) and (lis(perm) > 4 or lds(perm) > 4):
                failures.append(f"lis/lds of {perm} in Av_{n}(B_4)")
    b5 = build_bk(5).members
    for n in range(1, 14):
        for perm in enumerate_avoiders(n, b5):
            if lis(perm) >= 6 and lds(perm) > 3:
                failures.append(f"lds of {perm} in Av_{n}(B_5)")
    found = {}
    for k in (4, 5):
        nk = threshold(k, (2 * k - 5) ** 2 + 1)
        found[k] = nk
        lower = max(k * k - 2 * k - 1, 2 * (k - 2) * (k - 3) + 1)
        if nk is None or not lower <= nk <= (2 * k - 5) ** 2 + 1:
            failures.append(f"threshold k={k} is {nk}")
    return Report("bounds", not failures, {"N4": found[4], "N5": found[5]}, {"failures": failures})
