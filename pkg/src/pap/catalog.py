"""The monotone-forcing sets B_k, their witness families, and the
staircase / layered lower-bound constructions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

from .perm import (
    Perm,
    PermError,
    all_perms,
    complement,
    decreasing,
    direct_sum,
    identity,
    inverse,
    is_monotone,
    parse,
    reverse,
    shadow,
    skew_sum,
)


def p_pattern(k: int) -> Perm:
    """12...(k-2) k (k-1)"""
    return identity(k - 2) + (k - 1, k - 2)


def q_pattern(k: int) -> Perm:
    """1 k (k-1) ... 2"""
    return (0,) + tuple(range(k - 1, 0, -1))


def r_pattern(k: int) -> Perm:
    """2 1 3 4 ... k"""
    return (1, 0) + tuple(range(2, k))


def s_pattern(k: int) -> Perm:
    """2 3 ... k 1"""
    return tuple(range(1, k)) + (0,)


@dataclass(frozen=True)
class BkSet:
    k: int
    generators: tuple[Perm, Perm, Perm, Perm]
    members: frozenset[Perm]

    def __contains__(self, p) -> bool:
        return tuple(p) in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)


@lru_cache(maxsize=None)
def build_bk(k: int) -> BkSet:
    if k < 3:
        raise PermError(f"B_k is defined for k >= 3, got {k}")
    gens = (p_pattern(k), q_pattern(k), r_pattern(k), s_pattern(k))
    members = frozenset(gens) | frozenset(complement(g) for g in gens)
    return BkSet(k, gens, members)


# --- witness families -----------------------------------------------------

WITNESS_FAMILIES = ("pi", "rho", "sigma", "tau", "pi^c", "rho^c", "sigma^c", "tau^c")
_ALIASES = {"π": "pi", "ρ": "rho", "σ": "sigma", "τ": "tau"}


def witness(family: str, n: int) -> Perm:
    """The length-n member of a witness family; ``family`` is one of
    pi, rho, sigma, tau, optionally suffixed with ``^c``."""
    if n < 2:
        raise PermError(f"witness families start at n = 2, got {n}")
    base, _, suffix = family.partition("^")
    base = _ALIASES.get(base, base)
    builders = {"pi": p_pattern, "rho": q_pattern, "sigma": r_pattern, "tau": s_pattern}
    if base not in builders or suffix not in ("", "c"):
        raise PermError(f"unknown witness family {family!r}")
    w = builders[base](n)
    return complement(w) if suffix == "c" else w


def witness_for(q: Perm, n: int) -> Perm:
    """The witness family member whose k-shadow is q plus one monotone."""
    k = len(q)
    for fam in WITNESS_FAMILIES:
        if witness(fam, k) == tuple(q):
            return witness(fam, n)
    raise PermError(f"{q} is not in B_{k}")


def witness_shadow_expected(family: str, k: int) -> set[Perm]:
    """The k-shadow of every member of a witness family with n > k."""
    target = witness(family, k)
    inc = {"pi", "sigma", "tau", "rho^c"}
    mono = identity(k) if family in inc else decreasing(k)
    return {target, mono}


# --- extended witness families (k = 4) ------------------------------------

def _row_1324_1243(n: int) -> Perm:
    # 1,2,...,n-3, n-1, n-2, n
    return identity(n - 3) + (n - 2, n - 3, n - 1)


def _row_1342_1243(n: int) -> Perm:
    # 1,2,...,n-3, n-1, n, n-2
    return identity(n - 3) + (n - 2, n - 1, n - 3)


def _row_1342_2341(n: int) -> Perm:
    # 1, 3,4,...,n, 2
    return (0,) + tuple(range(2, n)) + (1,)


def _row_2143_1432(n: int) -> Perm:
    # 2, 1, n, n-1, ..., 3
    return (1, 0) + tuple(range(n - 1, 1, -1))


EXTENDED_ROWS = (
    (parse("1324"), parse("1243"), _row_1324_1243),
    (parse("1342"), parse("1243"), _row_1342_1243),
    (parse("1342"), parse("2341"), _row_1342_2341),
    (parse("2143"), parse("1432"), _row_2143_1432),
)

_SYMS = (
    lambda p: p,
    reverse,
    complement,
    lambda p: complement(reverse(p)),
    inverse,
    lambda p: reverse(inverse(p)),
    lambda p: complement(inverse(p)),
    lambda p: complement(reverse(inverse(p))),
)


@lru_cache(maxsize=None)
def extended_witness_table() -> dict[tuple[Perm, Perm], tuple[int, int]]:
    """All ordered (p, q) pairs reachable from the stored rows by a joint
    symmetry, mapped to (row index, symmetry index)."""
    table: dict[tuple[Perm, Perm], tuple[int, int]] = {}
    for row, (p, q, _) in enumerate(EXTENDED_ROWS):
        for s, f in enumerate(_SYMS):
            table.setdefault((f(p), f(q)), (row, s))
    return table


def extended_witness(p, q, n: int) -> Perm:
    if n < 7:
        raise PermError(f"extended witness families start at n = 7, got {n}")
    key = (tuple(p), tuple(q))
    table = extended_witness_table()
    if key not in table:
        raise PermError(f"no extended witness family for ({p}, {q})")
    row, s = table[key]
    return _SYMS[s](EXTENDED_ROWS[row][2](n))


def companions(p) -> list[Perm]:
    """The B_4 companions q for which an extended witness family exists."""
    return sorted(q for (pp, q) in extended_witness_table() if pp == tuple(p))


# --- lower-bound constructions ---------------------------------------------

def _skew_chain(parts: list[Perm]) -> Perm:
    return reduce(skew_sum, parts) if parts else ()


def _g_construction(a: int, blocks: list[int], b: int) -> Perm:
    middle = _skew_chain([identity(c) for c in blocks])
    return direct_sum(direct_sum(identity(a), middle), identity(b))


def staircase(k: int) -> Perm:
    if k < 4:
        raise PermError(f"staircase E_k needs k >= 4, got {k}")
    return _g_construction(k - 3, [k - 2] * (k - 2), k - 3)


def layer_block(k: int) -> Perm:
    """L_k: k-2 increasing runs of length k-3, in decreasing layers."""
    if k < 4:
        raise PermError(f"layered L_k needs k >= 4, got {k}")
    return _skew_chain([identity(k - 3)] * (k - 2))


def layered(k: int) -> Perm:
    half = layer_block(k)
    return direct_sum(half, half)


# --- recursive characterization ------------------------------------------

def verify_recursive_bk(k: int) -> bool:
    """Check exhaustively over S_k: membership in B_k iff the (k-1)-shadow is
    one monotone pattern plus one member of B_{k-1}."""
    if k < 4:
        raise PermError(f"the recursive description needs k >= 4, got {k}")
    bk = build_bk(k).members
    prev = build_bk(k - 1).members
    for perm in all_perms(k):
        sh = shadow(perm, k - 1)
        mono = [u for u in sh if is_monotone(u)]
        rest = [u for u in sh if not is_monotone(u)]
        shaped = len(sh) == 2 and len(mono) == 1 and rest[0] in prev
        if shaped != (perm in bk):
            return False
    return True
