"""Slow, obviously-correct reference implementations used as test oracles."""

from itertools import combinations, permutations


def std(seq):
    order = sorted(seq)
    return tuple(order.index(v) for v in seq)


def contains(perm, patt):
    patt = tuple(patt)
    return any(std(sub) == patt for sub in combinations(perm, len(patt)))


def shadow(perm, k):
    return {std(sub) for sub in combinations(perm, k)}


def avoiders(n, forbidden):
    return sorted(p for p in permutations(range(n))
                  if not any(contains(p, q) for q in forbidden))


def lis(perm):
    return max((r for r in range(1, len(perm) + 1)
                for sub in combinations(perm, r) if list(sub) == sorted(sub)), default=0)


def lds(perm):
    return lis(tuple(-v for v in perm))


def grundy_sets(perms, k, memo=None):
    """Sprague-Grundy value of a position given as an explicit set of permutations."""
    memo = {} if memo is None else memo
    perms = frozenset(perms)
    if perms in memo:
        return memo[perms]
    moves = set()
    for p in perms:
        moves |= shadow(p, k)
    vals = set()
    for q in moves:
        vals.add(grundy_sets({p for p in perms if not contains(p, q)}, k, memo))
    g = 0
    while g in vals:
        g += 1
    memo[perms] = g
    return g


def optimal_lines_sets(perms, k, memo=None, gmemo=None):
    """Counter of complete optimal line lengths from an explicit position."""
    from collections import Counter

    memo = {} if memo is None else memo
    gmemo = {} if gmemo is None else gmemo
    perms = frozenset(perms)
    if perms in memo:
        return memo[perms]
    moves = set()
    for p in perms:
        moves |= shadow(p, k)
    if not moves:
        return Counter({0: 1})
    winning = grundy_sets(perms, k, gmemo) != 0
    out = Counter()
    for q in moves:
        child = frozenset(p for p in perms if not contains(p, q))
        if winning and grundy_sets(child, k, gmemo) != 0:
            continue
        for length, c in optimal_lines_sets(child, k, memo, gmemo).items():
            out[length + 1] += c
    memo[perms] = out
    return out
