import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from pap import vec
from pap.avoidance import (
    count_avoiders,
    count_sequence,
    enumerate_avoiders,
    fingerprint,
    is_legal,
    legal_patterns,
    threshold,
)
from pap.catalog import build_bk
from pap.perm import (
    PermError,
    all_perms,
    decreasing,
    identity,
    is_monotone,
    parse,
    parse_list,
    reverse,
    standardize,
)

import oracles

S4 = all_perms(4)
forbidden_st = st.lists(st.sampled_from(S4), max_size=8, unique=True)


def test_examples():
    assert enumerate_avoiders(4, parse_list("123,321,132,231")).count == 0
    for n in range(4, 9):
        av = enumerate_avoiders(n, parse_list("132,231,213,312"))
        assert set(av.members) == {identity(n), decreasing(n)}
    assert enumerate_avoiders(9, parse_list("1234,4321,1324")).count == 334
    assert count_avoiders(9, parse_list("1234,4321,1324,4231")) == 2
    assert count_avoiders(7, build_bk(4).members) == 2
    for n in range(1, 8):
        assert count_avoiders(n) == math.factorial(n)


def test_catalan_for_each_length3_pattern():
    catalan = [math.comb(2 * n, n) // (n + 1) for n in range(1, 10)]
    for p in all_perms(3):
        assert count_sequence(9, [p]) == catalan


def test_errors():
    with pytest.raises(PermError):
        enumerate_avoiders(5, [parse("12"), parse("123")])
    with pytest.raises(PermError):
        enumerate_avoiders(0, [])
    with pytest.raises(PermError):
        is_legal(5, parse_list("123"), parse("1234"))
    with pytest.raises(PermError):
        threshold(2, 5)


@settings(max_examples=40, deadline=None)
@given(forbidden_st, st.integers(1, 7))
def test_incremental_matches_naive(forbidden, n):
    av = enumerate_avoiders(n, forbidden)
    assert av.members == oracles.avoiders(n, forbidden)
    assert av.count == len(av.members)


@settings(max_examples=25, deadline=None)
@given(forbidden_st, st.integers(2, 8))
def test_deletion_closure(forbidden, n):
    av = enumerate_avoiders(n, forbidden)
    below = set(enumerate_avoiders(n - 1, forbidden).members)
    for perm in av.members[:400]:
        for i in range(n):
            assert standardize(perm[:i] + perm[i + 1:]) in below


def test_members_sorted_and_contains():
    av = enumerate_avoiders(6, parse_list("2413,3142"))
    assert av.ranks == sorted(av.ranks)
    assert av.members[0] in av
    assert parse("241365") not in av


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from([(p, reverse(p)) for p in S4]), max_size=5), st.integers(4, 7))
def test_reverse_closed_sets_are_reverse_symmetric(pairs, n):
    forbidden = {q for pr in pairs for q in pr}
    members = set(enumerate_avoiders(n, forbidden).members)
    assert {reverse(p) for p in members} == members
    for p in S4[::3]:
        if p not in forbidden:
            assert is_legal(n, forbidden, p) == is_legal(n, forbidden, reverse(p))


def test_is_legal():
    assert is_legal(9, parse_list("1234,4321,1324"), parse("4231"))
    for p in S4:
        assert not is_legal(10, [identity(4), decreasing(4)], p)
        assert is_legal(4, [], p)
    assert not is_legal(5, parse_list("1324"), parse("1324"))


@settings(max_examples=30, deadline=None)
@given(forbidden_st)
def test_legal_patterns_match_brute_force(forbidden):
    n = 6
    survivors = oracles.avoiders(n, forbidden)
    want = set()
    for perm in survivors:
        want |= oracles.shadow(perm, 4)
    assert set(legal_patterns(n, forbidden, 4)) == want


def test_nonempty_positions_have_moves():
    arr = vec.all_perms_array(7)
    assert (vec.shadow_words(arr, 4)[:, 0] != 0).all()
    rng = random.Random(7)
    for _ in range(30):
        forbidden = rng.sample(S4, rng.randint(0, 20))
        av = enumerate_avoiders(7, forbidden)
        if av.count:
            assert legal_patterns(7, forbidden, 4)


def test_monotone_trap_k4_n10():
    pairs = [(p, reverse(p)) for p in S4 if p < reverse(p) and not is_monotone(p)]
    rng = random.Random(10)
    for _ in range(6):
        chosen = rng.sample(pairs, rng.randint(0, 4))
        forbidden = [q for pr in chosen for q in pr]
        assert is_legal(10, forbidden, identity(4))
        assert is_legal(10, forbidden, decreasing(4))
    assert count_avoiders(10, [identity(4), decreasing(4)]) == 0


@settings(max_examples=40, deadline=None)
@given(forbidden_st, forbidden_st, st.integers(4, 6))
def test_fingerprint_soundness(f1, f2, n):
    a, b = enumerate_avoiders(n, f1), enumerate_avoiders(n, f2)
    same = a.fingerprint == b.fingerprint and a.count == b.count
    assert same == (a.members == b.members)
    if same:
        assert set(legal_patterns(n, f1, 4)) == set(legal_patterns(n, f2, 4))


def test_fingerprint_merges_equal_survivor_sets():
    # distinct forbidden sets, same survivors
    a = enumerate_avoiders(3, parse_list("1234"))
    b = enumerate_avoiders(3, parse_list("4321,2413"))
    assert a.members == b.members and a.fingerprint == b.fingerprint
    c = enumerate_avoiders(10, parse_list("1234,4321"))
    d = enumerate_avoiders(10, parse_list("1234,4321,1324"))
    assert c.count == d.count == 0 and c.fingerprint == d.fingerprint
    assert fingerprint(6, []) != fingerprint(5, [])
    assert fingerprint(4, [0, 1]) != fingerprint(4, [0, 2])


def test_thresholds():
    counts = []
    assert threshold(3, 6, counts) == 1
    assert counts == [1, 2, 2]
    assert threshold(4, 10) == 7
    assert count_sequence(7, build_bk(4).members) == [1, 2, 6, 16, 16, 4, 2]
    assert threshold(5, 20) == 14
    assert threshold(4, 5) is None
