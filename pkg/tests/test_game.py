import json
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from pap import game
from pap.avoidance import count_avoiders, enumerate_avoiders
from pap.game import (
    GrundyCache,
    Position,
    Solver,
    apply_move,
    follower_profile,
    grundy,
    legal_moves,
    mex,
    optimal_play_distribution,
    reverse_strategy_check,
    sg_table,
    symmetric_images,
    winning_replies,
)
from pap.perm import PermError, all_perms, decreasing, identity, parse, parse_list, reverse

import oracles


def pos(n, k, text=""):
    return Position.of(n, k, parse_list(text))


def test_mex():
    assert mex({0, 1, 3}) == 2
    assert mex(set()) == 0
    assert mex({1}) == 0


def test_position_validation():
    with pytest.raises(PermError):
        Position.of(5, 4, parse_list("123"))
    with pytest.raises(PermError):
        Position(5, 3, 1 << 6)
    with pytest.raises(PermError):
        Position(0, 3)


def test_legal_moves_examples():
    assert parse("4231") in legal_moves(pos(9, 4, "1234,4321,1324"))
    assert legal_moves(pos(10, 4, "1234,4321")) == []
    for n in range(2, 7):
        assert legal_moves(pos(n, 2, "12")) == [parse("21")]


def test_apply_move():
    p = apply_move(Position(6, 4), parse("1234"))
    assert p == pos(6, 4, "1234")
    p = apply_move(apply_move(Position(10, 4), identity(4)), decreasing(4))
    assert legal_moves(p) == [] and count_avoiders(10, p.patterns) == 0
    with pytest.raises(PermError):
        apply_move(p, parse("1234"))
    with pytest.raises(PermError):
        apply_move(pos(5, 4, "1234"), parse("1234"))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_small_grundy_against_explicit_sets(k):
    memo = {}
    for n in range(1, 7):
        want = oracles.grundy_sets(all_perms(n), k, memo)
        assert grundy(Position(n, k)) == want


def test_small_table_columns():
    rows = sg_table(8, 3)
    assert [r[1] for r in rows] == [1] * 8
    assert [r[2] for r in rows] == [0] * 8
    assert [r[3] for r in rows] == [0] * 8
    assert grundy(Position(3, 4)) == 0  # n < k: nothing to play


def test_n_equals_k_is_parity():
    s = Solver(4, 4, GrundyCache())
    rng = random.Random(4)
    for _ in range(20):
        f = rng.getrandbits(24)
        assert s.grundy(Position(4, 4, f)) == (24 - bin(f).count("1")) % 2


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(all_perms(4)), min_size=15, max_size=21, unique=True))
def test_deep_positions_against_explicit_sets(forbidden):
    n = 6
    survivors = enumerate_avoiders(n, forbidden).members
    p = Position.of(n, 4, forbidden)
    s = Solver(n, 4, GrundyCache())
    assert s.grundy(p) == oracles.grundy_sets(survivors, 4)
    moves = set()
    for perm in survivors:
        moves |= oracles.shadow(perm, 4)
    assert set(s.legal_moves(p)) == moves


def test_terminal_iff_empty():
    s = Solver(7, 4, GrundyCache())
    rng = random.Random(1)
    for _ in range(40):
        f = rng.getrandbits(24) | rng.getrandbits(24)
        p = Position(7, 4, f)
        assert (s.legal_moves(p) == []) == (count_avoiders(7, p.patterns) == 0)
    assert follower_profile(pos(10, 4, "1234,4321")) == Counter()


def test_p_positions_have_no_winning_replies():
    s = Solver(6, 4, GrundyCache())
    rng = random.Random(2)
    for _ in range(40):
        p = Position(6, 4, rng.getrandbits(24) | rng.getrandbits(24) | rng.getrandbits(24))
        if not s.legal_moves(p):
            continue
        assert (s.grundy(p) == 0) == (s.winning_replies(p) == [])


def test_k2_has_no_winning_reply():
    for n in range(2, 7):
        assert winning_replies(Position(n, 2)) == []


def test_follower_profile_s6():
    prof = follower_profile(Position(6, 4))
    assert prof == Counter({0: 12, 1: 2, 3: 10})
    assert mex(prof) == 2


def test_dihedral_invariance_sampled():
    """Values of the 8 images agree, computed without symmetry reduction."""
    follower_profile(Position(6, 4))  # fills the shared cache for (6, 4)
    memo = game._default_cache.table(6, 4)
    plain = Solver(6, 4, GrundyCache(symmetry=False))
    rng = random.Random(6)
    keys = rng.sample(sorted(memo), 120)
    for f in keys:
        vals = {plain.grundy(q) for q in symmetric_images(Position(6, 4, f))}
        assert vals == {memo[f]}


def test_audit_clean():
    s = Solver(6, 4, GrundyCache())
    s.grundy(pos(6, 4, "1234,4321"))
    assert s.audit(200) == []


def test_cache_round_trip(tmp_path):
    cache = GrundyCache()
    s = Solver(6, 4, cache)
    g = s.grundy(pos(6, 4, "1234,4321,1324"))
    path = tmp_path / "c.ndjson"
    cache.save(path)
    lines = path.read_text().splitlines()
    assert json.loads(lines[0])["pap_cache"] == 1
    rec = json.loads(lines[1])
    assert set(rec) == {"n", "k", "f", "sg"}
    loaded = GrundyCache.load(path)
    assert list(loaded.items()) == list(cache.items())
    s2 = Solver(6, 4, loaded)
    assert s2.grundy(pos(6, 4, "1234,4321,1324")) == g
    assert loaded.computed == 0


@pytest.mark.parametrize("bad", [
    '{"pap_cache":2}\n',
    '{"pap_cache":1}\n{"n":5,"k":4,"f":"1ffffff","sg":0}\n',
    '{"pap_cache":1}\n{"n":5,"k":5,"f":"1","sg":0}\n',
    '{"pap_cache":1}\n{"n":5,"k":3,"f":"1","sg":-1}\n',
])
def test_cache_load_rejects(tmp_path, bad):
    path = tmp_path / "bad.ndjson"
    path.write_text(bad)
    with pytest.raises(ValueError):
        GrundyCache.load(path)


def test_reverse_strategy_small():
    for n in range(3, 9):
        assert reverse_strategy_check(n, 3).holds
    assert reverse_strategy_check(4, 4).holds
    for n in (5, 6):
        res = reverse_strategy_check(n, 4)
        assert not res.holds
        # replay the counterexample: every reply up to the end is legal,
        # and the final reverse reply is not
        s = Solver(n, 4)
        p = Position(n, 4)
        moves = res.counterexample
        assert len(moves) % 2 == 1
        for i, m in enumerate(moves):
            if i % 2:
                assert m == reverse(moves[i - 1])
            p = s.apply_move(p, m)
        assert reverse(moves[-1]) not in s.legal_moves(p)


def test_reverse_strategy_k2_holds():
    # the reverse of 12 is 21, always legal, and then nothing is left
    assert reverse_strategy_check(5, 2).holds


@pytest.mark.parametrize("n", [3, 4, 5])
def test_optimal_lines_against_explicit_sets(n):
    want = oracles.optimal_lines_sets(all_perms(n), 3)
    assert optimal_play_distribution(n, 3) == dict(want)


def test_optimal_lines_parity_and_cap():
    for n in range(3, 8):
        dist = optimal_play_distribution(n, 3)
        g = grundy(Position(n, 3))
        assert all(length <= 6 for length in dist)
        assert all(length % 2 == (1 if g else 0) for length in dist)
    assert optimal_play_distribution(4, 2) == {2: 2}


def test_envelope():
    with pytest.raises(PermError):
        Solver(11, 4, GrundyCache())
    with pytest.raises(PermError):
        Solver(6, 5, GrundyCache())
