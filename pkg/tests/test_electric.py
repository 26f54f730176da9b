"""Coset penetration, electric geodesics and electric area.

Expected numbers were computed independently in oracle_tools.py (lattice
coset runs, shoelace areas) before this module existed, then frozen here.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relhyp.cayley import OUT_OF_BALL, build_ball
from relhyp.electric import (
    ParabolicFamily, RelativePresentation, backtracks, bcp_scan,
    coset_reduce, coset_table, electric_area_exact, electric_area_upper,
    electric_distances_from, electric_geodesic, electric_length,
    is_k_local_electric_geodesic, penetrations,
)
from relhyp.words import Presentation, free_reduce, word_inverse


@pytest.fixture(scope="module")
def rp_z2(pres_z2):
    b_index = pres_z2.alphabet.index("b")
    return RelativePresentation(pres_z2, (ParabolicFamily("P", (b_index,)),))


@pytest.fixture(scope="module")
def rp_f2(pres_f2):
    b_index = pres_f2.alphabet.index("b")
    return RelativePresentation(pres_f2, (ParabolicFamily("P", (b_index,)),))


@pytest.fixture(scope="module")
def ball_z2_6(pres_z2):
    return build_ball(pres_z2, 6)


@pytest.fixture(scope="module")
def ball_f2_8(pres_f2):
    return build_ball(pres_f2, 8)


def test_relative_presentation_validation(pres_z2, pres_f2):
    b = pres_z2.alphabet.index("b")
    with pytest.raises(ValueError):
        RelativePresentation(pres_z2, (ParabolicFamily("P", (b + 1,)),))
    with pytest.raises(ValueError):
        RelativePresentation(pres_z2, (ParabolicFamily("P", (b,)),
                                       ParabolicFamily("Q", (b,))))
    with pytest.raises(ValueError):
        RelativePresentation(pres_f2, (ParabolicFamily("P", (b,), ((b, b),)),))
    rp = RelativePresentation(pres_z2, (ParabolicFamily("P", (b,)),))
    assert rp.nonparabolic_relators() == pres_z2.relators


def test_electric_length(rp_z2):
    w = rp_z2.base.alphabet.parse("babA")
    assert electric_length(rp_z2, w) == 2
    assert electric_length(rp_z2, rp_z2.base.alphabet.parse("bbb")) == 0
    assert electric_length(rp_z2, ()) == 0


def test_penetrations_frozen_z2(ball_z2_6, rp_z2):
    # babA crosses the coset of the b-axis, the x=1 coset, and comes back
    w = rp_z2.base.alphabet.parse("babA")
    pens = penetrations(ball_z2_6, rp_z2, w)
    assert [(p.enter, p.leave) for p in pens] == [(0, 1), (2, 3), (4, 4)]
    assert pens[0].coset == pens[2].coset == 0
    assert pens[1].coset != 0


def test_penetrations_frozen_f2(ball_f2_8, rp_f2):
    w = rp_f2.base.alphabet.parse("ab")
    pens = penetrations(ball_f2_8, rp_f2, w)
    assert len(pens) == 2
    assert [(p.enter, p.leave) for p in pens] == [(0, 0), (1, 2)]


def test_backtracks(ball_z2_6, rp_z2):
    alpha = rp_z2.base.alphabet
    back = backtracks(ball_z2_6, rp_z2, alpha.parse("babA"))
    assert len(back) == 1
    fam, coset, visits = back[0]
    assert (fam, coset) == (0, 0)
    assert visits == [(0, 1), (4, 4)]
    assert backtracks(ball_z2_6, rp_z2, alpha.parse("ab")) == []


def _z2_coset_runs(word, alpha):
    # independent check: cosets of <b> in Z^2 are the x levels
    x = 0
    seq = [0]
    for sym in word:
        name = alpha.to_str((sym,))
        x += {"a": 1, "A": -1}.get(name, 0)
        seq.append(x)
    runs = 1
    for i in range(1, len(seq)):
        if seq[i] != seq[i - 1]:
            runs += 1
    return runs


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=8))
def test_penetration_count_matches_lattice_runs(ball_z2_8_shared, rp_z2_shared, syms):
    w = tuple(syms)
    pens = penetrations(ball_z2_8_shared, rp_z2_shared, w)
    assert len(pens) == _z2_coset_runs(w, rp_z2_shared.base.alphabet)


# hypothesis can't see module fixtures, so share via session-level builds
@pytest.fixture(scope="module")
def ball_z2_8_shared(pres_z2):
    return build_ball(pres_z2, 8)


@pytest.fixture(scope="module")
def rp_z2_shared(pres_z2):
    b_index = pres_z2.alphabet.index("b")
    return RelativePresentation(pres_z2, (ParabolicFamily("P", (b_index,)),))


def test_coset_reduce_frozen(ball_z2_6, rp_z2):
    alpha = rp_z2.base.alphabet
    assert coset_reduce(ball_z2_6, rp_z2, alpha.parse("abbBa")) == alpha.parse("aba")
    assert coset_reduce(ball_z2_6, rp_z2, alpha.parse("abBa")) == alpha.parse("aa")
    # non-parabolic letters are left alone even when they could cancel
    assert coset_reduce(ball_z2_6, rp_z2, alpha.parse("AbBa")) == alpha.parse("Aa")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=8))
def test_coset_reduce_invariants(ball_z2_8_shared, rp_z2_shared, syms):
    w = tuple(syms)
    red = coset_reduce(ball_z2_8_shared, rp_z2_shared, w)
    assert electric_length(rp_z2_shared, red) == electric_length(rp_z2_shared, w)
    assert ball_z2_8_shared.evaluate(red) == ball_z2_8_shared.evaluate(w)


def test_electric_distance_is_x_displacement(ball_z2_6, rp_z2):
    dist = electric_distances_from(ball_z2_6, rp_z2, 0)
    alpha = rp_z2.base.alphabet
    for text, expect in [("bbbbb", 0), ("aabbb", 2), ("AAAA", 4), ("", 0)]:
        v = ball_z2_6.evaluate(alpha.parse(text))
        assert v is not OUT_OF_BALL
        assert dist[v] == expect


def test_electric_geodesic_frozen(ball_z2_6, rp_z2):
    alpha = rp_z2.base.alphabet
    v = ball_z2_6.evaluate(alpha.parse("bbbbb"))
    assert electric_geodesic(ball_z2_6, rp_z2, v) == alpha.parse("bbbbb")
    v = ball_z2_6.evaluate(alpha.parse("ab"))
    w = electric_geodesic(ball_z2_6, rp_z2, v)
    assert electric_length(rp_z2, w) == 1
    assert ball_z2_6.evaluate(w) == v


def test_k_local_electric_geodesic(ball_z2_6, rp_z2):
    alpha = rp_z2.base.alphabet
    assert is_k_local_electric_geodesic(ball_z2_6, rp_z2, alpha.parse("bbbbb"), 3)
    assert is_k_local_electric_geodesic(ball_z2_6, rp_z2, alpha.parse("ab"), 2)
    # abbbA closes up in the x direction: el 2 window with distance 0
    assert not is_k_local_electric_geodesic(ball_z2_6, rp_z2, alpha.parse("abbbA"), 2)
    # but no window of el <= 1 fails
    assert is_k_local_electric_geodesic(ball_z2_6, rp_z2, alpha.parse("abbbA"), 1)


def _commutator(alpha, n):
    a = alpha.parse("a")
    b = alpha.parse("b") * n
    return free_reduce(a + b + word_inverse(a) + word_inverse(b))


def test_electric_area_exact_frozen(rp_z2):
    # area of [a, b^n] in Z^2 rel <b> equals the enclosed lattice area n
    # (shoelace lower bound computed in oracle_tools.py)
    alpha = rp_z2.base.alphabet
    for n in range(1, 5):
        assert electric_area_exact(rp_z2, _commutator(alpha, n), n + 2) == n
    assert electric_area_exact(rp_z2, (), 3) == 0
    assert electric_area_exact(rp_z2, alpha.parse("bbBB"), 3) == 0
    # not contractible within the insertion budget
    assert electric_area_exact(rp_z2, _commutator(alpha, 4), 2) is None


def test_electric_area_upper_matches_exact(ball_z2_6, rp_z2):
    alpha = rp_z2.base.alphabet
    w = _commutator(alpha, 3)
    got = electric_area_upper(ball_z2_6, rp_z2, w, k=2)
    assert got is not None
    bound, moves = got
    exact = electric_area_exact(rp_z2, w, 6)
    assert exact == 3
    assert exact <= bound <= 3


def test_electric_area_upper_terminal_branch(ball_z2_6, rp_z2):
    # with k = 1 the commutator is 1-locally geodesic and lands in the
    # terminal-loop branch
    alpha = rp_z2.base.alphabet
    w = _commutator(alpha, 2)
    bound, moves = electric_area_upper(ball_z2_6, rp_z2, w, k=1)
    assert bound == 2
    assert [m["op"] for m in moves] == ["terminal-loop"]


def _replay(ball, rp, word, bound, moves):
    """Re-derive the bound from the move list; every step is checked."""
    cur = tuple(word)
    total = 0
    for m in moves:
        if m["op"] == "coset-reduce":
            i, j, rep = m["start"], m["stop"], m["replacement"]
            assert ball.evaluate(cur[i:j]) == ball.evaluate(rep)
            assert electric_length(rp, cur[i:j]) == electric_length(rp, rep)
            cur = cur[:i] + tuple(rep) + cur[j:]
        elif m["op"] == "length-reduce":
            i, j, rep = m["start"], m["stop"], m["replacement"]
            loop = free_reduce(cur[i:j] + word_inverse(rep))
            assert loop == m["loop"]
            assert electric_area_exact(rp, loop, m["cost"] + 1) == m["cost"]
            total += m["cost"]
            cur = cur[:i] + tuple(rep) + cur[j:]
        else:
            assert m["op"] == "terminal-loop"
            assert cur == m["word"]
            assert electric_area_exact(rp, cur, m["cost"] + 1) == m["cost"]
            total += m["cost"]
            cur = ()
    assert cur == ()
    assert total == bound


def test_electric_area_upper_certificate_replays(ball_z2_6, rp_z2):
    alpha = rp_z2.base.alphabet
    for text in ["abbbABBB", "abAB", "abbABBabAB"]:
        w = alpha.parse(text)
        got = electric_area_upper(ball_z2_6, rp_z2, w, k=2)
        assert got is not None
        bound, moves = got
        _replay(ball_z2_6, rp_z2, w, bound, moves)


def test_electric_area_upper_rejects_nonloops(ball_z2_6, rp_z2):
    with pytest.raises(ValueError):
        electric_area_upper(ball_z2_6, rp_z2, rp_z2.base.alphabet.parse("ab"), 2)


def test_coset_table_groups_b_lines(ball_z2_6, rp_z2):
    table = coset_table(ball_z2_6, rp_z2)[0]
    alpha = rp_z2.base.alphabet
    same = [alpha.parse(t) for t in ["", "b", "bb", "B"]]
    ids = {table[ball_z2_6.evaluate(w)] for w in same}
    assert ids == {0}
    other = table[ball_z2_6.evaluate(alpha.parse("ab"))]
    assert other == table[ball_z2_6.evaluate(alpha.parse("a"))]
    assert other != 0


def test_bcp_scan_f2(ball_f2_8, rp_f2):
    report = bcp_scan(ball_f2_8, rp_f2, samples=200, seed=7)
    assert report["pairs"] + report["skipped"] == 200
    assert report["skipped"] == 0
    assert report["max_entry_gap"] <= 2
    assert report["max_exit_gap"] <= 2
    assert report["max_unilateral_travel"] <= 2


def test_bcp_scan_identical_control(ball_f2_8, rp_f2):
    report = bcp_scan(ball_f2_8, rp_f2, samples=50, seed=7, identical=True)
    assert report["max_entry_gap"] == 0
    assert report["max_exit_gap"] == 0
    assert report["max_unilateral_travel"] == 0


def test_bcp_scan_deterministic(ball_f2_8, rp_f2):
    a = bcp_scan(ball_f2_8, rp_f2, samples=60, seed=3)
    b = bcp_scan(ball_f2_8, rp_f2, samples=60, seed=3)
    assert a == b
