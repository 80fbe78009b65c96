import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import g_fig, g_loop
from mppg.bruteforce import solve_bruteforce
from mppg.game import validate_game
from mppg.generate import gen_random
from mppg.lifting import ScanOracle, least_labelling, lift, lift_vertex, solve_lifting
from mppg.measures import INF, TOP, Measurement, ProgressLabelling, check_measure, succinct_key


def test_lift_examples():
    sub = g_loop(2, -5).full
    lab = least_labelling(sub)
    assert lift(lab, 0, 0, sub) == Measurement((), INF)
    sub = g_loop(1, -1).full
    assert lift(least_labelling(sub), 0, 0, sub) is TOP
    sub = g_loop(1, 0).full
    assert lift(least_labelling(sub), 0, 0, sub) == Measurement((), 0)


def test_lift_vertex_examples():
    # Dis picks the edge that is already progressive
    g = validate_game(
        {"vertices": [(0, 1, "D"), (1, 1, "D")], "edges": [(0, 0, 0), (0, 1, -1), (1, 1, -1)]}
    )
    sub = g.full
    lab = least_labelling(sub)
    assert lift_vertex(lab, 0, sub) == Measurement((), 0)
    h = validate_game(
        {"vertices": [(0, 1, "C"), (1, 1, "D")], "edges": [(0, 0, 0), (0, 1, -1), (1, 1, 0)]}
    )
    sub = h.full
    lab = least_labelling(sub)
    new = lift_vertex(lab, 0, sub)
    assert new is TOP or succinct_key(new) > succinct_key(lab.values[0])
    assert new == lift_vertex(lab, 0, sub, ScanOracle(sub, lab.d))


def test_solve_examples():
    res = solve_lifting(g_loop(2, -5))
    assert res.w_dis == {0} and res.labelling.values[0] == Measurement((), INF)
    assert solve_lifting(g_loop(1, -1)).w_con == {0}
    assert solve_lifting(g_fig("C")).w_con == {0, 1, 2}
    assert solve_lifting(g_fig("D")).w_dis == {0, 1, 2}


def test_least_measure_is_a_measure(solved):
    for g, res in solved:
        assert check_measure(g.full, res.labelling) == []
        assert res.w_dis | res.w_con == g.full.members


def test_agrees_with_scan_oracle(games):
    for g in games[:150]:
        a = solve_lifting(g)
        b = solve_lifting(g, use_oracle=True)
        assert a.labelling == b.labelling


def test_matches_bruteforce(solved):
    for g, res in solved:
        assert solve_bruteforce(g)[0] == res.w_dis


def test_random_schedules(solved):
    rng = random.Random(1)
    for g, res in solved[:100]:
        for _ in range(3):
            assert solve_lifting(g, rng=random.Random(rng.random())).labelling == res.labelling


def test_lift_counts_bounded(solved):
    for _, res in solved:
        assert max(res.lift_counts.values()) <= res.bound


def random_labelling(sub, rng, d):
    """A random valid succinct labelling."""
    oracle = ScanOracle(sub, d)
    return ProgressLabelling(d, {v: rng.choice(oracle.measurements(v)) for v in sub.order}, n=sub.n), oracle


def _leq(a, b):
    return succinct_key(a) <= succinct_key(b)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10**6), st.integers(0, 10**6))
def test_lift_inflationary_monotone(n, gseed, lseed):
    g = gen_random(n, 4, 2, min(n * n, 2 * n), gseed)
    sub = g.full
    rng = random.Random(lseed)
    lab, oracle = random_labelling(sub, rng, g.d)
    bigger = lab.copy()
    for v in sub.order:
        ms = [m for m in oracle.measurements(v) if _leq(lab.values[v], m)]
        bigger.values[v] = rng.choice(ms)
    for v in sub.order:
        a = lift_vertex(lab, v, sub)
        assert a == lift_vertex(lab, v, sub, oracle)
        assert _leq(lab.values[v], a)
        assert _leq(a, lift_vertex(bigger, v, sub))


@pytest.mark.parametrize("owner", ["D", "C"])
def test_loops_both_owners(owner):
    for p in (1, 2, 3, 4):
        for c in (-2, -1, 0, 1):
            res = solve_lifting(g_loop(p, c, owner))
            con_wins = p % 2 == 1 and c < 0
            assert (res.w_con == {0}) == con_wins
