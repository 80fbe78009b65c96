import math
from itertools import permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import g_fig, g_loop
from mppg.arena import has_negative_cycle
from mppg.energy import con_weights, energy_solve, mp_winning_con, mp_winning_dis
from mppg.game import CON, DIS, restrict
from mppg.generate import gen_random


def positional_energy_oracle(sub, protagonist, weights):
    """Vertices where some positional strategy keeps every reachable cycle non-negative."""
    mine = sub.owned_by(protagonist)
    won = set()
    for choice in product(*(sub.succ(v) for v in mine)):
        sigma = dict(zip(mine, choice))
        succ = {v: (sigma[v],) if v in sigma else sub.succ(v) for v in sub.order}
        bad = set()
        for v in sub.order:
            if v in bad:
                continue
            reach = _reach(succ, v)
            if has_negative_cycle(reach, [(a, b, weights[a, b]) for a in reach for b in succ[a]]):
                bad.add(v)
        won |= set(sub.order) - bad
    return frozenset(won)


def _reach(succ, v):
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for u in succ[x]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


def test_loops():
    zero = g_loop(1, 0).full
    res = energy_solve(zero, DIS, {(0, 0): 0})
    assert res.winning == {0} and res.measure[0] == 0
    neg = g_loop(1, -1).full
    res = energy_solve(neg, DIS, {(0, 0): -1})
    assert res.winning == frozenset() and res.measure[0] is None


def test_mean_payoff_loops():
    assert mp_winning_dis(g_loop(1, 0).full)[0] == {0}
    assert mp_winning_dis(g_loop(1, -1).full)[0] == frozenset()
    assert mp_winning_con(g_loop(1, -1).full)[0] == {0}
    assert mp_winning_con(g_loop(1, 0).full)[0] == frozenset()


def test_fig():
    assert mp_winning_dis(g_fig("D").full)[0] == {0, 1, 2}
    w, lam = mp_winning_con(g_fig("C").full)
    assert w == {0, 1, 2}
    assert lam[1] == 2


def test_partition_and_strategies(games):
    for g in games:
        sub = g.full
        wd, sd = mp_winning_dis(sub)
        wc, sc = mp_winning_con(sub)
        assert wd | wc == sub.members and not wd & wc
        assert set(sd) == {v for v in wd if sub.owner(v) is DIS}
        assert set(sc) == {v for v in wc if sub.owner(v) is CON}


@pytest.mark.parametrize("seed", range(40))
def test_agrees_with_enumeration(seed):
    n = 1 + seed % 6
    g = gen_random(n, 3, 3, min(n * n, n + seed % 4), seed)
    sub = g.full
    w = {(v, u): sub.cost(v, u) for v, u in sub.edges()}
    assert energy_solve(sub, DIS, w).winning == positional_energy_oracle(sub, DIS, w)
    wc = con_weights(sub)
    assert energy_solve(sub, CON, wc).winning == positional_energy_oracle(sub, CON, wc)


def _cycles(sub):
    for k in range(1, sub.n + 1):
        for vs in permutations(sub.order, k):
            ring = list(zip(vs, vs[1:] + vs[:1]))
            if vs[0] == min(vs) and all(u in sub.succ(v) for v, u in ring):
                yield ring


def test_strict_reduction(games):
    for g in games[:150]:
        sub = g.full
        if sub.n > 5:
            continue
        wc = con_weights(sub)
        for ring in _cycles(sub):
            assert (sum(sub.cost(*e) for e in ring) < 0) == (sum(wc[e] for e in ring) >= 0)


def _is_energy_measure(sub, protagonist, w, f, bound):
    for v in sub.order:
        if f[v] is None:
            continue
        ok = [u for u in sub.succ(v) if f[u] is not None and f[v] >= max(0, f[u] - w[v, u])]
        if sub.owner(v) is protagonist and not ok:
            return False
        if sub.owner(v) is not protagonist and len(ok) < len(sub.succ(v)):
            return False
    return all(f[v] is None or 0 <= f[v] <= bound for v in sub.order)


@pytest.mark.parametrize("seed", range(25))
def test_least_measure(seed):
    g = gen_random(1 + seed % 3, 2, 2, 1 + seed % 3, seed)
    sub = g.full
    w = {e: sub.cost(*e) for e in sub.edges()}
    res = energy_solve(sub, DIS, w)
    bound = sub.n * max(abs(x) for x in w.values())
    assert _is_energy_measure(sub, DIS, w, res.measure, bound)
    for vals in product(list(range(min(bound, 6) + 1)) + [None], repeat=sub.n):
        f = dict(zip(sub.order, vals))
        if _is_energy_measure(sub, DIS, w, f, bound):
            for v in sub.order:
                mine = math.inf if res.measure[v] is None else res.measure[v]
                theirs = math.inf if f[v] is None else f[v]
                assert mine <= theirs


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10**6))
def test_subgame_partition(n, seed):
    g = gen_random(n, 4, 3, min(n * n, 2 * n), seed)
    wd, _ = mp_winning_dis(g.full)
    if wd:
        # Dis's winning region is a trap for Con, hence a subgame
        sub = restrict(g, wd)
        a, _ = mp_winning_dis(sub)
        b, _ = mp_winning_con(sub)
        assert a == sub.members and not b
