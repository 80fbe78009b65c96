import random
from itertools import islice

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import L, M, R, g_fig, g_loop
from mppg.bruteforce import con_wins_one_player, dis_strategies, residual, solve_bruteforce
from mppg.decomposition import dis_strategy
from mppg.game import CON, DIS, restrict, validate_game
from mppg.generate import gen_random
from mppg.lifting import solve_lifting
from mppg.recursive import con_decomposition
from mppg.runtime import (
    ConStrategyMachine,
    FiniteMemory,
    Play,
    Positional,
    RandomChooser,
    cycle_stats,
    lambda_budget,
    lasso_analyze,
    simulate,
)
from mppg.translate import measure_to_dis_decomposition


def unroll(play, k):
    """The first ``k`` vertices of the infinite play."""

    def gen():
        for vs, c in play.stem:
            for _ in range(c):
                yield from vs
        while True:
            for vs, c in play.cycle:
                for _ in range(c):
                    yield from vs

    return list(islice(gen(), k))


def test_budget():
    assert lambda_budget(3, 1) == 108


def test_loop_machine():
    g = g_loop(1, -1, "C")
    m = ConStrategyMachine(g.full, con_decomposition(g))
    play = simulate(g.full, Positional({}), m, 0)
    assert play.is_lasso and lasso_analyze(play) is CON
    assert set(play.vertices()) == {0}


def test_fig_machine_beats_dis_behaviours():
    g = g_fig("C")
    sub = g.full
    m = ConStrategyMachine(sub, con_decomposition(g))
    for seed in range(30):
        for v in sub.order:
            play = simulate(sub, FiniteMemory(sub, DIS, seed), m, v)
            assert lasso_analyze(play) is CON


def test_fig_dis_strategy():
    g = g_fig("D")
    sub = g.full
    res = solve_lifting(g)
    sigma = dis_strategy(sub, measure_to_dis_decomposition(sub, res.labelling))
    assert con_wins_one_player(sub, residual(sub, sigma)) == frozenset()
    play = simulate(sub, Positional(sigma), Positional({}), M)
    assert lasso_analyze(play) is DIS


def test_positional_lasso_is_small():
    sub = g_fig("C").full
    play = simulate(sub, Positional({L: M, R: M}), Positional({M: R}), L)
    assert play.is_lasso
    assert play.steps <= sub.n + 1
    assert cycle_stats(play) == (2, -1, 2)
    # the right loop alone never sees the odd priority
    assert lasso_analyze(play) is DIS


def _lasso(prios, costs):
    n = len(prios)
    g = validate_game(
        {
            "vertices": [(i, p, "D") for i, p in enumerate(prios)],
            "edges": [(i, (i + 1) % n, c) for i, c in enumerate(costs)],
        }
    )
    return Play(g.full, [], [(tuple(range(n)), 1)])


def test_lasso_analyze_examples():
    assert lasso_analyze(_lasso([1], [-1])) is CON
    assert lasso_analyze(_lasso([2, 1], [-3, -4])) is DIS
    assert lasso_analyze(_lasso([3, 1], [2, -2])) is DIS


@given(st.lists(st.tuples(st.integers(1, 4), st.integers(-3, 3)), min_size=1, max_size=6), st.integers(0, 5))
def test_lasso_rotation_invariant(ring, shift):
    prios, costs = zip(*ring)
    base = _lasso(list(prios), list(costs))
    n = len(ring)
    k = shift % n
    order = tuple(range(k, n)) + tuple(range(k))
    stem = [(tuple(range(k)), 1)] if k else []
    rotated = Play(base.sub, stem, [(order, 1)])
    assert lasso_analyze(rotated) is lasso_analyze(base)
    doubled = Play(base.sub, [], [(order, 2)])
    assert lasso_analyze(doubled) is lasso_analyze(base)


def test_random_chooser_is_reproducible():
    sub = gen_random(6, 4, 3, 12, 3).full
    a = simulate(sub, RandomChooser(sub), RandomChooser(sub), 0, max_steps=300, seed=9)
    b = simulate(sub, RandomChooser(sub), RandomChooser(sub), 0, max_steps=300, seed=9)
    assert not a.is_lasso and not a.exceeded
    assert a.vertices() == b.vertices()
    assert len(a.vertices()) == 301


def test_bruteforce_examples():
    assert solve_bruteforce(g_loop(1, -1))[1] == {0}
    assert solve_bruteforce(g_loop(1, 0))[0] == {0}
    assert solve_bruteforce(g_fig("C"))[1] == {L, M, R}
    assert solve_bruteforce(g_fig("D"))[0] == {L, M, R}


class _NoSkip(ConStrategyMachine):
    def phase(self, mem):
        return None


def test_fast_forward_matches_plain(solved):
    checked = 0
    rng = random.Random(3)
    for g, res in solved:
        if not res.w_con:
            continue
        sub = restrict(g, res.w_con)
        node = con_decomposition(sub)
        fast = ConStrategyMachine(sub, node)
        if max(fast.budgets, default=0) > 3000:
            continue
        slow = _NoSkip(sub, node)
        for seed in range(3):
            dis = FiniteMemory(sub, DIS, rng.randrange(1 << 30))
            v = rng.choice(sub.order)
            a = simulate(sub, dis, fast, v)
            b = simulate(sub, dis, slow, v, max_steps=200_000)
            k = 3 * (a.steps + b.steps) + 10
            assert unroll(a, k) == unroll(b, k)
            assert lasso_analyze(a) is lasso_analyze(b) is CON
            checked += 1
    assert checked > 50


def test_con_machine_wins(solved):
    for g, res in solved[::5]:
        if not res.w_con:
            continue
        sub = restrict(g, res.w_con)
        m = ConStrategyMachine(sub, con_decomposition(sub))
        strategies = list(islice(dis_strategies(sub, cap=10**9), 64))
        behaviours = [Positional(s) for s in strategies] + [FiniteMemory(sub, DIS, s) for s in range(10)]
        for v in sub.order:
            for b in behaviours:
                play = simulate(sub, b, m, v)
                assert play.is_lasso and lasso_analyze(play) is CON


@pytest.mark.parametrize("seed", range(5))
def test_dis_strategy_exact(seed, solved):
    for g, res in solved[seed::5]:
        if not res.w_dis:
            continue
        sub = restrict(g, res.w_dis)
        sigma = dis_strategy(sub, measure_to_dis_decomposition(sub, res.labelling.restricted(res.w_dis)))
        assert con_wins_one_player(sub, residual(sub, sigma)) == frozenset()


def test_machine_moves_are_edges():
    for seed in range(20):
        g = gen_random(6, 4, 3, 12, seed)
        w = solve_lifting(g).w_con
        if not w:
            continue
        sub = restrict(g, w)
        m = ConStrategyMachine(sub, con_decomposition(sub))
        for v in sub.order:
            if sub.owner(v) is CON:
                assert m.choose(m.initial(v), v, None) in sub.succ(v)
