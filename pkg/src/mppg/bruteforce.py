"""Exhaustive solver: enumerate positional Dis strategies, decide each residual one-player game exactly."""
from __future__ import annotations

import math
from itertools import product

from .arena import has_negative_cycle, sccs
from .game import DIS, Game, Subgame, as_subgame
from .measures import ScaleTooLarge

STRATEGY_CAP = 100_000


def dis_strategies(sub: Subgame, cap: int = STRATEGY_CAP):
    """Every positional Dis strategy on ``sub`` (raises past ``cap``)."""
    dis = sub.owned_by(DIS)
    count = math.prod(len(sub.succ(v)) for v in dis)
    if count > cap:
        raise ScaleTooLarge(f"{count} positional Dis strategies exceed cap {cap}")
    for choice in product(*(sub.succ(v) for v in dis)):
        yield dict(zip(dis, choice))


def con_wins_one_player(sub: Subgame, succ: dict[int, tuple[int, ...]]) -> frozenset[int]:
    """Where Con wins when every move is his, in the graph ``succ`` over the members of ``sub``.

    Con wins from v iff v reaches a strongly connected component of the
    subgraph on priorities <= p (p odd) that holds a vertex of priority p and
    a negative cycle: he can loop the negative cycle ever longer between
    visits to p.
    """
    good = set()
    odd = sorted({sub.priority(v) for v in sub.order if sub.priority(v) % 2})
    for p in odd:
        nodes = [v for v in sub.order if sub.priority(v) <= p]
        allowed = set(nodes)
        for comp in sccs(nodes, lambda v: [u for u in succ[v] if u in allowed]):
            if not any(sub.priority(v) == p for v in comp):
                continue
            inside = set(comp)
            edges = [(v, u, sub.cost(v, u)) for v in comp for u in succ[v] if u in inside]
            if edges and has_negative_cycle(comp, edges):
                good.update(comp)
    pred = {v: [] for v in sub.order}
    for v in sub.order:
        for u in succ[v]:
            pred[u].append(v)
    seen = set(good)
    stack = list(good)
    while stack:
        u = stack.pop()
        for v in pred[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return frozenset(seen)


def residual(sub: Subgame, strategy: dict[int, int]) -> dict[int, tuple[int, ...]]:
    return {
        v: (strategy[v],) if sub.owner(v) is DIS else sub.succ(v) for v in sub.order
    }


def solve_bruteforce(game: Game | Subgame, cap: int = STRATEGY_CAP) -> tuple[frozenset, frozenset]:
    """``(W_Dis, W_Con)`` by trying every positional Dis strategy."""
    sub = as_subgame(game)
    w_dis = set()
    for sigma in dis_strategies(sub, cap):
        w_dis |= sub.members - con_wins_one_player(sub, residual(sub, sigma))
        if len(w_dis) == sub.n:
            break
    w_dis = frozenset(w_dis)
    return w_dis, sub.members - w_dis


def all_con_residual(sub: Subgame) -> frozenset:
    """Con's winning set if he also controlled the Dis vertices."""
    return con_wins_one_player(sub, {v: sub.succ(v) for v in sub.order})

