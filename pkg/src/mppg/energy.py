"""Energy progress measures and the mean-payoff winning sets derived from them."""
from __future__ import annotations

from collections import deque
from typing import Mapping, NamedTuple

from .game import CON, DIS, Player, Subgame

INT64_MAX = 2**63 - 1


class EnergyResult(NamedTuple):
    winning: frozenset[int]
    measure: dict[int, int | None]  # None is top
    strategy: dict[int, int]


def _need(f_u, w):
    if f_u is None:
        return None
    return max(0, f_u - w)


def energy_solve(sub: Subgame, protagonist: Player, weights: Mapping[tuple[int, int], int]) -> EnergyResult:
    """Least energy progress measure by FIFO lifting.

    The protagonist wins from ``v`` iff ``f(v)`` is finite; credits are capped
    at ``n * max|w|``.
    """
    wmax = max((abs(weights[e]) for e in sub.edges()), default=0)
    bound = sub.n * wmax
    if bound > INT64_MAX:
        raise OverflowError(f"credit bound {bound} exceeds 64-bit range")

    def value(v, f):
        needs = [_need(f[u], weights[v, u]) for u in sub.succ(v)]
        if sub.owner(v) is protagonist:
            finite = [x for x in needs if x is not None]
            best = min(finite) if finite else None
        else:
            best = None if None in needs else max(needs)
        if best is not None and best > bound:
            best = None
        return best

    f = {v: 0 for v in sub.order}
    queue = deque(sub.order)
    queued = set(sub.order)
    while queue:
        v = queue.popleft()
        queued.discard(v)
        if f[v] is None:
            continue
        new = value(v, f)
        if new == f[v]:
            continue
        f[v] = new
        for p in sub.pred(v):
            if p not in queued and f[p] is not None:
                queue.append(p)
                queued.add(p)

    strategy = {}
    for v in sub.order:
        if sub.owner(v) is not protagonist or f[v] is None:
            continue
        for u in sub.succ(v):
            need = _need(f[u], weights[v, u])
            if need is not None and f[v] >= need:
                strategy[v] = u
                break
    winning = frozenset(v for v in sub.order if f[v] is not None)
    return EnergyResult(winning, f, strategy)


def con_weights(sub: Subgame) -> dict[tuple[int, int], int]:
    """Weights turning "cost sum <= -1" into "weight sum >= 0" on cycles of length <= n."""
    n = sub.n
    return {(v, u): -n * sub.cost(v, u) - 1 for v, u in sub.edges()}


def mp_winning_dis(sub: Subgame) -> tuple[frozenset[int], dict[int, int]]:
    """Where Dis secures lim-sup mean payoff >= 0, with a positional strategy."""
    res = energy_solve(sub, DIS, {e: sub.cost(*e) for e in sub.edges()})
    return res.winning, res.strategy


def mp_winning_con(sub: Subgame) -> tuple[frozenset[int], dict[int, int]]:
    """Where Con secures mean payoff < 0, with a positional strategy."""
    res = energy_solve(sub, CON, con_weights(sub))
    return res.winning, res.strategy
