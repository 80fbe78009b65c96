"""Con decompositions from winning-set oracles, and the attractor-based reference solver."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .arena import attractor
from .decomposition import EMPTY, ConEven, ConOdd, DisEven, DisOdd, MpLeaf
from .energy import mp_winning_con, mp_winning_dis
from .game import CON, DIS, Game, MppgError, Subgame, as_subgame, restrict
from .lifting import solve_lifting


class PreconditionViolated(MppgError):
    pass


def _lifting_oracle(sub: Subgame) -> tuple[frozenset, frozenset]:
    res = solve_lifting(sub)
    return res.w_dis, res.w_con


def _only(strategy, region):
    return {v: u for v, u in sorted(strategy.items()) if v in region}


@dataclass
class ConStats:
    calls: list = field(default_factory=list)  # vertex set of every recursive call
    steps: int = 0  # primitive steps outside oracle calls
    oracle_calls: int = 0


def con_decomposition(
    game: Game | Subgame,
    oracle: Callable[[Subgame], tuple[frozenset, frozenset]] = _lifting_oracle,
    stats: ConStats | None = None,
    check: bool = True,
):
    """Decomposition for Con of a subgame on which he wins from every vertex."""
    sub = as_subgame(game)
    stats = stats if stats is not None else ConStats()
    if check:
        stats.oracle_calls += 1
        w_dis, _ = oracle(sub)
        if w_dis:
            raise PreconditionViolated(
                f"Dis wins from {sorted(sub.game.ids[v] for v in w_dis)}; restrict to Con's winning set"
            )
    return _con(sub, sub.members, oracle, stats)


def _con(root, V, oracle, stats):
    if not V:
        return EMPTY
    sub = restrict(root, V)
    stats.calls.append(V)
    stats.steps += sub.n + sub.m
    b = sub.top
    B = frozenset(v for v in V if sub.priority(v) == b)
    if b % 2 == 0:
        att = attractor(sub, DIS, B)
        R = V - att.region
        if not R:
            raise PreconditionViolated("Dis attracts every vertex to the even top priority")
        stats.oracle_calls += 1
        _, r_con = oracle(restrict(sub, R))
        if not r_con:
            raise PreconditionViolated("Con loses the whole subgame below the even top priority")
        catt = attractor(sub, CON, r_con)
        stats.steps += sub.n + sub.m
        T = catt.region - r_con
        U = V - catt.region
        return ConEven(
            b, _con(root, U, oracle, stats), T, _only(catt.strategy, T), _con(root, r_con, oracle, stats)
        )
    won, lam = mp_winning_con(sub)
    if won != V:
        raise PreconditionViolated("Con is not mean-payoff winning everywhere below an odd top priority")
    catt = attractor(sub, CON, B)
    T = catt.region - B
    R = V - catt.region
    return ConOdd(b, _con(root, R, oracle, stats), T, _only(catt.strategy, T), B, _only(lam, V))


@dataclass
class ZielonkaResult:
    w_dis: frozenset
    dis: object
    w_con: frozenset
    con: object


def solve_zielonka(game: Game | Subgame) -> ZielonkaResult:
    """Recursive solver returning both winning sets with their decompositions."""
    sub = as_subgame(game)
    return _zielonka(sub, sub.members)


def _zielonka(root, V) -> ZielonkaResult:
    none = frozenset()
    if not V:
        return ZielonkaResult(none, EMPTY, none, EMPTY)
    sub = restrict(root, V)
    b = sub.top
    B = frozenset(v for v in V if sub.priority(v) == b)

    if b % 2 == 0:
        att = attractor(sub, DIS, B)
        T = att.region - B
        tau = _only(att.strategy, T)
        R = V - att.region
        inner = _zielonka(root, R)
        if not inner.w_con:
            return ZielonkaResult(V, DisEven(b, inner.dis, T, tau, B), none, EMPTY)
        catt = attractor(sub, CON, inner.w_con)
        T2 = catt.region - inner.w_con
        U = V - catt.region
        outer = _zielonka(root, U)
        con = ConEven(b, outer.con, T2, _only(catt.strategy, T2), inner.con)
        return ZielonkaResult(outer.w_dis, outer.dis, V - outer.w_dis, con)

    R, sigma = mp_winning_dis(sub)
    if R:
        rest = _zielonka(root, V - R)
        dis = DisOdd(b, rest.dis, none, {}, MpLeaf(R, _only(sigma, R)))
        return ZielonkaResult(rest.w_dis | R, dis, rest.w_con, rest.con)

    _, lam = mp_winning_con(sub)
    lam = _only(lam, V)
    catt = attractor(sub, CON, B)
    T = catt.region - B
    tau = _only(catt.strategy, T)
    R2 = V - catt.region
    inner = _zielonka(root, R2)
    if not inner.w_dis:
        return ZielonkaResult(none, EMPTY, V, ConOdd(b, inner.con, T, tau, B, lam))
    datt = attractor(sub, DIS, inner.w_dis)
    T2 = datt.region - inner.w_dis
    U = V - datt.region
    outer = _zielonka(root, U)
    dis = DisOdd(b, outer.dis, T2, _only(datt.strategy, T2), inner.dis)
    return ZielonkaResult(V - outer.w_con, dis, outer.w_con, outer.con)
