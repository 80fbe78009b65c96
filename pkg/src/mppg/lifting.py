"""The lift operators and the worklist computation of the least progress measure."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .game import DIS, Game, Subgame, as_subgame
from .measures import (
    INF,
    TOP,
    Measurement,
    ProgressLabelling,
    _progressive,
    budget_bits,
    count_S,
    enumerate_S,
    max_len,
    min_sequence_above,
    sequence_key,
    succinct_key,
    truncate,
    valid_measurements,
)


class ResourceCap(RuntimeError):
    """A vertex was lifted more often than the size of the measurement space allows."""


def _least(cands):
    cands = [c for c in cands if c is not None]
    if not cands:
        return TOP
    return min(cands, key=succinct_key)


def lift(lab: ProgressLabelling, v: int, u: int, sub: Subgame) -> object:
    """Least valid measurement at ``v``, not below the current one, making (v, u) progressive."""
    cur, tgt = lab.values[v], lab.values[u]
    if cur is TOP or tgt is TOP:
        return TOP
    if _progressive(lab, cur, tgt, v, u, sub):
        return cur
    d = lab.d
    p = sub.priority(v)
    lv = max_len(p, d)
    n = lab.scale(sub)
    budget = budget_bits(n)
    cap = n * sub.C
    c = sub.cost(v, u)
    cur_key = sequence_key(cur.seq)

    if u == v:
        cands = []
        if p % 2 == 0:
            seq = cur.seq
            if len(seq) < lv:
                rem = budget - sum(map(len, seq))
                seq = seq + ("0" * rem,) + ("",) * (lv - len(seq) - 1)
            cands.append(Measurement(seq, INF))
        if c >= 0:
            # cur.e must be INF here, otherwise the edge was progressive already
            nxt = min_sequence_above(cur.seq, p, budget, d)
            if nxt is not None:
                cands.append(Measurement(nxt, 0))
        return _least(cands)

    cands = []
    t = truncate(tgt.seq, p, d)
    t_key = sequence_key(t)
    # condition 3: same sequence as the target, enough energy
    if len(tgt.seq) <= lv and tgt.e != INF:
        k = sequence_key(tgt.seq)
        e = max(0, tgt.e - c)
        if k == cur_key:
            e = None if cur.e == INF else max(e, cur.e)
        if k >= cur_key and e is not None and e <= cap:
            cands.append(Measurement(tgt.seq, e))
    # condition 2: equal truncation at an even priority with e = inf
    if p % 2 == 0 and len(t) == lv and t_key >= cur_key:
        cands.append(Measurement(t, INF))
    # condition 1: strictly above the truncation
    if cur_key > t_key:
        cands.append(cur)
    else:
        nxt = min_sequence_above(t, p, budget, d)
        if nxt is not None:
            cands.append(Measurement(nxt, 0))
    return _least(cands)


class ScanOracle:
    """Reference lift: walk the valid measurements at ``v`` in ascending order."""

    def __init__(self, sub: Subgame, d: int):
        self.sub = sub
        self.d = d
        self.seqs = enumerate_S(sub.n, d)
        self._cache = {}

    def measurements(self, v):
        if v not in self._cache:
            self._cache[v] = valid_measurements(self.sub, v, self.d, self.seqs)
        return self._cache[v]

    def lift(self, lab: ProgressLabelling, v: int, u: int) -> object:
        cur = lab.values[v]
        if cur is TOP:
            return TOP
        ck = succinct_key(cur)
        for x in self.measurements(v):
            if x is TOP or succinct_key(x) < ck:
                continue
            mu = x if u == v else lab.values[u]
            if _progressive(lab, x, mu, v, u, self.sub):
                return x
        return TOP


def lift_vertex(lab: ProgressLabelling, v: int, sub: Subgame, oracle: ScanOracle | None = None):
    """``Lift_v``: min over the edges of a Dis vertex, max over those of a Con vertex."""
    if oracle is None:
        lifts = [lift(lab, v, u, sub) for u in sub.succ(v)]
    else:
        lifts = [oracle.lift(lab, v, u) for u in sub.succ(v)]
    pick = min if sub.owner(v) is DIS else max
    return pick(lifts, key=succinct_key)


@dataclass
class LiftingResult:
    w_dis: frozenset
    w_con: frozenset
    labelling: ProgressLabelling
    lift_counts: dict = field(default_factory=dict)
    bound: int = 0


def least_labelling(sub: Subgame) -> ProgressLabelling:
    return ProgressLabelling(sub.d, {v: Measurement((), 0) for v in sub.order}, n=sub.n)


def solve_lifting(
    game: Game | Subgame,
    rng: random.Random | None = None,
    use_oracle: bool = False,
) -> LiftingResult:
    """Least succinct progress measure by worklist lifting.

    With ``rng`` the worklist is drained in random order instead of FIFO.
    """
    sub = as_subgame(game)
    lab = least_labelling(sub)
    oracle = ScanOracle(sub, lab.d) if use_oracle else None
    bound = count_S(sub.n, lab.d) * (sub.n * sub.C + 1)
    counts = {v: 0 for v in sub.order}
    order = list(sub.order)
    if rng is not None:
        rng.shuffle(order)
    queue = deque(order)
    queued = set(order)
    while queue:
        if rng is None:
            v = queue.popleft()
        else:
            i = rng.randrange(len(queue))
            queue.rotate(-i)
            v = queue.popleft()
        queued.discard(v)
        new = lift_vertex(lab, v, sub, oracle)
        if new == lab.values[v]:
            continue
        lab.values[v] = new
        counts[v] += 1
        if counts[v] > bound:
            raise ResourceCap(f"vertex {sub.game.ids[v]} lifted more than {bound} times")
        for w in sub.pred(v):
            if w not in queued and lab.values[w] is not TOP:
                queue.append(w)
                queued.add(w)
    w_dis = frozenset(v for v in sub.order if lab.values[v] is not TOP)
    return LiftingResult(w_dis, sub.members - w_dis, lab, counts, bound)
