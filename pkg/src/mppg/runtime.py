"""Strategies as behaviours, play simulation and lasso evaluation."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Hashable, Mapping

from .decomposition import ConEven, ConOdd, Empty, vertex_set
from .game import CON, DIS, Player, Subgame


def lambda_budget(n_w: int, C: int) -> int:
    """Number of steps an odd Con node follows its mean-payoff strategy per round."""
    return n_w + (2 * n_w + 3**n_w + 2) * n_w * C


# -- behaviours ---------------------------------------------------------------


class Behaviour:
    """How one player moves; memory values must be hashable for finite behaviours."""

    finite = True

    def initial(self, v: int) -> Hashable:
        return None

    def observe(self, mem, v: int):
        return mem

    def choose(self, mem, v: int, rng: random.Random) -> int:
        raise NotImplementedError

    def checkpoint(self, mem) -> bool:
        return True

    def phase(self, mem):
        """Counter of a deterministic phase that may be skipped ahead, or None."""
        return None


class Positional(Behaviour):
    def __init__(self, strategy: Mapping[int, int]):
        self.strategy = dict(strategy)

    def choose(self, mem, v, rng):
        return self.strategy[v]


class FiniteMemory(Behaviour):
    """A seeded random Mealy machine with at most ``states`` memory states."""

    def __init__(self, sub: Subgame, player: Player, seed: int, states: int = 3):
        r = random.Random(seed)
        self.states = r.randint(1, states)
        self.update = {(m, v): r.randrange(self.states) for m in range(self.states) for v in sub.order}
        self.move = {
            (m, v): r.choice(sub.succ(v))
            for m in range(self.states)
            for v in sub.order
            if sub.owner(v) is player
        }

    def initial(self, v):
        return self.update[0, v]

    def observe(self, mem, v):
        return self.update[mem, v]

    def choose(self, mem, v, rng):
        return self.move[mem, v]


class RandomChooser(Behaviour):
    """Uniformly random moves; plays against it are only simulated for a bounded prefix."""

    finite = False

    def __init__(self, sub: Subgame):
        self.sub = sub

    def choose(self, mem, v, rng):
        return rng.choice(self.sub.succ(v))


# -- the Con machine ------------------------------------------------------------


class ConStrategyMachine(Behaviour):
    """The round-based strategy of a Con decomposition.

    Memory is ``()`` or ``((i, left),)``: node ``i`` (pre-order index) is in
    its mean-payoff phase with ``left`` steps to go.  The machine re-dispatches
    on the current vertex every step; a phase is dropped when the play
    leaves the node's set.
    """

    def __init__(self, sub: Subgame, node):
        self.sub = sub
        self.root = node
        self.nodes = []
        self.budgets = []
        self._index = {}
        self._sets = {}
        self._collect(node)

    def _collect(self, node):
        self._sets[id(node)] = vertex_set(node)
        if isinstance(node, Empty):
            return
        self._index[id(node)] = len(self.nodes)
        self.nodes.append(node)
        W = self._sets[id(node)]
        self.budgets.append(lambda_budget(len(W), self.sub.C) if isinstance(node, ConOdd) else 0)
        if isinstance(node, ConEven):
            self._collect(node.U)
        self._collect(node.R)

    @property
    def budget_table(self) -> dict[int, int]:
        return {i: b for i, b in enumerate(self.budgets) if b}

    def _walk(self, mem, v):
        """Yield ``(node, index)`` along the nodes whose set contains ``v``."""
        node = self.root
        while not isinstance(node, Empty):
            yield node, self._index[id(node)]
            if isinstance(node, ConOdd):
                if v in node.B or v in node.T:
                    return
                node = node.R
            else:
                if v in node.T:
                    return
                node = node.U if v in self._sets[id(node.U)] else node.R

    def initial(self, v):
        return self.observe((), v)

    def observe(self, mem, v):
        counters = dict(mem)
        for node, i in self._walk(mem, v):
            if not isinstance(node, ConOdd):
                continue
            left = counters.get(i, 0) - 1
            if left > 0:
                return ((i, left),)
            if v in node.B:
                return ((i, self.budgets[i]),)
        return ()

    def choose(self, mem, v, rng):
        counters = dict(mem)
        last = None
        for node, i in self._walk(mem, v):
            if i in counters:
                return node.lam[v]
            last = node
        return last.tau[v]

    def checkpoint(self, mem):
        return not mem or mem[0][1] == self.budgets[mem[0][0]]

    def phase(self, mem):
        return mem[0][1] if mem else None

    def abstract(self, mem):
        return mem[0][0] if mem else None

    def advance(self, mem, steps):
        ((i, left),) = mem
        return ((i, left - steps),)


# -- plays ------------------------------------------------------------------------


Piece = tuple  # (vertices, repeat count)


@dataclass
class Play:
    """A play as run-length pieces: ``stem`` then ``cycle`` repeated forever.

    ``cycle`` is None for a bounded prefix; ``exceeded`` flags a finite-state
    simulation that ran out of steps before closing a lasso.
    """

    sub: Subgame
    stem: list = field(default_factory=list)
    cycle: list | None = None
    exceeded: bool = False
    steps: int = 0

    @property
    def is_lasso(self) -> bool:
        return self.cycle is not None

    def vertices(self, limit: int | None = None) -> list[int]:
        out = []
        for vs, k in self.stem + (self.cycle or []):
            for _ in range(k):
                out.extend(vs)
                if limit is not None and len(out) >= limit:
                    return out[:limit]
        return out


def _seq_cost(sub: Subgame, pieces) -> int:
    total = 0
    prev = None
    for vs, k in pieces:
        inner = sum(sub.cost(a, b) for a, b in zip(vs, vs[1:]))
        total += k * inner
        if k > 1:
            total += (k - 1) * sub.cost(vs[-1], vs[0])
        if prev is not None:
            total += sub.cost(prev, vs[0])
        prev = vs[-1]
    return total


def cycle_stats(play: Play) -> tuple[int, int, int]:
    """``(max priority, cost sum, length)`` of the cycle, closing edge included."""
    sub, cyc = play.sub, play.cycle
    top = max(sub.priority(v) for vs, _ in cyc for v in vs)
    cost = _seq_cost(sub, cyc) + sub.cost(cyc[-1][0][-1], cyc[0][0][0])
    length = sum(len(vs) * k for vs, k in cyc)
    return top, cost, length


def lasso_analyze(play: Play) -> Player:
    """Winner of the ultimately periodic play."""
    if not play.is_lasso:
        raise ValueError("play has no cycle")
    top, cost, _ = cycle_stats(play)
    return CON if top % 2 == 1 and cost < 0 else DIS


def simulate(
    sub: Subgame,
    dis: Behaviour,
    con: Behaviour,
    start: int,
    max_steps: int = 100_000,
    seed: int = 0,
) -> Play:
    """Play the two behaviours from ``start``.

    With two finite behaviours the play is followed until a joint state
    repeats and returned as a lasso.  Inside a deterministic phase of the Con
    machine repeated sub-cycles are skipped ahead in one jump.
    """
    rng = random.Random(seed)
    who = {DIS: dis, CON: con}
    finite = dis.finite and con.finite
    v = start
    mems = {DIS: dis.initial(v), CON: con.initial(v)}
    pieces: list[list] = []  # [vertices, count]; the last one is raw (count 1) and growing
    raw: list[int] = []
    seen = {}
    in_phase = {}
    steps = 0

    def close_raw():
        nonlocal raw
        if raw:
            pieces.append([tuple(raw), 1])
            raw = []

    while True:
        if finite:
            state = (v, mems[DIS], mems[CON])
            if dis.checkpoint(mems[DIS]) and con.checkpoint(mems[CON]):
                in_phase.clear()
                if state in seen:
                    pi, off = seen[state]
                    close_raw()
                    flat = [(tuple(vs), k) for vs, k in pieces]
                    stem, cycle = flat[:pi], flat[pi:]
                    if off:
                        vs, k = cycle[0]
                        stem.append((vs[:off], 1))
                        cycle[0] = (vs[off:], k)
                    return Play(sub, stem, cycle, steps=steps)
                seen[state] = (len(pieces), len(raw))
            elif con.phase(mems[CON]) is not None:
                left = con.phase(mems[CON])
                key = (v, mems[DIS], con.abstract(mems[CON]))
                if key in in_phase:
                    off, left0 = in_phase[key]
                    period = left0 - left
                    jumps = (left - 1) // period
                    if jumps > 0:
                        segment = raw[off:]
                        del raw[off:]
                        close_raw()
                        pieces.append([tuple(segment), jumps + 1])
                        mems[CON] = con.advance(mems[CON], jumps * period)
                        in_phase.clear()
                        # the state at v is unchanged except for the counter
                        continue
                else:
                    in_phase[key] = (len(raw), left)
        if steps >= max_steps:
            raw.append(v)
            close_raw()
            return Play(sub, [(tuple(vs), k) for vs, k in pieces], None, exceeded=finite, steps=steps)
        raw.append(v)
        player = sub.owner(v)
        u = who[player].choose(mems[player], v, rng)
        if u not in sub.succ(v):
            raise ValueError(f"{player.name} behaviour moved along a non-edge {v}->{u}")
        mems = {DIS: dis.observe(mems[DIS], u), CON: con.observe(mems[CON], u)}
        v = u
        steps += 1
