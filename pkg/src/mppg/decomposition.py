"""Strategy decompositions for both players and their checkers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .arena import (
    has_negative_cycle,
    has_nonnegative_cycle,
    is_trap,
    reach_distances,
    strategy_edges,
)
from .game import CON, DIS, MppgError, Player, Subgame, restrict
from .measures import Violation


@dataclass(frozen=True)
class Empty:
    def __repr__(self):
        return "Empty"


EMPTY = Empty()


@dataclass(frozen=True)
class MpLeaf:
    """A positional Dis strategy that is mean-payoff winning on ``vertices``."""

    vertices: frozenset
    strategy: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DisEven:
    b: int
    R: "DisNode"
    T: frozenset
    tau: dict
    B: frozenset


@dataclass(frozen=True)
class DisOdd:
    b: int
    U: "DisNode"
    T: frozenset
    tau: dict
    R: Union["DisNode", MpLeaf]


@dataclass(frozen=True)
class ConOdd:
    b: int
    R: "ConNode"
    T: frozenset
    tau: dict
    B: frozenset
    lam: dict


@dataclass(frozen=True)
class ConEven:
    b: int
    U: "ConNode"
    T: frozenset
    tau: dict
    R: "ConNode"


DisNode = Union[Empty, DisEven, DisOdd]
ConNode = Union[Empty, ConOdd, ConEven]


class InvalidDecomposition(MppgError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(str(self.violations[0]) if self.violations else "invalid decomposition")


def vertex_set(node) -> frozenset:
    if isinstance(node, Empty):
        return frozenset()
    if isinstance(node, MpLeaf):
        return frozenset(node.vertices)
    if isinstance(node, DisEven):
        return vertex_set(node.R) | node.T | node.B
    if isinstance(node, ConOdd):
        return vertex_set(node.R) | node.T | node.B
    return vertex_set(node.U) | node.T | vertex_set(node.R)


def label(node) -> int | None:
    return getattr(node, "b", None)


def _partition_problem(W, parts: dict) -> str | None:
    seen = set()
    for name, s in parts.items():
        overlap = seen & s
        if overlap:
            return f"{name} overlaps another part at {sorted(overlap)}"
        seen |= s
    if seen != W:
        missing = sorted(W - seen)
        extra = sorted(seen - W)
        return f"missing {missing}, extra {extra}"
    return None


class _Checker:
    def __init__(self, sub: Subgame, owner: Player):
        self.root = sub
        self.owner = owner
        self.out: list[Violation] = []
        self.ids = sub.game.ids

    def fail(self, path, clause, detail=""):
        self.out.append(Violation(path, clause, detail))

    def names(self, vs):
        return sorted(self.ids[v] for v in vs)

    def subgame(self, path, W):
        try:
            return restrict(self.root, W)
        except MppgError as exc:
            self.fail(path, "set is not a subgame", str(exc))
            return None

    def check_tau(self, path, sub, T, tau, target):
        extra = set(tau) - {v for v in T if sub.owner(v) is self.owner}
        if extra:
            self.fail(path, "tau is defined outside T", f"at {self.names(extra)}")
            return
        res = reach_distances(sub, self.owner, T, tau, target)
        if isinstance(res, str):
            self.fail(path, "tau is not a reachability strategy to the target", res)

    def check_positional(self, path, sub, player, W, strategy, what):
        own = {v for v in W if sub.owner(v) is player}
        if set(strategy) != own:
            self.fail(
                path,
                f"{what} must be defined exactly on the {player.name} vertices",
                f"domain {self.names(strategy)}, expected {self.names(own)}",
            )
            return False
        for v, u in strategy.items():
            if u not in W or u not in sub.succ(v):
                self.fail(path, f"{what} leaves the set or uses a non-edge", f"{self.ids[v]}->{u}")
                return False
        return True

    def node(self, node, W: frozenset, path: str, max_b: int | None, strict: bool):
        """Check ``node`` on set ``W``; the node label must be < max_b (strict) or <= max_b."""
        if isinstance(node, Empty):
            if W:
                self.fail(path, "empty decomposition of a non-empty set", f"{self.names(W)}")
            return
        if not W:
            self.fail(path, "non-empty decomposition of the empty set")
            return
        if isinstance(node, MpLeaf):
            self.fail(path, "a mean-payoff leaf may only appear as R of an odd node")
            return
        expected = (DisEven, DisOdd) if self.owner is DIS else (ConOdd, ConEven)
        if not isinstance(node, expected):
            self.fail(path, f"node of type {type(node).__name__} in a {self.owner.name} decomposition")
            return
        b = node.b
        if max_b is not None and (b >= max_b if strict else b > max_b):
            rel = "<" if strict else "<="
            self.fail(path, f"child label must be {rel} {max_b}", f"b = {b}")
        sub = self.subgame(path, W)
        if sub is None:
            return
        top = sub.top
        # B-nodes fix b to the top priority; the others only bound it
        if isinstance(node, (DisEven, ConOdd)):
            want = 0 if self.owner is DIS else 1
            if b % 2 != want:
                self.fail(path, "label parity does not match the node kind", f"b = {b}")
            if b != top:
                self.fail(path, "b must be the top priority of the set", f"b = {b}, top = {top}")
            self.b_node(node, sub, W, path)
        else:
            want = 1 if self.owner is DIS else 0
            if b % 2 != want:
                self.fail(path, "label parity does not match the node kind", f"b = {b}")
            if b < top:
                self.fail(path, "b is below a priority in the set", f"b = {b}, top = {top}")
            self.r_node(node, sub, W, path)

    def b_node(self, node, sub, W, path):
        B, T = frozenset(node.B), frozenset(node.T)
        R = vertex_set(node.R)
        problem = _partition_problem(W, {"B": B, "T": T, "R": R})
        if problem:
            self.fail(path, "R, T and B must partition the set", problem)
            return
        if not B:
            self.fail(path, "B must be non-empty")
            return
        top_set = frozenset(v for v in W if sub.priority(v) == node.b)
        if B != top_set:
            self.fail(
                path,
                "B is the set of vertices of the top priority",
                f"B = {self.names(B)}, expected {self.names(top_set)}",
            )
        self.check_tau(path, sub, T, node.tau, B)
        if isinstance(node, ConOdd):
            if self.check_positional(path, sub, CON, W, node.lam, "lambda"):
                if has_nonnegative_cycle(sub.order, strategy_edges(sub, CON, node.lam)):
                    self.fail(path, "lambda admits a cycle with non-negative cost sum")
        self.node(node.R, R, path + ".R", node.b, strict=True)

    def r_node(self, node, sub, W, path):
        T = frozenset(node.T)
        R = vertex_set(node.R)
        U = vertex_set(node.U)
        problem = _partition_problem(W, {"U": U, "T": T, "R": R})
        if problem:
            self.fail(path, "U, T and R must partition the set", problem)
            return
        if not R:
            self.fail(path, "R must be non-empty")
            return
        opp = self.owner.opponent
        if not is_trap(sub, opp, R):
            self.fail(path, f"R must be a trap for {opp.name}", f"R = {self.names(R)}")
        self.check_tau(path, sub, T, node.tau, R)
        if isinstance(node.R, MpLeaf):
            if self.owner is not DIS:
                self.fail(path + ".R", "a mean-payoff leaf may only appear in a Dis decomposition")
            else:
                self.leaf(node.R, path + ".R")
        else:
            self.node(node.R, R, path + ".R", node.b, strict=True)
        self.node(node.U, U, path + ".U", node.b, strict=False)

    def leaf(self, leaf: MpLeaf, path):
        sub = self.subgame(path, leaf.vertices)
        if sub is None:
            return
        if not self.check_positional(path, sub, DIS, leaf.vertices, leaf.strategy, "mp strategy"):
            return
        if has_negative_cycle(sub.order, strategy_edges(sub, DIS, leaf.strategy)):
            self.fail(path, "mp strategy admits a cycle with negative cost sum")


def check_dis_decomposition(sub: Subgame, node) -> list[Violation]:
    """Violations of the Dis decomposition conditions for ``node`` on ``sub`` (empty: valid)."""
    c = _Checker(sub, DIS)
    c.node(node, sub.members, "root", None, strict=False)
    return c.out


def check_con_decomposition(sub: Subgame, node) -> list[Violation]:
    c = _Checker(sub, CON)
    c.node(node, sub.members, "root", None, strict=False)
    return c.out


def dis_strategy(sub: Subgame, node) -> dict[int, int]:
    """The positional strategy of a Dis decomposition; B vertices take their smallest successor in the set."""
    out = {}

    def walk(node, W):
        if isinstance(node, Empty):
            return
        if isinstance(node, MpLeaf):
            out.update(node.strategy)
            return
        out.update(node.tau)
        if isinstance(node, DisEven):
            for v in node.B:
                if sub.owner(v) is DIS:
                    out[v] = min(u for u in sub.succ(v) if u in W)
            walk(node.R, vertex_set(node.R))
        else:
            walk(node.U, vertex_set(node.U))
            walk(node.R, vertex_set(node.R))

    walk(node, vertex_set(node))
    return dict(sorted(out.items()))


def nodes(node, path="root"):
    """Pre-order walk yielding ``(path, node)`` for every non-empty node and leaf."""
    if isinstance(node, Empty):
        return
    yield path, node
    if isinstance(node, MpLeaf):
        return
    if isinstance(node, (DisOdd, ConEven)):
        yield from nodes(node.U, path + ".U")
    yield from nodes(node.R, path + ".R")
