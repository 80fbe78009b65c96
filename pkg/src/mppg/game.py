"""Arena data model: games, subgames, priority normalization, thresholds."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping


class MppgError(Exception):
    """Base class for all errors raised on bad input."""


class DeadendVertex(MppgError):
    def __init__(self, vertex):
        super().__init__(f"vertex {vertex} has no outgoing edge")
        self.vertex = vertex


class UnknownEndpoint(MppgError):
    def __init__(self, vertex):
        super().__init__(f"edge endpoint {vertex} is not a declared vertex")
        self.vertex = vertex


class DuplicateVertex(MppgError):
    def __init__(self, vertex):
        super().__init__(f"vertex {vertex} declared twice")
        self.vertex = vertex


class DuplicateEdge(MppgError):
    def __init__(self, src, dst):
        super().__init__(f"edge {src}->{dst} declared twice")
        self.edge = (src, dst)


class EmptyGame(MppgError):
    def __init__(self):
        super().__init__("game has no vertices")


class EmptySubset(MppgError):
    def __init__(self):
        super().__init__("cannot restrict to an empty vertex set")


class Player(enum.IntEnum):
    DIS = 0
    CON = 1

    @property
    def opponent(self) -> Player:
        return Player(1 - self)

    @property
    def letter(self) -> str:
        return "D" if self is Player.DIS else "C"

    @classmethod
    def from_letter(cls, s: str) -> Player:
        try:
            return {"D": cls.DIS, "C": cls.CON}[s]
        except KeyError:
            raise ValueError(f"owner must be D or C, got {s!r}") from None


DIS = Player.DIS
CON = Player.CON


def even_ceiling(p: int) -> int:
    return p + (p & 1)


@dataclass(frozen=True, eq=False)
class Game:
    """A finite arena with dense vertex ids ``0..n-1``.

    ``ids`` keeps the identifiers the game was declared with, ``shift`` the
    amount added to every declared priority during normalization.
    """

    owner: tuple[Player, ...]
    priority: tuple[int, ...]
    succ: tuple[tuple[int, ...], ...]
    cost: Mapping[tuple[int, int], int]
    ids: tuple[int, ...]
    shift: int = 0

    @property
    def n(self) -> int:
        return len(self.owner)

    @property
    def m(self) -> int:
        return len(self.cost)

    @cached_property
    def d(self) -> int:
        return even_ceiling(max(self.priority))

    @cached_property
    def C(self) -> int:
        return max((abs(c) for c in self.cost.values()), default=0) or 1

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def edges(self):
        return self.cost.keys()

    @cached_property
    def index(self) -> dict[int, int]:
        return {orig: v for v, orig in enumerate(self.ids)}

    @cached_property
    def full(self) -> Subgame:
        return Subgame(self, frozenset(range(self.n)))

    def with_costs(self, cost: Mapping[tuple[int, int], int]) -> Game:
        return Game(self.owner, self.priority, self.succ, dict(cost), self.ids, self.shift)

    def __repr__(self):
        return f"Game(n={self.n}, m={self.m}, d={self.d}, C={self.C})"


@dataclass(frozen=True, eq=False)
class Subgame:
    """Induced, deadend-free restriction of a game to ``members``.

    ``n`` and ``d`` are local to the member set; ``C`` is inherited from the
    parent game.
    """

    game: Game
    members: frozenset[int]
    _succ: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        succ = {}
        for v in sorted(self.members):
            succ[v] = tuple(u for u in self.game.succ[v] if u in self.members)
        object.__setattr__(self, "_succ", succ)

    def succ(self, v: int) -> tuple[int, ...]:
        return self._succ[v]

    @cached_property
    def _pred(self) -> dict[int, list[int]]:
        pred = {v: [] for v in self._succ}
        for v, us in self._succ.items():
            for u in us:
                pred[u].append(v)
        return pred

    def pred(self, v: int) -> list[int]:
        return self._pred[v]

    @cached_property
    def order(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __iter__(self):
        return iter(self.order)

    def __contains__(self, v) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)

    @property
    def n(self) -> int:
        return len(self.members)

    @cached_property
    def m(self) -> int:
        return sum(len(us) for us in self._succ.values())

    @cached_property
    def top(self) -> int:
        """Largest priority among the members."""
        return max(self.game.priority[v] for v in self.members)

    @property
    def d(self) -> int:
        return even_ceiling(self.top)

    @property
    def C(self) -> int:
        return self.game.C

    def owner(self, v: int) -> Player:
        return self.game.owner[v]

    def priority(self, v: int) -> int:
        return self.game.priority[v]

    def cost(self, v: int, u: int) -> int:
        return self.game.cost[v, u]

    def edges(self):
        for v, us in self._succ.items():
            for u in us:
                yield v, u

    def owned_by(self, player: Player) -> list[int]:
        return [v for v in self.order if self.game.owner[v] is player]

    def __repr__(self):
        return f"Subgame({sorted(self.members)})"


def as_subgame(g: Game | Subgame) -> Subgame:
    return g.full if isinstance(g, Game) else g


def restrict(parent: Game | Subgame, members: Iterable[int]) -> Subgame:
    parent = as_subgame(parent)
    members = frozenset(members)
    if not members:
        raise EmptySubset()
    stray = members - parent.members
    if stray:
        raise UnknownEndpoint(min(stray))
    sub = Subgame(parent.game, members)
    for v in sub.order:
        if not sub.succ(v):
            raise DeadendVertex(parent.game.ids[v])
    return sub


def normalize_priorities(game: Game) -> Game:
    """Shift all priorities by 2 when some priority is 0."""
    if min(game.priority) > 0:
        return game
    return Game(
        game.owner,
        tuple(p + 2 for p in game.priority),
        game.succ,
        game.cost,
        game.ids,
        game.shift + 2,
    )


def validate_game(raw: Mapping) -> Game:
    """Build a Game from ``{"vertices": [(id, priority, owner)], "edges": [(src, dst, cost)]}``.

    Owners may be given as :class:`Player` values or the letters ``D``/``C``.
    """
    vertices = list(raw.get("vertices", ()))
    if not vertices:
        raise EmptyGame()
    decl = {}
    for vid, prio, own in vertices:
        if vid in decl:
            raise DuplicateVertex(vid)
        if prio < 0:
            raise ValueError(f"vertex {vid} has negative priority {prio}")
        if not isinstance(own, Player):
            own = Player.from_letter(own)
        decl[vid] = (int(prio), own)
    ids = tuple(sorted(decl))
    index = {orig: v for v, orig in enumerate(ids)}
    cost = {}
    for src, dst, c in raw.get("edges", ()):
        for end in (src, dst):
            if end not in index:
                raise UnknownEndpoint(end)
        key = (index[src], index[dst])
        if key in cost:
            raise DuplicateEdge(src, dst)
        cost[key] = int(c)
    succ = [[] for _ in ids]
    for v, u in cost:
        succ[v].append(u)
    for v, us in enumerate(succ):
        if not us:
            raise DeadendVertex(ids[v])
    game = Game(
        owner=tuple(decl[i][1] for i in ids),
        priority=tuple(decl[i][0] for i in ids),
        succ=tuple(tuple(sorted(us)) for us in succ),
        cost=cost,
        ids=ids,
    )
    return normalize_priorities(game)


def scale_threshold(game: Game, theta) -> Game:
    """Replace every cost ``c`` by ``b*c - a`` for ``theta = a/b``.

    A cycle has mean below ``theta`` in the input iff its transformed sum is
    negative.
    """
    theta = Fraction(theta)
    a, b = theta.numerator, theta.denominator
    if a == 0:
        return game
    return game.with_costs({e: b * c - a for e, c in game.cost.items()})
