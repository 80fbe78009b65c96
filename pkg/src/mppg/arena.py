"""Attractors, traps, strongly connected components and cycle-sign tests."""
from __future__ import annotations

from typing import Callable, Iterable, Mapping, NamedTuple

from .game import Player, Subgame


class Attractor(NamedTuple):
    region: frozenset[int]
    strategy: dict[int, int]
    dist: dict[int, int]


def attractor(sub: Subgame, player: Player, target: Iterable[int]) -> Attractor:
    """Vertices from which ``player`` forces a visit to ``target``.

    ``dist`` is the largest number of edges the opponent can make the play
    last before hitting the target.  The strategy covers the player's
    vertices outside the target; ties go to the smallest successor id.
    """
    target = frozenset(target)
    dist = {v: 0 for v in target}
    strategy = {}
    remaining = {
        v: len(sub.succ(v)) for v in sub.order if v not in target and sub.owner(v) is not player
    }
    layer = sorted(target)
    k = 0
    while layer:
        k += 1
        nxt = []
        for u in layer:
            for v in sub.pred(u):
                if v in dist:
                    continue
                if sub.owner(v) is player:
                    if v not in strategy:
                        strategy[v] = u
                        nxt.append(v)
                else:
                    remaining[v] -= 1
                    if remaining[v] == 0:
                        nxt.append(v)
        for v in nxt:
            dist[v] = k
        layer = sorted(nxt)
    # the first layer member reaching v wins; layers are id-sorted, so among
    # successors at minimal distance the smallest id is chosen
    return Attractor(frozenset(dist), strategy, dist)


def is_trap(sub: Subgame, player: Player, region: Iterable[int]) -> bool:
    """True iff ``player`` cannot leave ``region`` and the opponent can stay."""
    region = frozenset(region)
    for v in region:
        inside = [u in region for u in sub.succ(v)]
        if sub.owner(v) is player:
            if not all(inside):
                return False
        elif not any(inside):
            return False
    return True


def reach_distances(
    sub: Subgame,
    player: Player,
    source: Iterable[int],
    strategy: Mapping[int, int],
    target: Iterable[int],
) -> dict[int, int] | str:
    """Check that ``strategy`` forces every play from ``source`` into ``target``.

    Returns the longest strategy-consistent distance to the target for every
    source vertex, or a message describing why the strategy fails.
    """
    source = frozenset(source)
    target = frozenset(target)
    allowed = source | target

    def moves(v):
        if sub.owner(v) is player:
            u = strategy.get(v)
            if u is None:
                return None
            return (u,)
        return sub.succ(v)

    for v in source:
        ms = moves(v)
        if ms is None:
            return f"no strategy choice at vertex {v}"
        for u in ms:
            if u not in sub.members or u not in sub.succ(v):
                return f"choice {v}->{u} is not an edge of the subgame"
            if u not in allowed:
                return f"edge {v}->{u} escapes before reaching the target"
    dist = {}
    on_stack = set()
    for root in sorted(source):
        if root in dist:
            continue
        stack = [(root, iter(moves(root)))]
        on_stack.add(root)
        while stack:
            v, it = stack[-1]
            advanced = False
            for u in it:
                if u in target or u in dist:
                    continue
                if u in on_stack:
                    return f"cycle through vertex {u} avoids the target"
                on_stack.add(u)
                stack.append((u, iter(moves(u))))
                advanced = True
                break
            if not advanced:
                stack.pop()
                on_stack.discard(v)
                dist[v] = 1 + max(0 if u in target else dist[u] for u in moves(v))
    return dist


def sccs(nodes: Iterable[int], succ: Callable[[int], Iterable[int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative; components come out in reverse topological order."""
    nodes = list(nodes)
    allowed = set(nodes)
    index = {}
    low = {}
    stack = []
    on_stack = set()
    out = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter([u for u in succ(root) if u in allowed]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            pushed = False
            for u in it:
                if u not in index:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on_stack.add(u)
                    work.append((u, iter([w for w in succ(u) if w in allowed])))
                    pushed = True
                    break
                if u in on_stack:
                    low[v] = min(low[v], index[u])
            if pushed:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


def subgame_sccs(sub: Subgame) -> list[list[int]]:
    return sccs(sub.order, sub.succ)


def has_negative_cycle(nodes: Iterable[int], edges: Iterable[tuple[int, int, int]]) -> bool:
    """Bellman-Ford from a virtual source connected to every node."""
    nodes = list(nodes)
    edges = list(edges)
    dist = {v: 0 for v in nodes}
    for _ in range(len(nodes)):
        changed = False
        for v, u, w in edges:
            if dist[v] + w < dist[u]:
                dist[u] = dist[v] + w
                changed = True
        if not changed:
            return False
    return True


def has_nonnegative_cycle(nodes: Iterable[int], edges: Iterable[tuple[int, int, int]]) -> bool:
    nodes = list(nodes)
    k = len(nodes) + 1
    # sum >= 0 over a cycle of length L <= n  iff  sum(k*w + 1) > 0
    return has_negative_cycle(nodes, [(v, u, -(k * w + 1)) for v, u, w in edges])


def strategy_edges(sub: Subgame, player: Player, strategy: Mapping[int, int]):
    """Edges of the subgame left after fixing ``strategy`` for ``player``."""
    for v in sub.order:
        if sub.owner(v) is player:
            u = strategy[v]
            yield v, u, sub.cost(v, u)
        else:
            for u in sub.succ(v):
                yield v, u, sub.cost(v, u)
