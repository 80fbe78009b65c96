"""Seeded random instances."""
from __future__ import annotations

import random

from .game import Game, validate_game


def gen_random(n: int, max_priority: int, max_cost: int, m: int, seed: int) -> Game:
    """A random game with ``n`` vertices and ``m`` edges, every vertex having a successor.

    Priorities are drawn from ``1..max_priority`` and costs from
    ``[-max_cost, max_cost]``; a random functional graph comes first, then
    distinct extra edges.
    """
    if n < 1 or max_priority < 1 or max_cost < 0:
        raise ValueError("need n >= 1, max_priority >= 1 and max_cost >= 0")
    if not n <= m <= n * n:
        raise ValueError(f"edge count must lie in [{n}, {n * n}], got {m}")
    rng = random.Random(seed)
    vertices = [(v, rng.randint(1, max_priority), rng.choice("DC")) for v in range(n)]
    edges = {}
    for v in range(n):
        edges[v, rng.randrange(n)] = rng.randint(-max_cost, max_cost)
    free = [(v, u) for v in range(n) for u in range(n) if (v, u) not in edges]
    for e in rng.sample(free, m - n):
        edges[e] = rng.randint(-max_cost, max_cost)
    return validate_game({"vertices": vertices, "edges": [(v, u, c) for (v, u), c in edges.items()]})


def corpus(count: int = 500, seed: int = 2024, max_n: int = 8):
    """The differential-testing corpus: n <= max_n, priorities <= 4, |c| <= 3, m <= 2n."""
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, max_n)
        m = rng.randint(n, min(2 * n, n * n))
        yield gen_random(n, rng.randint(1, 4), 3, m, rng.randrange(2**32))
