"""Vertex values via threshold queries, bisection and Stern-Brocot snapping."""
from __future__ import annotations

from fractions import Fraction
from math import floor
from typing import Callable

from .game import Game, scale_threshold
from .lifting import solve_lifting


class InconsistentValue(RuntimeError):
    """An internal consistency check of the value computation failed."""


def lifting_con_set(game: Game) -> frozenset:
    return solve_lifting(game).w_con


class ThresholdOracle:
    """Cached ``theta -> {v : value(v) < theta}``."""

    def __init__(self, game: Game, solver: Callable[[Game], frozenset] = lifting_con_set):
        self.game = game
        self.solver = solver
        self.cache: dict[Fraction, frozenset] = {}

    def __call__(self, theta) -> frozenset:
        theta = Fraction(theta)
        if theta not in self.cache:
            self.cache[theta] = self.solver(scale_threshold(self.game, theta))
        return self.cache[theta]

    def check_monotone(self):
        ts = sorted(self.cache)
        for a, b in zip(ts, ts[1:]):
            if not self.cache[a] <= self.cache[b]:
                raise InconsistentValue(f"Con set at {a} is not contained in the Con set at {b}")


def stern_brocot(lo: Fraction, hi: Fraction) -> Fraction:
    """The fraction with the smallest denominator in ``[lo, hi)``."""
    if not lo < hi:
        raise ValueError("empty interval")
    base = floor(lo)
    lo, hi = lo - base, hi - base
    if lo == 0:
        return Fraction(base)
    # descend the tree over (0, inf) between left = a/b and right = c/d
    a, b, c, d = 0, 1, 1, 0
    while True:
        m = Fraction(a + c, b + d)
        if m < lo:
            a, b = a + c, b + d
        elif m >= hi:
            c, d = a + c, b + d
        else:
            return m + base


def solve_value(game: Game, solver: Callable[[Game], frozenset] = lifting_con_set, oracle=None) -> dict:
    """``{v: Fraction or None}``; None stands for an infinite value."""
    q = oracle or ThresholdOracle(game, solver)
    n, C = game.n, game.C
    width = Fraction(1, n * n)
    finite = q(C + 1)
    out = {}
    for v in game.vertices:
        if v not in finite:
            out[v] = None
            continue
        lo, hi = Fraction(-C), Fraction(C + 1)
        while hi - lo >= width:
            mid = (lo + hi) / 2
            if v in q(mid):
                hi = mid
            else:
                lo = mid
        val = stern_brocot(lo, hi)
        if val.denominator > n:
            raise InconsistentValue(f"no value with denominator <= {n} in [{lo}, {hi})")
        if v in q(val) or v not in q(val + width):
            raise InconsistentValue(f"value {val} of vertex {game.ids[v]} is inconsistent with threshold queries")
        out[v] = val
    q.check_monotone()
    return out
