"""Succinct progress measurements: orders, truncation, successors, validity.

A measurement is either :data:`TOP` or ``Measurement(seq, e)`` where ``seq``
is a tuple of components listed from the highest odd level ``d-1``
downwards and ``e`` is a non-negative int or :data:`INF`.  Succinct
components are binary strings; abstract ones are ints.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Callable, Mapping, NamedTuple

from .game import CON, DIS, Subgame

INF = math.inf
ENUMERATION_CAP = 2_000_000


class ScaleTooLarge(Exception):
    pass


class _Top:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TOP"

    def __reduce__(self):
        return (_Top, ())


TOP = _Top()


class Measurement(NamedTuple):
    seq: tuple
    e: float | int = 0

    def __str__(self):
        return format_measurement(self)


def budget_bits(n: int) -> int:
    """``ceil(lg n)``."""
    return (n - 1).bit_length() if n > 1 else 0


def max_len(p: int, d: int) -> int:
    """Number of components kept by truncation at priority ``p``."""
    return (d - p + 1) // 2


def level(seq, d: int) -> int:
    """The odd level of the last component (``d+1`` for the empty sequence)."""
    return d + 1 - 2 * len(seq)


# -- orders -----------------------------------------------------------------


@lru_cache(maxsize=None)
def string_key(s: str) -> tuple:
    # 0-branch < stop < 1-branch: an in-order walk of the binary tree
    return tuple(0 if ch == "0" else 2 for ch in s) + (1,)


@lru_cache(maxsize=None)
def sequence_key(seq: tuple) -> tuple:
    return tuple(string_key(s) for s in seq)


def _sign(a, b) -> int:
    return (a > b) - (a < b)


def cmp_string(s: str, t: str) -> int:
    return _sign(string_key(s), string_key(t))


def cmp_sequence(a: tuple, b: tuple) -> int:
    """Lexicographic comparison; a proper prefix is smaller than its extensions."""
    return _sign(sequence_key(a), sequence_key(b))


def succinct_key(m) -> tuple:
    if m is TOP:
        return (1,)
    return (0, sequence_key(m.seq), m.e)


def abstract_key(m) -> tuple:
    if m is TOP:
        return (1,)
    return (0, tuple(m.seq), m.e)


def truncate(seq: tuple, p: int, d: int) -> tuple:
    """Drop the components for odd levels below ``p``."""
    return seq[: max_len(p, d)]


def bits(seq: tuple) -> int:
    return sum(len(s) for s in seq)


# -- successors and enumeration --------------------------------------------


def _next_string(s: str, spare: int) -> str | None:
    """In-order successor of ``s`` among strings of length <= ``len(s) + spare``."""
    if spare > 0:
        return s + "1" + "0" * (spare - 1)
    stripped = s.rstrip("1")
    if not stripped:
        return None
    return stripped[:-1]


def min_sequence_above(bound: tuple, min_level: int, budget: int, d: int) -> tuple | None:
    """Least succinct sequence strictly above ``bound`` whose level is >= ``min_level``."""
    limit = max_len(min_level, d)
    if len(bound) < limit:
        return bound + ("0" * (budget - bits(bound)),)
    seq = list(bound[:limit])
    while seq:
        last = seq.pop()
        spare = budget - bits(seq) - len(last)
        nxt = _next_string(last, spare)
        if nxt is not None:
            return tuple(seq) + (nxt,)
    return None


def _strings_upto(k: int) -> list[str]:
    out = [""]
    for length in range(1, k + 1):
        out.extend("".join(bs) for bs in product("01", repeat=length))
    return out


def count_S(n: int, d: int) -> int:
    budget = budget_bits(n)
    # ways[t] = number of sequences of the current length with t bits in total
    ways = [1] + [0] * budget
    total = 1
    for _ in range(d // 2):
        nxt = [0] * (budget + 1)
        for t, w in enumerate(ways):
            if not w:
                continue
            for extra in range(budget - t + 1):
                nxt[t + extra] += w * (2**extra)
        ways = nxt
        total += sum(ways)
    return total


def enumerate_S(n: int, d: int, cap: int = ENUMERATION_CAP) -> list[tuple]:
    """All succinct sequences for ``n`` vertices and ``d`` priorities, ascending."""
    count = count_S(n, d)
    if count > cap:
        raise ScaleTooLarge(f"|S_{{{n},{d}}}| = {count} exceeds cap {cap}")
    budget = budget_bits(n)
    strings = _strings_upto(budget)
    out = [()]
    frontier = [()]
    for _ in range(d // 2):
        grown = []
        for seq in frontier:
            room = budget - bits(seq)
            for s in strings:
                if len(s) <= room:
                    grown.append(seq + (s,))
        out.extend(grown)
        frontier = grown
    out.sort(key=sequence_key)
    return out


def least_above_in(ordered: list[tuple], bound: tuple, min_level: int, d: int) -> tuple | None:
    """Reference successor: scan an ascending list of sequences."""
    limit = max_len(min_level, d)
    keys = [sequence_key(s) for s in ordered]
    i = bisect_right(keys, sequence_key(bound))
    for s in ordered[i:]:
        if len(s) <= limit:
            return s
    return None


# -- labellings -------------------------------------------------------------


@dataclass
class ProgressLabelling:
    """Vertex -> measurement map for a game whose priorities are at most ``d``.

    ``n`` fixes the scale (bit budget and e-bound); by default it is the
    vertex count of the game the labelling is checked against.
    """

    d: int
    values: dict = field(default_factory=dict)
    abstract: bool = False
    n: int | None = None

    def __getitem__(self, v):
        return self.values[v]

    def __setitem__(self, v, m):
        self.values[v] = m

    @property
    def key(self) -> Callable:
        return abstract_key if self.abstract else succinct_key

    def seq_key(self, seq):
        return tuple(seq) if self.abstract else sequence_key(seq)

    def copy(self) -> ProgressLabelling:
        return ProgressLabelling(self.d, dict(self.values), self.abstract, self.n)

    def restricted(self, vs) -> ProgressLabelling:
        return ProgressLabelling(self.d, {v: self.values[v] for v in vs}, self.abstract, self.n)

    def scale(self, sub: Subgame) -> int:
        return self.n if self.n is not None else sub.n

    def mu(self, v):
        m = self.values[v]
        return None if m is TOP else m.seq

    def phi(self, v):
        m = self.values[v]
        return INF if m is TOP else m.e

    def __eq__(self, other):
        return (
            isinstance(other, ProgressLabelling)
            and self.d == other.d
            and self.abstract == other.abstract
            and self.values == other.values
            and self.n == other.n
        )


def is_progressive(lab: ProgressLabelling, v: int, u: int, sub: Subgame) -> bool:
    return _progressive(lab, lab.values[v], lab.values[u], v, u, sub)


def _progressive(lab, mv, mu, v, u, sub) -> bool:
    if mv is TOP:
        return True
    if mu is TOP:
        return False
    p = sub.priority(v)
    t = truncate(mu.seq, p, lab.d)
    kv, kt = lab.seq_key(mv.seq), lab.seq_key(t)
    if kv > kt:
        return True
    if kv == kt and p % 2 == 0 and mv.e == INF:
        return True
    return (
        mv.seq == mu.seq
        and mv.e != INF
        and mu.e != INF
        and mv.e + sub.cost(v, u) >= mu.e
    )


@dataclass(frozen=True)
class Violation:
    where: str
    clause: str
    detail: str = ""

    def __str__(self):
        s = f"{self.where}: {self.clause}"
        return f"{s} ({self.detail})" if self.detail else s


def validity_problem(lab: ProgressLabelling, v: int, sub: Subgame, succinct: bool) -> str | None:
    m = lab.values[v]
    if m is TOP:
        return None
    p = sub.priority(v)
    n = lab.scale(sub)
    if len(m.seq) > max_len(p, lab.d):
        return f"level {level(m.seq, lab.d)} is below priority {p}"
    if m.e == INF:
        if len(m.seq) != max_len(p, lab.d):
            return "e = inf requires the level to be the least odd number >= the priority"
    elif not (isinstance(m.e, int) and 0 <= m.e <= n * sub.C):
        return f"e = {m.e} is outside [0, {n * sub.C}]"
    if succinct:
        if not all(isinstance(s, str) and set(s) <= {"0", "1"} for s in m.seq):
            return "components must be binary strings"
        if bits(m.seq) > budget_bits(n):
            return f"uses {bits(m.seq)} bits, budget is {budget_bits(n)}"
    return None


def edge_failure(lab: ProgressLabelling, v: int, u: int, sub: Subgame) -> str:
    """Explain why the edge (v, u) is not progressive."""
    mv, mu = lab.values[v], lab.values[u]
    if mu is TOP:
        return "target is top"
    c = sub.cost(v, u)
    if mv.seq == mu.seq and mv.e != INF and mu.e != INF:
        return f"φ(v) + c(v, u) ≥ φ(u) fails: {mv.e} + {c} < {mu.e}"
    return f"mu(v) = {list(mv.seq)} does not dominate mu(u)|pi(v) = {list(truncate(mu.seq, sub.priority(v), lab.d))}"


def check_measure(sub: Subgame, lab: ProgressLabelling, succinct: bool | None = None) -> list[Violation]:
    """All violations of the progress-measure conditions (empty list: valid).

    Top is allowed; non-top Dis vertices need one progressive edge and
    non-top Con vertices need every edge progressive.
    """
    if succinct is None:
        succinct = not lab.abstract
    out = []
    if lab.d % 2 or lab.d < sub.top:
        out.append(Violation("labelling", "d must be even and bound every priority", f"d = {lab.d}"))
        return out
    ids = sub.game.ids
    for v in sub.order:
        if v not in lab.values:
            out.append(Violation(f"vertex {ids[v]}", "missing measurement"))
            continue
        problem = validity_problem(lab, v, sub, succinct)
        if problem:
            out.append(Violation(f"vertex {ids[v]}", "invalid measurement", problem))
    if out:
        return out
    for v in sub.order:
        if lab.values[v] is TOP:
            continue
        good = [u for u in sub.succ(v) if is_progressive(lab, v, u, sub)]
        if sub.owner(v) is DIS and not good:
            u = sub.succ(v)[0]
            out.append(
                Violation(
                    f"vertex {ids[v]}",
                    "Dis vertex has no progressive edge",
                    f"edge {ids[v]}->{ids[u]}: {edge_failure(lab, v, u, sub)}",
                )
            )
        elif sub.owner(v) is CON:
            for u in sub.succ(v):
                if u not in good:
                    out.append(
                        Violation(
                            f"vertex {ids[v]}",
                            "Con vertex has a non-progressive edge",
                            f"edge {ids[v]}->{ids[u]}: {edge_failure(lab, v, u, sub)}",
                        )
                    )
                    break
    return out


def valid_measurements(sub: Subgame, v: int, d: int, seqs: list[tuple]) -> list:
    """Every valid succinct measurement at ``v`` in ascending order, then TOP."""
    p = sub.priority(v)
    lim = max_len(p, d)
    out = []
    for seq in seqs:
        if len(seq) > lim:
            continue
        out.extend(Measurement(seq, e) for e in range(sub.n * sub.C + 1))
        if len(seq) == lim:
            out.append(Measurement(seq, INF))
    out.append(TOP)
    return out


# -- text form --------------------------------------------------------------


def format_measurement(m) -> str:
    if m is TOP:
        return "top"
    comps = ",".join(s if s else "e" for s in m.seq)
    e = "inf" if m.e == INF else str(m.e)
    return f"[{comps}]:{e}"


def parse_measurement(text: str):
    text = text.strip()
    if text == "top":
        return TOP
    if not text.startswith("[") or "]:" not in text:
        raise ValueError(f"malformed measurement {text!r}")
    body, e = text[1:].split("]:", 1)
    comps = []
    if body:
        for c in body.split(","):
            if c == "e":
                comps.append("")
            elif c and set(c) <= {"0", "1"}:
                comps.append(c)
            else:
                raise ValueError(f"malformed component {c!r} in {text!r}")
    if e == "inf":
        ev = INF
    else:
        try:
            ev = int(e)
        except ValueError:
            raise ValueError(f"malformed e-component {e!r}") from None
    return Measurement(tuple(comps), ev)


def labelling_from_mapping(d: int, values: Mapping) -> ProgressLabelling:
    return ProgressLabelling(d, dict(values))
