"""Text formats: instances, progress measures, decompositions and strategies."""
from __future__ import annotations

import re

from .decomposition import EMPTY, ConEven, ConOdd, DisEven, DisOdd, Empty, MpLeaf
from .game import Game, MppgError, Player, validate_game
from .measures import ProgressLabelling, format_measurement, parse_measurement


class InstanceSyntaxError(MppgError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class CertificateSyntaxError(MppgError):
    pass


# -- instances ------------------------------------------------------------------


def _int(tok, line, what):
    try:
        return int(tok)
    except ValueError:
        raise InstanceSyntaxError(line, f"{what} must be an integer, got {tok!r}") from None


def parse_instance(text: str) -> Game:
    vertices, edges = [], []
    header = False
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not header:
            if parts != ["mppg", "1"]:
                raise InstanceSyntaxError(no, f"expected header 'mppg 1', got {line!r}")
            header = True
            continue
        kind = parts[0]
        if kind == "v":
            if len(parts) != 4 or parts[3] not in ("D", "C"):
                raise InstanceSyntaxError(no, "expected 'v <id> <priority> <D|C>'")
            prio = _int(parts[2], no, "priority")
            if prio < 0:
                raise InstanceSyntaxError(no, "priority must be non-negative")
            vertices.append((_int(parts[1], no, "id"), prio, parts[3]))
        elif kind == "e":
            if len(parts) != 4:
                raise InstanceSyntaxError(no, "expected 'e <src> <dst> <cost>'")
            edges.append(tuple(_int(p, no, w) for p, w in zip(parts[1:], ("src", "dst", "cost"))))
        else:
            raise InstanceSyntaxError(no, f"unknown record {kind!r}")
    if not header:
        raise InstanceSyntaxError(1, "missing header 'mppg 1'")
    return validate_game({"vertices": vertices, "edges": edges})


def serialize_instance(game: Game) -> str:
    ids = game.ids
    lines = ["mppg 1"]
    for v in game.vertices:
        lines.append(f"v {ids[v]} {game.priority[v] - game.shift} {game.owner[v].letter}")
    for v, u in sorted(game.edges):
        lines.append(f"e {ids[v]} {ids[u]} {game.cost[v, u]}")
    return "\n".join(lines) + "\n"


# -- progress measures ------------------------------------------------------------


def serialize_measure(game: Game, lab: ProgressLabelling) -> str:
    return "".join(f"pm {game.ids[v]} {format_measurement(lab.values[v])}\n" for v in sorted(lab.values))


def parse_measure(game: Game, text: str) -> ProgressLabelling:
    values = {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 2)
        if len(parts) != 3 or parts[0] != "pm":
            raise CertificateSyntaxError(f"line {no}: expected 'pm <id> <measurement>'")
        try:
            vid = int(parts[1])
            m = parse_measurement(parts[2])
        except ValueError as exc:
            raise CertificateSyntaxError(f"line {no}: {exc}") from None
        if vid not in game.index:
            raise CertificateSyntaxError(f"line {no}: unknown vertex {vid}")
        v = game.index[vid]
        if v in values:
            raise CertificateSyntaxError(f"line {no}: vertex {vid} measured twice")
        values[v] = m
    return ProgressLabelling(game.d, values, n=game.n)


# -- decompositions -----------------------------------------------------------------


def _ids(game, vs):
    return "[" + ",".join(str(game.ids[v]) for v in sorted(vs)) + "]"


def _strategy(game, s):
    return "{" + ",".join(f"{game.ids[v]}:{game.ids[u]}" for v, u in sorted(s.items())) + "}"


def serialize_decomposition(game: Game, node) -> str:
    def b(x):
        return x - game.shift

    def go(node):
        if isinstance(node, Empty):
            return "empty"
        if isinstance(node, MpLeaf):
            return f"mp{_ids(game, node.vertices)}{_strategy(game, node.strategy)}"
        tau = f"T={_ids(game, node.T)} tau={_strategy(game, node.tau)}"
        if isinstance(node, DisEven):
            return f"dis-even {b(node.b)} {{ B={_ids(game, node.B)} {tau} R={go(node.R)} }}"
        if isinstance(node, DisOdd):
            return f"dis-odd {b(node.b)} {{ U={go(node.U)} {tau} R={go(node.R)} }}"
        if isinstance(node, ConOdd):
            return (
                f"con-odd {b(node.b)} {{ B={_ids(game, node.B)} {tau} "
                f"lambda={_strategy(game, node.lam)} R={go(node.R)} }}"
            )
        return f"con-even {b(node.b)} {{ U={go(node.U)} {tau} R={go(node.R)} }}"

    return go(node)


_TOKEN = re.compile(r"\s*(?:(-?\d+)|([A-Za-z][A-Za-z-]*)|(.))")


def _tokenize(text):
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, word, ch = m.groups()
        if num is not None:
            out.append(int(num))
        elif word is not None:
            out.append(word)
        elif ch is not None and not ch.isspace():
            out.append(ch)
        pos = m.end()
    return out


class _Parser:
    def __init__(self, game: Game, text: str):
        self.game = game
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        tok = self.peek()
        if tok is None:
            raise CertificateSyntaxError("unexpected end of certificate")
        if want is not None and tok != want:
            raise CertificateSyntaxError(f"expected {want!r}, got {tok!r}")
        self.i += 1
        return tok

    def vertex(self):
        tok = self.take()
        if not isinstance(tok, int) or tok not in self.game.index:
            raise CertificateSyntaxError(f"unknown vertex {tok!r}")
        return self.game.index[tok]

    def ids(self):
        self.take("[")
        out = set()
        while self.peek() != "]":
            out.add(self.vertex())
            if self.peek() == ",":
                self.take()
        self.take("]")
        return frozenset(out)

    def strategy(self):
        self.take("{")
        out = {}
        while self.peek() != "}":
            v = self.vertex()
            self.take(":")
            out[v] = self.vertex()
            if self.peek() == ",":
                self.take()
        self.take("}")
        return out

    def field(self, name):
        self.take(name)
        self.take("=")

    def label(self):
        tok = self.take()
        if not isinstance(tok, int):
            raise CertificateSyntaxError(f"expected a priority, got {tok!r}")
        return tok + self.game.shift

    def node(self):
        kind = self.take()
        if kind == "empty":
            return EMPTY
        if kind == "mp":
            vs = self.ids()
            return MpLeaf(vs, self.strategy())
        if kind not in ("dis-even", "dis-odd", "con-odd", "con-even"):
            raise CertificateSyntaxError(f"unknown node kind {kind!r}")
        b = self.label()
        self.take("{")
        if kind in ("dis-even", "con-odd"):
            self.field("B")
            B = self.ids()
        else:
            self.field("U")
            U = self.node()
        self.field("T")
        T = self.ids()
        self.field("tau")
        tau = self.strategy()
        if kind == "con-odd":
            self.field("lambda")
            lam = self.strategy()
        self.field("R")
        R = self.node()
        self.take("}")
        if kind == "dis-even":
            return DisEven(b, R, T, tau, B)
        if kind == "dis-odd":
            return DisOdd(b, U, T, tau, R)
        if kind == "con-odd":
            return ConOdd(b, R, T, tau, B, lam)
        return ConEven(b, U, T, tau, R)


def parse_decomposition(game: Game, text: str):
    p = _Parser(game, text)
    node = p.node()
    if p.peek() is not None:
        raise CertificateSyntaxError(f"trailing input at {p.peek()!r}")
    return node


def decomposition_owner(node) -> Player | None:
    if isinstance(node, (DisEven, DisOdd)):
        return Player.DIS
    if isinstance(node, (ConEven, ConOdd)):
        return Player.CON
    return None


def serialize_strategy(game: Game, strategy) -> str:
    return f"dis-strategy {_strategy(game, strategy)}"


def parse_strategy(game: Game, text: str) -> dict:
    p = _Parser(game, text)
    p.take("dis-strategy")
    s = p.strategy()
    if p.peek() is not None:
        raise CertificateSyntaxError(f"trailing input at {p.peek()!r}")
    return s


def serialize_machine(game: Game, node, budgets: dict[int, int]) -> str:
    lines = [serialize_decomposition(game, node)]
    lines += [f"budget {i} {b}" for i, b in sorted(budgets.items())]
    return "\n".join(lines) + "\n"
