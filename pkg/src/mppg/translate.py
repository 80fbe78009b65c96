"""Translations between progress measures and Dis decompositions, and succinct recoding."""
from __future__ import annotations

from .arena import attractor, reach_distances
from .decomposition import (
    EMPTY,
    DisEven,
    DisOdd,
    Empty,
    InvalidDecomposition,
    MpLeaf,
    check_dis_decomposition,
    vertex_set,
)
from .energy import energy_solve
from .game import DIS, MppgError, Subgame, even_ceiling, restrict
from .measures import (
    INF,
    TOP,
    Measurement,
    ProgressLabelling,
    check_measure,
    max_len,
    string_key,
    truncate,
)


class NotAMeasure(MppgError):
    pass


# -- measure -> decomposition ------------------------------------------------


def measure_to_dis_decomposition(sub: Subgame, lab: ProgressLabelling):
    """Build a Dis decomposition of ``sub`` from a progress measure without top values."""
    if any(lab.values.get(v) is TOP for v in sub.order):
        raise NotAMeasure("labelling has top values; restrict to the Dis winning set first")
    problems = check_measure(sub, lab)
    if problems:
        raise NotAMeasure(str(problems[0]))
    return _decompose(sub, sub.members, lab)


def _decompose(root: Subgame, W: frozenset, lab: ProgressLabelling):
    if not W:
        return EMPTY
    sub = restrict(root, W)
    b = sub.top
    if b % 2 == 0:
        B = frozenset(v for v in W if sub.priority(v) == b)
        att = attractor(sub, DIS, B)
        T = att.region - B
        R = W - att.region
        return DisEven(b, _decompose(root, R, lab), T, _restrict_strategy(att.strategy, T), B)

    key = lab.seq_key
    least = min(key(lab.values[v].seq) for v in W)
    R = [v for v in W if key(lab.values[v].seq) == least]
    finite = frozenset(v for v in R if lab.values[v].e != INF)
    if finite:
        strategy = {}
        for v in sorted(finite):
            if sub.owner(v) is not DIS:
                continue
            mv = lab.values[v]
            for u in sub.succ(v):
                mu = lab.values[u]
                if mu.seq == mv.seq and mu.e != INF and mv.e + sub.cost(v, u) >= mu.e:
                    strategy[v] = u
                    break
            else:
                raise NotAMeasure(f"vertex {sub.game.ids[v]} has no energy-progressive edge")
        target = finite
        inner = MpLeaf(finite, strategy)
    else:
        prefix = lab.values[R[0]].seq
        target = frozenset(v for v in W if lab.values[v].seq[: len(prefix)] == prefix)
        if any(sub.priority(v) >= b for v in target):
            raise NotAMeasure("subtree of the least sequence contains a top-priority vertex")
        inner = _decompose(root, target, lab)
    att = attractor(sub, DIS, target)
    T = att.region - target
    U = W - att.region
    return DisOdd(b, _decompose(root, U, lab), T, _restrict_strategy(att.strategy, T), inner)


def _restrict_strategy(strategy, T):
    return {v: u for v, u in sorted(strategy.items()) if v in T}


# -- decomposition -> abstract measure ----------------------------------------


def dis_decomposition_to_measure(sub: Subgame, node, d: int | None = None) -> ProgressLabelling:
    """A progress measure over integer components witnessing the decomposition."""
    problems = check_dis_decomposition(sub, node)
    if problems:
        raise InvalidDecomposition(problems)
    if d is None:
        d = max(sub.d, even_ceiling(node.b) if not isinstance(node, Empty) else 0)
    values = _measure(sub, node, d)
    return ProgressLabelling(d, values, abstract=True, n=sub.n)


def _prefix_len(b: int, d: int) -> int:
    # number of odd levels strictly above b
    return (d - b) // 2 if b % 2 == 0 else (d - b - 1) // 2


def _layers(sub: Subgame, T, tau, target):
    """tau-distance of every vertex of T to the target within the node's set."""
    res = reach_distances(sub, DIS, T, tau, target)
    if isinstance(res, str):
        raise InvalidDecomposition([res])
    return res


def _measure(root: Subgame, node, d: int) -> dict:
    if isinstance(node, Empty):
        return {}
    W = vertex_set(node)
    sub = restrict(root, W)
    b = node.b
    P = _prefix_len(b, d)
    zeros = (0,) * P

    def padded(v, t_i):
        full = max_len(sub.priority(v), d)
        return zeros + (t_i,) + (0,) * (full - P - 1)

    if isinstance(node, DisEven):
        inner = _measure(root, node.R, d)
        rmin = min((m.seq[P] for m in inner.values()), default=0)
        dist = _layers(sub, node.T, node.tau, node.B)
        k = max(dist.values(), default=0)
        out = dict(inner)
        for v, i in dist.items():
            out[v] = Measurement(padded(v, rmin - 1 - (k - i)), INF)
        for v in node.B:
            out[v] = Measurement(zeros, INF)
        return out

    if isinstance(node.R, MpLeaf):
        R = frozenset(node.R.vertices)
        leaf = restrict(root, R)
        res = energy_solve(leaf, DIS, {e: leaf.cost(*e) for e in leaf.edges()})
        if any(res.measure[v] is None for v in R):
            raise InvalidDecomposition(["mean-payoff leaf is not winning everywhere"])
        inner = {v: Measurement(zeros + (0,), res.measure[v]) for v in R}
    else:
        inner = _measure(root, node.R, d)
    rmax = max(m.seq[P] for m in inner.values())
    dist = _layers(sub, node.T, node.tau, vertex_set(node.R))
    k = max(dist.values(), default=0)
    upper = _measure(root, node.U, d)
    out = dict(inner)
    for v, i in dist.items():
        out[v] = Measurement(padded(v, rmax + i), INF)
    if upper:
        shift = rmax + k + 1 - min(m.seq[P] for m in upper.values())
        for v, m in upper.items():
            seq = m.seq[:P] + (m.seq[P] + shift,) + m.seq[P + 1 :]
            out[v] = Measurement(seq, m.e)
    return out


# -- succinct recoding --------------------------------------------------------


def _split_codes(weights: list[int]) -> list[str]:
    """Order-preserving binary codes; a child of weight k among total K gets <= ceil(lg K) - ceil(lg k) bits."""
    if not weights:
        return []
    total = sum(weights)
    acc = 0
    for j, w in enumerate(weights):
        acc += w
        if 2 * acc > total:
            break
    left = _split_codes(weights[:j])
    right = _split_codes(weights[j + 1 :])
    return ["0" + c for c in left] + [""] + ["1" + c for c in right]


def recode_succinct(sub: Subgame, lab: ProgressLabelling) -> ProgressLabelling:
    """An order- and truncation-isomorphic labelling with binary-string components."""
    seqs = {tuple(m.seq) for m in lab.values.values() if m is not TOP}
    # trie over sequence prefixes; weight = labelled sequences in the subtree
    weight = {}
    children = {}
    for s in seqs:
        for i in range(len(s) + 1):
            weight[s[:i]] = weight.get(s[:i], 0) + 1
            if i < len(s):
                children.setdefault(s[:i], set()).add(s[i])
    code = {(): ()}
    for prefix in sorted(weight, key=len):
        kids = children.get(prefix)
        if not kids:
            continue
        if lab.abstract:
            ordered = sorted(kids)
        else:
            ordered = sorted(kids, key=string_key)
        codes = _split_codes([weight[prefix + (c,)] for c in ordered])
        for c, bits in zip(ordered, codes):
            code[prefix + (c,)] = code[prefix] + (bits,)
    values = {}
    for v, m in lab.values.items():
        values[v] = TOP if m is TOP else Measurement(code[tuple(m.seq)], m.e)
    return ProgressLabelling(lab.d, values, abstract=False, n=lab.n)


def is_isomorphic(sub: Subgame, a: ProgressLabelling, b: ProgressLabelling) -> bool:
    """Same truncated comparisons at every priority, same top pattern and same e-values."""
    vs = sub.order
    for v in vs:
        ma, mb = a.values[v], b.values[v]
        if (ma is TOP) != (mb is TOP):
            return False
        if ma is not TOP and ma.e != mb.e:
            return False
    live = [v for v in vs if a.values[v] is not TOP]
    for p in range(1, max(a.d, 1) + 1):
        ka = {v: a.seq_key(truncate(a.values[v].seq, p, a.d)) for v in live}
        kb = {v: b.seq_key(truncate(b.values[v].seq, p, b.d)) for v in live}
        for x in live:
            for y in live:
                if (ka[x] > ka[y]) - (ka[x] < ka[y]) != (kb[x] > kb[y]) - (kb[x] < kb[y]):
                    return False
    return True
