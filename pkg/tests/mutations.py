"""Single-fault mutations of certificates, each of which must be rejected by the checkers."""
from dataclasses import replace

from mppg.decomposition import EMPTY, ConEven, ConOdd, DisEven, DisOdd, Empty, MpLeaf, vertex_set
from mppg.game import CON, DIS
from mppg.lifting import ScanOracle
from mppg.measures import INF, TOP, Measurement, succinct_key


def node_paths(node, path=()):
    if isinstance(node, Empty):
        return
    yield path, node
    if isinstance(node, MpLeaf):
        return
    if isinstance(node, (DisOdd, ConEven)):
        yield from node_paths(node.U, path + ("U",))
    yield from node_paths(node.R, path + ("R",))


def put(node, path, new):
    if not path:
        return new
    head, rest = path[0], path[1:]
    return replace(node, **{head: put(getattr(node, head), rest, new)})


def _drop(mapping, v):
    return {k: u for k, u in mapping.items() if k != v}


def _outside(sub, v, W):
    return [u for u in sub.succ(v) if u not in W]


def node_mutations(sub, node, rng):
    """Candidate single faults at one node, as ``(kind, new_node)`` pairs."""
    out = []
    if isinstance(node, MpLeaf):
        if node.strategy:
            v = rng.choice(sorted(node.strategy))
            out.append(("mp-hole", MpLeaf(node.vertices, _drop(node.strategy, v))))
            far = _outside(sub, v, node.vertices)
            if far:
                out.append(("mp-out", MpLeaf(node.vertices, {**node.strategy, v: rng.choice(far)})))
        return out
    W = vertex_set(node)
    out.append(("parity", replace(node, b=node.b + 1)))
    if node.T:
        v = rng.choice(sorted(node.T))
        out.append(("drop-T", replace(node, T=node.T - {v}, tau=_drop(node.tau, v))))
    if node.tau:
        v = rng.choice(sorted(node.tau))
        out.append(("tau-hole", replace(node, tau=_drop(node.tau, v))))
        far = _outside(sub, v, W)
        if far:
            out.append(("tau-out", replace(node, tau={**node.tau, v: rng.choice(far)})))
    if not isinstance(node.R, Empty):
        out.append(("empty-R", replace(node, R=EMPTY)))
    if isinstance(node, (DisEven, ConOdd)):
        v = rng.choice(sorted(node.B))
        out.append(("B-to-T", replace(node, B=node.B - {v}, T=node.T | {v})))
    if isinstance(node, (DisOdd, ConEven)) and not isinstance(node.U, Empty):
        out.append(("empty-U", replace(node, U=EMPTY)))
    if isinstance(node, ConOdd) and node.lam:
        v = rng.choice(sorted(node.lam))
        out.append(("lambda-hole", replace(node, lam=_drop(node.lam, v))))
        far = _outside(sub, v, W)
        if far:
            out.append(("lambda-out", replace(node, lam={**node.lam, v: rng.choice(far)})))
    return out


def mutate_decomposition(sub, root, rng):
    """One random single-fault mutant ``(kind, mutated_root)``."""
    paths = list(node_paths(root))
    while True:
        path, node = rng.choice(paths)
        muts = node_mutations(sub, node, rng)
        if muts:
            kind, new = rng.choice(muts)
            return kind, put(root, path, new)


def mutate_measure(sub, lab, rng, oracle=None):
    """One random single-fault mutant of a least progress measure ``(kind, labelling)``.

    Lowering one vertex of the least measure always breaks it; the other kinds
    break validity of a single measurement.
    """
    oracle = oracle or ScanOracle(sub, lab.d)
    v = rng.choice(sub.order)
    cur = lab.values[v]
    kinds = ["overflow", "bits"]
    lower = [m for m in oracle.measurements(v) if m is not TOP and succinct_key(m) < succinct_key(cur)]
    if lower:
        kinds += ["lower", "lower"]
    if cur is not TOP and cur.e != INF and len(cur.seq) < (lab.d - sub.priority(v) + 1) // 2:
        kinds.append("inf-level")
    kind = rng.choice(kinds)
    seq = () if cur is TOP else cur.seq
    if kind == "lower":
        new = rng.choice(lower)
    elif kind == "overflow":
        new = Measurement(seq, lab.scale(sub) * sub.C + 1)
    elif kind == "bits":
        room = (lab.d - sub.priority(v) + 1) // 2
        new = Measurement(("1" * (lab.scale(sub).bit_length() + 1),) * max(room, 1), 0)
    else:
        new = Measurement(seq, INF)
    out = lab.copy()
    out.values[v] = new
    return kind, out


def owner_of(node):
    return DIS if isinstance(node, (DisEven, DisOdd)) else CON
