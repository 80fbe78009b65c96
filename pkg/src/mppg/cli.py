"""Command line interface."""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .arena import is_trap
from .bruteforce import solve_bruteforce
from .decomposition import check_con_decomposition, check_dis_decomposition, dis_strategy, vertex_set
from .formats import (
    CertificateSyntaxError,
    decomposition_owner,
    parse_decomposition,
    parse_instance,
    parse_measure,
    parse_strategy,
    serialize_decomposition,
    serialize_instance,
    serialize_measure,
)
from .game import CON, DIS, MppgError, Player, restrict, scale_threshold
from .generate import gen_random
from .lifting import solve_lifting
from .measures import Violation, check_measure
from .recursive import con_decomposition, solve_zielonka
from .runtime import ConStrategyMachine, FiniteMemory, Positional, lasso_analyze, simulate
from .translate import measure_to_dis_decomposition
from .values import solve_value

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_INVALID = 0, 1, 2, 3


class InvalidCertificate(Exception):
    def __init__(self, violation):
        super().__init__(str(violation))


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _threshold(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"threshold must look like P/Q, got {text!r}") from None


def _load(args):
    game = parse_instance(_read(args.file))
    theta = getattr(args, "threshold", Fraction(0))
    return game, scale_threshold(game, theta)


def _winners(game, algorithm):
    if algorithm == "lifting":
        return solve_lifting(game).w_dis
    if algorithm == "zielonka":
        return solve_zielonka(game).w_dis
    return solve_bruteforce(game)[0]


def cmd_solve(args, out):
    game, scaled = _load(args)
    w_dis = _winners(scaled, args.algorithm)
    for v in game.vertices:
        out.write(f"winner {game.ids[v]} {'D' if v in w_dis else 'C'}\n")


def cmd_value(args, out):
    game = parse_instance(_read(args.file))
    for v, val in sorted(solve_value(game).items()):
        out.write(f"value {game.ids[v]} {'inf' if val is None else val}\n")


def cmd_certify(args, out):
    _, scaled = _load(args)
    out.write(serialize_measure(scaled, solve_lifting(scaled).labelling))


def cmd_decompose(args, out):
    _, scaled = _load(args)
    res = solve_lifting(scaled)
    if args.player == "dis":
        if not res.w_dis:
            out.write("empty\n")
            return
        sub = restrict(scaled, res.w_dis)
        node = measure_to_dis_decomposition(sub, res.labelling.restricted(res.w_dis))
    else:
        if not res.w_con:
            out.write("empty\n")
            return
        node = con_decomposition(restrict(scaled, res.w_con))
    out.write(serialize_decomposition(scaled, node) + "\n")


def verify_certificate(game, text, player: Player | None = None) -> list[Violation]:
    """Check a measure or decomposition against ``game`` without consulting any solver."""
    body = [ln for ln in text.splitlines() if ln.split("#", 1)[0].strip()]
    if body and body[0].lstrip().startswith("pm"):
        lab = parse_measure(game, text)
        return check_measure(game.full, lab)
    node = parse_decomposition(game, text)
    owner = decomposition_owner(node)
    if owner is None:
        owner = player
    if owner is None:
        raise CertificateSyntaxError("an empty decomposition needs --player")
    W = vertex_set(node)
    if not W:
        return []
    try:
        sub = restrict(game, W)
    except MppgError as exc:
        return [Violation("root", "decomposed set is not a subgame", str(exc))]
    opp = owner.opponent
    problems = []
    if not is_trap(game.full, opp, W):
        problems.append(Violation("root", f"decomposed set must be a trap for {opp.name}"))
    check = check_dis_decomposition if owner is DIS else check_con_decomposition
    return problems + check(sub, node)


def cmd_verify(args, out):
    _, scaled = _load(args)
    player = {"dis": DIS, "con": CON, None: None}[args.player]
    problems = verify_certificate(scaled, _read(args.certificate), player)
    if problems:
        raise InvalidCertificate(problems[0])
    out.write("ok\n")


def cmd_gen(args, out):
    m = args.edges if args.edges is not None else args.vertices
    game = gen_random(args.vertices, args.max_priority, args.max_cost, m, args.seed)
    out.write(serialize_instance(game))


def _format_pieces(game, pieces):
    out = []
    for vs, k in pieces:
        body = " ".join(str(game.ids[v]) for v in vs)
        out.append(f"({body})^{k}" if k > 1 else body)
    return " ".join(out)


def cmd_simulate(args, out):
    game, scaled = _load(args)
    if args.start not in game.index:
        raise MppgError(f"unknown start vertex {args.start}")
    start = game.index[args.start]
    sub = scaled.full
    res = solve_lifting(scaled)
    if args.dis_strategy:
        dis = Positional(parse_strategy(scaled, _read(args.dis_strategy)))
    elif start in res.w_dis:
        W = restrict(scaled, res.w_dis)
        sigma = dis_strategy(W, measure_to_dis_decomposition(W, res.labelling.restricted(res.w_dis)))
        fallback = FiniteMemory(sub, DIS, args.seed)
        dis = Positional({v: sigma.get(v, fallback.move[0, v]) for v in sub.owned_by(DIS)})
    else:
        dis = FiniteMemory(sub, DIS, args.seed)
    if start in res.w_con:
        W = restrict(scaled, res.w_con)
        con = ConStrategyMachine(W, con_decomposition(W))
        sim_sub = W
    else:
        con = FiniteMemory(sub, CON, args.seed + 1)
        sim_sub = sub
    if start in res.w_dis:
        sim_sub = restrict(scaled, res.w_dis)
    play = simulate(sim_sub, dis, con, start, max_steps=args.steps, seed=args.seed)
    out.write(f"stem {_format_pieces(game, play.stem)}\n")
    if play.is_lasso:
        out.write(f"cycle {_format_pieces(game, play.cycle)}\n")
        out.write(f"winner {lasso_analyze(play).letter}\n")
    else:
        out.write("no lasso within the step budget\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mppg", description="Mean-payoff parity game solver")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name, help, threshold=True):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file", help="instance file, '-' for stdin")
        if threshold:
            sp.add_argument("--threshold", type=_threshold, default=Fraction(0), metavar="P/Q")
        return sp

    sp = with_file("solve", "print the winner of every vertex")
    sp.add_argument("--algorithm", choices=["lifting", "zielonka", "brute"], default="lifting")
    sp.set_defaults(func=cmd_solve)

    with_file("value", "print the value of every vertex", threshold=False).set_defaults(func=cmd_value)

    sp = with_file("decompose", "print a strategy decomposition of a player's winning set")
    sp.add_argument("--player", choices=["dis", "con"], required=True)
    sp.set_defaults(func=cmd_decompose)

    with_file("certify", "print the least progress measure").set_defaults(func=cmd_certify)

    sp = with_file("verify", "check a progress measure or decomposition")
    sp.add_argument("certificate")
    sp.add_argument("--player", choices=["dis", "con"], default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gen", help="print a random instance")
    sp.add_argument("--vertices", type=int, required=True)
    sp.add_argument("--max-priority", type=int, default=4)
    sp.add_argument("--max-cost", type=int, default=3)
    sp.add_argument("--edges", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_gen)

    sp = with_file("simulate", "play synthesized strategies against each other")
    sp.add_argument("--start", type=int, required=True)
    sp.add_argument("--steps", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--dis-strategy", default=None, help="file with a 'dis-strategy {...}' line")
    sp.set_defaults(func=cmd_simulate)
    return p


def _glue_negative_threshold(argv):
    # argparse would read "-1/2" as an option rather than as the threshold value
    out = []
    it = iter(argv)
    for a in it:
        if a == "--threshold":
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = _glue_negative_threshold(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        args.func(args, out)
    except InvalidCertificate as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (MppgError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # invariant breach inside the solvers
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
