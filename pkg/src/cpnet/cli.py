"""Command-line interface.

Exit codes: 0 success, 1 negative answer to a query, 2 invalid input,
3 size limit exceeded.  Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import re
import sys

from . import elimination, formats, reduction, semantics
from .core import CPNet, CPNetError, SizeLimitError, is_acyclic
from .game import InvalidGameError, cpnet_to_game, game_to_cpnet
from .generate import random_net

EXIT_OK, EXIT_NO, EXIT_INVALID, EXIT_SIZE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise UsageError(f"{path}: not valid UTF-8 ({exc.reason} at byte {exc.start})") from None


def _load_net(path: str) -> CPNet:
    return formats.parse_cpnet(_read(path))


def parse_outcome(net: CPNet, text: str) -> tuple:
    """``A=a,B=b`` or ``A=a B=b`` (any order), or bare values in variable order."""
    parts = [p for p in re.split(r"[\s,]+", text.strip()) if p]
    try:
        if parts and all("=" in p for p in parts):
            pairs = {}
            for p in parts:
                k, _, v = p.partition("=")
                if k in pairs:
                    raise KeyError(f"variable {k} given twice")
                pairs[k] = v
            return net.outcome_from_names(pairs)
        if any("=" in p for p in parts):
            raise KeyError("mix of Var=value and bare values")
        return net.outcome_from_names(parts)
    except KeyError as exc:
        raise UsageError(f"bad outcome {text!r}: {exc.args[0]}") from None


def _fmt(net: CPNet, outcome) -> str:
    return " ".join(net.outcome_names(outcome))


def cmd_validate(args, out, err):
    try:
        net = _load_net(args.file)
    except formats.DocumentError as exc:
        err.write(f"{args.file}: invalid\n{exc}\n")
        return EXIT_SIZE if exc.size_limited else EXIT_INVALID
    err.write(f"{args.file}: valid ({net.n} variables, {net.num_outcomes} outcomes)\n")
    return EXIT_OK


def cmd_solve(args, out, err):
    net = _load_net(args.file)
    method = args.method
    acyclic, _ = is_acyclic(net)
    if method is None:
        method = "acyclic" if acyclic else "eliminate"
    if method == "acyclic":
        if not acyclic:
            raise UsageError("--method acyclic needs an acyclic net")
        outcomes = [elimination.solve_acyclic(net)]
        names = [net.outcome_names(o) for o in outcomes]
    elif method == "oracle":
        outcomes = sorted(semantics.optimal_outcomes(net, args.max_outcomes))
        names = [net.outcome_names(o) for o in outcomes]
    else:
        residual = elimination.eliminate(net, "nbr").final
        outcomes = sorted(semantics.optimal_outcomes(residual, args.max_outcomes))
        names = [residual.outcome_names(o) for o in outcomes]
    for values in names:
        out.write(" ".join(values) + "\n")
    if not names:
        err.write("no optimal outcome\n")
    return EXIT_OK


def cmd_reduce(args, out, err):
    out.write(formats.serialize_cpnet(reduction.reduce(_load_net(args.file))))
    return EXIT_OK


def cmd_eliminate(args, out, err):
    trace = elimination.eliminate(_load_net(args.file), args.kind)
    if args.trace:
        for line in trace.lines():
            out.write(line + "\n")
        out.write("\n")
    out.write(formats.serialize_cpnet(trace.final))
    return EXIT_OK


def cmd_to_game(args, out, err):
    out.write(formats.serialize_game(cpnet_to_game(_load_net(args.file))))
    return EXIT_OK


def cmd_to_cpnet(args, out, err):
    game = formats.parse_game(_read(args.file))
    out.write(formats.serialize_cpnet(game_to_cpnet(game)))
    return EXIT_OK


def cmd_better(args, out, err):
    net = _load_net(args.file)
    a = parse_outcome(net, args.outcome1)
    b = parse_outcome(net, args.outcome2)
    chain = semantics.better(net, a, b, args.max_outcomes)
    if chain is None:
        err.write("not better\n")
        return EXIT_NO
    for o in chain:
        out.write(_fmt(net, o) + "\n")
    return EXIT_OK


def cmd_flips(args, out, err):
    net = _load_net(args.file)
    o = parse_outcome(net, args.outcome)
    flips = semantics.improving_flips(net, o) if args.dir == "up" else semantics.worsening_flips(net, o)
    for flip, nxt in flips:
        i = flip.variable
        out.write(f"{net.names[i]}: {net.domains[i][flip.from_value]} -> "
                  f"{net.domains[i][flip.to_value]}  {_fmt(net, nxt)}\n")
    return EXIT_OK


def cmd_gen(args, out, err):
    if args.vars < 1 or args.domain < 1:
        raise UsageError("--vars and --domain must be positive")
    net = random_net(args.vars, args.domain, acyclic=args.acyclic, seed=args.seed,
                     max_parents=args.max_parents)
    out.write(formats.serialize_cpnet(net))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cpnet", description="CP-nets and games with parametrized preferences.")
    parser.add_argument("--max-outcomes", type=int, default=None, metavar="N",
                        help="oracle limit on the number of outcomes (default: $CPNET_MAX_OUTCOMES or 2^20)")
    common = _Parser(add_help=False)
    common.add_argument("--max-outcomes", type=int, default=argparse.SUPPRESS, metavar="N",
                        help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="check a CP-net document")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", parents=[common], help="print the optimal outcomes")
    p.add_argument("file")
    p.add_argument("--method", choices=["oracle", "acyclic", "eliminate"], default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", parents=[common], help="drop redundant parents")
    p.add_argument("file")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("eliminate", parents=[common], help="iterated elimination of values")
    p.add_argument("file")
    p.add_argument("--kind", choices=["nbr", "dominated"], default="nbr")
    p.add_argument("--trace", action="store_true", help="list removed values first")
    p.set_defaults(func=cmd_eliminate)

    p = sub.add_parser("to-game", parents=[common], help="CP-net to game")
    p.add_argument("file")
    p.set_defaults(func=cmd_to_game)

    p = sub.add_parser("to-cpnet", parents=[common], help="game to full-parent CP-net")
    p.add_argument("file")
    p.set_defaults(func=cmd_to_cpnet)

    p = sub.add_parser("better", parents=[common], help="is outcome1 better than outcome2?")
    p.add_argument("file")
    p.add_argument("outcome1")
    p.add_argument("outcome2")
    p.set_defaults(func=cmd_better)

    p = sub.add_parser("flips", parents=[common], help="list one-flip neighbours")
    p.add_argument("file")
    p.add_argument("outcome")
    p.add_argument("--dir", choices=["up", "down"], default="down")
    p.set_defaults(func=cmd_flips)

    p = sub.add_parser("gen", parents=[common], help="random CP-net")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--domain", type=int, default=2)
    p.add_argument("--acyclic", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-parents", type=int, default=2)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out, err)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID
    except formats.DocumentError as exc:
        err.write(f"{exc}\n")
        return EXIT_SIZE if exc.size_limited else EXIT_INVALID
    except SizeLimitError as exc:
        err.write(f"size limit: {exc}\n")
        return EXIT_SIZE
    except (InvalidGameError, CPNetError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID


def run():  # console-script entry point
    sys.exit(main())


if __name__ == "__main__":
    run()
