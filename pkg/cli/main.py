"""
Argument parsing and dispatch.

Exit codes: 0 success; 1 malformed input, size limit, solver failure, or a bound
report or protocol run with a failed check; 2 vacuous or degenerate result, or a
certificate, export or spectrum that did not verify.
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from cli.commands import COMMANDS, INPUT_ERROR, VACUOUS
from cli.config import RunConfig, log_level
from core.policy import DegenerateInputError, MalformedInputError, PatmatError

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """Usage errors become input errors instead of argparse's own exit status."""

    def error(self, message):
        raise MalformedInputError(message)


def _function_flags(p: argparse.ArgumentParser):
    p.add_argument("--fn", help="catalog function name, e.g. or, parity, thr-2")
    p.add_argument("--hex", help="truth table as hex (needs --t)")
    p.add_argument("--t", type=int, help="arity of f")
    p.add_argument("--k", type=int, help="threshold or fan-in parameter")
    p.add_argument("--m", type=int, help="number of blocks for mp")
    p.add_argument("--S", type=int, help="character mask for chi")
    p.add_argument("--value", type=int, default=1, help="value of const")


def _predicate_flags(p: argparse.ArgumentParser):
    p.add_argument("--predicate", help="named predicate: disj, or, and, parity, maj, thr-k")
    p.add_argument("--values", help="comma-separated D(0),...,D(n)")


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("--mode", help="exact or float (default: PATMAT_MODE, else exact)")
    p.add_argument("--format", default="json", help="json, csv or text")
    p.add_argument("--out", help="write the certificate to this file")
    p.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="patmat", description="Pattern matrix bounds, witnesses and protocols.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    adeg = sub.add_parser("adeg", help="approximate degree and error profile")
    _function_flags(adeg)
    adeg.add_argument("--eps", help="error as p/q (default 1/3)")

    degthr = sub.add_parser("degthr", help="threshold degree")
    _function_flags(degthr)

    weight = sub.add_parser("weight", help="threshold weight at degree d")
    _function_flags(weight)
    weight.add_argument("--d", type=int, help="degree (default: threshold degree)")

    witness = sub.add_parser("witness", help="emit a certificate")
    _function_flags(witness)
    witness.add_argument("--kind", help="dual-witness, ortho-distribution or weight-cert")
    witness.add_argument("--eps")
    witness.add_argument("--d", type=int)

    spectrum = sub.add_parser("spectrum", help="singular values of the pattern matrix")
    _function_flags(spectrum)
    spectrum.add_argument("--n", type=int, required=True)
    spectrum.add_argument("--verify", action="store_true", help="cross-check against a numerical SVD")
    spectrum.add_argument("--export", help="write the matrix as CSV with a Merkle header")

    bounds = sub.add_parser("bounds", help="evaluate a named bound")
    bounds.add_argument("subject", metavar="bound")
    _function_flags(bounds)
    _predicate_flags(bounds)
    bounds.add_argument("--n", type=int)
    bounds.add_argument("--d", type=int)
    bounds.add_argument("--eps")
    bounds.add_argument("--delta")
    bounds.add_argument("--gamma")
    bounds.add_argument("--ts", help="arities for paturi, e.g. 2..10 or 2,4,6")

    simulate = sub.add_parser("simulate", help="run a protocol")
    simulate.add_argument("subject", metavar="protocol", choices=("det", "weight"))
    _function_flags(simulate)
    simulate.add_argument("--n", type=int, required=True)
    simulate.add_argument("--d", type=int)
    simulate.add_argument("--trials", type=int, default=0)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--dump", help="write transcripts as JSON lines")

    verify = sub.add_parser("verify", help="re-verify a certificate or matrix export")
    verify.add_argument("path")

    sweep = sub.add_parser("sweep", help="evaluate a bound over a grid of (n, parameter)")
    sweep.add_argument("subject", metavar="bound")
    _function_flags(sweep)
    _predicate_flags(sweep)
    sweep.add_argument("--ns", required=True, help="values of n, e.g. 4,6,8 or 4..8")
    sweep.add_argument("--grid", help="comma-separated eps or gamma values")
    sweep.add_argument("--d", type=int)
    sweep.add_argument("--eps")
    sweep.add_argument("--delta")
    sweep.add_argument("--gamma")
    sweep.add_argument("--workers", type=int, default=4)

    sub.add_parser("catalog", help="list functions, predicates and bounds")

    for p in sub.choices.values():
        _common_flags(p)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        namespace = build_parser().parse_args(argv)
        logging.basicConfig(level=log_level(namespace.verbose),
                            format="%(asctime)s %(levelname)s %(name)s: %(message)s")
        config = RunConfig.from_namespace(namespace)
        text, code = COMMANDS[config.command](config)
    except DegenerateInputError as exc:
        print(exc, file=sys.stderr)
        return VACUOUS
    except PatmatError as exc:
        print(exc, file=sys.stderr)
        return INPUT_ERROR
    sys.stdout.write(text)
    return code
