"""
Named bounds and how to recompute each one from its serialized inputs.

The CLI dispatches through ``run_bound`` and the verifier replays stored
reports through ``replay_bound``, so both read inputs the same way.
"""

from typing import Callable, Dict, Optional

from core.boolfn import BooleanFunction, Predicate
from core.bounds import (disc_lower_weight, disc_upper_adeg, disc_upper_weight, logrank_check,
                         q_lower_adeg, q_lower_weight, rank_lower_adeg, rank_lower_weight)
from core.evaluator import BoundReport
from core.numeric import parse_rational
from core.policy import MalformedInputError
from core.razborov import razborov_bound


def _f(inputs) -> BooleanFunction:
    return BooleanFunction.from_hex(inputs["f"], int(inputs["t"]))


def _q(inputs, key):
    if key not in inputs:
        raise MalformedInputError(f"bound needs parameter {key!r}")
    return parse_rational(inputs[key])


BOUNDS: Dict[str, Callable[[dict, Optional[str]], BoundReport]] = {
    "main-cc": lambda a, m: q_lower_adeg(_f(a), int(a["n"]), int(a["t"]), _q(a, "eps"), _q(a, "delta"), m),
    "small-bias-cc": lambda a, m: q_lower_weight(_f(a), int(a["n"]), int(a["t"]), int(a["d"]), _q(a, "gamma"), m),
    "disc-upper": lambda a, m: disc_upper_weight(_f(a), int(a["n"]), int(a["t"]), m),
    "disc-lower": lambda a, m: disc_lower_weight(_f(a), int(a["n"]), int(a["t"]), int(a["d"]), m),
    "disc-upper-adeg": lambda a, m: disc_upper_adeg(_f(a), int(a["n"]), int(a["t"]), _q(a, "gamma"), m),
    "rank-bounded-error": lambda a, m: rank_lower_adeg(_f(a), int(a["n"]), int(a["t"]), _q(a, "eps"),
                                                       _q(a, "delta"), m),
    "rank-small-bias": lambda a, m: rank_lower_weight(_f(a), int(a["n"]), int(a["t"]), int(a["d"]),
                                                      _q(a, "gamma"), m),
    "logrank": lambda a, m: logrank_check(_f(a), int(a["n"]), int(a["t"])),
    "razborov": lambda a, m: razborov_bound(Predicate(int(a["n"]), tuple(a["predicate"]), name="D"),
                                            mode=m),
}


def run_bound(name: str, inputs: dict, mode: Optional[str] = None) -> BoundReport:
    if name not in BOUNDS:
        raise MalformedInputError(f"unknown bound {name!r}; choose from {', '.join(sorted(BOUNDS))}")
    try:
        return BOUNDS[name](inputs, mode)
    except KeyError as exc:
        raise MalformedInputError(f"bound {name!r} needs parameter {exc.args[0]!r}") from exc


def replay_bound(name: str, inputs: dict, mode: Optional[str] = None) -> BoundReport:
    return run_bound(name, inputs, mode)
