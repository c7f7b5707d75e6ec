"""
RunConfig: one validated invocation. Every rational flag is parsed here,
so commands only ever see Fractions (or floats in float mode).
"""

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from certificates.renderer import FORMATS
from core.boolfn import BooleanFunction, Predicate, catalog, parse_predicate, predicate
from core.numeric import parse_rational
from core.policy import MalformedInputError, NumericPolicy


LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _parse_list(text: Optional[str], exact: bool) -> Tuple:
    if not text:
        return ()
    return tuple(parse_rational(item, exact=exact) for item in text.split(",") if item.strip())


def _parse_ints(text: Optional[str]) -> Tuple[int, ...]:
    """"2,4,6" or an inclusive range "2..8"."""
    if not text:
        return ()
    if ".." in text:
        lo, hi = text.split("..", 1)
        try:
            return tuple(range(int(lo), int(hi) + 1))
        except ValueError as exc:
            raise MalformedInputError(f"bad integer range {text!r}") from exc
    try:
        return tuple(int(item) for item in text.split(",") if item.strip())
    except ValueError as exc:
        raise MalformedInputError(f"bad integer list {text!r}") from exc


@dataclass(frozen=True)
class RunConfig:
    command: str
    subject: Optional[str] = None
    fn: Optional[str] = None
    hex: Optional[str] = None
    predicate: Optional[str] = None
    values: Optional[str] = None
    t: Optional[int] = None
    n: Optional[int] = None
    k: Optional[int] = None
    m: Optional[int] = None
    S: Optional[int] = None
    value: Optional[int] = None
    d: Optional[int] = None
    eps: Optional[Fraction] = None
    delta: Optional[Fraction] = None
    gamma: Optional[Fraction] = None
    mode: str = "exact"
    format: str = "json"
    seed: int = 0
    trials: int = 0
    verify: bool = False
    kind: Optional[str] = None
    out: Optional[str] = None
    export: Optional[str] = None
    dump: Optional[str] = None
    path: Optional[str] = None
    ns: Tuple[int, ...] = ()
    ts: Tuple[int, ...] = ()
    grid: Tuple = field(default_factory=tuple)
    workers: int = 4

    @classmethod
    def from_namespace(cls, ns) -> "RunConfig":
        get = lambda name, default=None: getattr(ns, name, default)
        mode = NumericPolicy.resolve_mode(get("mode"))
        exact = mode == "exact"
        rational = lambda name: None if get(name) is None else parse_rational(get(name), exact=exact)
        config = cls(
            command=ns.command,
            subject=get("subject"),
            fn=get("fn"),
            hex=get("hex"),
            predicate=get("predicate"),
            values=get("values"),
            t=get("t"),
            n=get("n"),
            k=get("k"),
            m=get("m"),
            S=get("S"),
            value=get("value"),
            d=get("d"),
            eps=rational("eps"),
            delta=rational("delta"),
            gamma=rational("gamma"),
            mode=mode,
            format=get("format") or "json",
            seed=get("seed") or 0,
            trials=get("trials") or 0,
            verify=bool(get("verify")),
            kind=get("kind"),
            out=get("out"),
            export=get("export"),
            dump=get("dump"),
            path=get("path"),
            ns=_parse_ints(get("ns")),
            ts=_parse_ints(get("ts")),
            grid=_parse_list(get("grid"), exact),
            workers=get("workers") or 4,
        )
        config.validate()
        return config

    def validate(self):
        if self.format not in FORMATS:
            raise MalformedInputError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.fn and self.hex:
            raise MalformedInputError("give either --fn or --hex, not both")
        if self.predicate and self.values:
            raise MalformedInputError("give either --predicate or --values, not both")
        if self.trials < 0:
            raise MalformedInputError(f"trials must be nonnegative, got {self.trials}")
        if self.workers < 1:
            raise MalformedInputError(f"workers must be positive, got {self.workers}")
        if self.n is not None and self.t is not None and (self.t < 1 or self.n <= self.t or self.n % self.t):
            raise MalformedInputError(f"need 1 <= t < n with t | n, got n={self.n}, t={self.t}")
        for name in ("eps", "delta", "gamma"):
            v = getattr(self, name)
            if v is not None and not 0 <= v <= 1:
                raise MalformedInputError(f"{name} must lie in [0, 1], got {v}")

    def function(self) -> BooleanFunction:
        if self.hex:
            if self.t is None:
                raise MalformedInputError("--hex needs --t")
            return BooleanFunction.from_hex(self.hex, self.t)
        if self.fn:
            return catalog(self.fn, t=self.t, k=self.k, m=self.m, S=self.S, value=self.value)
        raise MalformedInputError("no function given; use --fn or --hex")

    def predicate_obj(self, n: Optional[int] = None) -> Predicate:
        if self.values:
            return parse_predicate(self.values)
        if self.predicate:
            n = self.n if n is None else n
            if n is None:
                raise MalformedInputError("--predicate needs --n")
            return predicate(self.predicate, n, self.k)
        raise MalformedInputError("no predicate given; use --predicate or --values")


def log_level(verbose: int) -> str:
    if verbose >= 2:
        return "DEBUG"
    if verbose == 1:
        return "INFO"
    level = os.environ.get(NumericPolicy.LOG_LEVEL_ENV, "WARNING").strip().upper()
    if level not in LOG_LEVELS:
        raise MalformedInputError(f"{NumericPolicy.LOG_LEVEL_ENV} must be one of {LOG_LEVELS}, got {level!r}")
    return level
