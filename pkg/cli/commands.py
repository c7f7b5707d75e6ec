"""
One function per subcommand. Each takes a validated RunConfig and returns
(text, exit code); ``cli.main`` owns stdout and the exit status.
"""

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from audit.verify import verify_certificate, verify_matrix_export
from certificates.certificate import (CertificateFile, bound_certificate, dual_witness_certificate,
                                      ortho_certificate, spectrum_certificate, weight_certificate)
from certificates.renderer import export_pattern_csv, render_certificate, render_rows
from certificates.replay import BOUNDS, run_bound
from core.approx import approx_degree, dual_witness, error_profile, ortho_distribution, threshold_degree
from core.boolfn import CATALOG, PREDICATES, BooleanFunction, num_monomials, predicate
from core.bounds import adeg_witness
from core.dtree import min_depth_tree
from core.evaluator import BoundReport
from core.numeric import format_rational
from core.pattern import ColumnIndex, PatternMatrixSpec, compare_with_svd, spectrum_formula
from core.policy import DegenerateInputError, MalformedInputError, NumericPolicy
from core.protocols import (ProtocolInput, det_protocol, exhaustive_det_run, rand_weight_protocol,
                            simulate_weight_protocol)
from core.razborov import BOUNDED_EPS, paturi_report
from core.weight import WeightCertificate, weight_bruteforce, weight_int_upper, weight_real

from cli.config import RunConfig

logger = logging.getLogger(__name__)

OK = 0
INPUT_ERROR = 1
VACUOUS = 2

SWEEP_COLUMNS = ("name", "n", "t", "param", "value", "status", "verified")
SPECTRUM_COLUMNS = ("sigma", "sigma_sq", "multiplicity")
PATURI_COLUMNS = ("t", "adeg", "l0", "l1", "reference", "ratio", "in_band")
CATALOG_COLUMNS = ("kind", "name", "description", "parameters")

# bounds whose sweep parameter is gamma rather than eps
GAMMA_BOUNDS = ("small-bias-cc", "disc-upper-adeg", "rank-small-bias")
DUMP_LIMIT = 4096


def _q(value) -> object:
    return format_rational(value) if isinstance(value, (int, Fraction)) else value


def _render(document: Dict[str, object], config: RunConfig) -> str:
    """Single records go out as sorted JSON, or as one CSV/text row."""
    if config.format == "json":
        return json.dumps(document, indent=2, sort_keys=True, default=str) + "\n"
    columns = sorted(k for k, v in document.items() if not isinstance(v, (dict, list)))
    return render_rows([document], columns, config.format)


def _write(path: Optional[str], text: str):
    if path:
        Path(path).write_text(text, encoding="utf-8")
        logger.info("wrote %s", path)


def _save(config: RunConfig, cert: CertificateFile):
    _write(config.out, cert.to_json() + "\n")


def _report_code(report: BoundReport) -> int:
    if report.status == BoundReport.FAILED:
        return INPUT_ERROR
    if report.status == BoundReport.VACUOUS:
        return VACUOUS
    return OK


def cmd_adeg(config: RunConfig) -> Tuple[str, int]:
    f = config.function()
    eps = BOUNDED_EPS if config.eps is None else config.eps
    d = approx_degree(f, eps, config.mode)
    document = {
        "function": f.name or f.to_hex(),
        "t": f.t,
        "eps": _q(eps),
        "degree": d,
        "profile": [_q(v) for v in error_profile(f, config.mode)],
        "mode": config.mode,
    }
    if config.out:
        _save(config, dual_witness_certificate(f, dual_witness(f, eps, config.mode)))
        document["certificate"] = config.out
    return _render(document, config), OK


def cmd_degthr(config: RunConfig) -> Tuple[str, int]:
    f = config.function()
    d = threshold_degree(f, config.mode)
    document = {"function": f.name or f.to_hex(), "t": f.t, "degree": d, "mode": config.mode}
    if config.out:
        dist = ortho_distribution(f, d, config.mode)
        if dist is None:
            raise DegenerateInputError(f"no orthogonalizing distribution at d={d}")
        _save(config, ortho_certificate(f, dist))
        document["certificate"] = config.out
    return _render(document, config), OK


def _integer_certificate(f: BooleanFunction, d: int) -> WeightCertificate:
    """Brute-force optimum when the search is small, the rounding certificate otherwise."""
    if num_monomials(f.t, d) <= NumericPolicy.MAX_BRUTEFORCE_MONOMIALS:
        found = weight_bruteforce(f, d)
        if not found.exceeds_cap:
            return found.certificate
    return weight_int_upper(f, d)


def cmd_weight(config: RunConfig) -> Tuple[str, int]:
    f = config.function()
    d = threshold_degree(f, config.mode) if config.d is None else config.d
    real = weight_real(f, d, config.mode)
    document = {"function": f.name or f.to_hex(), "t": f.t, "d": d, "mode": config.mode,
                "weight_real": _q(real.value) if real.finite else "inf"}
    if not real.finite:
        document["sign_representable"] = False
        return _render(document, config), VACUOUS
    cert = _integer_certificate(f, d)
    document.update(sign_representable=True, weight_int=cert.weight, provenance=cert.provenance,
                    lambdas={str(S): v for S, v in sorted(cert.lambdas.items())})
    if config.out:
        _save(config, weight_certificate(f, cert))
        document["certificate"] = config.out
    return _render(document, config), OK


def cmd_witness(config: RunConfig) -> Tuple[str, int]:
    """Emit a certificate of the requested kind to stdout (and --out)."""
    f = config.function()
    kind = config.kind or "dual-witness"
    if kind == "dual-witness":
        eps = BOUNDED_EPS if config.eps is None else config.eps
        d, witness = adeg_witness(f, eps, config.mode)
        if witness is None:
            raise DegenerateInputError(f"deg_eps(f) = {d}; no witness exists")
        cert = dual_witness_certificate(f, witness)
    elif kind == "ortho-distribution":
        d = threshold_degree(f, config.mode) if config.d is None else config.d
        dist = ortho_distribution(f, d, config.mode)
        if dist is None:
            raise DegenerateInputError(f"no orthogonalizing distribution at d={d}")
        cert = ortho_certificate(f, dist)
    elif kind == "weight-cert":
        d = threshold_degree(f, config.mode) if config.d is None else config.d
        cert = weight_certificate(f, _integer_certificate(f, d))
    else:
        raise MalformedInputError(
            f"witness kind must be dual-witness, ortho-distribution or weight-cert, got {kind!r}")
    _save(config, cert)
    return render_certificate(cert, config.format) + "\n", OK


def _pattern_spec(config: RunConfig) -> PatternMatrixSpec:
    f = config.function()
    if config.n is None:
        raise MalformedInputError("spectrum needs --n")
    return PatternMatrixSpec(config.n, f.t, f)


def cmd_spectrum(config: RunConfig) -> Tuple[str, int]:
    spec = _pattern_spec(config)
    NumericPolicy.check_matrix_size(*spec.shape)
    spectrum = spectrum_formula(spec)
    rows = [{"sigma": math.sqrt(s), "sigma_sq": s, "multiplicity": m} for s, m in spectrum.squares]
    if config.verify:
        match = compare_with_svd(spec)["match"]
        for row in rows:
            row["verified"] = match
    if config.export:
        _write(config.export, export_pattern_csv(spec))
    if config.out:
        _save(config, spectrum_certificate(spec))
    columns = SPECTRUM_COLUMNS + (("verified",) if config.verify else ())
    code = OK if not config.verify or all(r["verified"] for r in rows) else VACUOUS
    return render_rows(rows, columns, config.format), code


def _bound_inputs(config: RunConfig, name: str, n: Optional[int] = None, param=None) -> Dict[str, object]:
    n = config.n if n is None else n
    if name == "razborov":
        D = config.predicate_obj(n)
        return {"predicate": list(D.values), "n": D.n}
    f = config.function()
    inputs: Dict[str, object] = {"f": f.to_hex(), "t": f.t, "n": n}
    for key in ("eps", "delta", "gamma"):
        value = getattr(config, key)
        if value is not None:
            inputs[key] = format_rational(value)
    if param is not None:
        inputs["gamma" if name in GAMMA_BOUNDS else "eps"] = format_rational(param)
    if name in ("main-cc", "rank-bounded-error"):
        inputs.setdefault("eps", format_rational(BOUNDED_EPS))
        inputs.setdefault("delta", format_rational(Fraction(1, 7)))
    if name in ("small-bias-cc", "disc-lower", "rank-small-bias"):
        inputs["d"] = threshold_degree(f, config.mode) if config.d is None else config.d
    return inputs


def cmd_bounds(config: RunConfig) -> Tuple[str, int]:
    name = config.subject
    if name == "paturi":
        return _paturi(config)
    if name not in BOUNDS:
        raise MalformedInputError(f"unknown bound {name!r}; choose from {', '.join(sorted(BOUNDS))}, paturi")
    report = run_bound(name, _bound_inputs(config, name), config.mode)
    if config.out:
        _save(config, bound_certificate(report, config.mode))
    if config.format == "json":
        text = json.dumps(report.to_payload(), indent=2, sort_keys=True) + "\n"
    else:
        row = {"name": report.name, "n": report.inputs.get("n"), "t": report.inputs.get("t"),
               "param": report.inputs.get("eps", report.inputs.get("gamma")),
               "value": report.value, "status": report.status,
               "verified": report.status == BoundReport.VERIFIED}
        text = render_rows([row], SWEEP_COLUMNS, config.format)
    return text, _report_code(report)


def _paturi(config: RunConfig) -> Tuple[str, int]:
    name = config.predicate or "or"
    if not config.ts:
        raise MalformedInputError("paturi needs --ts, e.g. 2..10")
    table = paturi_report(lambda t: predicate(name, t, config.k), config.ts,
                          BOUNDED_EPS if config.eps is None else config.eps, config.mode, name=name)
    return render_rows(table.as_rows(), PATURI_COLUMNS, config.format), OK


def _random_input(rng: np.random.Generator, n: int, t: int) -> ProtocolInput:
    q = n // t
    ordinal = int(rng.integers(q ** t << t))
    return ProtocolInput(n, t, int(rng.integers(1 << n)), ColumnIndex.from_ordinal(ordinal, n, t))


def cmd_simulate(config: RunConfig) -> Tuple[str, int]:
    f = config.function()
    if config.n is None:
        raise MalformedInputError("simulate needs --n")
    n, t = config.n, f.t
    rng = np.random.Generator(np.random.PCG64(config.seed))
    if config.subject == "det":
        tree = min_depth_tree(f).tree
        run = exhaustive_det_run(f, n, t, tree)
        document = {"protocol": "det", "n": n, "t": t, "inputs": run.total, "correct": run.correct,
                    "max_cost": run.max_cost, "cost_ceiling": run.ceiling}
        if config.dump:
            lines = [det_protocol(tree, inp).to_json(inp)
                     for inp in (_random_input(rng, n, t) for _ in range(min(run.total, DUMP_LIMIT)))]
            _write(config.dump, "\n".join(lines) + "\n")
        return _render(document, config), OK if run.correct == run.total else INPUT_ERROR
    if config.subject == "weight":
        d = threshold_degree(f, config.mode) if config.d is None else config.d
        cert = _integer_certificate(f, d)
        stats = simulate_weight_protocol(cert, f, n, t, config.trials, config.seed)
        document = {
            "protocol": "weight", "n": n, "t": t, "d": d, "seed": stats.seed, "trials": stats.trials,
            "weight": stats.weight, "success_floor": _q(stats.success_floor),
            "exact_success": _q(stats.exact_success), "empirical_success": stats.empirical_success,
            "sigma": stats.sigma, "within_band": stats.within_band,
            "max_cost": stats.max_cost, "cost_ceiling": stats.cost_ceiling,
        }
        if config.dump:
            lines = []
            for i in range(min(config.trials, DUMP_LIMIT)):
                inp = _random_input(rng, n, t)
                lines.append(rand_weight_protocol(cert, inp, config.seed + i).to_json(inp))
            _write(config.dump, "\n".join(lines) + "\n")
        return _render(document, config), OK
    raise MalformedInputError(f"simulate takes det or weight, got {config.subject!r}")


def cmd_verify(config: RunConfig) -> Tuple[str, int]:
    if not config.path:
        raise MalformedInputError("verify needs a file path")
    try:
        text = Path(config.path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInputError(f"cannot read {config.path}: {exc}") from exc
    if text.startswith("#"):
        result = verify_matrix_export(text)
    else:
        try:
            document = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInputError(f"{config.path} is not a certificate: {exc}") from exc
        result = verify_certificate(document)
    if config.format == "json":
        out = json.dumps(result.as_dict(), indent=2, sort_keys=True) + "\n"
    else:
        out = render_rows([{"name": name, "passed": ok} for name, ok in result.checks],
                          ("name", "passed"), config.format)
    return out, OK if result.passed else VACUOUS


def _sweep_one(config: RunConfig, name: str, n: int, param) -> Dict[str, object]:
    report = run_bound(name, _bound_inputs(config, name, n, param), config.mode)
    t = report.inputs.get("t")
    return {"name": name, "n": n, "t": t, "param": param, "value": report.value,
            "status": report.status, "verified": report.status == BoundReport.VERIFIED}


def sweep_grid(config: RunConfig) -> List[Tuple[int, object]]:
    """(n, parameter) tuples, validated before any work starts."""
    if not config.ns:
        raise MalformedInputError("sweep needs --ns")
    params = config.grid or (None,)
    grid = [(n, p) for n in config.ns for p in params]
    if config.subject != "razborov":
        t = config.function().t
        bad = [n for n in config.ns if n <= t or n % t]
        if bad:
            raise MalformedInputError(f"every n must be a multiple of t={t} above it, got {bad}")
    return grid


def cmd_sweep(config: RunConfig) -> Tuple[str, int]:
    name = config.subject
    if name not in BOUNDS:
        raise MalformedInputError(f"unknown bound {name!r}; choose from {', '.join(sorted(BOUNDS))}")
    grid = sweep_grid(config)
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        rows = list(pool.map(lambda item: _sweep_one(config, name, *item), grid))
    code = INPUT_ERROR if any(r["status"] == BoundReport.FAILED for r in rows) else OK
    return render_rows(rows, SWEEP_COLUMNS, config.format), code


def cmd_catalog(config: RunConfig) -> Tuple[str, int]:
    rows = [{"kind": "function", "name": name, "description": desc, "parameters": ",".join(params)}
            for name, (desc, params) in sorted(CATALOG.items())]
    rows += [{"kind": "predicate", "name": name, "description": desc, "parameters": ",".join(params)}
             for name, (desc, params) in sorted(PREDICATES.items())]
    rows += [{"kind": "bound", "name": name, "description": "", "parameters": ""} for name in sorted(BOUNDS)]
    return render_rows(rows, CATALOG_COLUMNS, config.format), OK


COMMANDS = {
    "adeg": cmd_adeg,
    "degthr": cmd_degthr,
    "weight": cmd_weight,
    "witness": cmd_witness,
    "spectrum": cmd_spectrum,
    "bounds": cmd_bounds,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "catalog": cmd_catalog,
}
