"""
Independent re-verification of certificate files and pattern-matrix exports.

Nothing here trusts a stored verdict: every invariant is recomputed from the
payload, after its digest has been checked.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from audit.merkle import MerkleTree, payload_digest, rows_root, sha256, verify_inclusion
from certificates.certificate import SCHEMA_VERSION
from certificates.renderer import pattern_rows
from certificates.replay import replay_bound
from core.approx import best_approx
from core.boolfn import BooleanFunction, fourier_table, popcounts
from core.numeric import parse_rational
from core.pattern import PatternMatrixSpec, frobenius_sq, spectrum_formula
from core.policy import MalformedInputError, NumericPolicy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VerificationResult:
    kind: str
    checks: Tuple[Tuple[str, bool], ...]
    notes: Tuple[Tuple[str, object], ...] = ()

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(ok for _, ok in self.checks)

    def failed(self) -> List[str]:
        return [name for name, ok in self.checks if not ok]

    def as_dict(self) -> Dict[str, object]:
        out = {"kind": self.kind, "passed": self.passed,
               "checks": [{"name": name, "passed": ok} for name, ok in self.checks]}
        if self.notes:
            out["notes"] = dict(self.notes)
        return out


def _rationals(values) -> List[Fraction]:
    return [parse_rational(v) for v in values]


def _function(payload) -> BooleanFunction:
    return BooleanFunction.from_hex(payload["function"], int(payload["t"]))


def _low_coefficients_vanish(values, t: int, d: int) -> bool:
    spectrum = fourier_table(values, t)
    pc = popcounts(t)
    return not any(pc[S] < d for S in spectrum.support())


def _check_dual_witness(payload) -> Dict[str, bool]:
    f = _function(payload)
    t, d = f.t, int(payload["d"])
    eps = parse_rational(payload["eps"])
    psi = _rationals(payload["psi"])
    corr = sum(v * int(fx) for v, fx in zip(psi, f.table))
    checks = {
        "length": len(psi) == 1 << t,
        "l1-unit": sum(abs(v) for v in psi) == 1,
        "orthogonal-below-d": _low_coefficients_vanish(psi, t, d),
        "correlation-matches": corr == parse_rational(payload["correlation"]),
        "correlation-exceeds-eps": corr > eps,
    }
    if t <= NumericPolicy.MAX_EXACT_LP_ARITY:
        checks["degree-attained"] = best_approx(f, d, "exact").value <= eps
    return checks


def _check_ortho_distribution(payload) -> Dict[str, bool]:
    f = _function(payload)
    t, d = f.t, int(payload["d"])
    mu = _rationals(payload["mu"])
    weighted = [m * int(fx) for m, fx in zip(mu, f.table)]
    return {
        "length": len(mu) == 1 << t,
        "nonnegative": all(m >= 0 for m in mu),
        "sums-to-one": sum(mu) == 1,
        "orthogonal-below-d": _low_coefficients_vanish(weighted, t, d),
    }


def _check_weight_cert(payload) -> Dict[str, bool]:
    f = _function(payload)
    t, d = f.t, int(payload["d"])
    lambdas = {int(S): int(v) for S, v in payload["lambdas"].items()}
    pc = popcounts(t)
    p = [sum(v * (-1 if bin(S & x).count("1") & 1 else 1) for S, v in lambdas.items()) for x in range(1 << t)]
    return {
        "degree-bounded": all(0 <= S < 1 << t and pc[S] <= d for S in lambdas),
        "sign-represents": all(px * int(fx) > 0 for px, fx in zip(p, f.table)),
        "weight-matches": sum(abs(v) for v in lambdas.values()) == int(payload["weight"]),
    }


def _check_spectrum(payload) -> Dict[str, bool]:
    spec = PatternMatrixSpec(int(payload["n"]), int(payload["t"]), tuple(_rationals(payload["phi"])))
    recomputed = spectrum_formula(spec)
    stored = tuple((parse_rational(s), int(m)) for s, m in payload["squares"])
    total = sum((s * m for s, m in stored), Fraction(0))
    return {
        "phi-digest": spec.phi_sha256() == payload["phi_sha256"],
        "spectrum-recomputed": recomputed.squares == stored,
        "rank-matches": recomputed.rank == int(payload["rank"]),
        "parseval": total == frobenius_sq(spec),
    }


def _check_bound_report(payload) -> Dict[str, bool]:
    report = replay_bound(payload["name"], payload["inputs"], payload.get("mode"))
    stored = payload["value"]
    value = report.to_payload()["value"]
    if isinstance(stored, str) or isinstance(value, str):
        same = stored == value
    else:
        same = math.isclose(float(stored), float(value), rel_tol=1e-12, abs_tol=1e-12)
    return {
        "value-reproduced": same,
        "checks-reproduced": report.passed(),
        "status-matches": report.status == payload["status"],
    }


CHECKERS: Dict[str, Callable[[dict], Dict[str, bool]]] = {
    "dual-witness": _check_dual_witness,
    "ortho-distribution": _check_ortho_distribution,
    "weight-cert": _check_weight_cert,
    "spectrum": _check_spectrum,
    "bound-report": _check_bound_report,
}


def verify_certificate(document: Dict[str, object]) -> VerificationResult:
    """Digest first; a payload that fails it is not inspected further."""
    if not isinstance(document, dict):
        raise MalformedInputError(f"a certificate is a JSON object, got {type(document).__name__}")
    if document.get("schema_version") != SCHEMA_VERSION:
        raise MalformedInputError(
            f"schema version {document.get('schema_version')!r} is not {SCHEMA_VERSION!r}")
    kind = document.get("kind")
    if kind not in CHECKERS:
        raise MalformedInputError(f"unknown certificate kind {kind!r}")
    payload = document.get("payload")
    checks = [("payload-digest", payload_digest(payload) == document.get("payload_sha256"))]
    if checks[0][1]:
        try:
            checks.extend(CHECKERS[kind](payload).items())
        except (KeyError, TypeError, ValueError) as exc:
            logger.warning("payload of %s certificate is malformed: %s", kind, exc)
            checks.append(("payload-well-formed", False))
    result = VerificationResult(kind=kind, checks=tuple(checks))
    logger.info("verified %s certificate: %s", kind, "pass" if result.passed else result.failed())
    return result


def _export_header(line: str) -> Dict[str, str]:
    try:
        header = dict(item.split("=", 1) for item in line[1:].strip().split(","))
    except ValueError as exc:
        raise MalformedInputError(f"matrix export header is not key=value pairs: {line!r}") from exc
    required = ("n", "t", "merkle_root") + (("phi_sha256",) if "phi" in header else ())
    missing = [key for key in required if key not in header]
    if missing:
        raise MalformedInputError(f"matrix export header lacks {', '.join(missing)}")
    try:
        n, t = int(header["n"]), int(header["t"])
    except ValueError as exc:
        raise MalformedInputError(f"matrix export header has non-integer n or t: {line!r}") from exc
    if t < 1 or n <= t or n % t:
        raise MalformedInputError(f"matrix export header needs 1 <= t < n with t | n, got n={n}, t={t}")
    return header


def _first_foreign_row(rows: List[str], expected: MerkleTree) -> Optional[int]:
    """Index of the first row with no inclusion proof under the expected root."""
    for i, row in enumerate(rows):
        if i >= len(expected.leaves) or not verify_inclusion(sha256(row), expected.proof(i), expected.root):
            return i
    return None


def verify_matrix_export(text: str) -> VerificationResult:
    """
    Recompute the row Merkle root of a CSV export. When the header carries
    phi, the rows are rebuilt from it and each supplied row is checked for
    inclusion, so the first tampered row is named in the notes.
    """
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise MalformedInputError("matrix export lacks its header line")
    header = _export_header(lines[0])
    rows = [line for line in lines[1:] if line]
    n, t = int(header["n"]), int(header["t"])
    q = n // t
    checks = [
        ("row-count", len(rows) == 1 << n),
        ("column-count", all(len(row.split(",")) == q ** t << t for row in rows)),
        ("merkle-root", bool(rows) and rows_root(rows) == header["merkle_root"]),
    ]
    notes = []
    if "phi" in header:
        phi = tuple(parse_rational(v) for v in header["phi"].split(";"))
        spec = PatternMatrixSpec(n, t, phi)
        expected = MerkleTree([sha256(row) for row in pattern_rows(spec)])
        bad = _first_foreign_row(rows, expected)
        checks += [
            ("phi-digest", spec.phi_sha256() == header["phi_sha256"]),
            ("root-matches-phi", expected.root == header["merkle_root"]),
            ("rows-included", bad is None),
        ]
        if bad is not None:
            logger.warning("row %d of the matrix export is not the row phi builds", bad)
            notes.append(("first-tampered-row", bad))
    return VerificationResult(kind="matrix-export", checks=tuple(checks), notes=tuple(notes))
