# certificates/certificate.py

import json
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from audit.merkle import canonical_json, payload_digest, sha256
from core.approx import DualWitness, OrthoDistribution
from core.boolfn import BooleanFunction
from core.evaluator import BoundReport
from core.numeric import format_rational, is_exact_scalar
from core.pattern import PatternMatrixSpec, spectrum_formula
from core.policy import MalformedInputError
from core.weight import WeightCertificate

SCHEMA_VERSION = "1.0.0"
KINDS = ("dual-witness", "ortho-distribution", "weight-cert", "spectrum", "bound-report")


@dataclass(frozen=True)
class CertificateFile:
    """
    One verifiable artifact. Rationals in the payload are "num/den" strings
    and truth tables are hex; ``payload_sha256`` binds the payload.
    """

    kind: str
    payload: Dict[str, Any] = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedInputError(f"unknown certificate kind {self.kind!r}")

    @property
    def payload_sha256(self) -> str:
        return payload_digest(self.payload)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "kind": self.kind,
            "payload": self.payload,
            "payload_sha256": self.payload_sha256,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def fingerprint(self) -> str:
        """Hash of the whole file; what gets published next to a result."""
        return sha256(canonical_json(self.to_dict()))

    @classmethod
    def from_dict(cls, document: Dict[str, Any]) -> "CertificateFile":
        if document.get("schema_version") != SCHEMA_VERSION:
            raise MalformedInputError(
                f"schema version {document.get('schema_version')!r} is not {SCHEMA_VERSION!r}")
        return cls(kind=document.get("kind"), payload=document.get("payload") or {})

    @classmethod
    def from_json(cls, text: str) -> "CertificateFile":
        try:
            document = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInputError(f"certificate is not valid JSON: {exc}") from exc
        return cls.from_dict(document)


def _exact_list(values, what: str):
    if not all(is_exact_scalar(v) for v in values):
        raise MalformedInputError(f"{what} must be exact to be certified; rerun in exact mode")
    return [format_rational(v) for v in values]


def dual_witness_certificate(f: BooleanFunction, witness: DualWitness) -> CertificateFile:
    return CertificateFile("dual-witness", {
        "function": f.to_hex(),
        "t": f.t,
        "d": witness.d,
        "eps": format_rational(witness.eps),
        "psi": _exact_list(witness.values, "witness values"),
        "correlation": format_rational(witness.correlation),
    })


def ortho_certificate(f: BooleanFunction, dist: OrthoDistribution) -> CertificateFile:
    return CertificateFile("ortho-distribution", {
        "function": f.to_hex(),
        "t": f.t,
        "d": dist.d,
        "mu": _exact_list(dist.weights, "distribution weights"),
    })


def weight_certificate(f: BooleanFunction, cert: WeightCertificate) -> CertificateFile:
    return CertificateFile("weight-cert", {
        "function": f.to_hex(),
        "t": f.t,
        "d": cert.d,
        "lambdas": {str(S): int(v) for S, v in sorted(cert.lambdas.items())},
        "weight": cert.weight,
        "provenance": cert.provenance,
    })


def spectrum_certificate(spec: PatternMatrixSpec) -> CertificateFile:
    spectrum = spectrum_formula(spec)
    return CertificateFile("spectrum", {
        "n": spec.n,
        "t": spec.t,
        "phi": _exact_list(spec.phi, "phi"),
        "phi_sha256": spec.phi_sha256(),
        "squares": [[format_rational(s), m] for s, m in spectrum.squares],
        "rank": spectrum.rank,
    })


def bound_certificate(report: BoundReport, mode: Optional[str] = None) -> CertificateFile:
    payload = report.to_payload()
    payload["mode"] = mode or "exact"
    return CertificateFile("bound-report", payload)
