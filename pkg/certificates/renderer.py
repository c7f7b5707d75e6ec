# certificates/renderer.py

"""
Output renderer: certificates, bound tables and pattern-matrix exports as
JSON, CSV or plain text. JSON keys are sorted and CSV columns keep the order
they are given in, so identical inputs give byte-identical output.
"""

import csv
import io
import json
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from audit.merkle import rows_root
from core.numeric import format_rational
from core.pattern import PatternMatrixSpec, build

from .certificate import CertificateFile

FORMATS = ("json", "csv", "text")


def render_certificate(cert: CertificateFile, format: str = "json") -> str:
    if format == "json":
        return cert.to_json()
    elif format == "csv":
        return _render_csv(cert)
    elif format == "text":
        return _render_text(cert)
    else:
        raise ValueError(f"Unsupported format: {format}")


def _flatten(payload: Dict[str, Any]) -> List[List[str]]:
    rows = []
    for key in sorted(payload):
        value = payload[key]
        rows.append([key, value if isinstance(value, str) else json.dumps(value, sort_keys=True)])
    return rows


def _render_csv(cert: CertificateFile) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["field", "value"])
    writer.writerow(["schema_version", cert.schema_version])
    writer.writerow(["kind", cert.kind])
    writer.writerow(["payload_sha256", cert.payload_sha256])
    writer.writerows(_flatten(cert.payload))
    return out.getvalue()


def _render_text(cert: CertificateFile) -> str:
    lines = [
        f"{cert.kind.upper()} CERTIFICATE",
        "=" * (len(cert.kind) + 12),
        "",
    ]
    for key, value in _flatten(cert.payload):
        if len(value) > 72:
            value = value[:69] + "..."
        lines.append(f"{key}: {value}")
    lines += [
        "",
        f"Schema: {cert.schema_version}",
        f"Payload SHA-256: {cert.payload_sha256}",
        f"Fingerprint: {cert.fingerprint()}",
    ]
    return "\n".join(lines) + "\n"


def _cell(value) -> str:
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else format_rational(value)
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(value, sort_keys=True, default=_cell)
    return str(value)


def render_rows(rows: Iterable[Dict[str, Any]], columns: Sequence[str], format: str = "json") -> str:
    """A table of records; ``columns`` fixes the CSV and text column order."""
    rows = list(rows)
    if format == "json":
        return json.dumps([{c: _jsonable(r.get(c)) for c in columns} for r in rows], indent=2, sort_keys=True) + "\n"
    elif format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_cell(r.get(c)) for c in columns])
        return out.getvalue()
    elif format == "text":
        table = [list(columns)] + [[_cell(r.get(c)) for c in columns] for r in rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(columns))]
        return "\n".join("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in table) + "\n"
    else:
        raise ValueError(f"Unsupported format: {format}")


def _jsonable(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, float) and value in (float("inf"), float("-inf")):
        return "inf" if value > 0 else "-inf"
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


def pattern_rows(spec: PatternMatrixSpec) -> List[str]:
    """The CSV rows of build(spec), one per x, as they appear in an export."""
    return [",".join(_cell(Fraction(v) if not isinstance(v, float) else v) for v in row)
            for row in np.asarray(build(spec).array)]


def export_pattern_csv(spec: PatternMatrixSpec) -> str:
    """
    The built matrix, one CSV row per x, under a header carrying n, t, the
    phi digest, phi itself and the Merkle root over the row digests.
    """
    rows = pattern_rows(spec)
    header = f"# n={spec.n},t={spec.t},phi_sha256={spec.phi_sha256()},merkle_root={rows_root(rows)}"
    if spec.is_exact:
        header += ",phi=" + ";".join(format_rational(v) for v in spec.phi)
    return "\n".join([header] + rows) + "\n"
