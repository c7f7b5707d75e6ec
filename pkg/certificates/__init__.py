"""
Certificate layer.

Turns computed objects (dual witnesses, orthogonalizing distributions,
integer weight certificates, spectra, bound reports) into self-contained
files that the audit verifier can re-check from the payload alone, and
renders them as JSON, CSV or text. This layer computes nothing new.
"""

from .certificate import CertificateFile, SCHEMA_VERSION
from .renderer import render_certificate, render_rows, export_pattern_csv

__all__ = [
    "CertificateFile",
    "SCHEMA_VERSION",
    "render_certificate",
    "render_rows",
    "export_pattern_csv",
]
