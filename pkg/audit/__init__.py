"""Audit package: digests, Merkle roots and the independent certificate verifier."""
__all__ = ["merkle", "verify"]
