import hashlib
import json
from typing import List, Sequence, Tuple


def sha256(data) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def canonical_json(payload) -> str:
    """Sorted keys, no whitespace: the form every digest is taken over."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def payload_digest(payload) -> str:
    return sha256(canonical_json(payload))


class MerkleTree:
    """Binary SHA-256 tree over hex leaf digests; an odd node is paired with itself."""

    def __init__(self, leaves: Sequence[str]):
        if not leaves:
            raise ValueError("a Merkle tree needs at least one leaf")
        self.leaves = list(leaves)
        self.levels = self._build(self.leaves)
        self.root = self.levels[-1][0]

    @staticmethod
    def _build(nodes: List[str]) -> List[List[str]]:
        levels = [nodes]
        while len(nodes) > 1:
            next_level = []
            for i in range(0, len(nodes), 2):
                left = nodes[i]
                right = nodes[i + 1] if i + 1 < len(nodes) else left
                next_level.append(sha256(left + right))
            levels.append(next_level)
            nodes = next_level
        return levels

    def proof(self, index: int) -> List[Tuple[str, str]]:
        """Sibling digests from leaf to root, each tagged with the side it sits on."""
        if not 0 <= index < len(self.leaves):
            raise IndexError(index)
        path = []
        for level in self.levels[:-1]:
            sibling = index ^ 1
            digest = level[sibling] if sibling < len(level) else level[index]
            path.append((digest, "left" if sibling < index else "right"))
            index //= 2
        return path


def rows_root(rows: Sequence[str]) -> str:
    """Merkle root over the SHA-256 of each row."""
    return MerkleTree([sha256(row) for row in rows]).root


def verify_inclusion(leaf: str, path: Sequence[Tuple[str, str]], root: str) -> bool:
    """Fold a MerkleTree.proof path onto ``leaf`` and compare with ``root``."""
    node = leaf
    for digest, side in path:
        node = sha256(digest + node) if side == "left" else sha256(node + digest)
    return node == root
