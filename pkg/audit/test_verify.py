import json
import unittest
from fractions import Fraction

from audit.merkle import MerkleTree, payload_digest, rows_root, sha256, verify_inclusion
from audit.verify import verify_certificate, verify_matrix_export
from certificates.certificate import (CertificateFile, bound_certificate, dual_witness_certificate,
                                      ortho_certificate, spectrum_certificate, weight_certificate)
from certificates.renderer import export_pattern_csv
from core.approx import dual_witness, ortho_distribution
from core.boolfn import catalog
from core.bounds import q_lower_adeg
from core.pattern import PatternMatrixSpec
from core.policy import MalformedInputError
from core.weight import weight_bruteforce

OR2 = catalog("or", t=2)


def _document(cert: CertificateFile) -> dict:
    return json.loads(cert.to_json())


def _accepts(raw: bytes) -> bool:
    try:
        return verify_certificate(json.loads(raw.decode("utf-8"))).passed
    except (UnicodeDecodeError, ValueError):
        return False


class TestMerkleTree(unittest.TestCase):

    def test_every_proof_verifies(self):
        leaves = [sha256(str(i)) for i in range(5)]
        tree = MerkleTree(leaves)
        for i, leaf in enumerate(leaves):
            self.assertTrue(verify_inclusion(leaf, tree.proof(i), tree.root))

    def test_wrong_leaf_fails(self):
        leaves = [sha256(str(i)) for i in range(4)]
        tree = MerkleTree(leaves)
        self.assertFalse(verify_inclusion(sha256("x"), tree.proof(2), tree.root))

    def test_single_leaf_and_empty(self):
        self.assertEqual(MerkleTree(["ab"]).root, "ab")
        with self.assertRaises(ValueError):
            MerkleTree([])
        with self.assertRaises(IndexError):
            MerkleTree(["ab"]).proof(1)

    def test_row_order_matters(self):
        self.assertNotEqual(rows_root(["1,1", "1,-1"]), rows_root(["1,-1", "1,1"]))


class TestCertificateVerification(unittest.TestCase):

    def test_dual_witness(self):
        cert = dual_witness_certificate(OR2, dual_witness(OR2, Fraction(1, 3), "exact"))
        self.assertEqual(cert.payload["d"], 2)
        self.assertEqual(cert.payload["correlation"], "1/2")
        result = verify_certificate(_document(cert))
        self.assertTrue(result.passed, result.failed())
        self.assertIn("degree-attained", dict(result.checks))

    def test_ortho_distribution(self):
        cert = ortho_certificate(OR2, ortho_distribution(OR2, 1, "exact"))
        self.assertTrue(verify_certificate(_document(cert)).passed)

    def test_weight_certificate(self):
        cert = weight_certificate(OR2, weight_bruteforce(OR2, 1).certificate)
        self.assertEqual(cert.payload["weight"], 3)
        self.assertTrue(verify_certificate(_document(cert)).passed)

    def test_spectrum(self):
        cert = spectrum_certificate(PatternMatrixSpec(4, 2, OR2))
        self.assertEqual(cert.payload["rank"], 9)
        self.assertTrue(verify_certificate(_document(cert)).passed)

    def test_bound_report_replays(self):
        report = q_lower_adeg(OR2, 4, 2, Fraction(1, 3), Fraction(1, 7), "exact")
        result = verify_certificate(_document(bound_certificate(report, "exact")))
        self.assertTrue(result.passed, result.failed())

    def test_tampered_payload_fails_digest(self):
        document = _document(dual_witness_certificate(OR2, dual_witness(OR2, Fraction(1, 3), "exact")))
        document["payload"]["psi"][0] = "1/2"
        result = verify_certificate(document)
        self.assertFalse(result.passed)
        self.assertEqual(result.failed(), ["payload-digest"])

    def test_resealed_tamper_fails_invariants(self):
        document = _document(weight_certificate(OR2, weight_bruteforce(OR2, 1).certificate))
        document["payload"]["lambdas"]["0"] = 5
        document["payload_sha256"] = payload_digest(document["payload"])
        result = verify_certificate(document)
        self.assertIn("sign-represents", result.failed())

    def test_malformed_payload(self):
        payload = {"function": "e"}
        document = {"schema_version": "1.0.0", "kind": "weight-cert", "payload": payload,
                    "payload_sha256": payload_digest(payload)}
        self.assertEqual(verify_certificate(document).failed(), ["payload-well-formed"])

    def test_schema_and_kind(self):
        document = _document(spectrum_certificate(PatternMatrixSpec(4, 2, OR2)))
        with self.assertRaises(MalformedInputError):
            verify_certificate(dict(document, schema_version="0.9"))
        with self.assertRaises(MalformedInputError):
            verify_certificate(dict(document, kind="receipt"))
        with self.assertRaises(MalformedInputError):
            CertificateFile.from_json("{not json")

    def test_document_must_be_an_object(self):
        for document in ([1, 2], "dual-witness", 3, None):
            with self.assertRaises(MalformedInputError):
                verify_certificate(document)

    def test_every_single_bit_flip_is_rejected(self):
        raw = dual_witness_certificate(OR2, dual_witness(OR2, Fraction(1, 3), "exact")).to_json().encode("utf-8")
        self.assertTrue(_accepts(raw))
        for i in range(len(raw)):
            for bit in range(8):
                flipped = bytearray(raw)
                flipped[i] ^= 1 << bit
                self.assertFalse(_accepts(bytes(flipped)), (i, bit))

    def test_fingerprint_is_deterministic(self):
        a = spectrum_certificate(PatternMatrixSpec(4, 2, OR2))
        b = spectrum_certificate(PatternMatrixSpec(4, 2, OR2))
        self.assertEqual(a.fingerprint(), b.fingerprint())
        self.assertEqual(CertificateFile.from_json(a.to_json()).payload_sha256, a.payload_sha256)


class TestMatrixExport(unittest.TestCase):

    def setUp(self):
        self.text = export_pattern_csv(PatternMatrixSpec(4, 2, OR2))

    def test_export_verifies(self):
        result = verify_matrix_export(self.text)
        self.assertTrue(result.passed, result.failed())
        self.assertEqual(len(self.text.splitlines()), 1 + 16)

    def test_tampered_row(self):
        lines = self.text.splitlines()
        tampered = lines[1].replace("-1", "1", 1)
        self.assertNotEqual(tampered, lines[1])
        lines[1] = tampered
        result = verify_matrix_export("\n".join(lines) + "\n")
        self.assertEqual(result.failed(), ["merkle-root", "rows-included"])
        self.assertEqual(result.as_dict()["notes"], {"first-tampered-row": 0})

    def test_first_tampered_row_is_named(self):
        lines = self.text.splitlines()
        for x in (5, 11):
            cells = lines[1 + x].split(",")
            cells[3] = "1" if cells[3] == "-1" else "-1"
            lines[1 + x] = ",".join(cells)
        result = verify_matrix_export("\n".join(lines) + "\n")
        self.assertIn("rows-included", result.failed())
        self.assertEqual(dict(result.notes)["first-tampered-row"], 5)

    def test_root_must_match_phi(self):
        lines = self.text.splitlines()
        other = export_pattern_csv(PatternMatrixSpec(4, 2, catalog("parity", t=2))).splitlines()
        # the rows and root of parity under the or2 phi
        lines[0] = lines[0].replace(lines[0].split("merkle_root=")[1].split(",")[0],
                                    other[0].split("merkle_root=")[1].split(",")[0])
        result = verify_matrix_export("\n".join([lines[0]] + other[1:]) + "\n")
        self.assertIn("root-matches-phi", result.failed())
        self.assertIn("rows-included", result.failed())
        self.assertNotIn("merkle-root", result.failed())

    def test_float_export_checks_root_only(self):
        text = export_pattern_csv(PatternMatrixSpec(4, 2, (0.5, -0.5, 0.25, -0.25)))
        result = verify_matrix_export(text)
        self.assertTrue(result.passed, result.failed())
        self.assertNotIn("rows-included", dict(result.checks))

    def test_missing_header(self):
        with self.assertRaises(MalformedInputError):
            verify_matrix_export("\n".join(self.text.splitlines()[1:]))

    def test_malformed_header(self):
        rows = self.text.splitlines()[1:]
        for header in ("# n=4,t", "# n=4", "# n=4,t=2", "# n=four,t=2,merkle_root=ab",
                       "# n=4,t=0,merkle_root=ab", "# n=5,t=2,merkle_root=ab",
                       "# n=4,t=2,merkle_root=ab,phi=1;1;1;1"):
            with self.assertRaises(MalformedInputError, msg=header):
                verify_matrix_export("\n".join([header] + rows) + "\n")


if __name__ == "__main__":
    unittest.main()
