import json

import numpy as np

from entropy_lab.errors import InvalidInputError
from entropy_lab.io import (
    MatrixFile,
    load_density,
    load_distribution,
    load_energies,
    load_hermitian,
    load_matrix,
)
from entropy_lab.sampling import random_density
from tests import TempWorkspaceTestCase
from tests.dsl import PAULI_Y


class TestMatrixFiles(TempWorkspaceTestCase):
    def test_real_matrix(self):
        path = self.write_file(json.dumps({"dim": 2, "re": [[0.7, 0], [0, 0.3]]}), "rho.json")
        matrix = load_matrix(path)
        self.assertFalse(np.iscomplexobj(matrix))
        self.assertMatrixClose(matrix, np.diag([0.7, 0.3]))

    def test_complex_matrix(self):
        rho = random_density(self.rng, 3).matrix
        self.assertMatrixClose(load_matrix(self.write_matrix(rho, "rho.json")), rho, atol=1e-15)

    def test_real_matrices_omit_the_imaginary_part(self):
        path = self.write_matrix(np.eye(2), "identity.json")
        self.assertNotIn("im", json.loads(path.read_text()))

    def test_shape_mismatch(self):
        path = self.write_file(json.dumps({"dim": 3, "re": [[1, 0], [0, 1]]}), "bad.json")
        with self.assertRaisesRegex(InvalidInputError, "bad.json"):
            load_matrix(path)

    def test_imaginary_shape_mismatch(self):
        content = {"dim": 2, "re": [[1, 0], [0, 1]], "im": [[0]]}
        with self.assertRaises(InvalidInputError):
            load_matrix(self.write_file(json.dumps(content), "bad.json"))

    def test_unknown_fields(self):
        content = {"dim": 1, "re": [[1]], "scale": 2}
        with self.assertRaises(InvalidInputError):
            load_matrix(self.write_file(json.dumps(content), "bad.json"))

    def test_not_json(self):
        with self.assertRaises(InvalidInputError):
            load_matrix(self.write_file("diag(0.7, 0.3)", "bad.json"))

    def test_model(self):
        self.assertEqual(MatrixFile.of(np.eye(1)), MatrixFile(dim=1, re=[[1.0]]))

    def test_density(self):
        rho = load_density(self.write_matrix(np.diag([0.7, 0.3]), "rho.json"))
        self.assertTrue(rho.faithful)

        with self.assertRaises(InvalidInputError):
            load_density(self.write_matrix(np.diag([0.7, 0.7]), "twice.json"))
        with self.assertRaisesRegex(InvalidInputError, "negative eigenvalue"):
            load_density(self.write_matrix(np.diag([1.2, -0.2]), "negative.json"))

    def test_hermitian(self):
        self.assertMatrixClose(load_hermitian(self.write_matrix(PAULI_Y, "y.json")), PAULI_Y)

        with self.assertRaisesRegex(InvalidInputError, "not Hermitian"):
            load_hermitian(self.write_matrix(np.array([[0, 1], [0, 0]]), "shift.json"))


class TestDistributionFiles(TempWorkspaceTestCase):
    def test_probabilities(self):
        path = self.write_table("atom,weight", [("up", 0.7), ("down", 0.3)], "p.csv")
        p = load_distribution(path)
        self.assertEqual(p.base.atoms, ("up", "down"))
        self.assertClose(p.base.weights, [1.0, 1.0])
        self.assertClose(p.values, [0.7, 0.3])

    def test_density_column(self):
        rows = [("a", 0.5, 1.2), ("b", 1.0, 0.4)]
        p = load_distribution(self.write_table("atom,weight,density", rows, "p.csv"))
        self.assertClose(p.base.weights, [0.5, 1.0])
        self.assertAlmostEqual(p.mass, 1.0)

    def test_numeric_atoms_stay_labels(self):
        path = self.write_table("atom,weight", [("01", 0.5), ("2", 0.5)], "p.csv")
        self.assertEqual(load_distribution(path).base.atoms, ("01", "2"))

    def test_not_normalized(self):
        path = self.write_table("atom,weight", [("a", 0.7), ("b", 0.7)], "p.csv")
        with self.assertRaisesRegex(InvalidInputError, "mass"):
            load_distribution(path)

    def test_negative_weight(self):
        path = self.write_table("atom,weight", [("a", 1.5), ("b", -0.5)], "p.csv")
        with self.assertRaisesRegex(InvalidInputError, "'b'"):
            load_distribution(path)

    def test_header(self):
        path = self.write_table("atom,mass", [("a", 1.0)], "p.csv")
        with self.assertRaisesRegex(InvalidInputError, "expected header atom,weight"):
            load_distribution(path)

    def test_no_atoms(self):
        with self.assertRaisesRegex(InvalidInputError, "no atoms"):
            load_distribution(self.write_file("atom,weight\n", "p.csv"))

    def test_empty_file(self):
        with self.assertRaises(InvalidInputError):
            load_distribution(self.write_file("", "p.csv"))

    def test_non_numeric(self):
        path = self.write_table("atom,weight", [("a", "lots"), ("b", 0.5)], "p.csv")
        with self.assertRaisesRegex(InvalidInputError, "'weight'"):
            load_distribution(path)

    def test_duplicate_atoms(self):
        path = self.write_table("atom,weight", [("a", 0.5), ("a", 0.5)], "p.csv")
        with self.assertRaises(InvalidInputError):
            load_distribution(path)


class TestEnergyFiles(TempWorkspaceTestCase):
    def test_counting_base(self):
        path = self.write_table("atom,energy", [("g", 0.0), ("e", 1.0)], "h.csv")
        base, energies = load_energies(path)
        self.assertEqual(base.atoms, ("g", "e"))
        self.assertClose(base.weights, [1.0, 1.0])
        self.assertClose(energies, [0.0, 1.0])

    def test_weighted_base(self):
        rows = [("g", 0.0, 2.0), ("e", 1.0, 0.5)]
        base, _ = load_energies(self.write_table("atom,energy,weight", rows, "h.csv"))
        self.assertClose(base.weights, [2.0, 0.5])

    def test_header(self):
        with self.assertRaises(InvalidInputError):
            load_energies(self.write_table("atom,weight", [("g", 1.0)], "h.csv"))
