import unittest
from pathlib import Path
from tempfile import TemporaryDirectory

import numpy as np

from entropy_lab.io import dump_matrix

# Seed of the per-test random generator; every test sees the same draws.
TEST_SEED = 20240531


class NumericTestCase(unittest.TestCase):
    rng: np.random.Generator

    def __init__(self, methodName: str = "runTest") -> None:
        super().__init__(methodName)
        self.maxDiff = None

    def setUp(self) -> None:
        self.rng = np.random.default_rng(TEST_SEED)

    def assertClose(self, actual, expected, atol: float = 1e-9, rtol: float = 0.0):
        actual, expected = np.asarray(actual), np.asarray(expected)
        self.assertEqual(actual.shape, expected.shape)
        self.assertTrue(
            np.allclose(actual, expected, atol=atol, rtol=rtol),
            f"\n{actual}\n  is not within {atol:g} of\n{expected}",
        )

    def assertMatrixClose(self, actual: np.ndarray, expected: np.ndarray, atol: float = 1e-9):
        defect = float(np.linalg.norm(np.asarray(actual) - np.asarray(expected)))
        self.assertLessEqual(defect, atol, f"Frobenius defect {defect:.3e}")


class TempWorkspaceTestCase(NumericTestCase):
    temp_dir: TemporaryDirectory
    workspace_root: Path

    def setUp(self) -> None:
        super().setUp()
        self.temp_dir = TemporaryDirectory(ignore_cleanup_errors=True)
        self.workspace_root = Path(self.temp_dir.name)

    def tearDown(self) -> None:
        self.temp_dir.cleanup()

    def to_path(self, sub_path: str) -> Path:
        return self.workspace_root.joinpath(sub_path).resolve()

    def write_file(self, content: str, sub_path: str) -> Path:
        path = self.to_path(sub_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content)
        return path

    def write_matrix(self, matrix: np.ndarray, sub_path: str) -> Path:
        path = self.to_path(sub_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        dump_matrix(np.asarray(matrix), path)
        return path

    def write_table(self, header: str, rows: list[tuple], sub_path: str) -> Path:
        lines = [header, *(",".join(map(str, row)) for row in rows)]
        return self.write_file("\n".join(lines) + "\n", sub_path)
