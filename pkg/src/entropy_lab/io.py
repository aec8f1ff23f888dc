"""Matrix and distribution files.

Matrices are JSON objects `{"dim": n, "re": [[...]], "im": [[...]]}` in row-major
order; `im` may be omitted for real matrices. Distributions are CSV files with the
header `atom,weight[,density]`; energies are CSV files with `atom,energy[,weight]`.
"""

from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, PositiveInt, ValidationError, model_validator

from entropy_lab.classical import DiscreteDensity, DiscreteMeasure
from entropy_lab.config import LabConfig
from entropy_lab.errors import InvalidInputError
from entropy_lab.spectral import DensityMatrix, hermitian


class MatrixFile(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    dim: PositiveInt
    re: list[list[float]]
    im: list[list[float]] | None = None

    @model_validator(mode="after")
    def _check_shape(self) -> "MatrixFile":
        for part in [self.re] if self.im is None else [self.re, self.im]:
            if len(part) != self.dim or any(len(row) != self.dim for row in part):
                raise ValueError(f"Expected {self.dim}x{self.dim} entries.")
        return self

    @classmethod
    def of(cls, matrix: np.ndarray) -> "MatrixFile":
        matrix = np.asarray(matrix)
        return cls(
            dim=len(matrix),
            re=np.real(matrix).tolist(),
            im=np.imag(matrix).tolist() if np.iscomplexobj(matrix) else None,
        )

    def matrix(self) -> np.ndarray:
        re = np.array(self.re, dtype=float)
        return re if self.im is None else re + 1j * np.array(self.im, dtype=float)


def load_matrix(path: Path) -> np.ndarray:
    try:
        return MatrixFile.model_validate_json(path.read_text()).matrix()
    except ValidationError as e:
        raise InvalidInputError(f"{path}: malformed matrix file.\n{e}") from e


def dump_matrix(matrix: np.ndarray, path: Path):
    path.write_text(MatrixFile.of(matrix).model_dump_json(exclude_none=True))


def load_density(path: Path, config: LabConfig = LabConfig()) -> DensityMatrix:
    return DensityMatrix.of(load_matrix(path), config)


def load_hermitian(path: Path) -> np.ndarray:
    return hermitian(load_matrix(path), str(path))


def _read_table(path: Path, required: list[str], optional: str) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, dtype={"atom": str}, skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise InvalidInputError(f"{path}: unreadable CSV: {e}") from e

    columns = list(frame.columns)
    if columns not in (required, [*required, optional]):
        expected = ",".join(required) + f"[,{optional}]"
        raise InvalidInputError(f"{path}: expected header {expected}, got {','.join(columns)}.")

    if frame.empty:
        raise InvalidInputError(f"{path}: no atoms.")

    for column in columns[1:]:
        try:
            frame[column] = pd.to_numeric(frame[column]).astype(float)
        except (ValueError, TypeError) as e:
            raise InvalidInputError(f"{path}: column {column!r} is not numeric.") from e

    return frame


def load_distribution(path: Path, config: LabConfig = LabConfig()) -> DiscreteDensity:
    """A probability density read from `atom,weight[,density]`.

    With a `density` column the weights are the base measure. Without one the weights
    are the probabilities themselves, taken against the counting measure.
    """
    frame = _read_table(path, ["atom", "weight"], "density")
    atoms = frame["atom"].tolist()

    if "density" in frame:
        base = DiscreteMeasure.of(atoms, frame["weight"])
        return DiscreteDensity.probability(base, frame["density"], config)

    return DiscreteDensity.probability(DiscreteMeasure.counting(atoms), frame["weight"], config)


def load_energies(path: Path) -> tuple[DiscreteMeasure, np.ndarray]:
    """The reference measure and the energies read from `atom,energy[,weight]`."""
    frame = _read_table(path, ["atom", "energy"], "weight")
    atoms = frame["atom"].tolist()

    if "weight" in frame:
        base = DiscreteMeasure.of(atoms, frame["weight"])
    else:
        base = DiscreteMeasure.counting(atoms)

    return base, frame["energy"].to_numpy()
