import numpy as np
from scipy.optimize import brentq

from entropy_lab.classical import DiscreteDensity, DiscreteMeasure
from entropy_lab.spectral import DensityMatrix

from .util import render_rows

__all__ = [
    "render_rows",
]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# The qubit pair diag(0.7, 0.3) against the tracial state and its relative entropy.
QUBIT_PAIR_ENTROPY = 0.7 * np.log(1.4) + 0.3 * np.log(0.6)

# Root of t log(1 + t) = 1/2, and the Luxemburg fundamental function of psi_log at 2.
PSI_LOG_INVERSE_HALF = brentq(lambda t: t * np.log1p(t) - 0.5, 0.1, 2.0, xtol=1e-15)
PHI_LOG_AT_2 = 1.0 / PSI_LOG_INVERSE_HALF

# H-functional of the Gibbs state of energies (0, 1) at beta = 1.
TWO_LEVEL_H = -np.log1p(np.exp(-1.0)) - 1.0 / (1.0 + np.e)


def qubit(p: float) -> DensityMatrix:
    return DensityMatrix.diagonal(p, 1 - p)


def qubit_pair() -> tuple[DensityMatrix, DensityMatrix]:
    return qubit(0.7), qubit(0.5)


def rotated(rho: DensityMatrix, u: np.ndarray) -> DensityMatrix:
    return DensityMatrix.of(u @ rho.matrix @ u.conj().T)


def pure(vector: np.ndarray) -> DensityMatrix:
    v = np.asarray(vector, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix.of(np.outer(v, v.conj()))


def counting(*probabilities: float) -> DiscreteDensity:
    base = DiscreteMeasure.counting(len(probabilities))
    return DiscreteDensity.probability(base, probabilities)


def uniform(size: int) -> DiscreteDensity:
    return counting(*([1.0 / size] * size))
