"""The H-functional of density matrices.

The sign convention is the one of Boltzmann's H-functional: `S(rho) = Tr(rho log rho)`,
which is never positive and is minus the textbook von Neumann entropy.
"""

import numpy as np
from scipy.special import entr

from entropy_lab.config import LabConfig
from entropy_lab.spectral import DensityMatrix

DEFAULT_CONFIG = LabConfig()


def h_functional_quantum(rho: DensityMatrix) -> float:
    """`sum_k lambda_k log lambda_k` over the support of `rho`."""
    eigenvalues = rho.spectrum.eigenvalues[rho.spectrum.support()]
    return -float(np.sum(entr(eigenvalues)))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    return -h_functional_quantum(rho)


def h_functional_cocycle(
    rho: DensityMatrix,
    step: float = DEFAULT_CONFIG.characteristic_step,
) -> float:
    """`-i d/dt Tr(rho rho^{it})` at zero, by a symmetric difference.

    `rho^{it}` is the cocycle of the state against the (unnormalized) trace, so this is
    the Dirac-formalism way of writing the H-functional.
    """
    rho.require_faithful()
    forward = rho.expectation(rho.imaginary_power(step))
    backward = rho.expectation(rho.imaginary_power(-step))
    return float(np.real(-1j * (forward - backward) / (2 * step)))
