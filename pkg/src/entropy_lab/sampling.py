"""Random instances for the randomized checks and the test suite."""

import numpy as np
from scipy.stats import unitary_group

from entropy_lab.spectral import DensityMatrix

# Share of the uniform distribution mixed into random spectra, bounding the
# condition number of random states by roughly `dim / MIXING`.
MIXING = 0.05


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(dim, random_state=rng)


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (x + x.conj().T) / 2


def random_spectrum(rng: np.random.Generator, dim: int) -> np.ndarray:
    """A probability vector bounded below by `MIXING / dim`."""
    return (1 - MIXING) * rng.dirichlet(np.ones(dim)) + MIXING / dim


def random_density(rng: np.random.Generator, dim: int) -> DensityMatrix:
    u = random_unitary(rng, dim)
    return DensityMatrix.of(u @ np.diag(random_spectrum(rng, dim)) @ u.conj().T)


def random_diagonal_density(rng: np.random.Generator, dim: int) -> DensityMatrix:
    return DensityMatrix.of(np.diag(random_spectrum(rng, dim)))


def random_commuting_densities(
    rng: np.random.Generator,
    dim: int,
    count: int = 2,
) -> list[DensityMatrix]:
    """States diagonal in one shared random eigenbasis."""
    u = random_unitary(rng, dim)
    return [
        DensityMatrix.of(u @ np.diag(random_spectrum(rng, dim)) @ u.conj().T)
        for _ in range(count)
    ]


def random_normalized_positive(
    rng: np.random.Generator,
    dim: int,
    diagonal: bool = False,
) -> np.ndarray:
    """A positive `a` with `Tr(a) / dim = 1`, the density of a state against `Tr / dim`."""
    a = dim * np.diag(random_spectrum(rng, dim)).astype(complex)
    if diagonal:
        return a
    u = random_unitary(rng, dim)
    return u @ a @ u.conj().T


def random_commuting_positive(
    rng: np.random.Generator,
    dim: int,
    scale: float = 3.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Two commuting positive matrices with spectra uniform on `[0, scale)`."""
    u = random_unitary(rng, dim)
    a, b = (scale * rng.random(dim) for _ in range(2))
    return u @ np.diag(a) @ u.conj().T, u @ np.diag(b) @ u.conj().T
