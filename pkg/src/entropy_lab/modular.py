"""Finite-dimensional standard form.

States on the full matrix algebra are represented by density matrices. A state is
realized in the Hilbert-Schmidt space by its square root, the modular flow of a faithful
state is conjugation by `rho^{it}`, and the Connes cocycle of two faithful states is
`u_t = rho_theta^{it} rho_psi^{-it}` (the tracial realization). The standard-form
expression of the cocycle through relative modular operators is kept alongside, so the
two can be checked against each other.
"""

import dataclasses as D
import logging

import numpy as np

from entropy_lab.config import LabConfig
from entropy_lab.spectral import (
    DensityMatrix,
    SpectralDecomposition,
    apply_scalar_function,
    complex_power,
    dagger,
    eigh,
    hermitian,
    imaginary_power,
    power,
)

log = logging.getLogger(__name__)

DEFAULT_CONFIG = LabConfig()


@D.dataclass(frozen=True, eq=False)
class StandardFormVector:
    """A vector of the natural cone, `Psi = rho^{1/2}` in Hilbert-Schmidt space."""

    matrix: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    def inner(self, x: np.ndarray) -> complex:
        """`<Psi, x Psi>_HS = Tr(Psi* x Psi)`."""
        return complex(np.einsum("ji,jk,ki->", self.matrix.conj(), x, self.matrix))


def standard_vector(rho: DensityMatrix) -> StandardFormVector:
    return StandardFormVector(apply_scalar_function(rho, power(0.5)))


def modular_flow(rho: DensityMatrix, t: float, x: np.ndarray) -> np.ndarray:
    """`sigma_t(x) = rho^{it} x rho^{-it}`."""
    rho.require_faithful("state of the modular flow")
    u = imaginary_power(rho, t)
    return u @ x @ dagger(u)


def analytic_flow(rho: DensityMatrix, z: complex, x: np.ndarray) -> np.ndarray:
    """`sigma_z(x) = rho^{iz} x rho^{-iz}` for complex `z`."""
    rho.require_faithful("state of the modular flow")
    return complex_power(rho, 1j * z) @ x @ complex_power(rho, -1j * z)


def modular_generator(rho: DensityMatrix, x: np.ndarray) -> np.ndarray:
    """`L(x) = i[log rho, x]`, the derivative of the modular flow at zero."""
    rho.require_faithful("state of the modular generator")
    log_rho = rho.log()
    return 1j * (log_rho @ x - x @ log_rho)


def perturbed_state(rho: DensityMatrix, perturbation: np.ndarray) -> DensityMatrix:
    """The state proportional to `exp(log rho + P)` for Hermitian `P`."""
    rho.require_faithful("perturbed state")
    spectrum = eigh(rho.log() + hermitian(perturbation, "perturbation"))
    weights = np.exp(spectrum.eigenvalues - spectrum.max_eigenvalue)
    return DensityMatrix.of(spectrum.apply(weights / weights.sum()))


@D.dataclass(frozen=True, eq=False)
class RelativeModularOperator:
    """`Delta_{phi,psi}`: the superoperator `x -> rho_phi x rho_psi^{-1}`.

    With `rho_phi = sum phi_i |f_i><f_i|` and `rho_psi = sum psi_j |g_j><g_j|`, it is
    diagonal on the matrix units `|f_i><g_j|` with eigenvalues `phi_i / psi_j`.
    """

    left: SpectralDecomposition
    right: SpectralDecomposition

    @property
    def grid(self) -> np.ndarray:
        return self.left.eigenvalues[:, None] / self.right.eigenvalues[None, :]

    def _apply_diagonal(self, values: np.ndarray, x: np.ndarray) -> np.ndarray:
        f, g = self.left.eigenvectors, self.right.eigenvectors
        return f @ (values * (dagger(f) @ x @ g)) @ dagger(g)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self._apply_diagonal(self.grid, x)

    def power(self, z: complex, x: np.ndarray) -> np.ndarray:
        """`Delta^z x`; needs a faithful left state unless `z` is real and positive."""
        if np.iscomplexobj(z) or z <= 0:
            self.left.require_faithful("left state of the relative modular operator")
        with np.errstate(divide="ignore"):
            log_grid = np.log(self.grid)
        return self._apply_diagonal(np.exp(z * log_grid), x)

    def log_apply(self, x: np.ndarray) -> np.ndarray:
        """`log(Delta) x`; needs a faithful left state."""
        self.left.require_faithful("left state of the relative modular operator")
        return self._apply_diagonal(np.log(self.grid), x)

    def overlaps(self) -> np.ndarray:
        """`|<f_i|g_j>|^2`."""
        return np.abs(dagger(self.left.eigenvectors) @ self.right.eigenvectors) ** 2

    def spectral_measure(self) -> tuple[np.ndarray, np.ndarray]:
        """Atoms and weights of `<Psi, e_lambda Psi>` for `Psi = rho_psi^{1/2}`.

        The weight of `lambda_ij = phi_i / psi_j` is `psi_j |<f_i|g_j>|^2`; the weights
        sum to one.
        """
        weights = self.overlaps() * self.right.eigenvalues[None, :]
        return self.grid.ravel(), weights.ravel()


def relative_modular(rho_phi: DensityMatrix, rho_psi: DensityMatrix):
    rho_psi.require_faithful("reference state of the relative modular operator")
    return RelativeModularOperator(rho_phi.spectrum, rho_psi.spectrum)


def modular_operator(rho: DensityMatrix) -> RelativeModularOperator:
    return relative_modular(rho, rho)


@D.dataclass(frozen=True, eq=False)
class CocycleDerivative:
    """The Connes cocycle `(D theta : D psi)_t = rho_theta^{it} rho_psi^{-it}`."""

    source: DensityMatrix
    reference: DensityMatrix

    def __post_init__(self):
        self.source.require_faithful("source state of the cocycle")
        self.reference.require_faithful("reference state of the cocycle")

    def __call__(self, t: float) -> np.ndarray:
        return imaginary_power(self.source, t) @ imaginary_power(self.reference, -t)

    def analytic(self, z: complex) -> np.ndarray:
        """The analytic extension `rho_theta^{iz} rho_psi^{-iz}`."""
        return complex_power(self.source, 1j * z) @ complex_power(self.reference, -1j * z)

    def expectation(self, t: float) -> complex:
        """`theta(u_t)`, evaluated in the eigenbases of both states.

        `Tr(rho_theta^{1+it} rho_psi^{-it}) = sum_ij theta_i (theta_i / psi_j)^{it}
        |<f_i|g_j>|^2`. The phases are formed from log-ratios, so equal spectra give
        exact unit phases.
        """
        theta = self.source.spectrum
        psi = self.reference.spectrum
        overlaps = np.abs(dagger(theta.eigenvectors) @ psi.eigenvectors) ** 2
        log_ratio = theta.log_eigenvalues()[:, None] - psi.log_eigenvalues()[None, :]
        weights = theta.eigenvalues[:, None] * overlaps
        return complex(np.sum(weights * np.exp(1j * t * log_ratio)))

    def transport_defect(self, x: np.ndarray) -> float:
        """`|theta(x) - psi(u* x u)|` at `u = u_{-i/2}`."""
        u = self.analytic(-0.5j)
        transported = self.reference.expectation(dagger(u) @ x @ u)
        return abs(self.source.expectation(x) - transported)

    def strip_norm(
        self,
        delta: float = DEFAULT_CONFIG.strip_delta,
        samples: int = DEFAULT_CONFIG.strip_samples,
    ) -> float:
        """Sup of `||u_z||` over `Im z` in `[-delta, 0]` sampled at `Re z = 0`.

        `||u_{t - is}|| = ||rho_theta^{it} rho_theta^{s} rho_psi^{-s} rho_psi^{-it}||
        = ||rho_theta^s rho_psi^{-s}||`, so the real part never matters.
        """
        return max(
            float(np.linalg.norm(self.analytic(-1j * s), ord=2))
            for s in np.linspace(0.0, delta, samples)
        )


def cocycle(theta: DensityMatrix, psi: DensityMatrix, t: float) -> np.ndarray:
    return CocycleDerivative(theta, psi)(t)


def cocycle_analytic(theta: DensityMatrix, psi: DensityMatrix, z: complex):
    return CocycleDerivative(theta, psi).analytic(z)


def dominates(
    theta: DensityMatrix,
    phi: DensityMatrix,
    delta: float = DEFAULT_CONFIG.strip_delta,
    samples: int = DEFAULT_CONFIG.strip_samples,
) -> tuple[bool, float]:
    """Whether `(D phi : D theta)` extends boundedly to the strip of width `delta`.

    Returns the verdict with the sampled sup-norm. Faithful states in finite dimensions
    always pass; the norm is the informative part.
    """
    bound = CocycleDerivative(phi, theta).strip_norm(delta, samples)
    log.debug("Strip norm over [-%g, 0] with %d samples: %.6e", delta, samples, bound)
    return bool(np.isfinite(bound)), bound


def standard_form_cocycle(
    theta: DensityMatrix,
    psi: DensityMatrix,
    t: float,
) -> np.ndarray:
    """`Delta_{theta,psi}^{it} Delta_psi^{-it} Psi_psi`, which equals `u_t Psi_psi`."""
    vector = standard_vector(psi).matrix
    rotated = modular_operator(psi).power(-1j * t, vector)
    return relative_modular(theta, psi).power(1j * t, rotated)


def kms_defect(rho: DensityMatrix, x: np.ndarray, y: np.ndarray) -> float:
    """`|rho(x sigma_{-i}(y)) - rho(y x)|` with `sigma_{-i}(y) = rho y rho^{-1}`."""
    shifted = analytic_flow(rho, -1j, y)
    return abs(rho.expectation(x @ shifted) - rho.expectation(y @ x))
