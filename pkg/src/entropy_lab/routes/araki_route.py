import numpy as np

from entropy_lab.config import LabConfig
from entropy_lab.modular import relative_modular
from entropy_lab.routes.result import EntropyResult, Route
from entropy_lab.spectral import DensityMatrix


class ArakiRoute:
    """`S(psi|phi) = -<Psi, log(Delta_{phi,psi}) Psi>` with `Psi = rho_psi^{1/2}`.

    The expectation is the integral of `-log(lambda)` against the spectral measure of
    `Delta_{phi,psi}` in the vector state `Psi`.
    """

    def __init__(self, config: LabConfig = LabConfig()) -> None:
        self.config = config

    def serve(self, rho_psi: DensityMatrix, rho_phi: DensityMatrix) -> EntropyResult:
        rho_phi.require_faithful("reference state of the Araki entropy")
        atoms, weights = relative_modular(rho_phi, rho_psi).spectral_measure()
        terms = -weights * np.log(atoms)

        return EntropyResult(
            value=float(np.sum(terms)),
            route=Route.Araki,
            error_estimate=terms.size * np.finfo(float).eps * (1 + np.sum(np.abs(terms))),
        )


def relative_entropy_araki(
    rho_psi: DensityMatrix,
    rho_phi: DensityMatrix,
) -> EntropyResult:
    return ArakiRoute().serve(rho_psi, rho_phi)
