import numpy as np

from entropy_lab.config import LabConfig
from entropy_lab.entropy import h_functional_quantum
from entropy_lab.routes.result import EntropyResult, Route
from entropy_lab.spectral import DensityMatrix


class DivergenceRoute:
    """`S(psi|phi) = Tr(rho_psi log rho_psi - rho_psi log rho_phi)`.

    Both logarithms live on the supports. When `rho_psi` charges the kernel of
    `rho_phi` the entropy is infinite.
    """

    def __init__(self, config: LabConfig = LabConfig()) -> None:
        self.config = config

    def serve(self, rho_psi: DensityMatrix, rho_phi: DensityMatrix) -> EntropyResult:
        leak = 1.0 - rho_psi.expectation(rho_phi.support()).real
        if leak > self.config.trace_atol:
            return EntropyResult.divergent(Route.Divergence)

        entropy = h_functional_quantum(rho_psi)
        cross = rho_psi.expectation(rho_phi.log()).real
        scale = 1.0 + abs(entropy) + abs(cross)

        return EntropyResult(
            value=entropy - cross,
            route=Route.Divergence,
            error_estimate=rho_psi.dim * np.finfo(float).eps * scale,
        )


def relative_entropy_divergence(
    rho_psi: DensityMatrix,
    rho_phi: DensityMatrix,
) -> EntropyResult:
    return DivergenceRoute().serve(rho_psi, rho_phi)
