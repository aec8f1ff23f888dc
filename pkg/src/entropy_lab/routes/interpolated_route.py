import numpy as np

from entropy_lab.config import LabConfig
from entropy_lab.errors import DomainError
from entropy_lab.extrapolation import richardson
from entropy_lab.routes.result import EntropyResult, Route
from entropy_lab.spectral import DensityMatrix


class InterpolatedRoute:
    """The limit `s -> 1` of the interpolated traces

    `F(s) = Tr(rho_theta^s (log rho_theta - log rho_phi) rho_phi^{1-s})`,

    sampled at `s_k = 1 - 2^{-k}` and extrapolated in powers of `1 - s`.
    """

    def __init__(self, config: LabConfig = LabConfig()) -> None:
        self.config = config

    def value_at(self, theta: DensityMatrix, phi: DensityMatrix, s: float) -> float:
        if not 0 < s < 1:
            raise DomainError(f"The interpolation parameter must lie in (0, 1), got {s}.")

        theta.require_faithful("interpolated state")
        phi.require_faithful("interpolated reference state")

        middle = theta.log() - phi.log()
        product = theta.power(s) @ middle @ phi.power(1 - s)
        return float(np.trace(product).real)

    def serve(self, theta: DensityMatrix, phi: DensityMatrix) -> EntropyResult:
        points = self.config.interpolation_points()
        values = np.array([self.value_at(theta, phi, s) for s in points])
        limit = richardson(1 - points, values, exponent=1)

        return EntropyResult(
            value=limit.value,
            route=Route.Interpolated,
            error_estimate=limit.error,
            diagnostics=tuple(zip(map(float, points), map(float, values))),
        )


def relative_entropy_interpolated(
    theta: DensityMatrix,
    phi: DensityMatrix,
    s: float,
) -> float:
    return InterpolatedRoute().value_at(theta, phi, s)


def relative_entropy_interpolated_limit(
    theta: DensityMatrix,
    phi: DensityMatrix,
) -> EntropyResult:
    return InterpolatedRoute().serve(theta, phi)
