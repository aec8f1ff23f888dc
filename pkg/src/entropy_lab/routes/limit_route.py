import logging

import numpy as np

from entropy_lab.config import LabConfig
from entropy_lab.errors import DomainError
from entropy_lab.extrapolation import richardson
from entropy_lab.modular import CocycleDerivative
from entropy_lab.routes.result import EntropyResult, Route
from entropy_lab.spectral import DensityMatrix

log = logging.getLogger(__name__)


class LimitRoute:
    """`S(theta|psi) = lim_{t -> 0} (-i/t) theta((D theta : D psi)_t - 1)`.

    The quotient is taken in its symmetric form
    `g(t) = (-i/2t) (theta(u_t) - theta(u_{-t}))`, whose error expands in even powers of
    `t`, and the samples on the schedule are Richardson-extrapolated to `t = 0`.
    """

    def __init__(
        self,
        schedule: np.ndarray | None = None,
        config: LabConfig = LabConfig(),
    ) -> None:
        self.config = config
        self.schedule = config.limit_schedule() if schedule is None else schedule

        if len(self.schedule) == 0 or np.any(np.asarray(self.schedule) <= 0):
            raise DomainError("The limit schedule must be nonempty and positive.")
        if np.any(np.diff(self.schedule) >= 0):
            raise DomainError("The limit schedule must be strictly decreasing.")

    def quotients(self, theta: DensityMatrix, psi: DensityMatrix) -> np.ndarray:
        u = CocycleDerivative(theta, psi)
        return np.array(
            [(-0.5j / t * (u.expectation(t) - u.expectation(-t))).real for t in self.schedule]
        )

    def diverges(self, values: np.ndarray) -> bool:
        """Whether the magnitudes grow monotonically past the divergence threshold."""
        magnitudes = np.abs(values)
        run = 1
        for previous, current in zip(magnitudes, magnitudes[1:]):
            run = run + 1 if current > previous else 1

        return (
            run >= self.config.divergence_min_points
            and magnitudes[-1] > self.config.divergence_threshold
        )

    def serve(self, theta: DensityMatrix, psi: DensityMatrix) -> EntropyResult:
        values = self.quotients(theta, psi)
        diagnostics = tuple(zip(map(float, self.schedule), map(float, values)))

        if self.diverges(values):
            log.warning("Cocycle quotients diverge: last value %.6e", values[-1])
            return EntropyResult.divergent(Route.Limit, diagnostics)

        limit = richardson(self.schedule, values, exponent=2)
        return EntropyResult(limit.value, Route.Limit, limit.error, diagnostics)


def relative_entropy_limit(
    theta: DensityMatrix,
    psi: DensityMatrix,
    schedule: np.ndarray | None = None,
) -> EntropyResult:
    return LimitRoute(schedule).serve(theta, psi)
