import dataclasses as D
import itertools
import logging
import math
from enum import StrEnum

from entropy_lab.config import LabConfig
from entropy_lab.routes.araki_route import ArakiRoute
from entropy_lab.routes.divergence_route import DivergenceRoute
from entropy_lab.routes.interpolated_route import InterpolatedRoute
from entropy_lab.routes.limit_route import LimitRoute
from entropy_lab.routes.result import EntropyResult, Route
from entropy_lab.spectral import DensityMatrix

log = logging.getLogger(__name__)


class Method(StrEnum):
    """Route selection as accepted on the command line."""

    Divergence = "divergence"
    Limit = "limit"
    Araki = "araki"
    Interpolated = "interp"
    All = "all"

    def routes(self) -> tuple[Route, ...]:
        match self:
            case Method.All:
                return tuple(Route)
            case Method.Interpolated:
                return (Route.Interpolated,)
            case _:
                return (Route(self.value),)


def relative_entropy(
    rho_psi: DensityMatrix,
    rho_phi: DensityMatrix,
    route: Route = Route.Divergence,
    config: LabConfig = LabConfig(),
) -> EntropyResult:
    """`S(psi|phi)` by the selected route.

    The limit, Araki and interpolated routes need faithful states; the divergence route
    accepts any pair and reports infinity on a support violation.
    """
    match route:
        case Route.Divergence:
            return DivergenceRoute(config).serve(rho_psi, rho_phi)
        case Route.Limit:
            return LimitRoute(config=config).serve(rho_psi, rho_phi)
        case Route.Araki:
            return ArakiRoute(config).serve(rho_psi, rho_phi)
        case Route.Interpolated:
            return InterpolatedRoute(config).serve(rho_psi, rho_phi)


@D.dataclass(frozen=True)
class CrossValidation:
    results: tuple[EntropyResult, ...]

    @property
    def discrepancy(self) -> float:
        """Max pairwise difference of the finite values, `inf` on mixed finiteness."""
        values = [result.value for result in self.results]
        match [math.isinf(v) for v in values]:
            case flags if all(flags):
                return 0.0
            case flags if any(flags):
                return math.inf

        return max(
            (abs(a - b) for a, b in itertools.combinations(values, 2)),
            default=0.0,
        )

    def agrees(self, tolerance: float) -> bool:
        return self.discrepancy <= tolerance


def cross_validate(
    rho_psi: DensityMatrix,
    rho_phi: DensityMatrix,
    routes: tuple[Route, ...] = tuple(Route),
    config: LabConfig = LabConfig(),
) -> CrossValidation:
    results = tuple(relative_entropy(rho_psi, rho_phi, route, config) for route in routes)
    validation = CrossValidation(results)
    log.debug("Route discrepancy %.3e over %s", validation.discrepancy, list(routes))
    return validation
