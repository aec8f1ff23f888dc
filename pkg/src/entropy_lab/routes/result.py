import dataclasses as D
import math
from enum import StrEnum


class Route(StrEnum):
    Divergence = "divergence"
    Limit = "limit"
    Araki = "araki"
    Interpolated = "interpolated"


@D.dataclass(frozen=True)
class EntropyResult:
    """A relative entropy value in nats, with how it was obtained.

    `diagnostics` holds the convergence table `(parameter, value)` of routes that
    take a limit; it is empty for closed-form routes.
    """

    value: float
    route: Route
    error_estimate: float = 0.0
    diagnostics: tuple[tuple[float, float], ...] = ()

    @property
    def infinite(self) -> bool:
        return math.isinf(self.value)

    @classmethod
    def divergent(
        cls,
        route: Route,
        diagnostics: tuple[tuple[float, float], ...] = (),
    ) -> "EntropyResult":
        return cls(math.inf, route, math.inf, diagnostics)
