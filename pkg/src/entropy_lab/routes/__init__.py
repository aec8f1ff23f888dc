from .araki_route import ArakiRoute, relative_entropy_araki
from .cross_validation import CrossValidation, Method, cross_validate, relative_entropy
from .divergence_route import DivergenceRoute, relative_entropy_divergence
from .interpolated_route import (
    InterpolatedRoute,
    relative_entropy_interpolated,
    relative_entropy_interpolated_limit,
)
from .limit_route import LimitRoute, relative_entropy_limit
from .result import EntropyResult, Route

__all__ = [
    "ArakiRoute",
    "CrossValidation",
    "DivergenceRoute",
    "EntropyResult",
    "InterpolatedRoute",
    "LimitRoute",
    "Method",
    "Route",
    "cross_validate",
    "relative_entropy",
    "relative_entropy_araki",
    "relative_entropy_divergence",
    "relative_entropy_interpolated",
    "relative_entropy_interpolated_limit",
    "relative_entropy_limit",
]
