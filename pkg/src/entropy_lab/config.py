import json
from pathlib import Path

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    PositiveFloat,
    PositiveInt,
    model_validator,
)


class GridSpec(BaseModel):
    """A log-spaced grid `lo:hi:n`, as accepted by `--eps-grid`."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    lo: PositiveFloat
    hi: PositiveFloat
    n: PositiveInt

    @model_validator(mode="after")
    def _check_sorted(self) -> "GridSpec":
        if self.hi < self.lo or (self.n > 1 and self.hi == self.lo):
            raise ValueError(f"Grid bounds must be increasing, got {self.lo}:{self.hi}.")
        return self

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        match text.split(":"):
            case [lo, hi, n]:
                return cls(lo=float(lo), hi=float(hi), n=int(n))
            case _:
                raise ValueError(f"Expected a grid of the form lo:hi:n, got {text!r}.")

    def points(self) -> np.ndarray:
        if self.n == 1:
            return np.array([self.lo])
        return np.logspace(np.log10(self.lo), np.log10(self.hi), self.n)

    def __str__(self) -> str:
        return f"{self.lo:g}:{self.hi:g}:{self.n}"


class LabConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    # Spectral kernel.
    hermitian_atol: PositiveFloat = 1e-12
    faithful_rtol: PositiveFloat = 1e-12
    trace_atol: PositiveFloat = 1e-10
    positivity_atol: PositiveFloat = 1e-12

    # Relative entropy routes.
    route_tolerance: PositiveFloat = 1e-6
    limit_t0: PositiveFloat = 1e-2
    limit_steps: PositiveInt = 9
    divergence_threshold: PositiveFloat = 1e6
    divergence_min_points: PositiveInt = 4
    interpolation_exponents: tuple[int, int] = (3, 12)

    # Modular dynamics.
    strip_delta: PositiveFloat = 0.5
    strip_samples: PositiveInt = 33

    # Classical measures.
    probability_atol: PositiveFloat = 1e-12
    characteristic_step: PositiveFloat = 1e-4

    # Orlicz spaces and the model crossed product.
    conjugate_grid: GridSpec = GridSpec(lo=1e-8, hi=1e8, n=4097)
    eps_grid: GridSpec = GridSpec(lo=1e-8, hi=1e2, n=161)
    threshold_tie: PositiveFloat = 1e-12
    threshold_shift: PositiveFloat = 2e-12
    normalization_atol: PositiveFloat = 1e-8

    def limit_schedule(self) -> np.ndarray:
        return self.limit_t0 * 2.0 ** -np.arange(self.limit_steps)

    def interpolation_points(self) -> np.ndarray:
        first, last = self.interpolation_exponents
        return 1.0 - 2.0 ** -np.arange(first, last + 1, dtype=float)

    @classmethod
    def load(cls, path: Path) -> "LabConfig":
        return cls(**json.loads(path.read_text()))
