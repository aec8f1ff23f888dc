"""Young functions, fundamental functions and Luxemburg norms.

The entropic Young functions are `psi_log(t) = t log(t + 1)` and
`psi_ent(t) = max(t, psi_log(t))`; they cross at `t = e - 1`. Their Luxemburg
fundamental functions `phi(t) = 1 / psi^{-1}(1 / t)` have the closed-form inverses
`phi^{-1}(s) = 1 / psi(1 / s)`.
"""

import dataclasses as D
import logging
import math
from enum import StrEnum
from typing import Callable

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from entropy_lab.classical import DiscreteDensity
from entropy_lab.config import GridSpec, LabConfig
from entropy_lab.errors import DomainError, InvalidInputError
from entropy_lab.spectral import (
    ScalarFunction,
    apply_scalar_function,
    chi_above,
    commutator_norm,
    hermitian,
)

log = logging.getLogger(__name__)

DEFAULT_CONFIG = LabConfig()

BISECTION_STEPS = 200
E_MINUS_ONE = math.e - 1.0

type Real = np.ndarray | float


def bisect_increasing(
    fn: Callable[[np.ndarray], np.ndarray],
    y: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
) -> np.ndarray:
    """Solves `fn(x) = y` elementwise for increasing `fn` with `fn(lo) <= y <= fn(hi)`."""
    lo, hi = np.array(lo, dtype=float), np.array(hi, dtype=float)

    for _ in range(BISECTION_STEPS):
        mid = (lo + hi) / 2
        if np.all((mid == lo) | (mid == hi)):
            break
        below = fn(mid) < y
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)

    return (lo + hi) / 2


def psi_log(t: Real) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return t * np.log1p(t)


def psi_log_inverse(y: Real) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    # psi_log(t) >= t log 2 for t >= 1 and >= t^2 / 2 for t <= 1.
    hi = np.maximum(y / math.log(2.0), np.sqrt(2.0 * y))
    return bisect_increasing(psi_log, y, np.zeros_like(y), hi)


def psi_ent(t: Real) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return np.maximum(t, psi_log(t))


def psi_ent_inverse(y: Real) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    return np.where(y <= E_MINUS_ONE, y, psi_log_inverse(np.maximum(y, E_MINUS_ONE)))


def phi_log(t: Real) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(t > 0, 1.0 / psi_log_inverse(1.0 / np.where(t > 0, t, 1.0)), 0.0)


def phi_log_inverse(s: Real) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return s / np.log1p(1.0 / s)


def phi_ent(t: Real) -> np.ndarray:
    return np.maximum(t, phi_log(t))


def phi_ent_inverse(s: Real) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return np.minimum(s, phi_log_inverse(s))


def zeta_1(t: Real) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return t / phi_ent(t)


def zeta_log(t: Real) -> np.ndarray:
    return phi_log(t) / phi_ent(t)


class YoungKind(StrEnum):
    PsiLog = "psi_log"
    PsiEnt = "psi_ent"
    Custom = "custom"


class NormFlavor(StrEnum):
    Luxemburg = "luxemburg"
    Orlicz = "orlicz"


@D.dataclass(frozen=True, eq=False)
class YoungFunction:
    """A convex increasing `psi` on `[0, inf)` with `psi(0) = 0`."""

    name: str
    kind: YoungKind
    fn: Callable[[np.ndarray], np.ndarray]
    inverse_fn: Callable[[np.ndarray], np.ndarray] | None = None

    @classmethod
    def of(cls, kind: YoungKind | str) -> "YoungFunction":
        match YoungKind(kind):
            case YoungKind.PsiLog:
                return PSI_LOG
            case YoungKind.PsiEnt:
                return PSI_ENT
            case _:
                raise InvalidInputError("A custom Young function needs an evaluator.")

    @classmethod
    def custom(
        cls,
        name: str,
        fn: Callable[[np.ndarray], np.ndarray],
    ) -> "YoungFunction":
        young = cls(name, YoungKind.Custom, fn)
        grid = np.linspace(0.0, 10.0, 101)
        values = young(grid)

        if values[0] != 0 or np.any(np.diff(values) < 0) or np.any(np.diff(values, 2) < -1e-12):
            raise InvalidInputError(f"{name} is not a Young function on [0, 10].")

        return young

    def __call__(self, t: Real) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise DomainError(f"{self.name} is only defined on [0, inf).")
        return self.fn(t)

    def __str__(self) -> str:
        return self.name

    def inverse(self, y: Real) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if np.any(y < 0):
            raise DomainError(f"The inverse of {self.name} is only defined on [0, inf).")

        if self.inverse_fn is not None:
            return self.inverse_fn(y)

        hi = np.ones_like(y)
        while np.any(short := self.fn(hi) < y):
            hi = np.where(short, 2 * hi, hi)
        return bisect_increasing(self.fn, y, np.zeros_like(y), hi)

    def conjugate(self, s: float, grid: GridSpec = DEFAULT_CONFIG.conjugate_grid) -> float:
        """`psi*(s) = sup_t (s t - psi(t))`, a grid search refined around its maximum."""
        if s < 0:
            raise DomainError(f"The conjugate is only evaluated on [0, inf), got {s}.")

        t = np.concatenate([[0.0], grid.points()])
        gains = s * t - self(t)
        k = int(np.argmax(gains))
        lo, hi = t[max(k - 1, 0)], t[min(k + 1, len(t) - 1)]

        refined = minimize_scalar(
            lambda x: float(self(x)) - s * x,
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12 * max(hi, 1.0)},
        )
        return max(float(gains[k]), -float(refined.fun))

    def conjugate_inverse(self, y: float) -> float:
        """The least `s` with `psi*(s) >= y`."""
        if y <= 0:
            raise DomainError(f"The conjugate inverse needs a positive argument, got {y}.")

        hi = 1.0
        while self.conjugate(hi) < y:
            hi *= 2
        return float(brentq(lambda s: self.conjugate(s) - y, 0.0, hi, rtol=1e-12))


PSI_LOG = YoungFunction("psi_log", YoungKind.PsiLog, psi_log, psi_log_inverse)
PSI_ENT = YoungFunction("psi_ent", YoungKind.PsiEnt, psi_ent, psi_ent_inverse)


def young_eval(young: YoungFunction, t: Real) -> np.ndarray:
    return young(t)


def young_inverse(young: YoungFunction, y: Real) -> np.ndarray:
    return young.inverse(y)


@D.dataclass(frozen=True, eq=False)
class FundamentalFunction:
    """`t -> ||chi_E||` for `lambda(E) = t`, in the Luxemburg or the Orlicz norm."""

    young: YoungFunction
    flavor: NormFlavor = NormFlavor.Luxemburg

    def __call__(self, t: float) -> float:
        if t <= 0:
            raise DomainError(f"The fundamental function needs t > 0, got {t}.")

        match self.flavor:
            case NormFlavor.Luxemburg:
                return float(1.0 / self.young.inverse(1.0 / t))
            case NormFlavor.Orlicz:
                return t * self.young.conjugate_inverse(1.0 / t)

    def inverse(self, s: float) -> float:
        if s <= 0:
            raise DomainError(f"The fundamental function is positive, got {s}.")

        match self.flavor:
            case NormFlavor.Luxemburg:
                return float(1.0 / self.young(1.0 / s))
            case NormFlavor.Orlicz:
                lo, hi = -1.0, 1.0
                while self(math.exp(lo)) > s:
                    lo *= 2
                while self(math.exp(hi)) < s:
                    hi *= 2
                return math.exp(brentq(lambda x: self(math.exp(x)) - s, lo, hi, rtol=1e-14))


def fundamental(
    young: YoungFunction,
    t: float,
    flavor: NormFlavor = NormFlavor.Luxemburg,
) -> float:
    return FundamentalFunction(young, flavor)(t)


def luxemburg_norm(f: DiscreteDensity, young: YoungFunction) -> float:
    """`inf {k > 0 : sum_a lambda_a psi(f_a / k) <= 1}`."""
    charged = (f.base.weights > 0) & (f.values > 0)
    if not np.any(charged):
        return 0.0

    weights, values = f.base.weights[charged], f.values[charged]

    def excess(k: float) -> float:
        return float(np.sum(weights * young(values / k))) - 1.0

    lo = hi = float(np.max(values))
    while excess(hi) > 0:
        hi *= 2
    while excess(lo) <= 0:
        lo /= 2

    norm = float(brentq(excess, lo, hi, xtol=1e-300, rtol=1e-13))
    log.debug("Luxemburg norm under %s: %.12g", young, norm)
    return norm


YOUNG_LOG = ScalarFunction("young_log", psi_log)
YOUNG_ENT = ScalarFunction("young_ent", psi_ent)
PHI_LOG = ScalarFunction("phi_log", phi_log)
PHI_ENT = ScalarFunction("phi_ent", phi_ent)
ZETA_1 = ScalarFunction("zeta_1", zeta_1)
ZETA_LOG = ScalarFunction("zeta_log", zeta_log, at_zero=1.0)


def young_scalar_function(young: YoungFunction) -> ScalarFunction:
    match young.kind:
        case YoungKind.PsiLog:
            return YOUNG_LOG
        case YoungKind.PsiEnt:
            return YOUNG_ENT
        case _:
            return ScalarFunction(young.name, young.fn)


def fundamental_scalar_function(young: YoungFunction) -> ScalarFunction:
    match young.kind:
        case YoungKind.PsiLog:
            return PHI_LOG
        case YoungKind.PsiEnt:
            return PHI_ENT
        case _:
            phi = FundamentalFunction(young)
            return ScalarFunction(f"phi_{young.name}", np.vectorize(phi, otypes=[float]))


def projection_identity_defect(
    a: np.ndarray,
    b: np.ndarray,
    young: YoungFunction,
    atol: float = 1e-10,
) -> float:
    """`||chi_(1,inf)(a phi(b)) - chi_(1,inf)(psi(a) b)||_F` for commuting `a`, `b`."""
    a, b = hermitian(a, "left operand"), hermitian(b, "right operand")

    if (defect := commutator_norm(a, b)) > atol:
        raise DomainError(f"The operands do not commute: ||[a, b]||_F = {defect:.3e}.")

    def symmetric_product(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x @ y + y @ x) / 2

    left = symmetric_product(a, apply_scalar_function(b, fundamental_scalar_function(young)))
    right = symmetric_product(apply_scalar_function(a, young_scalar_function(young)), b)
    indicator = chi_above(1.0)

    return float(
        np.linalg.norm(
            apply_scalar_function(left, indicator) - apply_scalar_function(right, indicator)
        )
    )
