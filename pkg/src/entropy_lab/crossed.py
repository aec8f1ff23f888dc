"""The model crossed product of a finite-dimensional tracial algebra.

Elements are commuting sums `sum_k P_k (x) alpha_k g(beta_k e^{t - shift})` over the
joint eigenprojections `P_k` of a base matrix `a` (eigenvalues `alpha_k`) and a scale
matrix `b` (eigenvalues `beta_k`, the identity for separable elements `a (x) g(e^t)`).
The trace is `tau_omega (x) e^{-t} dt`, so a tail trace is a sum of one-dimensional
integrals with closed forms whenever the profile `g` has a closed-form inverse.
"""

import dataclasses as D
import logging
import math
from enum import StrEnum
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar
from scipy.special import xlogy

from entropy_lab.config import GridSpec, LabConfig
from entropy_lab.errors import DomainError, InvalidInputError
from entropy_lab.orlicz import (
    bisect_increasing,
    phi_ent,
    phi_ent_inverse,
    phi_log,
    phi_log_inverse,
)
from entropy_lab.spectral import (
    DensityMatrix,
    commutator_norm,
    complex_power,
    eigh,
    hermitian,
    joint_eigh,
)

log = logging.getLogger(__name__)

DEFAULT_CONFIG = LabConfig()


class BaseTrace(StrEnum):
    Normalized = "normalized"
    Counting = "counting"

    def weight(self, dim: int) -> float:
        match self:
            case BaseTrace.Normalized:
                return 1.0 / dim
            case BaseTrace.Counting:
                return 1.0


class TailMethod(StrEnum):
    Closed = "closed"
    Quadrature = "quadrature"


@D.dataclass(frozen=True, eq=False)
class Profile:
    """An increasing profile `g` on `(0, inf)` with `g(0+) = 0`, and its inverse."""

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray]

    @classmethod
    def custom(cls, name: str, fn: Callable[[np.ndarray], np.ndarray]) -> "Profile":
        def inverse(s: np.ndarray) -> np.ndarray:
            s = np.asarray(s, dtype=float)
            hi = np.ones_like(s)
            while np.any(short := fn(hi) < s):
                hi = np.where(short, 2 * hi, hi)
            return bisect_increasing(fn, s, np.zeros_like(s), hi)

        return cls(name, fn, inverse)

    def __call__(self, x: np.ndarray | float) -> np.ndarray:
        return self.fn(np.asarray(x, dtype=float))

    def __str__(self) -> str:
        return self.name


IDENTITY = Profile("identity", lambda x: x, lambda s: np.asarray(s, dtype=float))
PHI_LOG = Profile("phi_log", phi_log, phi_log_inverse)
PHI_ENT = Profile("phi_ent", phi_ent, phi_ent_inverse)

PROFILES = {profile.name: profile for profile in (IDENTITY, PHI_LOG, PHI_ENT)}


class Zeta(StrEnum):
    One = "zeta_1"
    Log = "zeta_log"


# `zeta(x) g(x)` for the profiles that the zeta-compressions of the dual density map to.
COMPRESSIONS: dict[tuple[str, Zeta], Profile] = {
    (PHI_ENT.name, Zeta.Log): PHI_LOG,
    (PHI_ENT.name, Zeta.One): IDENTITY,
}


@D.dataclass(frozen=True, eq=False)
class ModelCrossedElement:
    alpha: np.ndarray
    beta: np.ndarray
    vectors: np.ndarray
    profile: Profile = IDENTITY
    trace: BaseTrace = BaseTrace.Normalized
    shift: float = 0.0

    def __post_init__(self):
        if np.any(self.alpha < 0) or np.any(self.beta < 0):
            raise InvalidInputError("Crossed-product elements need positive base and scale.")

    @classmethod
    def separable(
        cls,
        base: np.ndarray,
        profile: Profile = IDENTITY,
        trace: BaseTrace = BaseTrace.Normalized,
    ) -> "ModelCrossedElement":
        """`a (x) g(e^t)`."""
        spectrum = eigh(base)
        spectrum.require_positive("base of the crossed-product element")
        alpha = np.clip(spectrum.eigenvalues, 0.0, None)
        return cls(alpha, np.ones_like(alpha), spectrum.eigenvectors, profile, trace)

    @classmethod
    def commuting(
        cls,
        base: np.ndarray,
        scale: np.ndarray,
        profile: Profile = IDENTITY,
        trace: BaseTrace = BaseTrace.Normalized,
        atol: float = 1e-10,
    ) -> "ModelCrossedElement":
        """`a g(b (x) e^t)` for commuting positive `a` and `b`."""
        base, scale = hermitian(base, "base"), hermitian(scale, "scale")

        if (defect := commutator_norm(base, scale)) > atol:
            raise DomainError(f"Base and scale do not commute: ||[a, b]||_F = {defect:.3e}.")

        eigh(base).require_positive("base of the crossed-product element")
        eigh(scale).require_positive("scale of the crossed-product element")

        alpha, beta, vectors = joint_eigh(base, scale)
        return cls(np.clip(alpha, 0.0, None), np.clip(beta, 0.0, None), vectors, profile, trace)

    @property
    def dim(self) -> int:
        return len(self.alpha)

    @property
    def weight(self) -> float:
        return self.trace.weight(self.dim)

    @property
    def base(self) -> np.ndarray:
        v = self.vectors
        return v @ (self.alpha[:, None] * v.conj().T)

    def base_trace(self) -> float:
        """`tau_omega(a)`."""
        return self.weight * float(np.sum(self.alpha))

    def dual_action(self, s: float) -> "ModelCrossedElement":
        """`theta_s`, the translation `t -> t - s` of the profile variable."""
        return D.replace(self, shift=self.shift + s)

    def scaled(self, c: float) -> "ModelCrossedElement":
        if c < 0:
            raise DomainError(f"Only positive multiples stay positive, got {c}.")
        return D.replace(self, alpha=self.alpha * c)

    def compress(self, zeta: Zeta | str) -> "ModelCrossedElement":
        """`zeta(h)^{1/2} g zeta(h)^{1/2}` with `h = b (x) e^t` the dual density."""
        if self.shift != 0:
            raise DomainError("Only unshifted elements commute with the dual density.")

        match COMPRESSIONS.get((self.profile.name, Zeta(zeta))):
            case None:
                raise DomainError(f"No closed form for {zeta} applied to {self.profile}.")
            case profile:
                return D.replace(self, profile=profile)

    def tail_trace(self, eps: float, method: TailMethod = TailMethod.Closed) -> float:
        """`tau(chi_(eps, inf)(h))`."""
        if eps <= 0:
            raise DomainError(f"The tail threshold must be positive, got {eps}.")

        charged = (self.alpha > 0) & (self.beta > 0)
        alpha, beta = self.alpha[charged], self.beta[charged]

        match method:
            case TailMethod.Closed:
                tails = beta / self.profile.inverse(eps / alpha)
            case TailMethod.Quadrature:
                tails = np.array(
                    [self._tail_by_quadrature(a, b, eps) for a, b in zip(alpha, beta)]
                )

        return self.weight * math.exp(-self.shift) * float(np.sum(tails))

    def _tail_by_quadrature(self, alpha: float, beta: float, eps: float) -> float:
        def excess(t: float) -> float:
            return alpha * float(self.profile(beta * math.exp(t))) - eps

        lo, hi = -1.0, 1.0
        while excess(lo) > 0:
            lo *= 2
        while excess(hi) <= 0:
            hi *= 2

        threshold = brentq(excess, lo, hi, xtol=1e-14, rtol=1e-15)
        tail, _ = quad(lambda t: math.exp(-t), threshold, np.inf, epsabs=0, epsrel=1e-13)
        return tail

    def norm_1(self) -> float:
        """`||h||_1 = tau(chi_(1, inf)(h))`."""
        return self.tail_trace(1.0)


def dual_density(
    a: np.ndarray,
    trace: BaseTrace = BaseTrace.Normalized,
) -> ModelCrossedElement:
    """`h = a (x) e^t`, the density of the dual weight of `tau_omega(a .)`."""
    return ModelCrossedElement.separable(a, IDENTITY, trace)


def gibbs_dual_density(
    hamiltonian: np.ndarray,
    beta: float = 1.0,
    trace: BaseTrace = BaseTrace.Normalized,
) -> ModelCrossedElement:
    """The dual density of the Gibbs state `e^{-beta H} / tau_omega(e^{-beta H})`."""
    gibbs = DensityMatrix.gibbs(hamiltonian, beta).matrix
    return dual_density(gibbs / (trace.weight(len(gibbs)) * np.trace(gibbs).real), trace)


def tail_trace(
    h: ModelCrossedElement,
    eps: float,
    method: TailMethod = TailMethod.Closed,
) -> float:
    return h.tail_trace(eps, method)


@D.dataclass(frozen=True)
class EpsilonInfimum:
    """The infimum over `eps` of a bracket, with its sweep table `(eps, value)`."""

    value: float
    eps: float
    sweep: tuple[tuple[float, float], ...]


def epsilon_infimum(
    bracket: Callable[[float], float],
    grid: GridSpec,
) -> EpsilonInfimum:
    """Grid infimum refined by a bounded scalar search around the grid minimum."""
    points = grid.points()
    values = np.array([bracket(eps) for eps in points])
    k = int(np.argmin(values))
    sweep = tuple((float(eps), float(value)) for eps, value in zip(points, values))
    best = EpsilonInfimum(float(values[k]), float(points[k]), sweep)

    if len(points) < 3:
        return best

    lo, hi = np.log(points[max(k - 1, 0)]), np.log(points[min(k + 1, len(points) - 1)])
    refined = minimize_scalar(
        lambda x: bracket(math.exp(x)),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-9},
    )

    if refined.fun < best.value:
        log.debug("Refined eps infimum %.12g at eps=%.6e", refined.fun, math.exp(refined.x))
        return D.replace(best, value=float(refined.fun), eps=math.exp(refined.x))

    log.debug("Grid eps infimum %.12g at eps=%.6e kept", best.value, best.eps)
    return best


@D.dataclass(frozen=True)
class RegularEntropy:
    """The regularized entropy with its closed-form comparators.

    `comparator` is `inf_eps tau_omega(a log(a + eps))` over the same grid and `limit` is
    `tau_omega(a log a)`.
    """

    value: float
    comparator: float
    limit: float
    infimum: EpsilonInfimum

    @property
    def discrepancy(self) -> float:
        return max(
            abs(self.value - self.comparator),
            abs(self.value - self.limit),
            abs(self.comparator - self.limit),
        )


def regular_entropy(
    a: np.ndarray,
    trace: BaseTrace = BaseTrace.Normalized,
    eps_grid: GridSpec | None = None,
    config: LabConfig = DEFAULT_CONFIG,
) -> RegularEntropy:
    """`inf_eps [eps tau(chi_(eps, inf)(a (x) phi_log(e^t))) + log(eps) ||a (x) e^t||_1]`.

    The two inner elements are the `zeta_log` and `zeta_1` compressions of
    `g = a (x) phi_ent(e^t)` by the dual density `h = 1 (x) e^t` of `tau_omega`.
    """
    grid = config.eps_grid if eps_grid is None else eps_grid
    g = ModelCrossedElement.separable(a, PHI_ENT, trace)

    if abs((mass := g.base_trace()) - 1.0) > config.normalization_atol:
        raise InvalidInputError(f"The base density has tau_omega(a) = {mass!r}, not 1.")

    tail_part = g.compress(Zeta.Log)
    norm_part = g.compress(Zeta.One).norm_1()

    def bracket(eps: float) -> float:
        return eps * tail_part.tail_trace(eps) + math.log(eps) * norm_part

    def comparator(eps: float) -> float:
        return g.weight * float(np.sum(xlogy(g.alpha, g.alpha + eps)))

    infimum = epsilon_infimum(bracket, grid)
    comparators = min(comparator(eps) for eps in (*grid.points(), infimum.eps))

    return RegularEntropy(
        value=infimum.value,
        comparator=comparators,
        limit=g.weight * float(np.sum(xlogy(g.alpha, g.alpha))),
        infimum=infimum,
    )


@D.dataclass(frozen=True)
class CommutingEntropy:
    """`phi(f log f)` for `f = rho_theta rho_phi^{-1}`, with its crossed-product infimum."""

    value: float
    infimum: EpsilonInfimum
    density: np.ndarray

    @property
    def discrepancy(self) -> float:
        return abs(self.value - self.infimum.value)


def commuting_relative_entropy(
    theta: DensityMatrix,
    phi: DensityMatrix,
    eps_grid: GridSpec | None = None,
    config: LabConfig = DEFAULT_CONFIG,
) -> CommutingEntropy:
    """`S(theta|phi)` for commuting faithful states, in the tracial crossed product.

    With `h_phi = rho_phi (x) e^t` and the counting trace, the bracket is
    `eps tau(chi_(eps, inf)(phi_log(h_phi) f)) + log(eps) ||h_phi f||_1`.
    """
    grid = config.eps_grid if eps_grid is None else eps_grid
    theta.require_faithful("state of the commuting entropy")
    phi.require_faithful("reference state of the commuting entropy")

    if (defect := commutator_norm(theta.matrix, phi.matrix)) > 1e-10:
        raise DomainError(f"The states do not commute: ||[rho, sigma]||_F = {defect:.3e}.")

    f = theta.matrix @ complex_power(phi, -1.0)
    f = hermitian(f, "Radon-Nikodym derivative", atol=1e-10)

    tail_part = ModelCrossedElement.commuting(f, phi.matrix, PHI_LOG, BaseTrace.Counting)
    norm_part = ModelCrossedElement.commuting(f, phi.matrix, IDENTITY, BaseTrace.Counting)
    total = norm_part.norm_1()

    def bracket(eps: float) -> float:
        return eps * tail_part.tail_trace(eps) + math.log(eps) * total

    value = float(np.sum(norm_part.beta * xlogy(norm_part.alpha, norm_part.alpha)))
    return CommutingEntropy(value, epsilon_infimum(bracket, grid), f)
