"""Discrete classical measure theory.

Measures are weighted atoms, densities are Radon-Nikodym derivatives against a base
measure. The conventions `0 log 0 = 0` and `p log(p / 0) = inf` hold throughout.
"""

import dataclasses as D
import logging
import math
from typing import Iterable, Sequence

import numpy as np
from scipy.special import logsumexp, rel_entr, xlogy

from entropy_lab.config import LabConfig
from entropy_lab.errors import DomainError, InvalidInputError

log = logging.getLogger(__name__)

DEFAULT_CONFIG = LabConfig()


def _frozen_vector(values: Iterable[float], what: str) -> np.ndarray:
    vector = np.array(values, dtype=float)

    if vector.ndim != 1 or vector.size == 0:
        raise InvalidInputError(f"The {what} must be a nonempty list of numbers.")
    if not np.all(np.isfinite(vector)):
        raise InvalidInputError(f"The {what} has non-finite entries.")

    vector.setflags(write=False)
    return vector


@D.dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    atoms: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self):
        if len(set(self.atoms)) != len(self.atoms):
            raise InvalidInputError("Atom labels must be unique.")
        if len(self.atoms) != len(self.weights):
            raise InvalidInputError(
                f"Got {len(self.atoms)} atoms but {len(self.weights)} weights."
            )
        if np.any(self.weights < 0):
            atom = self.atoms[int(np.argmin(self.weights))]
            raise InvalidInputError(f"Atom {atom!r} has a negative weight.")

    @classmethod
    def of(cls, atoms: Sequence[str], weights: Iterable[float]) -> "DiscreteMeasure":
        return cls(tuple(map(str, atoms)), _frozen_vector(weights, "measure weights"))

    @classmethod
    def counting(cls, atoms: Sequence[str] | int) -> "DiscreteMeasure":
        labels = [str(i) for i in range(atoms)] if isinstance(atoms, int) else atoms
        return cls.of(labels, np.ones(len(labels)))

    @property
    def size(self) -> int:
        return len(self.atoms)

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))

    def same_atoms(self, other: "DiscreteMeasure") -> bool:
        return self.atoms == other.atoms

    def require_same_atoms(self, other: "DiscreteMeasure"):
        if not self.same_atoms(other):
            raise InvalidInputError(
                f"Measures live on different atoms: {self.atoms} vs {other.atoms}."
            )


@D.dataclass(frozen=True, eq=False)
class DiscreteDensity:
    """A Radon-Nikodym derivative `d mu / d lambda` with its base measure `lambda`."""

    base: DiscreteMeasure
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.base.size:
            raise InvalidInputError(
                f"Got {len(self.values)} density values for {self.base.size} atoms."
            )
        if np.any(self.values < 0):
            atom = self.base.atoms[int(np.argmin(self.values))]
            raise InvalidInputError(f"Atom {atom!r} has a negative density.")

    @classmethod
    def of(cls, base: DiscreteMeasure, values: Iterable[float]) -> "DiscreteDensity":
        return cls(base, _frozen_vector(values, "density values"))

    @classmethod
    def probability(
        cls,
        base: DiscreteMeasure,
        values: Iterable[float],
        config: LabConfig = DEFAULT_CONFIG,
    ) -> "DiscreteDensity":
        density = cls.of(base, values)
        density.require_probability(config.probability_atol)
        return density

    @property
    def mass(self) -> float:
        return float(np.sum(self.base.weights * self.values))

    def is_probability(self, atol: float = DEFAULT_CONFIG.probability_atol) -> bool:
        return abs(self.mass - 1.0) <= atol

    def require_probability(self, atol: float = DEFAULT_CONFIG.probability_atol):
        if not self.is_probability(atol):
            raise InvalidInputError(f"The density has total mass {self.mass!r}, not 1.")

    def measure(self) -> DiscreteMeasure:
        return DiscreteMeasure(self.base.atoms, self.base.weights * self.values)

    def expectation(self, observable: np.ndarray) -> float:
        """`sum_a lambda_a p_a f_a`, skipping atoms the measure does not charge."""
        charged = self.base.weights * self.values > 0
        weights = (self.base.weights * self.values)[charged]
        return float(np.sum(weights * np.asarray(observable)[charged]))

    def log_values(self) -> np.ndarray:
        """`log p` on the atoms charged by `p`, 0 elsewhere."""
        return np.log(self.values, out=np.zeros_like(self.values), where=self.values > 0)


def radon_nikodym(mu: DiscreteMeasure, lam: DiscreteMeasure) -> DiscreteDensity:
    """`d mu / d lambda`, defined to be 0 off the support of `lambda`."""
    mu.require_same_atoms(lam)

    if np.any(violations := (lam.weights == 0) & (mu.weights > 0)):
        atom = lam.atoms[int(np.argmax(violations))]
        raise InvalidInputError(
            f"The measure is not absolutely continuous: atom {atom!r} has reference "
            "weight 0 but positive mass."
        )

    values = np.divide(
        mu.weights,
        lam.weights,
        out=np.zeros_like(mu.weights),
        where=lam.weights > 0,
    )
    return DiscreteDensity.of(lam, values)


def chain_rule_defect(
    mu: DiscreteMeasure,
    lam: DiscreteMeasure,
    nu: DiscreteMeasure,
) -> float:
    """`max |d mu/d nu - (d mu/d lambda)(d lambda/d nu)|` over the support of `nu`."""
    direct = radon_nikodym(mu, nu).values
    chained = radon_nikodym(mu, lam).values * radon_nikodym(lam, nu).values
    return float(np.max(np.abs(direct - chained)[nu.weights > 0]))


def h_functional(p: DiscreteDensity) -> float:
    """Boltzmann's `H(p) = sum_a lambda_a p_a log p_a`."""
    return float(np.sum(p.base.weights * xlogy(p.values, p.values)))


def kl_divergence(p: DiscreteDensity, q: DiscreteDensity) -> float:
    """`S(mu|nu) = sum_a lambda_a p_a log(p_a / q_a)` over a common base."""
    p.base.require_same_atoms(q.base)

    if not np.array_equal(p.base.weights, q.base.weights):
        raise InvalidInputError("Densities must share the same base measure.")

    charged = p.base.weights > 0
    terms = p.base.weights[charged] * rel_entr(p.values[charged], q.values[charged])
    return float(np.sum(terms))


@D.dataclass(frozen=True)
class ReferenceIdentity:
    """`S(mu|tau)` against the counting functional and against the uniform state.

    The first equals `H(p)` exactly; the second differs from it by `log(lambda(X))`.
    """

    h_functional: float
    against_counting: float
    against_uniform: float
    offset: float

    @property
    def counting_defect(self) -> float:
        return abs(self.against_counting - self.h_functional)

    @property
    def uniform_defect(self) -> float:
        return abs(self.against_uniform - self.h_functional - self.offset)


def reference_identity(p: DiscreteDensity) -> ReferenceIdentity:
    total = p.base.total
    if total <= 0:
        raise InvalidInputError("The base measure has no mass.")

    return ReferenceIdentity(
        h_functional=h_functional(p),
        against_counting=kl_divergence(p, DiscreteDensity.of(p.base, np.ones(p.base.size))),
        against_uniform=kl_divergence(
            p, DiscreteDensity.of(p.base, np.full(p.base.size, 1.0 / total))
        ),
        offset=math.log(total),
    )


@D.dataclass(frozen=True, eq=False)
class GibbsState:
    """A Maxwell-Boltzmann density `p = e^{K}` with `K = log Z - beta H`."""

    density: DiscreteDensity
    energies: np.ndarray
    beta: float
    log_partition: float

    @property
    def k_values(self) -> np.ndarray:
        return self.log_partition - self.beta * self.energies


def gibbs_state(
    energies: Iterable[float],
    beta: float,
    base: DiscreteMeasure,
) -> GibbsState:
    if beta <= 0:
        raise DomainError(f"The inverse temperature must be positive, got {beta}.")

    energies = _frozen_vector(energies, "energies")
    if len(energies) != base.size:
        raise InvalidInputError(f"Got {len(energies)} energies for {base.size} atoms.")

    # `Z` normalizes the density, so it is the inverse of the textbook partition sum.
    log_partition = -float(logsumexp(-beta * energies, b=base.weights))
    density = DiscreteDensity.of(base, np.exp(log_partition - beta * energies))

    log.debug("Gibbs state at beta=%g: log Z = %.12g", beta, log_partition)
    return GibbsState(density, energies, beta, log_partition)


@D.dataclass(frozen=True)
class GibbsIdentities:
    h_functional: float
    mean_k: float
    kl_divergence: float | None = None
    k_difference: float | None = None

    @property
    def entropy_defect(self) -> float:
        return abs(self.h_functional - self.mean_k)

    @property
    def relative_defect(self) -> float:
        if self.kl_divergence is None or self.k_difference is None:
            return 0.0
        return abs(self.kl_divergence - self.k_difference)


def gibbs_entropy_identities(
    first: GibbsState,
    second: GibbsState | None = None,
) -> GibbsIdentities:
    """Both sides of `H(p) = <K>_mu` and, for a pair, `S(mu|nu) = <K_1 - K_2>_mu`."""
    mu = first.density
    identities = GibbsIdentities(h_functional(mu), mu.expectation(first.k_values))

    if second is None:
        return identities

    return D.replace(
        identities,
        kl_divergence=kl_divergence(mu, second.density),
        k_difference=mu.expectation(first.k_values - second.k_values),
    )


def characteristic_derivative(
    k_values: np.ndarray,
    mu: DiscreteDensity,
    step: float = DEFAULT_CONFIG.characteristic_step,
    k_reference: np.ndarray | None = None,
) -> float:
    """`-i d/dt <e^{itK}>_mu` at zero, by a symmetric difference of width `step`.

    With `k_reference`, differentiates the commutative cocycle `e^{itK} e^{-itK_ref}`
    instead, which yields `<K - K_ref>_mu`.
    """
    if step <= 0:
        raise DomainError(f"The difference step must be positive, got {step}.")

    charged = mu.base.weights * mu.values > 0
    weights = (mu.base.weights * mu.values)[charged]
    k = np.asarray(k_values, dtype=float)[charged]
    k_ref = None if k_reference is None else np.asarray(k_reference, dtype=float)[charged]

    def characteristic(t: float) -> complex:
        cocycle = np.exp(1j * t * k)
        if k_ref is not None:
            cocycle = cocycle * np.exp(-1j * t * k_ref)
        return complex(np.sum(weights * cocycle))

    difference = characteristic(step) - characteristic(-step)
    return float(np.real(-1j * difference / (2 * step)))
