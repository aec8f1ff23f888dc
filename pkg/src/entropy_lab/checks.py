"""Randomized acceptance properties.

Every check draws its instances from one seeded generator and reports the largest
defect it saw against a fixed tolerance. The registry order is the report order.
"""

import dataclasses as D
import logging
from typing import Callable

import numpy as np

from entropy_lab.classical import (
    DiscreteDensity,
    DiscreteMeasure,
    characteristic_derivative,
    gibbs_entropy_identities,
    gibbs_state,
    kl_divergence,
    reference_identity,
)
from entropy_lab.config import LabConfig
from entropy_lab.crossed import PHI_LOG, ModelCrossedElement, regular_entropy
from entropy_lab.modular import CocycleDerivative, kms_defect, modular_flow
from entropy_lab.orlicz import PSI_ENT, PSI_LOG, projection_identity_defect
from entropy_lab.routes import Route, cross_validate, relative_entropy_divergence
from entropy_lab.sampling import (
    random_commuting_positive,
    random_density,
    random_hermitian,
    random_normalized_positive,
    random_spectrum,
)
from entropy_lab.spectral import DensityMatrix, dagger, unitary_quotient

log = logging.getLogger(__name__)


@D.dataclass(frozen=True)
class CheckResult:
    name: str
    defect: float
    tolerance: float
    samples: int

    @property
    def passed(self) -> bool:
        return bool(self.defect <= self.tolerance)


type CheckFn = Callable[[np.random.Generator, int, LabConfig], float]


@D.dataclass(frozen=True)
class Check:
    name: str
    fn: CheckFn
    samples: int
    tolerance: float

    def run(
        self,
        rng: np.random.Generator,
        samples: int | None = None,
        config: LabConfig = LabConfig(),
    ) -> CheckResult:
        samples = self.samples if samples is None else samples
        defect = self.fn(rng, samples, config)
        log.debug("Check %s: max defect %.3e over %d samples", self.name, defect, samples)
        return CheckResult(self.name, defect, self.tolerance, samples)


CHECKS: dict[str, Check] = {}


def check(name: str, samples: int, tolerance: float):
    def register(fn: CheckFn) -> CheckFn:
        CHECKS[name] = Check(name, fn, samples, tolerance)
        return fn

    return register


@check("route-equivalence", samples=200, tolerance=1e-6)
def route_equivalence(rng: np.random.Generator, samples: int, config: LabConfig):
    """Largest route discrepancy.

    Limit error estimates count ten-fold, which holds them to a tenth of the tolerance.
    """
    defects = []

    for dim in (2, 3, 4, 6):
        for _ in range(samples):
            validation = cross_validate(
                *(random_density(rng, dim) for _ in range(2)), config=config
            )
            defects.append(validation.discrepancy)
            defects += [
                10 * result.error_estimate
                for result in validation.results
                if result.route == Route.Limit
            ]

    return float(max(defects))


@check("cocycle-algebra", samples=100, tolerance=1e-9)
def cocycle_algebra(rng: np.random.Generator, samples: int, config: LabConfig):
    defects = []

    for dim in range(2, 6):
        for _ in range(samples):
            theta, phi, psi = (random_density(rng, dim) for _ in range(3))
            t, s = rng.uniform(-5, 5, size=2)
            x = random_hermitian(rng, dim)
            u = CocycleDerivative(theta, psi)
            identity = np.eye(dim)

            defects += [
                np.linalg.norm(u(t + s) - u(t) @ modular_flow(psi, t, u(s))),
                np.linalg.norm(
                    modular_flow(theta, t, x) - u(t) @ modular_flow(psi, t, x) @ dagger(u(t))
                ),
                np.linalg.norm(
                    CocycleDerivative(theta, phi)(t) @ CocycleDerivative(phi, psi)(t) - u(t)
                ),
                np.linalg.norm(u(t) @ CocycleDerivative(psi, theta)(t) - identity),
                np.linalg.norm(dagger(u(t)) @ u(t) - identity),
            ]

    return float(max(defects))


@check("transport-identity", samples=50, tolerance=1e-9)
def transport_identity(rng: np.random.Generator, samples: int, config: LabConfig):
    defects = []

    for _ in range(samples):
        dim = int(rng.integers(2, 6))
        u = CocycleDerivative(random_density(rng, dim), random_density(rng, dim))
        defects += [u.transport_defect(random_hermitian(rng, dim)) for _ in range(20)]

    return float(max(defects))


@check("kms-condition", samples=200, tolerance=1e-9)
def kms_condition(rng: np.random.Generator, samples: int, config: LabConfig):
    defects = []

    for dim in range(2, 7):
        for _ in range(samples):
            x, y = random_hermitian(rng, dim), random_hermitian(rng, dim)
            scale = np.linalg.norm(x, 2) * np.linalg.norm(y, 2)
            defects.append(kms_defect(random_density(rng, dim), x, y) / scale)

    return float(max(defects))


@check("projection-identity", samples=50, tolerance=1e-9)
def projection_identity(rng: np.random.Generator, samples: int, config: LabConfig):
    return max(
        projection_identity_defect(*random_commuting_positive(rng, int(rng.integers(2, 7))), young)
        for young in (PSI_LOG, PSI_ENT)
        for _ in range(samples)
    )


@check("crossed-reduction", samples=100, tolerance=1e-8)
def crossed_reduction(rng: np.random.Generator, samples: int, config: LabConfig):
    """`eps tail + log(eps) ||h||_1 = tau(a log(a/eps + 1)) + log(eps) tau(a)
    = tau(a log(a + eps))` on the eps grid."""
    defects = []
    eps = config.eps_grid.points()

    for _ in range(samples):
        dim = int(rng.integers(2, 6))
        a = random_normalized_positive(rng, dim)
        element = ModelCrossedElement.separable(a, PHI_LOG)
        alpha, weight = element.alpha, element.weight

        tails = np.array([e * element.tail_trace(e) for e in eps])
        closed = weight * np.sum(alpha[None, :] * np.log1p(alpha[None, :] / eps[:, None]), 1)
        regularized = weight * np.sum(alpha[None, :] * np.log(alpha[None, :] + eps[:, None]), 1)
        offset = np.log(eps) * element.base_trace()

        defects += [
            np.max(np.abs(tails - closed)),
            np.max(np.abs(closed + offset - regularized)),
        ]

    return float(max(defects))


@check("regular-entropy", samples=100, tolerance=1e-6)
def regular_entropy_matches_relative(
    rng: np.random.Generator,
    samples: int,
    config: LabConfig,
):
    defects = []

    for _ in range(samples):
        dim = int(rng.integers(2, 6))
        a = random_normalized_positive(rng, dim, diagonal=True)
        state = DensityMatrix.of(a / dim)
        relative = relative_entropy_divergence(state, DensityMatrix.maximally_mixed(dim))
        defects.append(abs(regular_entropy(a, config=config).value - relative.value))

        rotated = regular_entropy(random_normalized_positive(rng, dim), config=config)
        defects.append(rotated.discrepancy)

    return float(max(defects))


@check("scalar-bound", samples=100_000, tolerance=1e-12)
def scalar_bound(rng: np.random.Generator, samples: int, config: LabConfig):
    lam = np.exp(rng.uniform(np.log(1e-8), np.log(1e8), samples))
    t = 1.0 - rng.random(samples)
    excess = np.abs(unitary_quotient(lam, t)) - np.abs(np.log(lam))
    return float(max(0.0, np.max(excess)))


@check("classical-identities", samples=100, tolerance=1e-12)
def classical_identities(rng: np.random.Generator, samples: int, config: LabConfig):
    defects = []

    for _ in range(samples):
        size = int(rng.integers(2, 8))
        base = DiscreteMeasure.of([f"a{i}" for i in range(size)], rng.uniform(0.5, 2.0, size))
        first, second = (
            gibbs_state(rng.uniform(0, 3, size), rng.uniform(0.2, 2.0), base) for _ in range(2)
        )
        identities = gibbs_entropy_identities(first, second)
        p = DiscreteDensity.of(DiscreteMeasure.counting(size), rng.dirichlet(np.ones(size)))

        defects += [
            identities.entropy_defect,
            identities.relative_defect,
            max(0.0, -kl_divergence(first.density, second.density)),
            reference_identity(p).uniform_defect,
        ]

    return float(max(defects))


@check("characteristic-derivatives", samples=100, tolerance=1.0)
def characteristic_derivatives(rng: np.random.Generator, samples: int, config: LabConfig):
    """Difference-quotient errors in units of their `10 h^2 max|K|^3` bound.

    The quotient misses the derivative by about `h^2 <K^3> / 6`, so the absolute error
    stays under `1e-7` at `h = 1e-4` only while `|K|` stays below about 4. Sampled
    log-ratios reach 5, and there the bound allows errors near `1e-5`. The bound is
    floored at the rounding level `1e-10` of a quotient at `h = 1e-4`.
    """
    defects = []
    step = config.characteristic_step

    def bound(k: np.ndarray) -> float:
        return 10 * step**2 * float(np.max(np.abs(k))) ** 3 + 1e-10

    for _ in range(samples):
        size = int(rng.integers(2, 8))
        mu, nu = (
            DiscreteDensity.of(DiscreteMeasure.counting(size), random_spectrum(rng, size))
            for _ in range(2)
        )
        k_mu, k_nu = mu.log_values(), nu.log_values()
        single = characteristic_derivative(k_mu, mu, step)
        paired = characteristic_derivative(k_mu, mu, step, k_reference=k_nu)

        defects += [
            abs(single - mu.expectation(k_mu)) / bound(k_mu),
            abs(paired - kl_divergence(mu, nu)) / bound(k_mu - k_nu),
        ]

    return float(max(defects))


def run_checks(
    seed: int,
    names: list[str] | None = None,
    samples: int | None = None,
    config: LabConfig = LabConfig(),
) -> list[CheckResult]:
    """Runs the selected checks in registry order, each from its own seeded stream."""
    selected = list(CHECKS) if names is None else names
    unknown = set(selected) - set(CHECKS)
    if unknown:
        raise KeyError(f"Unknown checks: {sorted(unknown)}")

    streams = np.random.SeedSequence(seed).spawn(len(CHECKS))
    return [
        check.run(np.random.default_rng(stream), samples, config)
        for (name, check), stream in zip(CHECKS.items(), streams)
        if name in selected
    ]
