import math

import numpy as np

from entropy_lab.classical import kl_divergence
from entropy_lab.config import LabConfig
from entropy_lab.entropy import h_functional_cocycle, h_functional_quantum, von_neumann_entropy
from entropy_lab.errors import DomainError
from entropy_lab.routes import (
    ArakiRoute,
    CrossValidation,
    DivergenceRoute,
    EntropyResult,
    InterpolatedRoute,
    LimitRoute,
    Method,
    Route,
    cross_validate,
    relative_entropy,
    relative_entropy_araki,
    relative_entropy_divergence,
    relative_entropy_interpolated,
    relative_entropy_interpolated_limit,
    relative_entropy_limit,
)
from entropy_lab.sampling import random_density, random_diagonal_density
from entropy_lab.spectral import DensityMatrix
from tests import NumericTestCase
from tests.dsl import QUBIT_PAIR_ENTROPY, counting, pure, qubit, qubit_pair


class TestHFunctional(NumericTestCase):
    def test_pure_state(self):
        self.assertAlmostEqual(h_functional_quantum(pure([1.0, 1j, 0.5])), 0.0, delta=1e-15)

    def test_maximally_mixed(self):
        self.assertAlmostEqual(h_functional_quantum(DensityMatrix.maximally_mixed(4)), -math.log(4))

    def test_qubit(self):
        self.assertAlmostEqual(h_functional_quantum(qubit(0.7)), -0.610864, places=6)
        self.assertAlmostEqual(von_neumann_entropy(qubit(0.7)), 0.610864, places=6)

    def test_cocycle_form(self):
        rho = random_density(self.rng, 4)
        self.assertAlmostEqual(h_functional_cocycle(rho), h_functional_quantum(rho), delta=1e-7)


class TestDivergenceRoute(NumericTestCase):
    def test_equal_states(self):
        rho = random_density(self.rng, 3)
        self.assertAlmostEqual(relative_entropy_divergence(rho, rho).value, 0.0, delta=1e-12)

    def test_qubit_pair(self):
        result = relative_entropy_divergence(*qubit_pair())
        self.assertAlmostEqual(result.value, 0.0822829, places=7)
        self.assertEqual(result.route, Route.Divergence)

    def test_support_violation(self):
        result = relative_entropy_divergence(qubit(1.0), qubit(0.0))
        self.assertTrue(result.infinite)
        self.assertEqual(result.value, math.inf)

    def test_non_faithful_but_absolutely_continuous(self):
        result = relative_entropy_divergence(qubit(1.0), qubit(0.5))
        self.assertAlmostEqual(result.value, math.log(2))


class TestLimitRoute(NumericTestCase):
    def test_equal_states(self):
        rho = random_density(self.rng, 3)
        result = relative_entropy_limit(rho, rho)
        self.assertAlmostEqual(result.value, 0.0, delta=1e-12)
        self.assertLessEqual(result.error_estimate, 1e-12)

    def test_qubit_pair(self):
        result = relative_entropy_limit(*qubit_pair())
        self.assertAlmostEqual(result.value, QUBIT_PAIR_ENTROPY, delta=1e-8)

    def test_random_pair(self):
        theta, psi = random_density(self.rng, 4), random_density(self.rng, 4)
        result = relative_entropy_limit(theta, psi)
        expected = relative_entropy_divergence(theta, psi).value
        self.assertAlmostEqual(result.value, expected, delta=1e-7)
        self.assertLessEqual(result.error_estimate, 1e-7)

    def test_diagnostics_follow_the_schedule(self):
        result = relative_entropy_limit(*qubit_pair())
        schedule = LabConfig().limit_schedule()
        self.assertEqual([t for t, _ in result.diagnostics], list(schedule))

    def test_quotients_converge(self):
        values = LimitRoute().quotients(*qubit_pair())
        errors = np.abs(values - QUBIT_PAIR_ENTROPY)
        self.assertTrue(np.all(np.diff(errors) < 0))

    def test_not_faithful(self):
        with self.assertRaises(DomainError):
            relative_entropy_limit(qubit(1.0), qubit(0.5))

    def test_invalid_schedules(self):
        for schedule in ([], [0.1, -0.1], [0.1, 0.2]):
            with self.subTest(schedule=schedule), self.assertRaises(DomainError):
                LimitRoute(np.array(schedule, dtype=float))

    def test_divergence_detection(self):
        route = LimitRoute()
        self.assertTrue(route.diverges(np.array([1.0, 1e3, 1e5, 1e7])))
        self.assertFalse(route.diverges(np.array([1e7, 1e5, 1e3, 1.0])))
        self.assertFalse(route.diverges(np.array([1.0, 2.0, 3.0, 4.0])))

    def test_reports_divergence(self):
        route = LimitRoute(config=LabConfig(divergence_threshold=1e-3))
        result = route.serve(qubit(0.5), qubit(0.7))
        self.assertTrue(result.infinite)
        self.assertEqual(len(result.diagnostics), LabConfig().limit_steps)


class TestArakiRoute(NumericTestCase):
    def test_equal_states(self):
        rho = random_density(self.rng, 3)
        self.assertAlmostEqual(relative_entropy_araki(rho, rho).value, 0.0, delta=1e-12)

    def test_qubit_pair(self):
        self.assertAlmostEqual(relative_entropy_araki(*qubit_pair()).value, 0.0822829, places=7)

    def test_random_pair(self):
        psi, phi = random_density(self.rng, 5), random_density(self.rng, 5)
        self.assertAlmostEqual(
            relative_entropy_araki(psi, phi).value,
            relative_entropy_divergence(psi, phi).value,
            delta=1e-10,
        )

    def test_not_faithful(self):
        with self.assertRaises(DomainError):
            ArakiRoute().serve(qubit(0.5), qubit(1.0))


class TestInterpolatedRoute(NumericTestCase):
    def test_equal_states(self):
        rho = random_density(self.rng, 3)
        self.assertAlmostEqual(relative_entropy_interpolated(rho, rho, 0.3), 0.0, delta=1e-12)

    def test_midpoint(self):
        value = relative_entropy_interpolated(*qubit_pair(), 0.5)
        expected = math.sqrt(0.35) * math.log(1.4) + math.sqrt(0.15) * math.log(0.6)
        self.assertAlmostEqual(value, expected, delta=1e-12)
        self.assertAlmostEqual(value, 0.0012177, places=7)

    def test_limit(self):
        result = relative_entropy_interpolated_limit(*qubit_pair())
        self.assertAlmostEqual(result.value, QUBIT_PAIR_ENTROPY, delta=1e-7)

    def test_spread_spectrum(self):
        theta = DensityMatrix.diagonal(0.98, 0.01, 0.01)
        phi = DensityMatrix.diagonal(0.01, 0.01, 0.98)
        result = relative_entropy_interpolated_limit(theta, phi)
        expected = 0.97 * math.log(98)
        self.assertAlmostEqual(result.value, expected, delta=1e-9)
        self.assertLessEqual(result.error_estimate, 1e-8)

    def test_parameter_range(self):
        for s in (0.0, 1.0, -0.5, 1.5):
            with self.subTest(s=s), self.assertRaises(DomainError):
                InterpolatedRoute().value_at(*qubit_pair(), s)


class TestRouteSelection(NumericTestCase):
    def test_method_routes(self):
        self.assertEqual(Method.All.routes(), tuple(Route))
        self.assertEqual(Method.Interpolated.routes(), (Route.Interpolated,))
        self.assertEqual(Method.Araki.routes(), (Route.Araki,))

    def test_dispatch(self):
        pair = qubit_pair()
        for route in Route:
            with self.subTest(route=route):
                result = relative_entropy(*pair, route)
                self.assertEqual(result.route, route)
                self.assertAlmostEqual(result.value, QUBIT_PAIR_ENTROPY, delta=1e-7)

    def test_divergence_route_config(self):
        route = DivergenceRoute(LabConfig(trace_atol=0.5))
        self.assertFalse(route.serve(DensityMatrix.diagonal(0.9, 0.1), qubit(1.0)).infinite)


class TestCrossValidation(NumericTestCase):
    def test_random_pairs_agree(self):
        for dim in (2, 3, 4, 6):
            with self.subTest(dim=dim):
                theta, phi = random_density(self.rng, dim), random_density(self.rng, dim)
                validation = cross_validate(theta, phi)
                self.assertTrue(validation.agrees(1e-6), validation)

    def test_diagonal_pairs_match_classical(self):
        theta, phi = random_diagonal_density(self.rng, 4), random_diagonal_density(self.rng, 4)
        expected = kl_divergence(
            counting(*np.diag(theta.matrix).real),
            counting(*np.diag(phi.matrix).real),
        )

        for result in cross_validate(theta, phi).results:
            with self.subTest(route=result.route):
                self.assertAlmostEqual(result.value, expected, delta=1e-9)

    def test_limit_error_estimates(self):
        for dim in (2, 3, 4, 6):
            for _ in range(10):
                theta, phi = random_density(self.rng, dim), random_density(self.rng, dim)
                with self.subTest(dim=dim):
                    result = relative_entropy_limit(theta, phi)
                    self.assertLessEqual(result.error_estimate, 1e-7)

    def test_interpolated_limit_matches_divergence(self):
        for dim in (3, 6):
            for _ in range(20):
                theta, phi = random_density(self.rng, dim), random_density(self.rng, dim)
                with self.subTest(dim=dim):
                    expected = relative_entropy_divergence(theta, phi).value
                    result = relative_entropy_interpolated_limit(theta, phi)
                    self.assertAlmostEqual(result.value, expected, delta=1e-7)

    def test_nonnegative(self):
        for _ in range(20):
            theta, phi = random_density(self.rng, 3), random_density(self.rng, 3)
            self.assertGreaterEqual(relative_entropy_divergence(theta, phi).value, -1e-10)

    def test_discrepancy(self):
        finite = EntropyResult(1.0, Route.Divergence)
        other = EntropyResult(1.5, Route.Araki)
        infinite = EntropyResult.divergent(Route.Limit)

        self.assertEqual(CrossValidation((finite, other)).discrepancy, 0.5)
        self.assertEqual(CrossValidation((infinite, infinite)).discrepancy, 0.0)
        self.assertEqual(CrossValidation((finite, infinite)).discrepancy, math.inf)
        self.assertEqual(CrossValidation((finite,)).discrepancy, 0.0)
