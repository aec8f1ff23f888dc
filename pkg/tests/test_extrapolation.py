import math

import numpy as np

from entropy_lab.extrapolation import richardson
from tests import NumericTestCase

STEPS = 1e-2 * 2.0 ** -np.arange(9)


class TestRichardson(NumericTestCase):
    def test_even_expansion(self):
        result = richardson(STEPS, 1 + STEPS**2 - 3 * STEPS**4, exponent=2)
        self.assertAlmostEqual(result.value, 1.0, delta=1e-14)
        self.assertGreaterEqual(result.order, 1)

    def test_odd_expansion(self):
        result = richardson(STEPS, 2 + 3 * STEPS + STEPS**2, exponent=1)
        self.assertAlmostEqual(result.value, 2.0, delta=1e-13)

    def test_symmetric_quotient(self):
        result = richardson(STEPS, np.sin(STEPS) / STEPS, exponent=2)
        self.assertAlmostEqual(result.value, 1.0, delta=1e-13)
        self.assertLessEqual(result.error, 1e-10)

    def test_constant_sequence(self):
        result = richardson(STEPS, np.full(len(STEPS), math.pi), exponent=2)
        self.assertEqual(result.value, math.pi)
        self.assertEqual(result.error, 0.0)

    def test_single_value(self):
        result = richardson(STEPS[:1], np.array([0.5]), exponent=2)
        self.assertEqual(result.value, 0.5)
        self.assertEqual(result.error, math.inf)
        self.assertEqual(result.order, 0)

    def test_empty(self):
        with self.assertRaises(ValueError):
            richardson(np.array([]), np.array([]), exponent=2)

    def test_schedule_must_be_geometric(self):
        for steps in ([0.1, 0.05, 0.01], [0.1, 0.2, 0.4]):
            with self.subTest(steps=steps), self.assertRaises(ValueError):
                richardson(np.array(steps), np.ones(3), exponent=2)

    def test_slowly_converging_exponential_sum(self):
        steps = 2.0 ** -np.arange(3, 13)
        weights = np.array([0.98, 0.01, 0.01])
        rates = np.log(weights / np.array([0.01, 0.01, 0.98]))
        values = np.array([np.sum(weights * rates * np.exp(-rates * h)) for h in steps])

        result = richardson(steps, values, exponent=1)
        expected = float(np.sum(weights * rates))
        self.assertAlmostEqual(result.value, expected, delta=1e-10)
        self.assertGreater(result.order, 2)
        self.assertLessEqual(abs(result.value - expected), max(result.error, 1e-12) * 1e3)
