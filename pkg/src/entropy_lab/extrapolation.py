"""Richardson extrapolation of sequences sampled on geometric step schedules.

The tableau is built column by column as in Ridders' scheme: every new step adds a row
of extrapolants of increasing order, each compared against its two lower-order
neighbours. The whole tableau is built; the answer is the extrapolant with the
smallest such discrepancy, and the discrepancy itself is the error estimate.
"""

import dataclasses as D
import logging

import numpy as np

log = logging.getLogger(__name__)


@D.dataclass(frozen=True)
class Extrapolation:
    value: float
    error: float
    order: int


def richardson(
    steps: np.ndarray,
    values: np.ndarray,
    exponent: int,
) -> Extrapolation:
    """Extrapolates `values[k] = f(steps[k])` to step zero.

    `steps` must shrink by a constant ratio. The error of `f` is assumed to expand in
    powers of `step**exponent`: 2 for symmetric differences, 1 for one-sided limits.
    Diagonal discrepancies need not shrink monotonically while the steps are still
    coarse, so no row is skipped.
    """
    steps = np.asarray(steps, dtype=float)
    values = np.asarray(values, dtype=float)

    match len(steps):
        case 0:
            raise ValueError("Cannot extrapolate an empty sequence.")
        case 1:
            return Extrapolation(float(values[0]), np.inf, 0)

    ratio = steps[0] / steps[1]
    if ratio <= 1 or not np.allclose(steps[:-1] / steps[1:], ratio, rtol=1e-9):
        raise ValueError("Extrapolation steps must decrease by a constant ratio.")

    best = Extrapolation(float(values[-1]), np.inf, 0)
    previous = [float(values[0])]

    for i in range(1, len(values)):
        current = [float(values[i])]
        factor = ratio**exponent

        for j in range(1, i + 1):
            current.append(current[j - 1] + (current[j - 1] - previous[j - 1]) / (factor - 1))
            factor *= ratio**exponent

            error = max(
                abs(current[j] - current[j - 1]),
                abs(current[j] - previous[j - 1]),
            )
            if error <= best.error:
                best = Extrapolation(current[j], error, j)

        previous = current

    log.debug("Extrapolation over %d steps: %r", len(values), best)
    return best
