"""Finite-difference verification of analytic gradients"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from effnet_mini.exceptions import UsageError
from effnet_mini.tensor.tensor import Tensor, no_grad

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-5
DEFAULT_TOLERANCE = 1e-4
# Below this magnitude the analytic value is compared by absolute error.
ABSOLUTE_FLOOR = 1e-8


@dataclass
class GradCheckResult:
    """Outcome of comparing analytic and numeric gradients for one builder"""

    max_relative_error: float
    worst_input: Optional[int] = None
    worst_index: Optional[tuple] = None
    per_input_errors: List[float] = field(default_factory=list)

    def passed(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return self.max_relative_error <= tolerance


def _relative_error(analytic: float, numeric: float) -> float:
    if abs(analytic) < ABSOLUTE_FLOOR:
        return abs(analytic - numeric)
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric))


def grad_check(
    builder: Callable[[Sequence[Tensor]], Tensor],
    inputs: Sequence[np.ndarray],
    epsilon: float = DEFAULT_EPSILON,
) -> GradCheckResult:
    """Compare backward() against central differences of a scalar-valued builder.

    ``builder`` receives one Tensor per input array and must return a scalar Tensor.
    Every element of every input is perturbed by ±epsilon.
    """
    if epsilon <= 0:
        raise UsageError(f"grad_check epsilon must be positive, got {epsilon}")
    arrays = [np.array(a, dtype=np.float64) for a in inputs]

    leaves = [Tensor(a, requires_grad=True) for a in arrays]
    loss = builder(leaves)
    if loss.size != 1:
        raise UsageError(f"grad_check builder must return a scalar, got shape {loss.shape}")
    loss.backward()
    analytic = [leaf.grad if leaf.grad is not None else np.zeros_like(leaf.data) for leaf in leaves]

    def evaluate(perturbed: List[np.ndarray]) -> float:
        with no_grad():
            return builder([Tensor(a) for a in perturbed]).item()

    result = GradCheckResult(max_relative_error=0.0)
    for position, array in enumerate(arrays):
        worst = 0.0
        for index in np.ndindex(array.shape):
            original = array[index]
            array[index] = original + epsilon
            plus = evaluate(arrays)
            array[index] = original - epsilon
            minus = evaluate(arrays)
            array[index] = original
            numeric = (plus - minus) / (2.0 * epsilon)
            error = _relative_error(float(analytic[position][index]), numeric)
            worst = max(worst, error)
            if error > result.max_relative_error:
                result.max_relative_error = error
                result.worst_input = position
                result.worst_index = index
        result.per_input_errors.append(worst)

    logger.debug(f"grad_check over {len(arrays)} inputs: max relative error {result.max_relative_error:.3e}")
    return result
