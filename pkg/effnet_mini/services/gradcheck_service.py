import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from effnet_mini.exceptions import UsageError
from effnet_mini.nn.blocks import se_scale
from effnet_mini.tensor import (
    Tensor,
    activation,
    binary_cross_entropy_with_logits,
    channel_affine,
    channel_scale,
    concat,
    conv2d,
    dense,
    grad_check,
    reduce_mean_spatial,
)
from effnet_mini.tensor.grad_check import DEFAULT_TOLERANCE
from effnet_mini.utils.rng import substream

Builder = Callable[[Sequence[Tensor]], Tensor]
Case = Tuple[Builder, List[np.ndarray]]

DEFAULT_INSTANCES = 100


def _away_from_zero(rng: np.random.Generator, shape, margin: float = 0.1) -> np.ndarray:
    values = rng.normal(size=shape)
    return np.sign(values) * (margin + np.abs(values))


def _elementwise_case(kind: str) -> Callable[[np.random.Generator], Case]:
    def case(rng: np.random.Generator) -> Case:
        x = _away_from_zero(rng, (3, 5)) if kind == "relu" else rng.normal(size=(3, 5)) * 2.0
        projection = rng.normal(size=(3, 5))
        return (lambda t: (activation(t[0], kind) * projection).sum()), [x]

    return case


def _binary_case(op: Callable[[Tensor, Tensor], Tensor]) -> Callable[[np.random.Generator], Case]:
    def case(rng: np.random.Generator) -> Case:
        x = rng.normal(size=(3, 4))
        y = rng.normal(size=(4,))
        projection = rng.normal(size=(3, 4))
        return (lambda t: (op(t[0], t[1]) * projection).sum()), [x, y]

    return case


def _conv2d_case(rng: np.random.Generator) -> Case:
    groups = int(rng.choice([1, 2]))
    c_in, c_out = 2 * groups, 2 * int(rng.integers(1, 3))
    stride = int(rng.integers(1, 3))
    padding = int(rng.integers(0, 2))
    size = int(rng.integers(4, 7))
    x = rng.normal(size=(2, c_in, size, size))
    kernel = rng.normal(size=(c_out, c_in // groups, 3, 3))
    out_side = (size + 2 * padding - 3) // stride + 1
    projection = rng.normal(size=(2, c_out, out_side, out_side))
    return (
        lambda t: (conv2d(t[0], t[1], stride=stride, padding=padding, groups=groups) * projection).sum()
    ), [x, kernel]


def _depthwise_case(rng: np.random.Generator) -> Case:
    channels = int(rng.integers(2, 5))
    stride = int(rng.integers(1, 3))
    x = rng.normal(size=(1, channels, 6, 6))
    kernel = rng.normal(size=(channels, 1, 3, 3))
    out_side = (6 + 2 - 3) // stride + 1
    projection = rng.normal(size=(1, channels, out_side, out_side))
    return (
        lambda t: (conv2d(t[0], t[1], stride=stride, padding=1, groups=channels) * projection).sum()
    ), [x, kernel]


def _pointwise_case(rng: np.random.Generator) -> Case:
    x = rng.normal(size=(2, 3, 4, 4))
    kernel = rng.normal(size=(5, 3, 1, 1))
    projection = rng.normal(size=(2, 5, 4, 4))
    return (lambda t: (conv2d(t[0], t[1]) * projection).sum()), [x, kernel]


def _channel_affine_case(rng: np.random.Generator) -> Case:
    x = rng.normal(size=(2, 3, 4, 4))
    scale = rng.normal(size=(3,))
    shift = rng.normal(size=(3,))
    projection = rng.normal(size=(2, 3, 4, 4))
    return (lambda t: (channel_affine(t[0], t[1], t[2]) * projection).sum()), [x, scale, shift]


def _channel_scale_case(rng: np.random.Generator) -> Case:
    x = rng.normal(size=(2, 3, 4, 4))
    weights = rng.normal(size=(2, 3))
    projection = rng.normal(size=(2, 3, 4, 4))
    return (lambda t: (channel_scale(t[0], t[1]) * projection).sum()), [x, weights]


def _reduce_mean_case(rng: np.random.Generator) -> Case:
    x = rng.normal(size=(2, 3, 4, 5))
    projection = rng.normal(size=(2, 3, 1, 1))
    return (lambda t: (reduce_mean_spatial(t[0]) * projection).sum()), [x]


def _dense_case(rng: np.random.Generator) -> Case:
    x = rng.normal(size=(4, 6))
    weights = rng.normal(size=(3, 6))
    bias = rng.normal(size=(3,))
    projection = rng.normal(size=(4, 3))
    return (lambda t: (dense(t[0], t[1], t[2]) * projection).sum()), [x, weights, bias]


def _sum_case(rng: np.random.Generator) -> Case:
    x = rng.normal(size=(3, 4, 2))
    projection = rng.normal(size=(3, 2))
    return (lambda t: (t[0].sum(axis=1) * projection).sum()), [x]


def _reshape_case(rng: np.random.Generator) -> Case:
    x = rng.normal(size=(2, 6))
    projection = rng.normal(size=(3, 4))
    return (lambda t: (t[0].reshape(3, 4) * projection).sum()), [x]


def _concat_case(rng: np.random.Generator) -> Case:
    a = rng.normal(size=(2, 3))
    b = rng.normal(size=(2, 2))
    projection = rng.normal(size=(2, 5))
    return (lambda t: (concat([t[0], t[1]], axis=1) * projection).sum()), [a, b]


def _bce_case(rng: np.random.Generator) -> Case:
    logits = rng.normal(size=(8, 1)) * 2.0
    targets = rng.integers(0, 2, size=(8, 1)).astype(np.float64)
    return (lambda t: binary_cross_entropy_with_logits(t[0], targets)), [logits]


def _se_block_case(rng: np.random.Generator) -> Case:
    features = rng.normal(size=(1, 4, 6, 6))
    reduce = rng.normal(size=(1, 4))
    expand = rng.normal(size=(4, 1))
    projection = rng.normal(size=(1, 4, 6, 6))

    def builder(t: Sequence[Tensor]) -> Tensor:
        squeezed = reduce_mean_spatial(t[0]).reshape(1, 4)
        weights = activation(dense(activation(dense(squeezed, t[1]), "relu"), t[2]), "sigmoid")
        return (se_scale(t[0], weights) * projection).sum()

    return builder, [features, reduce, expand]


OP_CASES: Dict[str, Callable[[np.random.Generator], Case]] = {
    "add": _binary_case(lambda a, b: a + b),
    "sub": _binary_case(lambda a, b: a - b),
    "mul": _binary_case(lambda a, b: a * b),
    "sum": _sum_case,
    "reshape": _reshape_case,
    "concat": _concat_case,
    "relu": _elementwise_case("relu"),
    "sigmoid": _elementwise_case("sigmoid"),
    "silu": _elementwise_case("silu"),
    "conv2d": _conv2d_case,
    "conv2d_depthwise": _depthwise_case,
    "conv2d_pointwise": _pointwise_case,
    "channel_affine": _channel_affine_case,
    "channel_scale": _channel_scale_case,
    "reduce_mean_spatial": _reduce_mean_case,
    "dense": _dense_case,
    "bce_with_logits": _bce_case,
    "se_block": _se_block_case,
}


@dataclass
class GradcheckOutcome:
    """Worst relative error of one op over its random instances"""

    name: str
    instances: int
    max_relative_error: float
    tolerance: float = DEFAULT_TOLERANCE

    @property
    def passed(self) -> bool:
        return self.max_relative_error <= self.tolerance


class GradcheckService:
    """Service for checking every differentiable op against central finite differences"""

    def __init__(self, seed: int = 0, tolerance: float = DEFAULT_TOLERANCE):
        self.seed = seed
        self.tolerance = tolerance
        self.logger = logging.getLogger("effnet_mini.services.GradcheckService")

    @staticmethod
    def op_names() -> List[str]:
        return list(OP_CASES)

    def check(self, name: str, instances: int = DEFAULT_INSTANCES) -> GradcheckOutcome:
        if name not in OP_CASES:
            raise UsageError(f"Unknown op '{name}', expected one of {', '.join(OP_CASES)}")
        if instances < 1:
            raise UsageError(f"instances must be >= 1, got {instances}")
        op_index = list(OP_CASES).index(name)
        worst = 0.0
        for instance in range(instances):
            rng = substream(self.seed, (op_index << 32) | instance)
            builder, inputs = OP_CASES[name](rng)
            worst = max(worst, grad_check(builder, inputs).max_relative_error)
        outcome = GradcheckOutcome(name, instances, worst, self.tolerance)
        log = self.logger.info if outcome.passed else self.logger.error
        log(f"gradcheck {name}: max relative error {worst:.3e} over {instances} instances")
        return outcome

    def run(self, names: Optional[Sequence[str]] = None, instances: int = DEFAULT_INSTANCES) -> List[GradcheckOutcome]:
        return [self.check(name, instances) for name in (names or self.op_names())]
