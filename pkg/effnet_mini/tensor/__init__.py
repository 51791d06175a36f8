from effnet_mini.tensor.functional import (
    ACTIVATIONS,
    activation,
    binary_cross_entropy_with_logits,
    channel_affine,
    channel_scale,
    concat,
    conv2d,
    dense,
    reduce_mean_spatial,
    relu,
    reshape,
    sigmoid,
    silu,
    tensor_sum,
)
from effnet_mini.tensor.grad_check import GradCheckResult, grad_check
from effnet_mini.tensor.tensor import (
    Function,
    GraphNode,
    Tensor,
    as_tensor,
    describe_graph,
    is_grad_enabled,
    no_grad,
)

__all__ = [
    "ACTIVATIONS",
    "Function",
    "GradCheckResult",
    "GraphNode",
    "Tensor",
    "activation",
    "as_tensor",
    "binary_cross_entropy_with_logits",
    "channel_affine",
    "channel_scale",
    "concat",
    "conv2d",
    "dense",
    "describe_graph",
    "grad_check",
    "is_grad_enabled",
    "no_grad",
    "reduce_mean_spatial",
    "relu",
    "reshape",
    "sigmoid",
    "silu",
    "tensor_sum",
]
