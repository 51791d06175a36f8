"""Dense float64 tensors with reverse-mode automatic differentiation"""

import logging
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from effnet_mini.exceptions import NumericalError, UsageError

logger = logging.getLogger(__name__)

_GRAD_ENABLED = True


@contextmanager
def no_grad() -> Iterator[None]:
    """Disable graph recording inside the block (inference and finite differences)"""
    global _GRAD_ENABLED
    previous = _GRAD_ENABLED
    _GRAD_ENABLED = False
    try:
        yield
    finally:
        _GRAD_ENABLED = previous


def is_grad_enabled() -> bool:
    """Whether operations are currently being recorded"""
    return _GRAD_ENABLED


class Function:
    """A recorded operation: one node of the computation graph.

    Subclasses implement ``forward`` on raw arrays and ``backward``, which maps the
    gradient of the output to one gradient (or None) per input. Arrays needed by
    ``backward`` are kept on the instance during ``forward``.
    """

    def __init__(self, *inputs: "Tensor"):
        self.inputs: Tuple["Tensor", ...] = inputs

    @property
    def kind(self) -> str:
        """Name of the operation"""
        return type(self).__name__

    def forward(self, *args: np.ndarray, **kwargs: Any) -> np.ndarray:
        raise NotImplementedError(f"{self.kind} has no forward pass")

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        raise NotImplementedError(f"{self.kind} has no backward pass")

    @classmethod
    def apply(cls, *inputs: "TensorLike", **kwargs: Any) -> "Tensor":
        """Run the forward pass and record the node when any input requires grad"""
        tensors = tuple(as_tensor(t) for t in inputs)
        function = cls(*tensors)
        out_data = function.forward(*(t.data for t in tensors), **kwargs)
        if not all_finite(out_data):
            raise NumericalError(f"{function.kind} produced non-finite values")
        requires_grad = _GRAD_ENABLED and any(t.requires_grad for t in tensors)
        if not requires_grad:
            return Tensor._wrap(out_data)
        return Tensor._wrap(out_data, requires_grad=True, creator=function)

    @staticmethod
    def unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
        """Sum out the axes numpy broadcasting added so grad matches shape"""
        if grad.shape == shape:
            return grad
        while grad.ndim > len(shape):
            grad = grad.sum(axis=0)
        for axis, extent in enumerate(shape):
            if extent == 1 and grad.shape[axis] != 1:
                grad = grad.sum(axis=axis, keepdims=True)
        return grad


class Tensor:
    """An N-dimensional float64 array that can take part in a recorded graph.

    The array is read-only once created. Leaf tensors with ``requires_grad`` receive
    their total derivative in ``grad`` after ``backward``; gradients on leaves
    accumulate across graphs until reset with ``zero_grad``.
    """

    def __init__(self, data: Any, requires_grad: bool = False):
        array = np.array(data, dtype=np.float64)
        array.flags.writeable = False
        self.data: np.ndarray = array
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None
        self._creator: Optional[Function] = None
        self._released = False

    @classmethod
    def _wrap(cls, array: np.ndarray, requires_grad: bool = False, creator: Optional[Function] = None) -> "Tensor":
        """Wrap an op result without copying"""
        tensor = cls.__new__(cls)
        array = np.asarray(array, dtype=np.float64)
        array.flags.writeable = False
        tensor.data = array
        tensor.requires_grad = requires_grad
        tensor.grad = None
        tensor._creator = creator
        tensor._released = False
        return tensor

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return int(self.data.size)

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def is_leaf(self) -> bool:
        return self._creator is None

    def item(self) -> float:
        if self.data.size != 1:
            raise UsageError(f"item() needs a single-element tensor, got shape {self.shape}")
        return float(self.data.reshape(()))

    def numpy(self) -> np.ndarray:
        return self.data

    def zero_grad(self) -> None:
        self.grad = None

    def detach(self) -> "Tensor":
        return Tensor._wrap(self.data)

    def _accumulate(self, grad: np.ndarray) -> None:
        if grad.shape != self.shape:
            grad = Function.unbroadcast(grad, self.shape)
        if self.grad is None:
            # leaf gradients are private copies; graph-internal ones may be read-only views
            self.grad = grad.copy() if self._creator is None else grad
        else:
            self.grad = self.grad + grad

    def backward(self) -> None:
        """Populate ``grad`` on every requires_grad tensor this scalar depends on.

        A graph can be consumed once; calling backward again on it raises UsageError.
        """
        if self.data.size != 1:
            raise UsageError(f"backward() needs a scalar loss, got shape {self.shape}")
        if self._released:
            raise UsageError("backward() was already called on this graph")
        if self._creator is None:
            raise UsageError("backward() needs a tensor produced by a recorded graph")

        order = topological_order(self)
        logger.debug(f"Backward pass over {len(order)} tensors")
        self.grad = np.ones_like(self.data)
        for tensor in reversed(order):
            creator = tensor._creator
            if creator is None:
                continue
            grads = creator.backward(tensor.grad)
            for parent, grad in zip(creator.inputs, grads):
                if grad is None or not parent.requires_grad:
                    continue
                parent._accumulate(grad)

        for tensor in order:
            if tensor._creator is not None:
                tensor._creator = None
                tensor._released = True

    def reshape(self, *shape: int) -> "Tensor":
        from effnet_mini.tensor import functional

        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return functional.reshape(self, shape)

    def sum(self, axis: Optional[Union[int, Tuple[int, ...]]] = None, keepdims: bool = False) -> "Tensor":
        from effnet_mini.tensor import functional

        return functional.tensor_sum(self, axis=axis, keepdims=keepdims)

    def mean(self) -> "Tensor":
        return self.sum() * (1.0 / self.size)

    def __add__(self, other: "TensorLike") -> "Tensor":
        from effnet_mini.tensor.functional import Add

        return Add.apply(self, other)

    def __radd__(self, other: "TensorLike") -> "Tensor":
        from effnet_mini.tensor.functional import Add

        return Add.apply(other, self)

    def __sub__(self, other: "TensorLike") -> "Tensor":
        from effnet_mini.tensor.functional import Sub

        return Sub.apply(self, other)

    def __rsub__(self, other: "TensorLike") -> "Tensor":
        from effnet_mini.tensor.functional import Sub

        return Sub.apply(other, self)

    def __mul__(self, other: "TensorLike") -> "Tensor":
        from effnet_mini.tensor.functional import Mul

        return Mul.apply(self, other)

    def __rmul__(self, other: "TensorLike") -> "Tensor":
        from effnet_mini.tensor.functional import Mul

        return Mul.apply(other, self)

    def __neg__(self) -> "Tensor":
        return self * -1.0

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"


TensorLike = Union[Tensor, np.ndarray, float, int, Sequence[float]]


def all_finite(array: np.ndarray) -> bool:
    """True when no element is NaN or infinite"""
    with np.errstate(over="ignore", invalid="ignore"):
        total = np.sum(array)
    # a finite sum rules out NaN and Inf; an overflowing one needs the elementwise test
    return bool(np.isfinite(total)) or bool(np.isfinite(array).all())


def as_tensor(value: TensorLike) -> Tensor:
    """Return value unchanged if it is a Tensor, else wrap it as a constant"""
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def topological_order(root: Tensor) -> List[Tensor]:
    """Tensors reachable from root that require grad, inputs before consumers"""
    order: List[Tensor] = []
    visited = set()
    stack = [(root, False)]
    while stack:
        node, children_done = stack.pop()
        if id(node) in visited:
            continue
        if children_done:
            visited.add(id(node))
            order.append(node)
            continue
        stack.append((node, True))
        if node._creator is not None:
            for parent in reversed(node._creator.inputs):
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
    return order


@dataclass(frozen=True)
class GraphNode:
    """Read-only description of one recorded operation"""

    node_id: int
    kind: str
    input_ids: Tuple[int, ...]
    shape: Tuple[int, ...]


def describe_graph(root: Tensor) -> List[GraphNode]:
    """List the recorded operations behind root in topological order (leaves have kind 'leaf')"""
    order = topological_order(root)
    ids = {id(tensor): index for index, tensor in enumerate(order)}
    nodes = []
    for index, tensor in enumerate(order):
        if tensor._creator is None:
            nodes.append(GraphNode(index, "leaf", (), tensor.shape))
        else:
            inputs = tuple(ids[id(t)] for t in tensor._creator.inputs if id(t) in ids)
            nodes.append(GraphNode(index, tensor._creator.kind, inputs, tensor.shape))
    return nodes
