"""Differentiable operations over Tensor"""

from typing import Optional, Sequence, Tuple, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from effnet_mini.exceptions import ConfigurationError, ShapeError
from effnet_mini.tensor.tensor import Function, Tensor, TensorLike, as_tensor

ACTIVATIONS = ("relu", "sigmoid", "silu")

# Largest double below 1.0; keeps sigmoid inside the open interval (0, 1).
_SIGMOID_UPPER = float(np.nextafter(1.0, 0.0))
_SIGMOID_LOWER = float(np.finfo(np.float64).tiny)
# Within ±36 sigmoid is strictly inside (0, 1) without clamping.
_SIGMOID_SATURATION = 36.0


class Add(Function):
    def forward(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        self.shapes = (x.shape, y.shape)
        return x + y

    def backward(self, grad: np.ndarray):
        return self.unbroadcast(grad, self.shapes[0]), self.unbroadcast(grad, self.shapes[1])


class Sub(Function):
    def forward(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        self.shapes = (x.shape, y.shape)
        return x - y

    def backward(self, grad: np.ndarray):
        return self.unbroadcast(grad, self.shapes[0]), self.unbroadcast(-grad, self.shapes[1])


class Mul(Function):
    def forward(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        self.x, self.y = x, y
        return x * y

    def backward(self, grad: np.ndarray):
        return self.unbroadcast(grad * self.y, self.x.shape), self.unbroadcast(grad * self.x, self.y.shape)


class Sum(Function):
    def forward(self, x: np.ndarray, axis=None, keepdims: bool = False) -> np.ndarray:
        self.shape = x.shape
        self.axis = axis
        self.keepdims = keepdims
        return np.asarray(np.sum(x, axis=axis, keepdims=keepdims))

    def backward(self, grad: np.ndarray):
        if self.axis is not None and not self.keepdims:
            axes = (self.axis,) if isinstance(self.axis, int) else tuple(self.axis)
            axes = tuple(a % len(self.shape) for a in axes)
            grad = np.expand_dims(grad, axes)
        return (np.broadcast_to(grad, self.shape).copy(),)


class Reshape(Function):
    def forward(self, x: np.ndarray, shape: Tuple[int, ...] = ()) -> np.ndarray:
        self.shape = x.shape
        return x.reshape(shape)

    def backward(self, grad: np.ndarray):
        return (grad.reshape(self.shape),)


class Concat(Function):
    def forward(self, *arrays: np.ndarray, axis: int = 0) -> np.ndarray:
        self.axis = axis
        self.bounds = np.cumsum([a.shape[axis] for a in arrays])[:-1]
        return np.concatenate(arrays, axis=axis)

    def backward(self, grad: np.ndarray):
        return tuple(np.split(grad, self.bounds, axis=self.axis))


class Relu(Function):
    def forward(self, x: np.ndarray) -> np.ndarray:
        self.mask = x > 0
        return np.where(self.mask, x, 0.0)

    def backward(self, grad: np.ndarray):
        return (grad * self.mask,)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    e = np.abs(x)
    saturated = e.max(initial=0.0) > _SIGMOID_SATURATION
    np.negative(e, out=e)
    np.exp(e, out=e)
    out = np.where(x >= 0, 1.0, e)
    e += 1.0
    out /= e
    if saturated:
        np.clip(out, _SIGMOID_LOWER, _SIGMOID_UPPER, out=out)
    return out


class Sigmoid(Function):
    def forward(self, x: np.ndarray) -> np.ndarray:
        self.out = _sigmoid(x)
        return self.out

    def backward(self, grad: np.ndarray):
        return (grad * self.out * (1.0 - self.out),)


class Silu(Function):
    def forward(self, x: np.ndarray) -> np.ndarray:
        self.x = x
        self.s = _sigmoid(x)
        return x * self.s

    def backward(self, grad: np.ndarray):
        # s · (1 + x · (1 − s))
        d = np.subtract(1.0, self.s)
        d *= self.x
        d += 1.0
        d *= self.s
        d *= grad
        return (d,)


class ReduceMeanSpatial(Function):
    def forward(self, x: np.ndarray) -> np.ndarray:
        self.shape = x.shape
        return x.mean(axis=(2, 3), keepdims=True)

    def backward(self, grad: np.ndarray):
        n, c, h, w = self.shape
        return (np.broadcast_to(grad / (h * w), self.shape),)


class ChannelAffine(Function):
    """x · scale + shift with one scale and shift per channel of [N,C,H,W]"""

    def forward(self, x: np.ndarray, scale: np.ndarray, shift: np.ndarray) -> np.ndarray:
        self.x, self.scale = x, scale
        out = x * scale[:, None, None]
        out += shift[:, None, None]
        return out

    def backward(self, grad: np.ndarray):
        d_scale = np.einsum("nchw,nchw->c", grad, self.x)
        return grad * self.scale[:, None, None], d_scale, grad.sum(axis=(0, 2, 3))


class ChannelScale(Function):
    """Per-sample, per-channel scaling of [N,C,H,W] by weights [N,C]"""

    def forward(self, x: np.ndarray, weights: np.ndarray) -> np.ndarray:
        self.x, self.weights = x, weights
        return x * weights[:, :, None, None]

    def backward(self, grad: np.ndarray):
        return grad * self.weights[:, :, None, None], np.einsum("nchw,nchw->nc", grad, self.x)


class Dense(Function):
    def forward(self, x: np.ndarray, weights: np.ndarray, bias: Optional[np.ndarray] = None) -> np.ndarray:
        self.x, self.weights = x, weights
        out = x @ weights.T
        if bias is not None:
            out = out + bias
        return out

    def backward(self, grad: np.ndarray):
        dx = grad @ self.weights
        dw = grad.T @ self.x
        if len(self.inputs) == 3:
            return dx, dw, grad.sum(axis=0)
        return dx, dw


def _span(offset: int, stride: int, count: int) -> slice:
    return slice(offset, offset + stride * (count - 1) + 1, stride)


def _im2col(padded: np.ndarray, groups: int, kh: int, kw: int, stride: int, h_out: int, w_out: int) -> np.ndarray:
    """Columns [N, groups, (Cin/groups)·kh·kw, H'·W'] with rows ordered (channel, kh, kw)"""
    n, c_in = padded.shape[:2]
    c_group_in = c_in // groups
    if kh == 1 and kw == 1 and stride == 1:
        return padded.reshape(n, groups, c_group_in, h_out * w_out)
    windows = sliding_window_view(padded, (kh, kw), axis=(2, 3))[:, :, ::stride, ::stride]
    windows = windows.reshape(n, groups, c_group_in, h_out, w_out, kh, kw)
    return windows.transpose(0, 1, 2, 5, 6, 3, 4).reshape(n, groups, c_group_in * kh * kw, h_out * w_out)


def _col2im(
    d_cols: np.ndarray, padded_shape: Tuple[int, ...], kh: int, kw: int, stride: int, h_out: int, w_out: int
) -> np.ndarray:
    """Scatter-add column gradients back onto the padded input"""
    n, c_in = padded_shape[:2]
    if kh == 1 and kw == 1 and stride == 1:
        return d_cols.reshape(padded_shape)
    d_cols = d_cols.reshape(n, c_in, kh, kw, h_out, w_out)
    d_padded = np.zeros(padded_shape)
    for i in range(kh):
        for j in range(kw):
            d_padded[:, :, _span(i, stride, h_out), _span(j, stride, w_out)] += d_cols[:, :, i, j]
    return d_padded


class Conv2d(Function):
    """Grouped 2-D cross-correlation.

    Depthwise kernels accumulate offset by offset (row-major over kh, kw). Every other
    grouping is one matmul per group against im2col columns, so the summation order
    is fixed for a given shape.
    """

    def forward(self, x: np.ndarray, kernel: np.ndarray, stride: int = 1, padding: int = 0, groups: int = 1):
        n, c_in, h, w = x.shape
        c_out, c_group_in, kh, kw = kernel.shape
        h_out = (h + 2 * padding - kh) // stride + 1
        w_out = (w + 2 * padding - kw) // stride + 1

        padded = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding))) if padding else x
        self.geometry = (x.shape, padded.shape, stride, padding, groups, h_out, w_out)
        self.kernel = kernel
        self.depthwise = c_group_in == 1 and c_out == groups
        if self.depthwise:
            self.padded = padded
            out = np.zeros((n, c_out, h_out, w_out))
            product = np.empty_like(out)
            for i in range(kh):
                for j in range(kw):
                    window = padded[:, :, _span(i, stride, h_out), _span(j, stride, w_out)]
                    np.multiply(window, kernel[:, 0, i, j, None, None], out=product)
                    out += product
            return out

        self.cols = _im2col(padded, groups, kh, kw, stride, h_out, w_out)
        weights = kernel.reshape(groups, c_out // groups, -1)
        return np.matmul(weights, self.cols).reshape(n, c_out, h_out, w_out)

    def backward(self, grad: np.ndarray):
        (n, c_in, h, w), padded_shape, stride, padding, groups, h_out, w_out = self.geometry
        kernel = self.kernel
        c_out, _, kh, kw = kernel.shape

        if self.depthwise:
            d_padded = np.zeros(padded_shape)
            d_kernel = np.zeros(kernel.shape)
            for i in range(kh):
                for j in range(kw):
                    rows, cols = _span(i, stride, h_out), _span(j, stride, w_out)
                    d_kernel[:, 0, i, j] = np.einsum("nchw,nchw->c", grad, self.padded[:, :, rows, cols])
                    d_padded[:, :, rows, cols] += grad * kernel[:, 0, i, j, None, None]
        else:
            grad_out = grad.reshape(n, groups, c_out // groups, h_out * w_out)
            weights = kernel.reshape(groups, c_out // groups, -1)
            d_kernel = np.matmul(grad_out, self.cols.transpose(0, 1, 3, 2)).sum(axis=0).reshape(kernel.shape)
            d_cols = np.matmul(weights.transpose(0, 2, 1), grad_out)
            d_padded = _col2im(d_cols, padded_shape, kh, kw, stride, h_out, w_out)

        dx = d_padded[:, :, padding : padding + h, padding : padding + w] if padding else d_padded
        return dx, d_kernel


class BinaryCrossEntropyWithLogits(Function):
    """Mean binary cross-entropy on raw logits, in the log-sum-exp stable form"""

    def forward(self, logits: np.ndarray, targets: np.ndarray) -> np.ndarray:
        self.logits, self.targets = logits, targets
        losses = np.maximum(logits, 0.0) - logits * targets + np.log1p(np.exp(-np.abs(logits)))
        return np.asarray(losses.mean())

    def backward(self, grad: np.ndarray):
        return grad * (_sigmoid(self.logits) - self.targets) / self.logits.size, None


def conv2d(input: Tensor, kernel: Tensor, stride: int = 1, padding: int = 0, groups: int = 1) -> Tensor:
    """Cross-correlate input [N,Cin,H,W] with kernel [Cout,Cin/groups,kh,kw]"""
    if stride <= 0:
        raise ConfigurationError(f"conv2d stride must be positive, got {stride}")
    if groups <= 0:
        raise ConfigurationError(f"conv2d groups must be positive, got {groups}")
    if padding < 0:
        raise ConfigurationError(f"conv2d padding must be non-negative, got {padding}")
    input, kernel = as_tensor(input), as_tensor(kernel)
    if input.ndim != 4:
        raise ShapeError(f"conv2d input must be [N,Cin,H,W], got {input.shape}")
    if kernel.ndim != 4:
        raise ShapeError(f"conv2d kernel must be [Cout,Cin/groups,kh,kw], got {kernel.shape}")
    n, c_in, h, w = input.shape
    c_out, c_group_in, kh, kw = kernel.shape
    if c_in % groups:
        raise ShapeError(f"conv2d input channels Cin={c_in} are not divisible by groups={groups}")
    if c_out % groups:
        raise ShapeError(f"conv2d output channels Cout={c_out} are not divisible by groups={groups}")
    if c_group_in != c_in // groups:
        raise ShapeError(f"conv2d kernel dimension 1 is {c_group_in}, expected Cin/groups={c_in // groups}")
    h_out = (h + 2 * padding - kh) // stride + 1
    w_out = (w + 2 * padding - kw) // stride + 1
    if h_out < 1:
        raise ShapeError(f"conv2d output height is {h_out} for H={h}, kh={kh}, padding={padding}, stride={stride}")
    if w_out < 1:
        raise ShapeError(f"conv2d output width is {w_out} for W={w}, kw={kw}, padding={padding}, stride={stride}")
    return Conv2d.apply(input, kernel, stride=stride, padding=padding, groups=groups)


def activation(x: TensorLike, kind: str) -> Tensor:
    """Elementwise relu, sigmoid or silu"""
    if kind == "relu":
        return Relu.apply(x)
    if kind == "sigmoid":
        return Sigmoid.apply(x)
    if kind == "silu":
        return Silu.apply(x)
    raise ConfigurationError(f"Unknown activation '{kind}', expected one of {ACTIVATIONS}")


def relu(x: TensorLike) -> Tensor:
    return Relu.apply(x)


def sigmoid(x: TensorLike) -> Tensor:
    return Sigmoid.apply(x)


def silu(x: TensorLike) -> Tensor:
    return Silu.apply(x)


def reduce_mean_spatial(x: TensorLike) -> Tensor:
    """Mean over each H×W plane: [N,C,H,W] -> [N,C,1,1]"""
    x = as_tensor(x)
    if x.ndim != 4:
        raise ShapeError(f"reduce_mean_spatial expects [N,C,H,W], got {x.shape}")
    if x.shape[2] < 1 or x.shape[3] < 1:
        raise ShapeError(f"reduce_mean_spatial needs H,W >= 1, got {x.shape}")
    return ReduceMeanSpatial.apply(x)


def dense(x: TensorLike, weights: TensorLike, bias: Optional[TensorLike] = None) -> Tensor:
    """Affine map x @ weights.T + bias for x [N,Din], weights [Dout,Din], bias [Dout]"""
    x, weights = as_tensor(x), as_tensor(weights)
    if x.ndim != 2:
        raise ShapeError(f"dense input must be [N,Din], got {x.shape}")
    if weights.ndim != 2:
        raise ShapeError(f"dense weights must be [Dout,Din], got {weights.shape}")
    if x.shape[1] != weights.shape[1]:
        raise ShapeError(f"dense input width Din={x.shape[1]} does not match weights Din={weights.shape[1]}")
    if bias is None:
        return Dense.apply(x, weights)
    bias = as_tensor(bias)
    if bias.shape != (weights.shape[0],):
        raise ShapeError(f"dense bias must have shape ({weights.shape[0]},), got {bias.shape}")
    return Dense.apply(x, weights, bias)


def reshape(x: TensorLike, shape: Sequence[int]) -> Tensor:
    return Reshape.apply(x, shape=tuple(shape))


def tensor_sum(x: TensorLike, axis: Optional[Union[int, Tuple[int, ...]]] = None, keepdims: bool = False) -> Tensor:
    return Sum.apply(x, axis=axis, keepdims=keepdims)


def concat(tensors: Sequence[TensorLike], axis: int = 0) -> Tensor:
    if not tensors:
        raise ShapeError("concat needs at least one tensor")
    return Concat.apply(*tensors, axis=axis)


def binary_cross_entropy_with_logits(logits: TensorLike, targets: TensorLike) -> Tensor:
    """Mean BCE of sigmoid(logits) against 0/1 targets of the same shape"""
    logits, targets = as_tensor(logits), as_tensor(targets)
    if logits.shape != targets.shape:
        raise ShapeError(f"logits shape {logits.shape} does not match targets shape {targets.shape}")
    return BinaryCrossEntropyWithLogits.apply(logits, targets)


def channel_affine(x: TensorLike, scale: TensorLike, shift: TensorLike) -> Tensor:
    """x [N,C,H,W] times scale [C] plus shift [C], channel by channel"""
    x, scale, shift = as_tensor(x), as_tensor(scale), as_tensor(shift)
    if x.ndim != 4:
        raise ShapeError(f"channel_affine input must be [N,C,H,W], got {x.shape}")
    channels = x.shape[1]
    if scale.shape != (channels,) or shift.shape != (channels,):
        raise ShapeError(
            f"channel_affine scale and shift must have shape ({channels},), got {scale.shape} and {shift.shape}"
        )
    return ChannelAffine.apply(x, scale, shift)


def channel_scale(x: TensorLike, weights: TensorLike) -> Tensor:
    """Multiply each [H,W] plane of x [N,C,H,W] by weights[n, c]"""
    x, weights = as_tensor(x), as_tensor(weights)
    if x.ndim != 4:
        raise ShapeError(f"channel_scale input must be [N,C,H,W], got {x.shape}")
    if weights.shape != x.shape[:2]:
        raise ShapeError(f"channel_scale weights must be {list(x.shape[:2])}, got {list(weights.shape)}")
    return ChannelScale.apply(x, weights)
