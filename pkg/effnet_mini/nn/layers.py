"""Trainable layers: convolution, per-channel affine stabilizer, dense"""

import math

import numpy as np

from effnet_mini.exceptions import ConfigurationError
from effnet_mini.nn.module import Module, Parameter
from effnet_mini.tensor import Tensor, channel_affine, conv2d, dense


def _uniform_fan_in(rng: np.random.Generator, shape, fan_in: int) -> np.ndarray:
    bound = math.sqrt(1.0 / fan_in)
    return rng.uniform(-bound, bound, size=shape)


class Conv2d(Module):
    """Bias-free grouped convolution"""

    def __init__(
        self, in_channels: int, out_channels: int, kernel_size: int, stride: int = 1, padding: int = 0, groups: int = 1
    ):
        super().__init__()
        if in_channels % groups or out_channels % groups:
            raise ConfigurationError(
                f"Conv2d channels {in_channels}->{out_channels} are not divisible by groups={groups}"
            )
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.kernel_size = kernel_size
        self.stride = stride
        self.padding = padding
        self.groups = groups
        self.weight = Parameter(np.zeros((out_channels, in_channels // groups, kernel_size, kernel_size)))

    @property
    def fan_in(self) -> int:
        return (self.in_channels // self.groups) * self.kernel_size * self.kernel_size

    def reset_parameters(self, rng: np.random.Generator) -> None:
        self.weight.update(_uniform_fan_in(rng, self.weight.shape, self.fan_in))

    def forward(self, x: Tensor) -> Tensor:
        return conv2d(x, self.weight, stride=self.stride, padding=self.padding, groups=self.groups)


class ChannelAffine(Module):
    """Learnable per-channel scale and shift used in place of batch normalization.

    Starts at the identity (scale 1, shift 0) so a freshly initialized block passes its
    convolution output through unchanged.
    """

    def __init__(self, channels: int):
        super().__init__()
        self.channels = channels
        self.scale = Parameter(np.ones(channels))
        self.shift = Parameter(np.zeros(channels))

    def reset_parameters(self, rng: np.random.Generator) -> None:
        self.scale.update(np.ones(self.channels))
        self.shift.update(np.zeros(self.channels))

    def forward(self, x: Tensor) -> Tensor:
        return channel_affine(x, self.scale, self.shift)


class Dense(Module):
    """Fully connected layer, weights stored as [out_features, in_features]"""

    def __init__(self, in_features: int, out_features: int, bias: bool = True):
        super().__init__()
        self.in_features = in_features
        self.out_features = out_features
        self.weight = Parameter(np.zeros((out_features, in_features)))
        self.bias = Parameter(np.zeros(out_features)) if bias else None

    def reset_parameters(self, rng: np.random.Generator) -> None:
        self.weight.update(_uniform_fan_in(rng, self.weight.shape, self.in_features))
        if self.bias is not None:
            self.bias.update(_uniform_fan_in(rng, self.bias.shape, self.in_features))

    def forward(self, x: Tensor) -> Tensor:
        return dense(x, self.weight, self.bias)
