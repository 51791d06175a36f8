"""Squeeze-and-excitation, MBConv and the feature-fusion head"""

from typing import List, Optional, Sequence

from effnet_mini.exceptions import ConfigurationError, ShapeError
from effnet_mini.nn.layers import ChannelAffine, Conv2d, Dense
from effnet_mini.nn.module import Module, ModuleList
from effnet_mini.tensor import Tensor, activation, channel_scale, concat, dense, reduce_mean_spatial

DEFAULT_SE_REDUCTION = 4


class SEBlock(Module):
    """Channel attention: two bias-free dense layers over the squeezed channel means"""

    def __init__(self, channels: int, reduction_ratio: int = DEFAULT_SE_REDUCTION):
        super().__init__()
        if reduction_ratio <= 0 or channels % reduction_ratio:
            raise ConfigurationError(f"SE channels {channels} are not divisible by reduction ratio {reduction_ratio}")
        self.channels = channels
        self.reduction_ratio = reduction_ratio
        self.reduce = Dense(channels, channels // reduction_ratio, bias=False)
        self.expand = Dense(channels // reduction_ratio, channels, bias=False)

    def forward(self, features: Tensor) -> Tensor:
        return se_scale(features, excite(squeeze(features), self))


def squeeze(features: Tensor) -> Tensor:
    """Per-channel global average: [N,C,H,W] -> [N,C]"""
    pooled = reduce_mean_spatial(features)
    return pooled.reshape(pooled.shape[0], pooled.shape[1])


def excite(squeezed: Tensor, se: SEBlock) -> Tensor:
    """Channel weights sigmoid(W2 · relu(W1 · Z)), each strictly inside (0, 1)"""
    if squeezed.ndim != 2 or squeezed.shape[1] != se.channels:
        raise ShapeError(f"excite expects [N,{se.channels}], got {squeezed.shape}")
    hidden = activation(dense(squeezed, se.reduce.weight), "relu")
    return activation(dense(hidden, se.expand.weight), "sigmoid")


def se_scale(features: Tensor, weights: Tensor) -> Tensor:
    """Multiply each channel plane of features by its weight"""
    if features.ndim != 4:
        raise ShapeError(f"se_scale features must be [N,C,H,W], got {features.shape}")
    n, c = features.shape[0], features.shape[1]
    if weights.shape != (n, c):
        raise ShapeError(f"se_scale weights must be [{n},{c}] to match features, got {weights.shape}")
    return channel_scale(features, weights)


class MBConvBlock(Module):
    """Mobile inverted bottleneck: expand 1×1, depthwise k×k, internal SE, project 1×1.

    Each convolution is followed by a ChannelAffine stabilizer; expand and depthwise
    outputs pass through SiLU. The expand stage is omitted when the expansion ratio is 1.
    """

    def __init__(
        self,
        in_channels: int,
        out_channels: int,
        expansion_ratio: int,
        kernel_size: int,
        stride: int,
        se_reduction: Optional[int] = DEFAULT_SE_REDUCTION,
    ):
        super().__init__()
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.expansion_ratio = expansion_ratio
        self.kernel_size = kernel_size
        self.stride = stride
        hidden = in_channels * expansion_ratio
        self.hidden_channels = hidden

        if expansion_ratio != 1:
            self.expand_conv = Conv2d(in_channels, hidden, 1)
            self.expand_affine = ChannelAffine(hidden)
        self.depthwise_conv = Conv2d(
            hidden, hidden, kernel_size, stride=stride, padding=kernel_size // 2, groups=hidden
        )
        self.depthwise_affine = ChannelAffine(hidden)
        self.se = SEBlock(hidden, se_reduction) if se_reduction else None
        self.project_conv = Conv2d(hidden, out_channels, 1)
        self.project_affine = ChannelAffine(out_channels)

    @property
    def has_skip(self) -> bool:
        return self.stride == 1 and self.in_channels == self.out_channels

    def forward(self, x: Tensor) -> Tensor:
        return mbconv_forward(x, self)


def mbconv_forward(x: Tensor, block: MBConvBlock) -> Tensor:
    if x.ndim != 4 or x.shape[1] != block.in_channels:
        raise ShapeError(f"MBConv expects {block.in_channels} input channels, got shape {x.shape}")
    out = x
    if block.expansion_ratio != 1:
        out = activation(block.expand_affine(block.expand_conv(out)), "silu")
    out = activation(block.depthwise_affine(block.depthwise_conv(out)), "silu")
    if block.se is not None:
        out = block.se(out)
    out = block.project_affine(block.project_conv(out))
    if block.has_skip:
        out = out + x
    return out


class FusionHead(Module):
    """Per-tap attention blocks for fusing intermediate features with the final map"""

    def __init__(
        self,
        tap_channels: Sequence[int],
        final_channels: int,
        attention: bool,
        reduction_ratio: int = DEFAULT_SE_REDUCTION,
    ):
        super().__init__()
        self.tap_channels = list(tap_channels)
        self.final_channels = final_channels
        self.attention = attention
        self.tap_attention = ModuleList(SEBlock(c, reduction_ratio) for c in self.tap_channels) if attention else None

    @property
    def output_width(self) -> int:
        return sum(self.tap_channels) + self.final_channels

    def forward(self, taps: List[Tensor], final: Tensor) -> Tensor:
        return fuse_features(taps, final, self, self.attention)


def fuse_features(taps: List[Tensor], final: Tensor, head: FusionHead, attention: bool) -> Tensor:
    """Attend to each tap (optional), pool every map to a vector, concatenate taps then final"""
    if len(taps) != len(head.tap_channels):
        raise ConfigurationError(f"Fusion head expects {len(head.tap_channels)} taps, got {len(taps)}")
    if attention and head.tap_attention is None:
        raise ConfigurationError("Fusion head was built without attention blocks")
    for index, (tap, channels) in enumerate(zip(taps, head.tap_channels)):
        if tap.ndim != 4 or tap.shape[1] != channels:
            raise ShapeError(f"Tap {index} must have {channels} channels, got shape {tap.shape}")

    vectors = []
    for index, tap in enumerate(taps):
        if attention:
            tap = head.tap_attention[index](tap)
        vectors.append(squeeze(tap))
    vectors.append(squeeze(final))
    return concat(vectors, axis=1)
