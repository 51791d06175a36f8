from effnet_mini.nn.blocks import (
    DEFAULT_SE_REDUCTION,
    FusionHead,
    MBConvBlock,
    SEBlock,
    excite,
    fuse_features,
    mbconv_forward,
    se_scale,
    squeeze,
)
from effnet_mini.nn.layers import ChannelAffine, Conv2d, Dense
from effnet_mini.nn.module import Module, ModuleList, Parameter
from effnet_mini.nn.optim import Adam

__all__ = [
    "DEFAULT_SE_REDUCTION",
    "Adam",
    "ChannelAffine",
    "Conv2d",
    "Dense",
    "FusionHead",
    "MBConvBlock",
    "Module",
    "ModuleList",
    "Parameter",
    "SEBlock",
    "excite",
    "fuse_features",
    "mbconv_forward",
    "se_scale",
    "squeeze",
]
