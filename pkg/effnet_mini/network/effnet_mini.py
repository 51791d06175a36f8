"""EffNet-mini: stem, MBConv stages, optional fusion head and a single-logit classifier"""

import logging
from collections import OrderedDict
from typing import Dict, List, Tuple

import numpy as np

from effnet_mini.exceptions import ShapeError
from effnet_mini.models.configs import ModelConfig
from effnet_mini.nn import ChannelAffine, Conv2d, Dense, FusionHead, MBConvBlock, Module, ModuleList
from effnet_mini.nn.blocks import squeeze
from effnet_mini.tensor import Tensor, activation, no_grad
from effnet_mini.utils.rng import substream

logger = logging.getLogger(__name__)

INPUT_CHANNELS = 3


class EffNetMini(Module):
    """Miniature EfficientNet-style binary classifier.

    With ``ff`` the outputs of the tapped blocks are pooled (after per-tap attention when
    ``attention`` is set) and concatenated with the pooled final map; otherwise only the
    pooled final map reaches the classifier.
    """

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        self.stem_conv = Conv2d(INPUT_CHANNELS, config.stem_channels, 3, stride=config.stem_stride, padding=1)
        self.stem_affine = ChannelAffine(config.stem_channels)
        self.blocks = ModuleList(
            MBConvBlock(
                spec.in_channels,
                spec.out_channels,
                spec.expansion,
                spec.kernel,
                spec.stride,
                se_reduction=config.se_reduction,
            )
            for spec in config.block_specs()
        )
        final_channels = config.block_specs()[-1].out_channels
        if config.ff:
            self.fusion = FusionHead(
                config.tap_channels(), final_channels, config.attention, reduction_ratio=config.se_reduction
            )
            width = self.fusion.output_width
        else:
            self.fusion = None
            width = final_channels
        self.classifier = Dense(width, 1, bias=True)

    @property
    def classifier_width(self) -> int:
        return self.classifier.in_features

    def forward_features(self, batch: Tensor) -> Tuple[List[Tensor], Tensor]:
        """Tapped block outputs (in tap order) and the final feature map"""
        if batch.ndim != 4 or batch.shape[1] != INPUT_CHANNELS:
            raise ShapeError(f"EffNetMini expects [N,{INPUT_CHANNELS},H,W] input, got {batch.shape}")
        out = activation(self.stem_affine(self.stem_conv(batch)), "silu")
        taps = []
        tap_positions = set(self.config.tap_indices)
        for position, block in enumerate(self.blocks, start=1):
            out = block(out)
            if position in tap_positions:
                taps.append(out)
        return taps, out

    def forward(self, batch: Tensor) -> Tensor:
        taps, final = self.forward_features(batch)
        if self.fusion is not None:
            features = self.fusion(taps, final)
        else:
            features = squeeze(final)
        return self.classifier(features)


def build_model(config: ModelConfig) -> EffNetMini:
    """Construct EffNet-mini and initialize every parameter from config.seed"""
    model = EffNetMini(config)
    model.reset_parameters(substream(config.seed, 0))
    logger.debug(f"Built EffNetMini {config.flags} with {count_parameters(model)} parameters")
    return model


def forward(model: EffNetMini, batch: Tensor) -> Tensor:
    """Logits [N,1] for a batch [N,3,H,W]"""
    return model(batch)


def count_parameters(model: Module) -> int:
    return sum(parameter.size for parameter in model.parameters())


def parameter_table(model: Module) -> Dict[str, int]:
    """Learnable scalar count per top-level component (stem, each block, fusion, classifier)"""
    table: Dict[str, int] = OrderedDict()
    for name, parameter in model.named_parameters():
        parts = name.split(".")
        group = ".".join(parts[:2]) if parts[0] == "blocks" else parts[0].split("_")[0]
        table[group] = table.get(group, 0) + parameter.size
    return table


def feature_shapes(model: EffNetMini, side: int = 96) -> Dict[str, Tuple[int, ...]]:
    """Probe tap and final feature-map shapes with a single zero image"""
    with no_grad():
        taps, final = model.forward_features(Tensor(np.zeros((1, INPUT_CHANNELS, side, side))))
    shapes: Dict[str, Tuple[int, ...]] = OrderedDict()
    for index, tap in zip(model.config.tap_indices, taps):
        shapes[f"block{index}"] = tap.shape[1:]
    shapes["final"] = final.shape[1:]
    return shapes
