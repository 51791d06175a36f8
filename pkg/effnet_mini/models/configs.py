"""Configuration dataclasses for the model, augmentation, training and synthesis"""

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Tuple

from effnet_mini.exceptions import ConfigurationError
from effnet_mini.models.image_patch import CENTER_SIDE, PATCH_SIDE

REQUIRED_DOWNSAMPLING = 32


def round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


@dataclass(frozen=True)
class StageSpec:
    """A run of MBConv blocks sharing width, expansion and kernel; only the first block strides"""

    num_blocks: int
    out_channels: int
    stride: int
    expansion: int
    kernel: int

    def __post_init__(self):
        for name in ("num_blocks", "out_channels", "stride", "expansion", "kernel"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"Stage {name} must be positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class BlockSpec:
    """One MBConv block after stage expansion"""

    in_channels: int
    out_channels: int
    expansion: int
    kernel: int
    stride: int


DEFAULT_STAGES: Tuple[StageSpec, ...] = (
    StageSpec(1, 16, 2, 1, 3),
    StageSpec(2, 24, 2, 6, 3),
    StageSpec(2, 40, 2, 6, 5),
    StageSpec(2, 80, 2, 6, 3),
)
DEFAULT_TAPS: Tuple[int, ...] = (1, 3, 5)


@dataclass(frozen=True)
class ModelConfig:
    """The ablation switches plus the miniature architecture.

    ``rcc`` is consumed by the training pipeline and recorded here for provenance.
    Tap indices are 1-based block positions; the final block output is always fused.
    """

    rcc: bool = True
    rds: bool = True
    ff: bool = True
    attention: bool = True
    stem_channels: int = 16
    stages: Tuple[StageSpec, ...] = DEFAULT_STAGES
    tap_indices: Tuple[int, ...] = DEFAULT_TAPS
    se_reduction: int = 4
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "tap_indices", tuple(self.tap_indices))
        if self.attention and not self.ff:
            raise ConfigurationError(
                "Attention is applied to fused features and needs to be combined with feature fusion (ff)"
            )
        if self.stem_channels <= 0:
            raise ConfigurationError(f"stem_channels must be positive, got {self.stem_channels}")
        if not self.stages:
            raise ConfigurationError("At least one stage is required")
        if self.se_reduction <= 0:
            raise ConfigurationError(f"se_reduction must be positive, got {self.se_reduction}")
        stride_product = 2 * math.prod(stage.stride for stage in self.stages)
        if stride_product != REQUIRED_DOWNSAMPLING:
            raise ConfigurationError(
                f"Stem stride 2 and stage strides multiply to {stride_product}, expected {REQUIRED_DOWNSAMPLING}"
            )
        taps = self.tap_indices
        if any(b <= a for a, b in zip(taps, taps[1:])):
            raise ConfigurationError(f"Tap indices must be strictly increasing, got {taps}")
        if taps and (taps[0] < 1 or taps[-1] >= self.total_blocks):
            raise ConfigurationError(
                f"Tap indices must lie in [1, {self.total_blocks - 1}] for {self.total_blocks} blocks, got {taps}"
            )

    @property
    def total_blocks(self) -> int:
        return sum(stage.num_blocks for stage in self.stages)

    @property
    def stem_stride(self) -> int:
        return 1 if self.rds else 2

    @property
    def downsampling_factor(self) -> int:
        return self.stem_stride * math.prod(stage.stride for stage in self.stages)

    def block_specs(self) -> List[BlockSpec]:
        blocks = []
        in_channels = self.stem_channels
        for stage in self.stages:
            for position in range(stage.num_blocks):
                stride = stage.stride if position == 0 else 1
                blocks.append(BlockSpec(in_channels, stage.out_channels, stage.expansion, stage.kernel, stride))
                in_channels = stage.out_channels
        return blocks

    def tap_channels(self) -> List[int]:
        blocks = self.block_specs()
        return [blocks[index - 1].out_channels for index in self.tap_indices]

    @property
    def flags(self) -> Dict[str, bool]:
        return {"rcc": self.rcc, "rds": self.rds, "ff": self.ff, "attention": self.attention}

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["stages"] = [list(asdict(stage).values()) for stage in self.stages]
        data["tap_indices"] = list(self.tap_indices)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModelConfig":
        values = dict(data)
        stages = values.get("stages", DEFAULT_STAGES)
        values["stages"] = tuple(stage if isinstance(stage, StageSpec) else StageSpec(*stage) for stage in stages)
        values["tap_indices"] = tuple(values.get("tap_indices", DEFAULT_TAPS))
        try:
            return cls(**values)
        except TypeError as e:
            raise ConfigurationError(f"Invalid model configuration: {e}") from e

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form"""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def with_flags(self, **flags: bool) -> "ModelConfig":
        data = self.to_dict()
        data.update(flags)
        return ModelConfig.from_dict(data)


class PaddingMode(Enum):
    """Fill used around the patch before random center cropping"""

    CONSTANT = "constant"
    REFLECT = "reflect"


@dataclass(frozen=True)
class AugmentConfig:
    """Random center cropping, flips and channel normalization settings"""

    pad: int = 8
    crop: int = PATCH_SIDE
    side: int = PATCH_SIDE
    center: int = CENTER_SIDE
    h_flip_prob: float = 0.5
    v_flip_prob: float = 0.5
    channel_mean: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    channel_std: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    padding_mode: PaddingMode = PaddingMode.CONSTANT
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "channel_mean", tuple(float(v) for v in self.channel_mean))
        object.__setattr__(self, "channel_std", tuple(float(v) for v in self.channel_std))
        if isinstance(self.padding_mode, str):
            try:
                object.__setattr__(self, "padding_mode", PaddingMode(self.padding_mode))
            except ValueError as e:
                raise ConfigurationError(f"Unknown padding mode '{self.padding_mode}'") from e
        if self.pad < 0:
            raise ConfigurationError(f"pad must be non-negative, got {self.pad}")
        if self.crop < 1:
            raise ConfigurationError(f"crop must be positive, got {self.crop}")
        if self.crop > self.side + 2 * self.pad:
            raise ConfigurationError(
                f"crop {self.crop} is larger than the padded image {self.side + 2 * self.pad}"
            )
        if self.crop < self.min_center_preserving_crop:
            raise ConfigurationError(
                f"crop {self.crop} can cut into the center {self.center}×{self.center} block; "
                f"needs crop >= {self.min_center_preserving_crop} for side {self.side} and pad {self.pad}"
            )
        for name in ("h_flip_prob", "v_flip_prob"):
            probability = getattr(self, name)
            if not 0.0 <= probability <= 1.0:
                raise ConfigurationError(f"{name} must be in [0, 1], got {probability}")
        if len(self.channel_mean) != 3 or len(self.channel_std) != 3:
            raise ConfigurationError("channel_mean and channel_std need 3 values each")
        if any(s <= 0 for s in self.channel_std):
            raise ConfigurationError(f"channel_std components must be positive, got {self.channel_std}")

    @property
    def center_start(self) -> int:
        """First row/column of the center block in the unpadded patch"""
        return (self.side - self.center) // 2

    @property
    def min_center_preserving_crop(self) -> int:
        return self.side + self.pad - self.center_start

    @property
    def max_offset(self) -> int:
        return self.side + 2 * self.pad - self.crop

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["padding_mode"] = self.padding_mode.value
        data["channel_mean"] = list(self.channel_mean)
        data["channel_std"] = list(self.channel_std)
        return data


@dataclass(frozen=True)
class TrainConfig:
    """Training protocol: Adam, milestone learning-rate decay, batch and epoch counts"""

    model: ModelConfig = field(default_factory=ModelConfig)
    augment: AugmentConfig = field(default_factory=AugmentConfig)
    epochs: int = 12
    batch_size: int = 32
    base_lr: float = 0.003
    lr_decay_factor: float = 10.0
    milestone_fractions: Tuple[float, ...] = (0.5, 0.766)
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "milestone_fractions", tuple(self.milestone_fractions))
        if self.epochs < 1:
            raise ConfigurationError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigurationError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.base_lr <= 0:
            raise ConfigurationError(f"base_lr must be positive, got {self.base_lr}")
        if self.lr_decay_factor <= 0:
            raise ConfigurationError(f"lr_decay_factor must be positive, got {self.lr_decay_factor}")
        fractions = self.milestone_fractions
        if any(not 0.0 < f < 1.0 for f in fractions) or any(b <= a for a, b in zip(fractions, fractions[1:])):
            raise ConfigurationError(f"Milestone fractions must be strictly increasing in (0, 1), got {fractions}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigurationError(f"train_fraction must be in (0, 1), got {self.train_fraction}")

    @property
    def milestones(self) -> List[int]:
        """Epochs at which the learning rate is divided by the decay factor"""
        return [round_half_up(fraction * self.epochs) for fraction in self.milestone_fractions]

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["model"] = self.model.to_dict()
        data["augment"] = self.augment.to_dict()
        data["milestone_fractions"] = list(self.milestone_fractions)
        return data


@dataclass(frozen=True)
class SynthSpec:
    """Synthetic center-signal dataset parameters"""

    n: int = 2000
    pos_fraction: float = 0.405
    signal_strength: float = 48.0
    noise_level: float = 12.0
    seed: int = 0
    side: int = PATCH_SIDE
    center: int = CENTER_SIDE

    def __post_init__(self):
        if self.n < 2:
            raise ConfigurationError(f"Synthetic n must be >= 2, got {self.n}")
        if not 0.0 < self.pos_fraction < 1.0:
            raise ConfigurationError(f"pos_fraction must be in (0, 1), got {self.pos_fraction}")
        if self.signal_strength < 0:
            raise ConfigurationError(f"signal_strength must be >= 0, got {self.signal_strength}")
        if self.noise_level < 0:
            raise ConfigurationError(f"noise_level must be >= 0, got {self.noise_level}")
        if not 0 < self.center <= self.side:
            raise ConfigurationError(f"center {self.center} must fit in side {self.side}")
        if self.n_positive in (0, self.n):
            raise ConfigurationError(
                f"n={self.n} with pos_fraction={self.pos_fraction} leaves one class empty"
            )

    @property
    def n_positive(self) -> int:
        return round_half_up(self.n * self.pos_fraction)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
