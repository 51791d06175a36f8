from effnet_mini.augment.pipeline import AugmentPipeline
from effnet_mini.augment.transforms import (
    channel_stats,
    crop_at,
    draw_crop_offsets,
    normalize,
    random_center_crop,
    random_flip,
)

__all__ = [
    "AugmentPipeline",
    "channel_stats",
    "crop_at",
    "draw_crop_offsets",
    "normalize",
    "random_center_crop",
    "random_flip",
]
