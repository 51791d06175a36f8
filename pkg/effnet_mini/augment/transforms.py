"""Random center cropping, flips and channel normalization for image patches"""

import logging
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from effnet_mini.exceptions import ConfigurationError, UsageError
from effnet_mini.models.configs import AugmentConfig, PaddingMode
from effnet_mini.models.image_patch import ImagePatch
from effnet_mini.tensor import Tensor

logger = logging.getLogger(__name__)

MIN_STD = 1e-6

Offsets = Tuple[int, int]
ChannelStats = Tuple[Tuple[float, float, float], Tuple[float, float, float]]


def draw_crop_offsets(
    cfg: AugmentConfig, rng: np.random.Generator, height: Optional[int] = None, width: Optional[int] = None
) -> Offsets:
    """Uniform (row, col) crop offsets into the padded canvas, one integer draw per axis"""
    height = cfg.side if height is None else height
    width = cfg.side if width is None else width
    max_row = height + 2 * cfg.pad - cfg.crop
    max_col = width + 2 * cfg.pad - cfg.crop
    if max_row < 0 or max_col < 0:
        raise ConfigurationError(
            f"crop {cfg.crop} is larger than the padded {height + 2 * cfg.pad}×{width + 2 * cfg.pad} image"
        )
    row, col = rng.integers(0, [max_row + 1, max_col + 1])
    return int(row), int(col)


def crop_at(img: ImagePatch, cfg: AugmentConfig, offsets: Offsets) -> ImagePatch:
    """Pad by cfg.pad on every side, then cut a crop×crop window starting at offsets"""
    row, col = offsets
    pad = cfg.pad
    widths = ((pad, pad), (pad, pad), (0, 0))
    if cfg.padding_mode is PaddingMode.REFLECT:
        padded = np.pad(img.pixels, widths, mode="reflect")
    else:
        padded = np.pad(img.pixels, widths, mode="constant", constant_values=0)
    if row < 0 or col < 0 or row + cfg.crop > padded.shape[0] or col + cfg.crop > padded.shape[1]:
        raise ConfigurationError(f"Crop at {offsets} of size {cfg.crop} leaves the padded {padded.shape[:2]} image")
    return img.with_pixels(padded[row : row + cfg.crop, col : col + cfg.crop].copy())


def random_center_crop(img: ImagePatch, cfg: AugmentConfig, rng: np.random.Generator) -> ImagePatch:
    """Pad then randomly crop back; the center block of the patch survives every draw"""
    offsets = draw_crop_offsets(cfg, rng, img.height, img.width)
    return crop_at(img, cfg, offsets)


def random_flip(img: ImagePatch, h_prob: float, v_prob: float, rng: np.random.Generator) -> ImagePatch:
    """Independently mirror columns (h_prob) and rows (v_prob).

    Two uniforms are drawn on every call so the stream position does not depend on the outcome.
    """
    for name, probability in (("h_prob", h_prob), ("v_prob", v_prob)):
        if not 0.0 <= probability <= 1.0:
            raise ConfigurationError(f"{name} must be in [0, 1], got {probability}")
    h_draw, v_draw = rng.random(2)
    pixels = img.pixels
    if h_draw < h_prob:
        pixels = pixels[:, ::-1]
    if v_draw < v_prob:
        pixels = pixels[::-1, :]
    if pixels is img.pixels:
        return img
    return img.with_pixels(np.ascontiguousarray(pixels))


def normalize(img: ImagePatch, mean: Sequence[float], std: Sequence[float]) -> Tensor:
    """(pixel - mean) / std per channel, returned channel-first as [3,H,W]"""
    return Tensor(normalize_array(img.pixels, mean, std))


def normalize_array(pixels: np.ndarray, mean: Sequence[float], std: Sequence[float]) -> np.ndarray:
    mean = np.asarray(mean, dtype=np.float64)
    std = np.asarray(std, dtype=np.float64)
    if mean.shape != (3,) or std.shape != (3,):
        raise ConfigurationError("normalize needs 3 means and 3 standard deviations")
    if np.any(std <= 0):
        raise ConfigurationError(f"normalize std components must be positive, got {std.tolist()}")
    return ((pixels.astype(np.float64) - mean) / std).transpose(2, 0, 1)


def channel_stats(patches: Iterable[ImagePatch]) -> ChannelStats:
    """Per-channel mean and population standard deviation over every pixel, in two passes"""
    patches = list(patches)
    if not patches:
        raise UsageError("channel_stats needs at least one image")
    pixel_count = sum(p.height * p.width for p in patches)
    if pixel_count < 2:
        raise UsageError(f"channel_stats needs at least 2 pixels, got {pixel_count}")

    total = np.zeros(3)
    for patch in patches:
        total += patch.pixels.reshape(-1, 3).astype(np.float64).sum(axis=0)
    mean = total / pixel_count

    squared = np.zeros(3)
    for patch in patches:
        centered = patch.pixels.reshape(-1, 3).astype(np.float64) - mean
        squared += (centered * centered).sum(axis=0)
    std = np.sqrt(squared / pixel_count)

    if np.any(std < MIN_STD):
        logger.warning(f"Channel std {std.tolist()} has a zero-variance channel; clamping to {MIN_STD}")
        std = np.maximum(std, MIN_STD)
    return tuple(float(v) for v in mean), tuple(float(v) for v in std)
