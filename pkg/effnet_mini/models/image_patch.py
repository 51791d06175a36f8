from dataclasses import dataclass

import numpy as np

from effnet_mini.exceptions import DataError

PATCH_SIDE = 96
CENTER_SIDE = 32


@dataclass(frozen=True, eq=False)
class ImagePatch:
    """An H×W×3 RGB patch with its label (1 = cancer) and provenance"""

    pixels: np.ndarray
    label: int
    source_id: str

    def __post_init__(self):
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise DataError(f"Patch {self.source_id} must be H×W×3, got shape {self.pixels.shape}")
        if self.label not in (0, 1):
            raise DataError(f"Patch {self.source_id} has label {self.label}, expected 0 or 1")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def with_pixels(self, pixels: np.ndarray) -> "ImagePatch":
        """Same label and provenance, new pixels"""
        return ImagePatch(pixels=pixels, label=self.label, source_id=self.source_id)

    def __str__(self):
        return f"{self.source_id} ({self.height}x{self.width}, label {self.label})"
