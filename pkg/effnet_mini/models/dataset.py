from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from effnet_mini.exceptions import DataError
from effnet_mini.models.image_patch import ImagePatch

SYNTHETIC_ROOT = "synthetic"


@dataclass(eq=False)
class Dataset:
    """Ordered labelled patches with their origin and a manifest digest"""

    patches: List[ImagePatch]
    root: str
    manifest_digest: str

    def __post_init__(self):
        for patch in self.patches:
            if patch.label not in (0, 1):
                raise DataError(f"Patch {patch.source_id} has label {patch.label}, expected 0 or 1")

    def __len__(self) -> int:
        return len(self.patches)

    def __iter__(self):
        return iter(self.patches)

    def __getitem__(self, index: int) -> ImagePatch:
        return self.patches[index]

    @property
    def labels(self) -> np.ndarray:
        return np.array([patch.label for patch in self.patches], dtype=np.int64)

    @property
    def class_counts(self) -> Tuple[int, int]:
        """(negatives, positives)"""
        positives = int(self.labels.sum())
        return len(self.patches) - positives, positives

    @property
    def positive_fraction(self) -> float:
        return self.class_counts[1] / len(self.patches) if self.patches else 0.0

    @property
    def is_synthetic(self) -> bool:
        return self.root == SYNTHETIC_ROOT

    def subset(self, indices: Sequence[int]) -> "Dataset":
        """Patches at the given positions, in that order"""
        return Dataset(
            patches=[self.patches[i] for i in indices], root=self.root, manifest_digest=self.manifest_digest
        )

    def __str__(self):
        negatives, positives = self.class_counts
        return f"Dataset({self.root}, {len(self)} patches, {positives} positive / {negatives} negative)"
