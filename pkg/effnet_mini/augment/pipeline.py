"""Per-image training and evaluation views"""

from typing import Sequence

import numpy as np

from effnet_mini.augment.transforms import crop_at, draw_crop_offsets, normalize_array, random_flip
from effnet_mini.models.configs import AugmentConfig
from effnet_mini.models.image_patch import ImagePatch
from effnet_mini.tensor import Tensor
from effnet_mini.utils.rng import derive_seed, substream


class AugmentPipeline:
    """Turns patches into normalized network inputs.

    Training views draw from the substream for (epoch seed, image index): random center
    cropping when ``rcc`` is on, then flips, then normalization. Evaluation views are
    normalized only.
    """

    def __init__(self, config: AugmentConfig, rcc: bool):
        self.config = config
        self.rcc = rcc

    def image_rng(self, epoch: int, index: int) -> np.random.Generator:
        return substream(derive_seed(self.config.seed, epoch), index)

    def augment(self, patch: ImagePatch, epoch: int, index: int) -> ImagePatch:
        cfg = self.config
        rng = self.image_rng(epoch, index)
        if self.rcc:
            patch = crop_at(patch, cfg, draw_crop_offsets(cfg, rng, patch.height, patch.width))
        return random_flip(patch, cfg.h_flip_prob, cfg.v_flip_prob, rng)

    def train_view(self, patch: ImagePatch, epoch: int, index: int) -> Tensor:
        return Tensor(self._normalize(self.augment(patch, epoch, index)))

    def eval_view(self, patch: ImagePatch) -> Tensor:
        return Tensor(self._normalize(patch))

    def batch(self, patches: Sequence[ImagePatch], indices: Sequence[int], epoch: int, train: bool) -> Tensor:
        """Stack the views of patches[i] for i in indices into [N,3,H,W]"""
        if train:
            arrays = [self._normalize(self.augment(patches[i], epoch, i)) for i in indices]
        else:
            arrays = [self._normalize(patches[i]) for i in indices]
        return Tensor(np.stack(arrays))

    def _normalize(self, patch: ImagePatch) -> np.ndarray:
        return normalize_array(patch.pixels, self.config.channel_mean, self.config.channel_std)
