import csv
import hashlib
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy.ndimage import zoom

from effnet_mini.exceptions import ConfigurationError, DataError, UsageError
from effnet_mini.file_readers import (
    MANIFEST_NAME,
    LabelManifestReader,
    ManifestEntry,
    decode_png,
    decode_ppm,
    encode_ppm,
)
from effnet_mini.models.configs import SynthSpec, round_half_up
from effnet_mini.models.dataset import SYNTHETIC_ROOT, Dataset
from effnet_mini.models.image_patch import PATCH_SIDE, ImagePatch
from effnet_mini.utils.rng import derive_seed, substream

# Stream tags mixed into the dataset seed, one per independent use of randomness.
LABEL_STREAM = 0
BACKGROUND_STREAM = 1
SIGNAL_STREAM = 2
SPLIT_STREAM = 3

# Pale pink/purple of eosin and hematoxylin stained tissue, RGB.
BASE_TINT = np.array([200.0, 140.0, 190.0])
LOW_FREQUENCY_GRID = 7
LOW_FREQUENCY_AMPLITUDE = 25.0
SIGNAL_FREQUENCY = 1.0 / 6.0
SIGNAL_SIGMA = 10.0
# Positive patches darken toward hematoxylin blue-purple where the stripes peak.
SIGNAL_COLOR = np.array([0.8, 1.0, 0.5])

DECODERS = {".ppm": decode_ppm, ".png": decode_png}


class DatasetService:
    """Service for creating, loading, splitting and writing patch datasets"""

    def __init__(self, workers: int = 4):
        self.workers = max(1, workers)
        self.logger = logging.getLogger("effnet_mini.services.DatasetService")

    def generate_synthetic(self, spec: SynthSpec) -> Dataset:
        """Patches sharing one background process; positives add oriented stripes inside the center block"""
        self.logger.info(
            f"Generating {spec.n} synthetic patches ({spec.n_positive} positive, signal {spec.signal_strength})"
        )
        order = substream(derive_seed(spec.seed, LABEL_STREAM), 0).permutation(spec.n)
        labels = np.zeros(spec.n, dtype=np.int64)
        labels[order[: spec.n_positive]] = 1

        patches = []
        for index in range(spec.n):
            pixels = self._background(spec, index)
            if labels[index] == 1:
                self._add_signal(pixels, spec, index)
            quantized = np.clip(np.rint(pixels), 0, 255).astype(np.uint8)
            patches.append(ImagePatch(quantized, int(labels[index]), f"synthetic-{spec.seed}-{index:05d}"))

        return Dataset(patches=patches, root=SYNTHETIC_ROOT, manifest_digest=self._patches_digest(patches))

    def _background(self, spec: SynthSpec, index: int) -> np.ndarray:
        rng = substream(derive_seed(spec.seed, BACKGROUND_STREAM), index)
        coarse = rng.normal(size=(LOW_FREQUENCY_GRID, LOW_FREQUENCY_GRID, 3))
        factor = spec.side / LOW_FREQUENCY_GRID
        smooth = zoom(coarse, (factor, factor, 1), order=1, mode="nearest", grid_mode=True)
        speckle = rng.normal(size=(spec.side, spec.side, 3))
        return BASE_TINT + LOW_FREQUENCY_AMPLITUDE * smooth + spec.noise_level * speckle

    def _add_signal(self, pixels: np.ndarray, spec: SynthSpec, index: int) -> None:
        if spec.signal_strength == 0:
            return
        rng = substream(derive_seed(spec.seed, SIGNAL_STREAM), index)
        theta = rng.uniform(0.0, math.pi)
        phase = rng.uniform(0.0, 2.0 * math.pi)
        coords = np.arange(spec.center) - (spec.center - 1) / 2.0
        y, x = np.meshgrid(coords, coords, indexing="ij")
        projected = x * math.cos(theta) + y * math.sin(theta)
        stripes = (1.0 + np.sin(2.0 * math.pi * SIGNAL_FREQUENCY * projected + phase)) / 2.0
        envelope = np.exp(-(x * x + y * y) / (2.0 * SIGNAL_SIGMA**2))
        start = (spec.side - spec.center) // 2
        block = pixels[start : start + spec.center, start : start + spec.center]
        block -= spec.signal_strength * (stripes * envelope)[:, :, None] * SIGNAL_COLOR

    def load_dataset(self, root: Path, side: int = PATCH_SIDE) -> Dataset:
        """Read labels.csv and decode every listed image, in manifest order"""
        root = Path(root)
        manifest = root / MANIFEST_NAME
        if not manifest.is_file():
            raise DataError(f"No {MANIFEST_NAME} found in {root}")
        entries = LabelManifestReader(str(manifest)).read_entries()
        if not entries:
            raise DataError(f"{manifest} lists no images")
        self.logger.info(f"Loading {len(entries)} patches from {root}")

        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            decoded = list(executor.map(lambda entry: self._read_entry(root, entry, side), entries))

        patches = [ImagePatch(pixels, entry.label, entry.filename) for entry, (pixels, _) in zip(entries, decoded)]
        digest = manifest_digest(
            (entry.filename, entry.label, payload) for entry, (_, payload) in zip(entries, decoded)
        )
        dataset = Dataset(patches=patches, root=str(root), manifest_digest=digest)
        self.logger.info(f"Loaded {dataset}")
        return dataset

    def _read_entry(self, root: Path, entry: ManifestEntry, side: int) -> Tuple[np.ndarray, bytes]:
        path = root / entry.filename
        decoder = DECODERS.get(path.suffix.lower())
        if decoder is None:
            raise DataError(f"Row {entry.row} ({entry.filename}): unsupported image format '{path.suffix}'")
        try:
            payload = path.read_bytes()
        except OSError as e:
            raise DataError(f"Row {entry.row} ({entry.filename}): cannot read image: {e}") from e
        try:
            pixels = decoder(payload, name=entry.filename)
        except DataError as e:
            raise DataError(f"Row {entry.row}: {e}") from e
        if pixels.shape != (side, side, 3):
            raise DataError(
                f"Row {entry.row} ({entry.filename}): image is {pixels.shape[0]}×{pixels.shape[1]}, "
                f"expected {side}×{side}"
            )
        return pixels, payload

    def split_dataset(self, dataset: Dataset, train_fraction: float, seed: int) -> Tuple[Dataset, Dataset]:
        """Stratified seeded split: each class is shuffled and its first round(fraction·n) go to train"""
        if not 0.0 < train_fraction < 1.0:
            raise ConfigurationError(f"train_fraction must be in (0, 1), got {train_fraction}")
        labels = dataset.labels
        train_indices: List[int] = []
        val_indices: List[int] = []
        for label in (0, 1):
            members = np.flatnonzero(labels == label)
            shuffled = members[substream(derive_seed(seed, SPLIT_STREAM), label).permutation(members.size)]
            cut = round_half_up(train_fraction * members.size)
            train_indices.extend(int(i) for i in shuffled[:cut])
            val_indices.extend(int(i) for i in shuffled[cut:])
        if not train_indices or not val_indices:
            raise UsageError(
                f"train_fraction {train_fraction} leaves an empty split for {len(dataset)} patches "
                f"({len(train_indices)} train / {len(val_indices)} validation)"
            )
        train = dataset.subset(sorted(train_indices))
        val = dataset.subset(sorted(val_indices))
        self.logger.info(f"Split {len(dataset)} patches into {len(train)} train / {len(val)} validation")
        return train, val

    def write_dataset(self, dataset: Dataset, out_dir: Path) -> Path:
        """Write every patch as PPM plus a labels.csv manifest"""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        rows = []
        for patch in dataset:
            filename = f"{Path(patch.source_id).stem}.ppm"
            (out_dir / filename).write_bytes(encode_ppm(patch.pixels))
            rows.append((filename, patch.label))
        manifest = out_dir / MANIFEST_NAME
        with open(manifest, "w", encoding="utf-8", newline="") as file:
            writer = csv.writer(file, lineterminator="\n")
            writer.writerow(["filename", "label"])
            writer.writerows(rows)
        self.logger.info(f"Saved {len(rows)} patches and {MANIFEST_NAME} to {out_dir}")
        return manifest

    def _patches_digest(self, patches: Iterable[ImagePatch]) -> str:
        return manifest_digest(
            (f"{Path(p.source_id).stem}.ppm", p.label, encode_ppm(p.pixels)) for p in patches
        )


def manifest_digest(rows: Iterable[Tuple[str, int, bytes]]) -> str:
    """SHA-256 over (filename, label, file bytes) rows sorted by filename"""
    digest = hashlib.sha256()
    for filename, label, payload in sorted(rows, key=lambda row: row[0]):
        digest.update(filename.encode("utf-8"))
        digest.update(b"\0")
        digest.update(str(label).encode("ascii"))
        digest.update(b"\0")
        digest.update(payload)
    return digest.hexdigest()


def generate_synthetic(spec: SynthSpec) -> Dataset:
    return DatasetService().generate_synthetic(spec)


def load_dataset(root: Path, workers: Optional[int] = None) -> Dataset:
    return DatasetService(workers=workers or 4).load_dataset(root)


def split_dataset(dataset: Dataset, train_fraction: float = 0.8, seed: int = 0) -> Tuple[Dataset, Dataset]:
    return DatasetService().split_dataset(dataset, train_fraction, seed)
