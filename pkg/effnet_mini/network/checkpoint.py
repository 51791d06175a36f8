"""Binary checkpoint format for EffNet-mini weights and training state.

Layout (little-endian):
    b"EFNM" | u16 version | 32-byte SHA-256 config digest
    u32 header length | UTF-8 JSON header {"model": ..., "normalization": {"mean", "std"}}
    u32 parameter count | per parameter: u16 name length, name, u8 rank, u32 extents, f32 values
    u8 has_state | [u32 epoch, u32 step, f32 first moments, f32 second moments in parameter order]
"""

import hashlib
import json
import logging
import struct
from collections import OrderedDict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from effnet_mini.exceptions import CheckpointError, ConfigurationError
from effnet_mini.models.configs import ModelConfig
from effnet_mini.network.effnet_mini import EffNetMini

logger = logging.getLogger(__name__)

MAGIC = b"EFNM"
FORMAT_VERSION = 1

Normalization = Tuple[Tuple[float, float, float], Tuple[float, float, float]]
IDENTITY_NORMALIZATION: Normalization = ((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))


@dataclass
class TrainingState:
    """Where an interrupted run left off: completed epochs, optimizer steps and Adam moments"""

    epoch: int
    step: int
    first_moments: List[np.ndarray]
    second_moments: List[np.ndarray]


@dataclass
class Checkpoint:
    config: ModelConfig
    parameters: Dict[str, np.ndarray]
    normalization: Normalization = IDENTITY_NORMALIZATION
    state: Optional[TrainingState] = None


def save_checkpoint(
    path: Path,
    model: EffNetMini,
    normalization: Normalization = IDENTITY_NORMALIZATION,
    state: Optional[TrainingState] = None,
) -> Path:
    """Serialize model weights (as float32) and optional training state to path"""
    config = model.config
    header = {
        "model": config.to_dict(),
        "normalization": {"mean": list(normalization[0]), "std": list(normalization[1])},
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    named = list(model.named_parameters())

    chunks = [MAGIC, struct.pack("<H", FORMAT_VERSION), bytes.fromhex(config.digest())]
    chunks.append(struct.pack("<I", len(header_bytes)))
    chunks.append(header_bytes)
    chunks.append(struct.pack("<I", len(named)))
    for name, parameter in named:
        encoded = name.encode("utf-8")
        chunks.append(struct.pack("<H", len(encoded)))
        chunks.append(encoded)
        chunks.append(struct.pack("<B", parameter.ndim))
        chunks.append(struct.pack(f"<{parameter.ndim}I", *parameter.shape))
        chunks.append(_to_f32_bytes(parameter.data))

    if state is None:
        chunks.append(struct.pack("<B", 0))
    else:
        if len(state.first_moments) != len(named) or len(state.second_moments) != len(named):
            raise CheckpointError(
                f"Training state has moments for {len(state.first_moments)} of {len(named)} parameters"
            )
        chunks.append(struct.pack("<BII", 1, state.epoch, state.step))
        for moment in state.first_moments:
            chunks.append(_to_f32_bytes(moment))
        for moment in state.second_moments:
            chunks.append(_to_f32_bytes(moment))

    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(b"".join(chunks))
    except OSError as e:
        raise CheckpointError(f"Could not write checkpoint {path}: {e}") from e
    logger.info(f"Saved checkpoint to {path}")
    return path


def _to_f32_bytes(array: np.ndarray) -> bytes:
    return np.ascontiguousarray(array, dtype="<f4").tobytes()


class _Cursor:
    """Bounds-checked reader over the checkpoint bytes"""

    def __init__(self, payload: bytes, path: Path):
        self.payload = payload
        self.offset = 0
        self.path = path

    def take(self, size: int) -> bytes:
        if self.offset + size > len(self.payload):
            raise CheckpointError(f"Checkpoint {self.path} is truncated at byte {self.offset}")
        chunk = self.payload[self.offset : self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, fmt: str) -> Tuple:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def floats(self, shape: Tuple[int, ...]) -> np.ndarray:
        count = int(np.prod(shape, dtype=np.int64))
        return np.frombuffer(self.take(4 * count), dtype="<f4").astype(np.float64).reshape(shape)


def load_checkpoint(path: Path) -> Checkpoint:
    """Read a checkpoint, refusing files whose stored config does not match their digest"""
    path = Path(path)
    try:
        payload = path.read_bytes()
    except OSError as e:
        raise CheckpointError(f"Could not read checkpoint {path}: {e}") from e
    cursor = _Cursor(payload, path)

    if cursor.take(4) != MAGIC:
        raise CheckpointError(f"{path} is not an EffNet-mini checkpoint (bad magic)")
    (version,) = cursor.unpack("<H")
    if version != FORMAT_VERSION:
        raise CheckpointError(f"Checkpoint {path} has format version {version}, expected {FORMAT_VERSION}")
    stored_digest = cursor.take(32).hex()
    (header_length,) = cursor.unpack("<I")
    try:
        header = json.loads(cursor.take(header_length).decode("utf-8"))
        config = ModelConfig.from_dict(header["model"])
    except (ValueError, KeyError, ConfigurationError) as e:
        raise CheckpointError(f"Checkpoint {path} has an unreadable configuration header: {e}") from e
    if config.digest() != stored_digest:
        raise CheckpointError(
            f"Checkpoint {path} config digest {stored_digest[:12]} does not match its configuration "
            f"({config.digest()[:12]}); refusing to load"
        )
    normalization = (
        tuple(header.get("normalization", {}).get("mean", IDENTITY_NORMALIZATION[0])),
        tuple(header.get("normalization", {}).get("std", IDENTITY_NORMALIZATION[1])),
    )

    (count,) = cursor.unpack("<I")
    parameters: Dict[str, np.ndarray] = OrderedDict()
    for _ in range(count):
        (name_length,) = cursor.unpack("<H")
        name = cursor.take(name_length).decode("utf-8")
        (rank,) = cursor.unpack("<B")
        shape = cursor.unpack(f"<{rank}I") if rank else ()
        parameters[name] = cursor.floats(tuple(shape))

    state = None
    (has_state,) = cursor.unpack("<B")
    if has_state:
        epoch, step = cursor.unpack("<II")
        shapes = [array.shape for array in parameters.values()]
        first = [cursor.floats(shape) for shape in shapes]
        second = [cursor.floats(shape) for shape in shapes]
        state = TrainingState(epoch=epoch, step=step, first_moments=first, second_moments=second)
    if cursor.offset != len(payload):
        raise CheckpointError(f"Checkpoint {path} has {len(payload) - cursor.offset} unexpected trailing bytes")

    logger.debug(f"Loaded checkpoint {path} with {count} parameters")
    return Checkpoint(config=config, parameters=parameters, normalization=normalization, state=state)


def restore_model(checkpoint: Checkpoint) -> EffNetMini:
    """Build the checkpoint's model and copy its weights in"""
    model = EffNetMini(checkpoint.config)
    load_parameters(model, checkpoint)
    return model


def load_parameters(model: EffNetMini, checkpoint: Checkpoint) -> None:
    if model.config.digest() != checkpoint.config.digest():
        raise CheckpointError("Checkpoint configuration does not match the model it is loaded into")
    named = OrderedDict(model.named_parameters())
    if list(named) != list(checkpoint.parameters):
        raise CheckpointError("Checkpoint parameter names do not match the model")
    for name, parameter in named.items():
        values = checkpoint.parameters[name]
        if values.shape != parameter.shape:
            raise CheckpointError(f"Checkpoint parameter {name} has shape {values.shape}, expected {parameter.shape}")
        parameter.update(values)


def file_digest(path: Path) -> str:
    """SHA-256 of a checkpoint file's bytes"""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
