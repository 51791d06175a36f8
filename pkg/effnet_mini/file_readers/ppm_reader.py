"""Binary PPM (P6, maxval 255) decoding and encoding"""

from pathlib import Path
from typing import List, Tuple

import numpy as np

from effnet_mini.exceptions import DataError
from effnet_mini.file_readers.base_file_reader import BaseFileReader

_WHITESPACE = b" \t\r\n\x0b\x0c"
_COMMENT = ord("#")


def _header_tokens(payload: bytes, count: int, name: str) -> Tuple[List[bytes], int]:
    """First count whitespace-separated header tokens (skipping # comments) and the data offset"""
    tokens = []
    position = 0
    while len(tokens) < count:
        while position < len(payload) and payload[position] in _WHITESPACE:
            position += 1
        if position >= len(payload):
            raise DataError(f"{name}: truncated PPM header")
        if payload[position] == _COMMENT:
            end = payload.find(b"\n", position)
            position = len(payload) if end == -1 else end + 1
            continue
        start = position
        while position < len(payload) and payload[position] not in _WHITESPACE and payload[position] != _COMMENT:
            position += 1
        tokens.append(payload[start:position])
    if position >= len(payload) or payload[position] not in _WHITESPACE:
        raise DataError(f"{name}: PPM header must end with a single whitespace byte")
    return tokens, position + 1


def decode_ppm(payload: bytes, name: str = "<bytes>") -> np.ndarray:
    """Decode P6 bytes into an H×W×3 uint8 array"""
    tokens, offset = _header_tokens(payload, 4, name)
    if tokens[0] != b"P6":
        raise DataError(f"{name}: not a binary PPM (magic {tokens[0]!r}, expected b'P6')")
    try:
        width, height, maxval = (int(token) for token in tokens[1:])
    except ValueError as e:
        raise DataError(f"{name}: malformed PPM dimensions {tokens[1:]}") from e
    if maxval != 255:
        raise DataError(f"{name}: PPM maxval is {maxval}, only 255 is supported")
    if width <= 0 or height <= 0:
        raise DataError(f"{name}: PPM dimensions {width}x{height} must be positive")
    expected = width * height * 3
    data = payload[offset : offset + expected]
    if len(data) != expected:
        raise DataError(f"{name}: PPM pixel data has {len(data)} bytes, expected {expected}")
    return np.frombuffer(data, dtype=np.uint8).reshape(height, width, 3).copy()


def encode_ppm(pixels: np.ndarray) -> bytes:
    """Encode an H×W×3 array with values in [0, 255] as P6 bytes"""
    if pixels.ndim != 3 or pixels.shape[2] != 3:
        raise DataError(f"PPM encoding needs an H×W×3 array, got {pixels.shape}")
    if pixels.dtype != np.uint8:
        if np.any(pixels < 0) or np.any(pixels > 255) or np.any(pixels != np.rint(pixels)):
            raise DataError("PPM encoding needs integer pixel values in [0, 255]")
        pixels = pixels.astype(np.uint8)
    height, width, _ = pixels.shape
    return f"P6\n{width} {height}\n255\n".encode("ascii") + np.ascontiguousarray(pixels).tobytes()


def write_ppm(path: Path, pixels: np.ndarray) -> None:
    Path(path).write_bytes(encode_ppm(pixels))


class PpmReader(BaseFileReader):
    """Reads a binary PPM image file"""

    def read_pixels(self) -> np.ndarray:
        return decode_ppm(self.read_bytes(), name=str(self.file_path))
