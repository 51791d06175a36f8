"""Optional PNG decoding through pypng"""

import numpy as np

from effnet_mini.exceptions import DataError

try:
    import png
except ImportError:  # pypng is an optional extra
    png = None


def png_available() -> bool:
    return png is not None


def decode_png(payload: bytes, name: str = "<bytes>") -> np.ndarray:
    """Decode PNG bytes into an H×W×3 uint8 array (alpha dropped, greyscale expanded)"""
    if png is None:
        raise DataError(f"{name}: PNG support needs the optional 'pypng' package (pip install effnet-mini[png])")
    try:
        width, height, rows, _ = png.Reader(bytes=payload).asRGBA8()
        pixels = np.vstack([np.asarray(row, dtype=np.uint8) for row in rows])
    except png.Error as e:
        raise DataError(f"{name}: undecodable PNG: {e}") from e
    return np.ascontiguousarray(pixels.reshape(height, width, 4)[:, :, :3])
