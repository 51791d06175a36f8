"""File readers for effnet-mini datasets"""

from effnet_mini.file_readers.base_file_reader import BaseFileReader
from effnet_mini.file_readers.manifest_reader import MANIFEST_NAME, LabelManifestReader, ManifestEntry
from effnet_mini.file_readers.png_reader import decode_png, png_available
from effnet_mini.file_readers.ppm_reader import PpmReader, decode_ppm, encode_ppm, write_ppm

__all__ = [
    "BaseFileReader",
    "LabelManifestReader",
    "MANIFEST_NAME",
    "ManifestEntry",
    "PpmReader",
    "decode_png",
    "decode_ppm",
    "encode_ppm",
    "png_available",
    "write_ppm",
]
