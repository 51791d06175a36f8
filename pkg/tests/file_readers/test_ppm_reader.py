"""Unit tests for PPM decoding and encoding."""

import tempfile
import unittest
from pathlib import Path

import numpy as np

from effnet_mini.exceptions import DataError
from effnet_mini.file_readers import PpmReader, decode_ppm, encode_ppm, write_ppm


class TestPpmCodec(unittest.TestCase):
    """Test cases for decode_ppm and encode_ppm."""

    def test_decodes_header_and_pixels(self):
        payload = b"P6\n2 1\n255\n" + bytes([255, 0, 0, 0, 0, 255])

        pixels = decode_ppm(payload)

        self.assertEqual(pixels.shape, (1, 2, 3))
        self.assertEqual(pixels.dtype, np.uint8)
        np.testing.assert_array_equal(pixels[0, 0], [255, 0, 0])
        np.testing.assert_array_equal(pixels[0, 1], [0, 0, 255])

    def test_skips_header_comments(self):
        payload = b"P6\n# written by hand\n1 1\n255\n" + bytes([1, 2, 3])

        np.testing.assert_array_equal(decode_ppm(payload)[0, 0], [1, 2, 3])

    def test_encoded_header(self):
        encoded = encode_ppm(np.zeros((2, 3, 3), dtype=np.uint8))

        self.assertTrue(encoded.startswith(b"P6\n3 2\n255\n"))
        self.assertEqual(len(encoded), len(b"P6\n3 2\n255\n") + 18)

    def test_encode_accepts_integer_valued_floats(self):
        pixels = np.full((1, 1, 3), 7.0)

        np.testing.assert_array_equal(decode_ppm(encode_ppm(pixels)), [[[7, 7, 7]]])

    def test_encode_rejects_out_of_range(self):
        with self.assertRaises(DataError):
            encode_ppm(np.full((1, 1, 3), 300.0))

    def test_encode_rejects_wrong_channels(self):
        with self.assertRaises(DataError):
            encode_ppm(np.zeros((2, 2), dtype=np.uint8))

    def test_wrong_magic(self):
        with self.assertRaises(DataError) as ctx:
            decode_ppm(b"P3\n1 1\n255\n1 2 3\n", name="ascii.ppm")
        self.assertIn("ascii.ppm", str(ctx.exception))

    def test_unsupported_maxval(self):
        with self.assertRaises(DataError):
            decode_ppm(b"P6\n1 1\n65535\n" + bytes(6))

    def test_truncated_pixels(self):
        with self.assertRaises(DataError):
            decode_ppm(b"P6\n2 2\n255\n" + bytes(5))

    def test_truncated_header(self):
        with self.assertRaises(DataError):
            decode_ppm(b"P6\n2")

    def test_malformed_dimensions(self):
        with self.assertRaises(DataError):
            decode_ppm(b"P6\nx 2\n255\n" + bytes(12))


class TestPpmReader(unittest.TestCase):
    """Test cases for the PpmReader class."""

    def test_reads_written_file(self):
        pixels = np.arange(4 * 5 * 3, dtype=np.uint8).reshape(4, 5, 3)
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "patch.ppm"
            write_ppm(path, pixels)

            np.testing.assert_array_equal(PpmReader(path).read_pixels(), pixels)

    def test_missing_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(DataError) as ctx:
                PpmReader(Path(tmp) / "absent.ppm").read_pixels()
        self.assertIn("not found", str(ctx.exception))


if __name__ == "__main__":
    unittest.main()
