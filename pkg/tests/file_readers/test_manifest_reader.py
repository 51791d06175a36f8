"""Unit tests for the LabelManifestReader class."""

import tempfile
import unittest
from pathlib import Path

from effnet_mini.exceptions import DataError
from effnet_mini.file_readers import MANIFEST_NAME, LabelManifestReader, ManifestEntry


class TestLabelManifestReader(unittest.TestCase):
    """Test cases for the LabelManifestReader class."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = Path(self.tmp.name) / MANIFEST_NAME

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, text: str) -> LabelManifestReader:
        self.path.write_text(text, encoding="utf-8")
        return LabelManifestReader(self.path)

    def test_reads_entries_with_row_numbers(self):
        reader = self.write("filename,label\na.ppm,1\nb.ppm,0\n")

        entries = reader.read_entries()

        self.assertEqual(entries, [ManifestEntry("a.ppm", 1, 2), ManifestEntry("b.ppm", 0, 3)])

    def test_strips_whitespace(self):
        entries = self.write("filename,label\n a.ppm , 1\n").read_entries()

        self.assertEqual(entries[0].filename, "a.ppm")
        self.assertEqual(entries[0].label, 1)

    def test_wrong_header(self):
        with self.assertRaises(DataError) as ctx:
            self.write("file,y\na.ppm,1\n").read_entries()
        self.assertIn("header", str(ctx.exception))

    def test_bad_label_names_row(self):
        with self.assertRaises(DataError) as ctx:
            self.write("filename,label\na.ppm,1\nb.ppm,2\n").read_entries()
        self.assertIn("row 3", str(ctx.exception))
        self.assertIn("b.ppm", str(ctx.exception))

    def test_missing_filename(self):
        with self.assertRaises(DataError):
            self.write("filename,label\n,1\n").read_entries()

    def test_empty_file(self):
        with self.assertRaises(DataError):
            self.write("").read_entries()

    def test_missing_manifest(self):
        with self.assertRaises(DataError):
            LabelManifestReader(Path(self.tmp.name) / "nope.csv").read_entries()


if __name__ == "__main__":
    unittest.main()
