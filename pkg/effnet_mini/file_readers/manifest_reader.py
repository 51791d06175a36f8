from dataclasses import dataclass
from typing import List

from effnet_mini.exceptions import DataError
from effnet_mini.file_readers.base_file_reader import BaseFileReader

MANIFEST_NAME = "labels.csv"
MANIFEST_HEADER = ["filename", "label"]


@dataclass(frozen=True)
class ManifestEntry:
    """One labels.csv row; row is the 1-based line number in the file"""

    filename: str
    label: int
    row: int


class LabelManifestReader(BaseFileReader):
    """Reads a labels.csv manifest with a "filename,label" header"""

    def read_entries(self) -> List[ManifestEntry]:
        header = self.read_csv_header()
        if header != MANIFEST_HEADER:
            raise DataError(f"{self.file_path} must start with header 'filename,label', got {','.join(header)!r}")
        entries = []
        for offset, row in enumerate(self.read_csv_file()):
            line = offset + 2
            filename = (row.get("filename") or "").strip()
            raw_label = (row.get("label") or "").strip()
            if not filename:
                raise DataError(f"{self.file_path} row {line}: missing filename")
            if raw_label not in ("0", "1"):
                raise DataError(f"{self.file_path} row {line} ({filename}): label {raw_label!r} is not 0 or 1")
            entries.append(ManifestEntry(filename=filename, label=int(raw_label), row=line))
        return entries
