from __future__ import annotations

import csv
import hashlib
import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from io import StringIO
from pathlib import Path
from typing import Any

from lanczoskit.config import settings


@dataclass(frozen=True)
class TableArtifact:
    name: str
    path: Path
    row_count: int
    sha256: str
    size_bytes: int

    def as_manifest_entry(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "rows": self.row_count,
            "sha256": self.sha256,
            "size_bytes": self.size_bytes,
        }


def format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, f".{settings.csv_digits}g")
    return str(value)


def csv_bytes(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> bytes:
    buffer = StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buffer.getvalue().encode("utf-8")


class ResultStorage:
    """Writes CSV tables and a manifest under ``base_dir``; output is byte-reproducible."""

    def __init__(self, base_dir: Path | str):
        self.base_dir = Path(base_dir)
        self.tables: list[TableArtifact] = []

    def write_table(
        self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]
    ) -> TableArtifact:
        self.base_dir.mkdir(parents=True, exist_ok=True)
        rows = list(rows)
        data = csv_bytes(header, rows)
        path = self.base_dir / f"{name}.csv"
        path.write_bytes(data)
        artifact = TableArtifact(
            name=name,
            path=path,
            row_count=len(rows),
            sha256=hashlib.sha256(data).hexdigest(),
            size_bytes=len(data),
        )
        self.tables.append(artifact)
        return artifact

    def write_manifest(self, payload: dict[str, Any]) -> Path:
        self.base_dir.mkdir(parents=True, exist_ok=True)
        manifest = dict(payload)
        manifest["tables"] = [t.as_manifest_entry() for t in self.tables]
        path = self.base_dir / settings.manifest_name
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path
