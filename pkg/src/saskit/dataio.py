"""Columnar scattering-data ingest and serialization.

Accepts the common ASCII layouts: 2 to 4 columns (q, I, [dI, [dq]]),
whitespace / comma / semicolon delimited, with arbitrary header or comment
lines.  The dq resolution column is read and discarded.  Content is sniffed,
never dispatched on file extension, so ``.txt``, ``.dat``, ``.csv`` and
``.abs`` files all take the same path.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import SaskitError

logger = logging.getLogger(__name__)


class DatasetInvariantError(SaskitError):
    pass


class NoNumericRows(SaskitError):
    pass


class InconsistentColumnCount(SaskitError):
    pass


class NonPositiveQ(SaskitError):
    pass


@dataclass
class Dataset:
    """Columnar scattering data: q (1/A), intensity (1/cm), optional 1-sigma bars."""

    q: np.ndarray
    intensity: np.ndarray
    d_intensity: np.ndarray | None = None
    source: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        self.intensity = np.asarray(self.intensity, dtype=float)
        if self.d_intensity is not None:
            self.d_intensity = np.asarray(self.d_intensity, dtype=float)
        if self.q.size == 0:
            raise DatasetInvariantError("dataset is empty")
        if self.q.shape != self.intensity.shape:
            raise DatasetInvariantError("q and intensity lengths differ")
        if self.d_intensity is not None:
            if self.d_intensity.shape != self.q.shape:
                raise DatasetInvariantError("d_intensity length differs")
            if not np.all(self.d_intensity > 0):
                raise DatasetInvariantError("d_intensity entries must be > 0")
        if not np.all(self.q > 0):
            raise DatasetInvariantError("q values must be positive")
        if not np.all(np.diff(self.q) > 0):
            raise DatasetInvariantError("q values must be strictly ascending")

    def __len__(self) -> int:
        return int(self.q.size)

    def summary(self) -> dict[str, Any]:
        peak = int(np.argmax(self.intensity))
        return {
            "points": len(self),
            "q_range": [float(self.q[0]), float(self.q[-1])],
            "first": [float(self.q[0]), float(self.intensity[0])],
            "last": [float(self.q[-1]), float(self.intensity[-1])],
            "peak": [float(self.q[peak]), float(self.intensity[peak])],
            "has_uncertainty": self.d_intensity is not None,
        }


@dataclass
class ParsedFile:
    dataset: Dataset
    skipped_lines: int
    delimiter: str        # "whitespace" | "comma" | "semicolon"
    column_count: int     # 2, 3, or 4


def _split(line: str, delimiter: str) -> list[str]:
    if delimiter == "comma":
        fields = line.split(",")
    elif delimiter == "semicolon":
        fields = line.split(";")
    else:
        fields = line.split()
    return [f for f in (part.strip() for part in fields) if f]


def _sniff_delimiter(line: str) -> str:
    if "," in line:
        return "comma"
    if ";" in line:
        return "semicolon"
    return "whitespace"


def _try_parse_row(line: str, delimiter: str) -> list[float] | None:
    fields = _split(line, delimiter)
    if len(fields) < 2:
        return None
    values = []
    for f in fields:
        try:
            values.append(float(f))
        except ValueError:
            return None
    return values


def load_ascii(text: str) -> ParsedFile:
    """Parse file contents into a sorted, de-duplicated Dataset.

    Header/comment lines (leading ``#`` or ``%``, or no parsable leading
    number) are skipped.  Rows with non-finite values or q <= 0 are dropped
    and counted as skipped.  Duplicate q values are averaged.
    """
    if not text or not text.strip():
        raise NoNumericRows("file is empty")
    lines = text.splitlines()
    total = len(lines)

    delimiter = "whitespace"
    rows: list[list[float]] = []
    saw_numeric = False
    for line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("#") or stripped.startswith("%"):
            continue
        if not rows:
            candidate = _sniff_delimiter(stripped)
            values = _try_parse_row(stripped, candidate)
            if values is None:
                continue
            delimiter = candidate
        else:
            values = _try_parse_row(stripped, delimiter)
            if values is None:
                # mid-file header or footer text
                continue
        saw_numeric = True
        if rows and len(values) != len(rows[0]):
            raise InconsistentColumnCount(
                f"row has {len(values)} columns, expected {len(rows[0])}")
        rows.append(values)

    if not saw_numeric:
        raise NoNumericRows("no numeric data rows found")

    column_count = min(len(rows[0]), 4)
    if len(rows[0]) > 4:
        logger.warning("ignoring columns beyond the 4th (q, I, dI, dq)")
    if column_count == 4:
        logger.warning("dq resolution column present; read and discarded")

    kept: list[tuple[float, float, float | None]] = []
    for values in rows:
        q, intensity = values[0], values[1]
        d_int = values[2] if column_count >= 3 else None
        probe = [q, intensity] + ([d_int] if d_int is not None else [])
        if not all(math.isfinite(v) for v in probe):
            continue
        if q <= 0:
            continue
        if d_int is not None and d_int <= 0:
            # treat bad error bars like non-finite rows
            continue
        kept.append((q, intensity, d_int))

    if not kept:
        raise NonPositiveQ("no rows with positive finite q")

    kept.sort(key=lambda row: row[0])
    merged: list[tuple[float, float, float | None]] = []
    i = 0
    while i < len(kept):
        j = i
        while j + 1 < len(kept) and kept[j + 1][0] == kept[i][0]:
            j += 1
        group = kept[i:j + 1]
        if len(group) == 1:
            merged.append(group[0])
        else:
            n = len(group)
            mean_i = sum(g[1] for g in group) / n
            if column_count >= 3:
                d_val = math.sqrt(sum(g[2] ** 2 for g in group)) / n
            else:
                d_val = None
            merged.append((kept[i][0], mean_i, d_val))
        i = j + 1

    q = np.array([m[0] for m in merged])
    intensity = np.array([m[1] for m in merged])
    d_intensity = np.array([m[2] for m in merged]) if column_count >= 3 else None
    dataset = Dataset(q=q, intensity=intensity, d_intensity=d_intensity,
                      source={"kind": "file"})
    return ParsedFile(dataset=dataset,
                      skipped_lines=total - len(dataset),
                      delimiter=delimiter,
                      column_count=column_count)


def save_ascii(dataset: Dataset) -> str:
    """Serialize to the 2- or 3-column ASCII layout, 9 significant digits."""
    lines = []
    if dataset.d_intensity is not None:
        lines.append("# q I dI")
        for q, i, di in zip(dataset.q, dataset.intensity, dataset.d_intensity):
            lines.append(f"{q:.9g} {i:.9g} {di:.9g}")
    else:
        lines.append("# q I")
        for q, i in zip(dataset.q, dataset.intensity):
            lines.append(f"{q:.9g} {i:.9g}")
    return "\n".join(lines) + "\n"
