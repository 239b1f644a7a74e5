"""CSV ingestion and emission for samples and result tables.

Format: UTF-8, comma separated, header row, one column per feature, optional
final column named ``target``.  Floats are written with 17 significant digits
so values round-trip exactly.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .core import LabelledSample, UnlabelledSample
from .errors import InvalidParameterError, MissingInputError

TARGET_COLUMN = "target"


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def read_sample_csv(path: str | Path) -> LabelledSample | UnlabelledSample:
    """Load a sample; the presence of a final ``target`` column decides its kind."""
    path = Path(path)
    if not path.exists():
        raise MissingInputError(f"sample file not found: {path}", path=str(path))
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidParameterError(f"empty CSV file: {path}") from None
        rows = [row for row in reader if row]
    if not rows:
        raise InvalidParameterError(f"CSV file has a header but no data rows: {path}")
    labelled = header[-1] == TARGET_COLUMN
    try:
        data = np.array([[float(v) for v in row] for row in rows], dtype=float)
    except ValueError as exc:
        raise InvalidParameterError(f"non-numeric cell in {path}: {exc}") from exc
    if data.shape[1] != len(header):
        raise InvalidParameterError(
            f"row width {data.shape[1]} does not match header width {len(header)} in {path}"
        )
    if labelled:
        if data.shape[1] < 2:
            raise InvalidParameterError(f"labelled CSV needs at least one feature column: {path}")
        return LabelledSample(inputs=data[:, :-1], targets=data[:, -1], source_id=str(path))
    return UnlabelledSample(inputs=data, source_id=str(path))


def write_sample_csv(sample: LabelledSample | UnlabelledSample, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    labelled = isinstance(sample, LabelledSample)
    header = [f"x{i}" for i in range(sample.dim)]
    if labelled:
        header.append(TARGET_COLUMN)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(sample.m):
            row = [format_float(v) for v in sample.inputs[i]]
            if labelled:
                row.append(format_float(sample.targets[i]))
            writer.writerow(row)


def read_matrix_csv(path: str | Path) -> np.ndarray:
    """Load a plain numeric matrix CSV (header row, no target column)."""
    path = Path(path)
    if not path.exists():
        raise MissingInputError(f"matrix file not found: {path}", path=str(path))
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        rows = [[float(v) for v in row] for row in reader if row]
    if not rows:
        raise InvalidParameterError(f"CSV file has no data rows: {path}")
    return np.array(rows, dtype=float)


def append_csv_row(path: str | Path, header: list[str], row: list[str]) -> None:
    """Append one row, writing the header first on a fresh file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fresh = not path.exists()
    with path.open("a", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if fresh:
            writer.writerow(header)
        writer.writerow(row)
