"""Point features from delimited text files."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .. import crs as crs_mod
from ..crs import CrsId
from ..errors import MissingColumn, NonNumericCoordinate
from ..geometry import Point
from .collection import FeatureCollection, FieldDescriptor, FieldKind, SourceFeature


@dataclass(frozen=True)
class CsvConfig:
    x_column: str = "lon"
    y_column: str = "lat"
    crs: CrsId = crs_mod.WGS84
    delimiter: str = ","
    encoding: str = "utf-8"


def _is_int(text: str) -> bool:
    try:
        return str(int(text)) == text
    except ValueError:
        return False


def _is_float(text: str) -> bool:
    try:
        return math.isfinite(float(text))
    except ValueError:
        return False


def _zero_padded(text: str) -> bool:
    return len(text) > 1 and text.isdigit() and text[0] == "0"


def infer_kind(values: list[str]) -> FieldKind:
    # zero-padded codes such as "01" stay text
    present = [v for v in values if v != ""]
    if not present or any(_zero_padded(v) for v in present):
        return FieldKind.CHARACTER
    if all(_is_int(v) for v in present):
        return FieldKind.INTEGER
    if all(_is_float(v) for v in present):
        return FieldKind.DECIMAL
    return FieldKind.CHARACTER


def _convert(text: str, kind: FieldKind):
    if text == "" and kind is not FieldKind.CHARACTER:
        return None
    if kind is FieldKind.INTEGER:
        return int(text)
    if kind is FieldKind.DECIMAL:
        return float(text)
    return text


def read_csv_points(path: str | Path, config: CsvConfig = CsvConfig()) -> FeatureCollection:
    """Each row becomes a Point feature; other columns are attributes."""
    with open(path, newline="", encoding=config.encoding) as fh:
        reader = csv.reader(fh, delimiter=config.delimiter)
        header = next(reader, None)
        if header is None:
            raise MissingColumn(config.x_column)
        rows = [r for r in reader if r]
    for col in (config.x_column, config.y_column):
        if col not in header:
            raise MissingColumn(col)
    xi, yi = header.index(config.x_column), header.index(config.y_column)
    attr_idx = [i for i in range(len(header)) if i not in (xi, yi)]

    points = []
    for n, row in enumerate(rows, start=1):
        row = row + [""] * (len(header) - len(row))
        coords = []
        for i in (xi, yi):
            try:
                v = float(row[i])
            except ValueError:
                raise NonNumericCoordinate(n, header[i], row[i]) from None
            if not math.isfinite(v):
                raise NonNumericCoordinate(n, header[i], row[i])
            coords.append(v)
        points.append(Point(*coords))
        rows[n - 1] = row

    kinds = {i: infer_kind([r[i] for r in rows]) for i in attr_idx}
    schema = [FieldDescriptor(header[i], kinds[i]) for i in attr_idx]
    features = [
        SourceFeature(tuple(_convert(row[i], kinds[i]) for i in attr_idx), pt)
        for row, pt in zip(rows, points)
    ]
    return FeatureCollection(schema, config.crs, features)
