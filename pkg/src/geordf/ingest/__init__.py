"""Readers turning source files into a :class:`FeatureCollection`."""

from .collection import FeatureCollection, FieldDescriptor, FieldKind, SourceFeature
from .csv_points import CsvConfig, read_csv_points
from .dbf import read_dbf
from .shapefile import read_shapefile

__all__ = [
    "FeatureCollection",
    "FieldDescriptor",
    "FieldKind",
    "SourceFeature",
    "CsvConfig",
    "read_csv_points",
    "read_dbf",
    "read_shapefile",
]
