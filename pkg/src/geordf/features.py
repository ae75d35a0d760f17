"""Split source records into thematic and geometric properties."""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field
from typing import Any

from . import crs as crs_mod
from .crs import CrsId
from .geometry import Geometry, MultiPoint, MultiPolygon, Polygon, format_number, to_wkt
from .ingest.collection import FeatureCollection, FieldKind

GEOMETRY_PROPERTY = "geometry"


@dataclass(frozen=True)
class FeatureProperty:
    name: str
    string_value: str
    kind: FieldKind
    value: Any = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("property name must not be empty")


@dataclass(frozen=True)
class GeometryProperty(FeatureProperty):
    geometry: Geometry | None = None
    crs: CrsId | None = None
    num_geometries: int = 0
    num_interior_ring: int = 0


@dataclass(frozen=True)
class Feature:
    source_id: str
    thematic: tuple[FeatureProperty, ...] = field(default=())
    geometric: tuple[GeometryProperty, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "thematic", tuple(self.thematic))
        object.__setattr__(self, "geometric", tuple(self.geometric))
        clash = {p.name for p in self.thematic} & {p.name for p in self.geometric}
        if clash:
            raise ValueError(f"properties both thematic and geometric: {sorted(clash)}")

    def get(self, name: str) -> FeatureProperty | None:
        for p in (*self.thematic, *self.geometric):
            if p.name == name:
                return p
        return None


def string_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_number(value)
    if isinstance(value, datetime.date):
        return value.isoformat()
    return str(value)


def geometry_counts(g: Geometry) -> tuple[int, int]:
    """(number of member geometries, total number of interior rings)."""
    if isinstance(g, MultiPolygon):
        return len(g.members), sum(len(p.interiors) for p in g.members)
    if isinstance(g, Polygon):
        return 1, len(g.interiors)
    if isinstance(g, MultiPoint):
        return len(g.points), 0
    return 1, 0


def make_geometry_property(g: Geometry, crs: CrsId, name: str = GEOMETRY_PROPERTY) -> GeometryProperty:
    n_geom, n_holes = geometry_counts(g)
    return GeometryProperty(
        name=name,
        string_value=to_wkt(g),
        kind=FieldKind.GEOMETRY,
        value=g,
        geometry=g,
        crs=crs,
        num_geometries=n_geom,
        num_interior_ring=n_holes,
    )


def parse_features(
    fc: FeatureCollection,
    target_crs: CrsId | None = None,
    id_column: str | None = None,
    registry: crs_mod.CrsRegistry = crs_mod.REGISTRY,
) -> list[Feature]:
    """Classify every record's properties, reprojecting geometries if needed.

    ``source_id`` is the value of ``id_column``, or the 1-based record number
    when no column is given.
    """
    names = fc.field_names()
    if id_column is not None and id_column not in names:
        raise KeyError(f"identifier column {id_column!r} not in schema {names}")
    out_crs = fc.crs
    project = None
    if target_crs is not None and target_crs != fc.crs:
        project = crs_mod.transformer(fc.crs, target_crs, registry)
        out_crs = target_crs

    features = []
    for n, src in enumerate(fc.features, start=1):
        thematic = [
            FeatureProperty(fd.name, string_value(v), fd.kind, v) for fd, v in zip(fc.schema, src.values)
        ]
        geometric = []
        if src.geometry is not None:
            g = src.geometry
            if project is not None:
                g = crs_mod.map_geometry(g, project)
            geometric.append(make_geometry_property(g, out_crs))
        if id_column is not None:
            source_id = string_value(src.values[names.index(id_column)])
        else:
            source_id = str(n)
        features.append(Feature(source_id, thematic, geometric))
    return features
