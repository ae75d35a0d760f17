"""ESRI Shapefile reader (.shp/.shx/.dbf/.prj).

Layout summary: a 100-byte main header (file code 9994 and file length in
16-bit words, big-endian; version, shape type and bounding box,
little-endian), then records made of a big-endian header (record number,
content length in words) and little-endian content.
"""

from __future__ import annotations

import logging
import struct
from pathlib import Path

from .. import crs as crs_mod
from ..errors import (
    BadMagic,
    InvalidGeometry,
    RecordCountMismatch,
    TruncatedRecord,
    UnsupportedShapeType,
)
from ..geometry import (
    Coordinate,
    Geometry,
    LinearRing,
    LineString,
    MultiPoint,
    MultiPolygon,
    Point,
    Polygon,
    validate,
)
from .collection import FeatureCollection, SourceFeature
from .dbf import read_dbf

log = logging.getLogger(__name__)

FILE_CODE = 9994
HEADER_SIZE = 100

NULL, POINT, POLYLINE, POLYGON, MULTIPOINT = 0, 1, 3, 5, 8
SHAPE_NAMES = {
    0: "Null",
    1: "Point",
    3: "PolyLine",
    5: "Polygon",
    8: "MultiPoint",
    11: "PointZ",
    13: "PolyLineZ",
    15: "PolygonZ",
    18: "MultiPointZ",
    21: "PointM",
    23: "PolyLineM",
    25: "PolygonM",
    28: "MultiPointM",
    31: "MultiPatch",
}

# rings whose ends are this close are snapped shut
CLOSURE_SLACK = 1e-9


def _sidecar(base: Path, ext: str) -> Path | None:
    for candidate in (base.with_suffix(ext), base.with_suffix(ext.upper())):
        if candidate.exists():
            return candidate
    return None


def _base_path(path: str | Path) -> Path:
    p = Path(path)
    if p.suffix.lower() in (".shp", ".shx", ".dbf", ".prj"):
        return p.with_suffix("")
    return p


def read_header(data: bytes) -> tuple[int, int]:
    """Validate the 100-byte header; return (file length in bytes, shape type)."""
    if len(data) < HEADER_SIZE:
        raise TruncatedRecord(f"main file header needs {HEADER_SIZE} bytes, got {len(data)}")
    (code,) = struct.unpack_from(">i", data, 0)
    if code != FILE_CODE:
        raise BadMagic(f"file code is {code}, expected {FILE_CODE}")
    (length_words,) = struct.unpack_from(">i", data, 24)
    (shape_type,) = struct.unpack_from("<i", data, 32)
    return length_words * 2, shape_type


def _check_type(shape_type: int) -> None:
    if shape_type not in (NULL, POINT, POLYLINE, POLYGON, MULTIPOINT):
        name = SHAPE_NAMES.get(shape_type, "unknown")
        raise UnsupportedShapeType(shape_type, f"{name} shapes are not supported (2D only)")


def record_offsets(shp: bytes, shx: bytes | None) -> list[tuple[int, int]]:
    """(content offset, content length in bytes) for every record."""
    file_len, _ = read_header(shp)
    if file_len > len(shp):
        raise TruncatedRecord(f"header declares {file_len} bytes, file has {len(shp)}")
    out = []
    if shx is not None:
        shx_len, _ = read_header(shx)
        n = (min(shx_len, len(shx)) - HEADER_SIZE) // 8
        for i in range(n):
            offset_words, length_words = struct.unpack_from(">ii", shx, HEADER_SIZE + 8 * i)
            start = offset_words * 2
            if start + 8 > len(shp):
                raise TruncatedRecord(f"record {i + 1}: index points past the end of the .shp file")
            _num, content_words = struct.unpack_from(">ii", shp, start)
            out.append((start + 8, content_words * 2))
    else:
        pos = HEADER_SIZE
        while pos < file_len:
            if pos + 8 > file_len:
                raise TruncatedRecord(f"record header at offset {pos} is cut off")
            _num, content_words = struct.unpack_from(">ii", shp, pos)
            out.append((pos + 8, content_words * 2))
            pos += 8 + content_words * 2
    for i, (start, length) in enumerate(out):
        if start + length > file_len or length < 4:
            raise TruncatedRecord(f"record {i + 1}: content of {length} bytes at offset {start} is cut off")
    return out


def _read(fmt: str, content: bytes, offset: int, recno: int):
    try:
        return struct.unpack_from(fmt, content, offset)
    except struct.error:
        raise TruncatedRecord(f"record {recno}: content too short") from None


def _points(content: bytes, offset: int, count: int, recno: int) -> list[Coordinate]:
    flat = _read(f"<{2 * count}d", content, offset, recno)
    return [Coordinate(flat[i], flat[i + 1]) for i in range(0, len(flat), 2)]


def signed_area(points) -> float:
    """Shoelace area; negative for clockwise rings (y axis up)."""
    total = 0.0
    for (x1, y1), (x2, y2) in zip(points, points[1:]):
        total += x1 * y2 - x2 * y1
    return total / 2


def ring_contains(points, x: float, y: float) -> bool:
    """Even-odd point-in-ring test; boundary points count as outside."""
    inside = False
    for (x1, y1), (x2, y2) in zip(points, points[1:]):
        if (y1 > y) != (y2 > y):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xc == x:
                return False
            if xc > x:
                inside = not inside
    return inside


def close_ring(points: list[Coordinate], recno: int) -> LinearRing:
    first, last = points[0], points[-1]
    if first != last:
        if abs(first.x - last.x) <= CLOSURE_SLACK and abs(first.y - last.y) <= CLOSURE_SLACK:
            points = points[:-1] + [first]
        else:
            raise InvalidGeometry(f"record {recno}: ring is not closed")
    ring = LinearRing(points)
    if len(ring.points) < 4:
        raise InvalidGeometry(f"record {recno}: ring has fewer than 4 points")
    return ring


def assemble_polygons(rings: list[LinearRing]) -> MultiPolygon:
    """Group rings into polygons: clockwise rings are exteriors, others holes."""
    exteriors = [r for r in rings if signed_area(r.points) < 0]
    holes = [r for r in rings if signed_area(r.points) >= 0]
    if not exteriors:
        # all rings counter-clockwise: treat each as its own polygon
        return MultiPolygon([Polygon(r) for r in rings])
    assigned: dict[int, list[LinearRing]] = {i: [] for i in range(len(exteriors))}
    orphans = []
    for hole in holes:
        best = None
        for i, ext in enumerate(exteriors):
            if any(ring_contains(ext.points, x, y) for x, y in hole.points[:-1]):
                if best is None or abs(signed_area(ext.points)) < abs(signed_area(exteriors[best].points)):
                    best = i
        if best is None:
            orphans.append(hole)
        else:
            assigned[best].append(hole)
    members = [Polygon(ext, tuple(assigned[i])) for i, ext in enumerate(exteriors)]
    members.extend(Polygon(r) for r in orphans)
    return MultiPolygon(members)


def decode_shape(content: bytes, recno: int) -> Geometry | None:
    (shape_type,) = _read("<i", content, 0, recno)
    _check_type(shape_type)
    if shape_type == NULL:
        return None
    if shape_type == POINT:
        x, y = _read("<2d", content, 4, recno)
        return Point(x, y)
    if shape_type == MULTIPOINT:
        (n,) = _read("<i", content, 36, recno)
        return MultiPoint(_points(content, 40, n, recno))
    # PolyLine and Polygon share the part layout
    num_parts, num_points = _read("<2i", content, 36, recno)
    parts = list(_read(f"<{num_parts}i", content, 44, recno))
    pts = _points(content, 44 + 4 * num_parts, num_points, recno)
    bounds = parts + [num_points]
    if num_parts < 1 or parts[0] != 0 or any(a >= b for a, b in zip(bounds, bounds[1:])):
        raise InvalidGeometry(f"record {recno}: bad part index array {parts}")
    chunks = [pts[bounds[i] : bounds[i + 1]] for i in range(num_parts)]
    if shape_type == POLYLINE:
        if num_parts != 1:
            raise UnsupportedShapeType(shape_type, f"record {recno}: multi-part PolyLine")
        if len(chunks[0]) < 2:
            raise InvalidGeometry(f"record {recno}: line has fewer than 2 points")
        return LineString(chunks[0])
    if not chunks:
        raise InvalidGeometry(f"record {recno}: polygon without rings")
    return assemble_polygons([close_ring(c, recno) for c in chunks])


def read_shapes(shp_path: str | Path, shx_path: str | Path | None = None) -> list[Geometry | None]:
    shp = Path(shp_path).read_bytes()
    _, shape_type = read_header(shp)
    _check_type(shape_type)
    shx = Path(shx_path).read_bytes() if shx_path else None
    shapes = []
    for i, (start, length) in enumerate(record_offsets(shp, shx)):
        g = decode_shape(shp[start : start + length], i + 1)
        if g is not None:
            problems = validate(g)
            if problems:
                raise InvalidGeometry(f"record {i + 1}: {problems[0].message}")
        shapes.append(g)
    return shapes


def read_shapefile(
    base_path: str | Path,
    encoding: str = "latin-1",
    registry: crs_mod.CrsRegistry = crs_mod.REGISTRY,
    use_index: bool = True,
) -> FeatureCollection:
    """Read a shapefile set into a :class:`FeatureCollection`.

    ``base_path`` may name the .shp file or the path without extension.
    Without a .prj the collection is taken to be WGS84.
    """
    base = _base_path(base_path)
    shp = _sidecar(base, ".shp")
    dbf = _sidecar(base, ".dbf")
    if shp is None:
        raise FileNotFoundError(f"{base}.shp not found")
    if dbf is None:
        raise FileNotFoundError(f"{base}.dbf not found")
    shx = _sidecar(base, ".shx") if use_index else None
    prj = _sidecar(base, ".prj")

    shapes = read_shapes(shp, shx)
    fields, rows = read_dbf(dbf, encoding=encoding)
    if len(shapes) != len(rows):
        raise RecordCountMismatch(len(shapes), len(rows))
    if prj is not None:
        crs = crs_mod.parse_prj(prj.read_text(encoding="latin-1"), registry)
    else:
        log.info("%s has no .prj, assuming WGS84", base)
        crs = registry.get("WGS84")
    features = [SourceFeature(tuple(row), g) for row, g in zip(rows, shapes)]
    return FeatureCollection(fields, crs, features)
