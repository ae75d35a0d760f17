"""Test-only shapefile / dBASE writer for the 2D shape types the reader supports."""

import struct
from pathlib import Path

from geordf.geometry import LineString, MultiPoint, MultiPolygon, Point, Polygon, coordinates
from geordf.ingest import FieldKind

SHAPE_CODE = {Point: 1, LineString: 3, Polygon: 5, MultiPolygon: 5, MultiPoint: 8}


def _parts(g):
    if isinstance(g, LineString):
        return [list(g.points)]
    members = g.members if isinstance(g, MultiPolygon) else [g]
    return [list(r.points) for p in members for r in p.rings]


def shape_content(g):
    if g is None:
        return struct.pack("<i", 0)
    code = SHAPE_CODE[type(g)]
    if code == 1:
        return struct.pack("<idd", 1, g.x, g.y)
    pts = list(coordinates(g))
    xs, ys = [p.x for p in pts], [p.y for p in pts]
    box = struct.pack("<4d", min(xs), min(ys), max(xs), max(ys))
    if code == 8:
        body = struct.pack("<i", len(pts))
        return struct.pack("<i", 8) + box + body + b"".join(struct.pack("<2d", *p) for p in pts)
    parts = _parts(g)
    starts, n = [], 0
    for part in parts:
        starts.append(n)
        n += len(part)
    out = struct.pack("<i", code) + box + struct.pack("<2i", len(parts), n)
    out += struct.pack(f"<{len(parts)}i", *starts)
    out += b"".join(struct.pack("<2d", *p) for part in parts for p in part)
    return out


def _header(length_bytes, shape_type, box):
    return (
        struct.pack(">i", 9994)
        + bytes(20)
        + struct.pack(">i", length_bytes // 2)
        + struct.pack("<ii", 1000, shape_type)
        + struct.pack("<4d", *box)
        + bytes(32)
    )


def encode_shp(geometries, shape_type=None):
    """Return (.shp bytes, .shx bytes)."""
    contents = [shape_content(g) for g in geometries]
    if shape_type is None:
        shape_type = next((SHAPE_CODE[type(g)] for g in geometries if g is not None), 0)
    pts = [c for g in geometries if g is not None for c in coordinates(g)]
    box = (
        (min(p.x for p in pts), min(p.y for p in pts), max(p.x for p in pts), max(p.y for p in pts))
        if pts
        else (0.0, 0.0, 0.0, 0.0)
    )
    records, index, offset = b"", b"", 100
    for i, c in enumerate(contents, start=1):
        records += struct.pack(">ii", i, len(c) // 2) + c
        index += struct.pack(">ii", offset // 2, len(c) // 2)
        offset += 8 + len(c)
    shp = _header(100 + len(records), shape_type, box) + records
    shx = _header(100 + len(index), shape_type, box) + index
    return shp, shx


DBF_TYPE = {
    FieldKind.CHARACTER: b"C",
    FieldKind.INTEGER: b"N",
    FieldKind.DECIMAL: b"N",
    FieldKind.LOGICAL: b"L",
    FieldKind.DATE: b"D",
}


def _dbf_value(value, fd):
    if value is None:
        text = ""
    elif fd.kind is FieldKind.LOGICAL:
        text = "T" if value else "F"
    elif fd.kind is FieldKind.DATE:
        text = value.strftime("%Y%m%d")
    elif fd.kind is FieldKind.DECIMAL:
        text = f"{value:.{fd.decimal_count}f}"
    else:
        text = str(value)
    raw = text.encode("latin-1")
    if fd.kind in (FieldKind.INTEGER, FieldKind.DECIMAL):
        return raw.rjust(fd.length, b" ")
    return raw.ljust(fd.length, b" ")


def encode_dbf(fields, rows, deleted=()):
    record_len = 1 + sum(f.length for f in fields)
    header_len = 32 + 32 * len(fields) + 1
    out = bytes([0x03, 114, 1, 1]) + struct.pack("<IHH", len(rows), header_len, record_len) + bytes(20)
    for f in fields:
        out += f.name.encode("ascii").ljust(11, b"\0") + DBF_TYPE[f.kind] + bytes(4)
        out += bytes([f.length, f.decimal_count]) + bytes(14)
    out += b"\x0d"
    for i, row in enumerate(rows):
        out += b"*" if i in deleted else b" "
        out += b"".join(_dbf_value(v, f) for v, f in zip(row, fields))
    return out + b"\x1a"


def write_shapefile(base, geometries, fields, rows, prj=None, deleted=()):
    base = Path(base)
    shp, shx = encode_shp(geometries)
    base.with_suffix(".shp").write_bytes(shp)
    base.with_suffix(".shx").write_bytes(shx)
    base.with_suffix(".dbf").write_bytes(encode_dbf(fields, rows, deleted))
    if prj is not None:
        base.with_suffix(".prj").write_text(prj)
    return base
