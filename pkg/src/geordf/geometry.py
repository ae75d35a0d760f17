"""Simple Feature geometries, WKT text and validation.

Geometry values are immutable. Constructors do not enforce the structural
invariants (so that invalid input can still be described and reported);
use :func:`validate` or the WKT parser, which rejects invalid structures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Union

from .errors import ParseError

__all__ = [
    "Coordinate",
    "Point",
    "LineString",
    "LinearRing",
    "Polygon",
    "MultiPolygon",
    "MultiPoint",
    "Geometry",
    "Envelope",
    "Violation",
    "validate",
    "bbox",
    "coordinates",
    "format_number",
    "to_wkt",
    "from_wkt",
]


class Coordinate(NamedTuple):
    x: float
    y: float


def _coords(points: Iterable) -> tuple[Coordinate, ...]:
    return tuple(Coordinate(float(p[0]), float(p[1])) for p in points)


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    @property
    def coord(self) -> Coordinate:
        return Coordinate(self.x, self.y)


@dataclass(frozen=True)
class LineString:
    points: tuple[Coordinate, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", _coords(self.points))


@dataclass(frozen=True)
class LinearRing:
    points: tuple[Coordinate, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", _coords(self.points))


@dataclass(frozen=True)
class Polygon:
    exterior: LinearRing
    interiors: tuple[LinearRing, ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.exterior, LinearRing):
            object.__setattr__(self, "exterior", LinearRing(self.exterior))
        object.__setattr__(
            self,
            "interiors",
            tuple(r if isinstance(r, LinearRing) else LinearRing(r) for r in self.interiors),
        )

    @property
    def rings(self) -> tuple[LinearRing, ...]:
        return (self.exterior, *self.interiors)


@dataclass(frozen=True)
class MultiPolygon:
    members: tuple[Polygon, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))


@dataclass(frozen=True)
class MultiPoint:
    points: tuple[Coordinate, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", _coords(self.points))


Geometry = Union[Point, LineString, Polygon, MultiPolygon, MultiPoint]


class Envelope(NamedTuple):
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def contains(self, x: float, y: float) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax


# -- validation ---------------------------------------------------------------


class Violation(NamedTuple):
    kind: str
    path: str
    message: str


def _check_coords(points, path, out):
    for i, (x, y) in enumerate(points):
        if not (math.isfinite(x) and math.isfinite(y)):
            out.append(Violation("non_finite", f"{path}[{i}]", "non-finite coordinate"))


def _check_ring(ring: LinearRing, path: str, out: list[Violation]) -> None:
    pts = ring.points
    _check_coords(pts, path, out)
    if len(pts) < 4:
        out.append(Violation("short_ring", path, "ring length < 4"))
    if pts and pts[0] != pts[-1]:
        out.append(Violation("unclosed", path, "ring is not closed"))


def validate(g: Geometry) -> list[Violation]:
    """Return every invariant violation found in ``g``; empty when valid."""
    out: list[Violation] = []
    if isinstance(g, Point):
        _check_coords([g.coord], "point", out)
    elif isinstance(g, LineString):
        _check_coords(g.points, "linestring", out)
        if len(g.points) < 2:
            out.append(Violation("short_linestring", "linestring", "linestring length < 2"))
    elif isinstance(g, MultiPoint):
        _check_coords(g.points, "multipoint", out)
    elif isinstance(g, Polygon):
        _check_polygon(g, "polygon", out)
    elif isinstance(g, MultiPolygon):
        if not g.members:
            out.append(Violation("empty_multipolygon", "multipolygon", "empty multipolygon"))
        for i, p in enumerate(g.members):
            _check_polygon(p, f"multipolygon[{i}]", out)
    else:
        raise TypeError(f"not a geometry: {g!r}")
    return out


def _check_polygon(p: Polygon, path: str, out: list[Violation]) -> None:
    _check_ring(p.exterior, f"{path}.exterior", out)
    for i, r in enumerate(p.interiors):
        _check_ring(r, f"{path}.interior[{i}]", out)


# -- coordinate access --------------------------------------------------------


def coordinates(g: Geometry) -> Iterator[Coordinate]:
    """Yield every coordinate of ``g`` in storage order."""
    if isinstance(g, Point):
        yield g.coord
    elif isinstance(g, (LineString, MultiPoint)):
        yield from g.points
    elif isinstance(g, Polygon):
        for r in g.rings:
            yield from r.points
    elif isinstance(g, MultiPolygon):
        for p in g.members:
            for r in p.rings:
                yield from r.points
    else:
        raise TypeError(f"not a geometry: {g!r}")


def bbox(g: Geometry) -> Envelope:
    xs, ys = [], []
    for x, y in coordinates(g):
        xs.append(x)
        ys.append(y)
    if not xs:
        raise ValueError("geometry has no coordinates")
    return Envelope(min(xs), max(xs), min(ys), max(ys))


# -- WKT writer ---------------------------------------------------------------


def format_number(v: float, precision: int | None = None) -> str:
    """Shortest decimal text that reads back to the same double.

    With ``precision`` the value is written with that many fractional digits.
    """
    if precision is not None:
        return f"{v:.{precision}f}"
    text = repr(float(v))
    if text.endswith(".0"):
        text = text[:-2]
    return text


def _seq(points, precision) -> str:
    return ", ".join(f"{format_number(x, precision)} {format_number(y, precision)}" for x, y in points)


def _poly_body(p: Polygon, precision) -> str:
    return "(" + ",".join(f"({_seq(r.points, precision)})" for r in p.rings) + ")"


def to_wkt(g: Geometry, precision: int | None = None) -> str:
    if isinstance(g, Point):
        return f"POINT({_seq([g.coord], precision)})"
    if isinstance(g, LineString):
        return f"LINESTRING({_seq(g.points, precision)})"
    if isinstance(g, MultiPoint):
        return f"MULTIPOINT({_seq(g.points, precision)})"
    if isinstance(g, Polygon):
        return "POLYGON" + _poly_body(g, precision)
    if isinstance(g, MultiPolygon):
        return "MULTIPOLYGON(" + ",".join(_poly_body(p, precision) for p in g.members) + ")"
    raise TypeError(f"not a geometry: {g!r}")


# -- WKT reader ---------------------------------------------------------------


class _WktReader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> ParseError:
        offset = len(self.text[: self.pos].encode("utf-8"))
        return ParseError(message, offset)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def word(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        return self.text[start : self.pos].upper()

    def number(self) -> float:
        self.skip_ws()
        start = self.pos
        allowed = "+-.0123456789eE"
        while self.pos < len(self.text) and self.text[self.pos] in allowed:
            self.pos += 1
        token = self.text[start : self.pos]
        try:
            value = float(token)
        except ValueError:
            self.pos = start
            raise self.error(f"expected a number, found {token or self.peek()!r}") from None
        if not math.isfinite(value):
            self.pos = start
            raise self.error("non-finite coordinate")
        return value

    def coordinate(self) -> Coordinate:
        x = self.number()
        y = self.number()
        nxt = self.peek()
        if nxt and nxt not in ",)":
            raise self.error("only 2D coordinates are supported")
        return Coordinate(x, y)

    def coord_list(self) -> list[Coordinate]:
        self.expect("(")
        pts = [self.coordinate()]
        while self.peek() == ",":
            self.pos += 1
            pts.append(self.coordinate())
        self.expect(")")
        return pts

    def ring(self) -> LinearRing:
        start = self.pos
        pts = self.coord_list()
        if len(pts) < 4:
            self.pos = start
            raise self.error("ring has fewer than 4 points")
        if pts[0] != pts[-1]:
            self.pos = start
            raise self.error("ring is not closed")
        return LinearRing(pts)

    def polygon(self) -> Polygon:
        self.expect("(")
        rings = [self.ring()]
        while self.peek() == ",":
            self.pos += 1
            rings.append(self.ring())
        self.expect(")")
        return Polygon(rings[0], tuple(rings[1:]))

    def multipoint(self) -> list[Coordinate]:
        # both "MULTIPOINT(1 2, 3 4)" and "MULTIPOINT((1 2), (3 4))"
        self.expect("(")
        pts = []
        while True:
            if self.peek() == "(":
                self.pos += 1
                pts.append(self.coordinate())
                self.expect(")")
            else:
                pts.append(self.coordinate())
            if self.peek() != ",":
                break
            self.pos += 1
        self.expect(")")
        return pts

    def geometry(self) -> Geometry:
        start = self.pos
        tag = self.word()
        if self.peek().isalpha():
            raise self.error("Z/M and EMPTY geometries are not supported")
        if tag == "POINT":
            self.expect("(")
            c = self.coordinate()
            self.expect(")")
            return Point(c.x, c.y)
        if tag == "LINESTRING":
            start_list = self.pos
            pts = self.coord_list()
            if len(pts) < 2:
                self.pos = start_list
                raise self.error("linestring has fewer than 2 points")
            return LineString(pts)
        if tag == "POLYGON":
            return self.polygon()
        if tag == "MULTIPOINT":
            return MultiPoint(self.multipoint())
        if tag == "MULTIPOLYGON":
            self.expect("(")
            members = [self.polygon()]
            while self.peek() == ",":
                self.pos += 1
                members.append(self.polygon())
            self.expect(")")
            return MultiPolygon(members)
        self.pos = start
        raise self.error(f"unknown geometry tag {tag!r}" if tag else "expected a geometry tag")


def from_wkt(text: str) -> Geometry:
    reader = _WktReader(text)
    g = reader.geometry()
    reader.skip_ws()
    if reader.pos != len(text):
        raise reader.error("trailing characters after geometry")
    return g
