"""Coordinate reference systems: registry, .prj recognition and reprojection.

Only two systems are built in: WGS84 geographic and Lambert-93 (RGF93,
Lambert Conformal Conic with two standard parallels). RGF93 and WGS84 are
treated as the same datum, so conversion between them is a pure projection.
More systems can be loaded from an INI-style registry file, see
:func:`load_registry`.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from . import geometry as geo
from .errors import NoConvergence, OutOfDomain, ParseError, UnsupportedCrs, UnsupportedTransformation

WGS84_URI = "http://data.ign.fr/id/ignf/crs/WGS84GDD"
LAMB93_URI = "http://data.ign.fr/id/ignf/crs/LAMB93"

MAX_ITERATIONS = 25
LATITUDE_TOLERANCE = 1e-12  # radians


@dataclass(frozen=True)
class CrsId:
    authority: str
    code: str
    kind: str  # "geographic" | "projected"
    uri: str

    def __str__(self) -> str:
        return f"{self.authority}:{self.code}"


@dataclass(frozen=True)
class Ellipsoid:
    semi_major_a: float
    inverse_flattening: float

    def __post_init__(self):
        if not (self.semi_major_a > 0 and self.inverse_flattening > 0):
            raise ValueError("ellipsoid axis and inverse flattening must be positive")

    @property
    def e(self) -> float:
        f = 1.0 / self.inverse_flattening
        return math.sqrt(2 * f - f * f)


GRS80 = Ellipsoid(6378137.0, 298.257222101)
WGS84_ELLIPSOID = Ellipsoid(6378137.0, 298.257223563)


@dataclass(frozen=True)
class LccParams:
    ellipsoid: Ellipsoid
    lat_origin: float
    lon_origin: float
    std_parallel_1: float
    std_parallel_2: float
    false_easting: float
    false_northing: float

    def __post_init__(self):
        for sp in (self.std_parallel_1, self.std_parallel_2):
            if not -90.0 < sp < 90.0:
                raise ValueError(f"standard parallel {sp} outside (-90, 90)")
        if self.std_parallel_1 == self.std_parallel_2:
            raise ValueError("standard parallels must be distinct")

    # Derived constants, computed once per parameter set.
    @cached_property
    def _constants(self) -> tuple[float, float, float, float]:
        a = self.ellipsoid.semi_major_a
        e = self.ellipsoid.e
        phi1 = math.radians(self.std_parallel_1)
        phi2 = math.radians(self.std_parallel_2)
        m1, m2 = _m(phi1, e), _m(phi2, e)
        t1, t2 = _t(phi1, e), _t(phi2, e)
        n = (math.log(m1) - math.log(m2)) / (math.log(t1) - math.log(t2))
        F = m1 / (n * t1**n)
        r_origin = a * F * _t(math.radians(self.lat_origin), e) ** n
        return n, F, r_origin, e


def _m(phi: float, e: float) -> float:
    return math.cos(phi) / math.sqrt(1 - (e * math.sin(phi)) ** 2)


def _t(phi: float, e: float) -> float:
    es = e * math.sin(phi)
    return math.tan(math.pi / 4 - phi / 2) / ((1 - es) / (1 + es)) ** (e / 2)


def lcc_forward(lon: float, lat: float, p: LccParams) -> tuple[float, float]:
    """Geographic degrees to (easting, northing) in meters."""
    if not (math.isfinite(lon) and math.isfinite(lat)) or abs(lat) >= 90.0:
        raise OutOfDomain(f"latitude {lat} is outside the projection domain")
    n, F, r_origin, e = p._constants
    a = p.ellipsoid.semi_major_a
    r = a * F * _t(math.radians(lat), e) ** n
    theta = n * math.radians(lon - p.lon_origin)
    easting = p.false_easting + r * math.sin(theta)
    northing = p.false_northing + r_origin - r * math.cos(theta)
    return easting, northing


def lcc_inverse(easting: float, northing: float, p: LccParams) -> tuple[float, float]:
    """(easting, northing) in meters back to geographic degrees (lon, lat)."""
    n, F, r_origin, e = p._constants
    a = p.ellipsoid.semi_major_a
    dx = easting - p.false_easting
    dy = r_origin - (northing - p.false_northing)
    sign = 1.0 if n > 0 else -1.0
    r = sign * math.hypot(dx, dy)
    theta = math.atan2(sign * dx, sign * dy)
    if r == 0.0:
        # the cone apex is the pole on the side of the projection
        return p.lon_origin, math.copysign(90.0, n)
    t = (r / (a * F)) ** (1 / n)

    # fixed point on the isometric latitude
    phi = math.pi / 2 - 2 * math.atan(t)
    for _ in range(MAX_ITERATIONS):
        es = e * math.sin(phi)
        nxt = math.pi / 2 - 2 * math.atan(t * ((1 - es) / (1 + es)) ** (e / 2))
        if abs(nxt - phi) < LATITUDE_TOLERANCE:
            phi = nxt
            break
        phi = nxt
    else:
        raise NoConvergence(f"latitude did not converge for ({easting}, {northing})")
    lon = math.degrees(theta / n) + p.lon_origin
    return lon, math.degrees(phi)


# -- registry -----------------------------------------------------------------


@dataclass(frozen=True)
class CrsEntry:
    crs: CrsId
    ellipsoid: Ellipsoid
    lcc: LccParams | None = None
    # key of the geographic CRS the projection is defined over
    base: str | None = None
    aliases: tuple[str, ...] = field(default=())


def _norm(name: str) -> str:
    return re.sub(r"[^A-Z0-9]", "", name.upper())


class CrsRegistry:
    def __init__(self, entries: dict[str, CrsEntry] | None = None):
        self._entries: dict[str, CrsEntry] = {}
        for key, entry in (entries or {}).items():
            self.add(key, entry)

    def add(self, key: str, entry: CrsEntry) -> None:
        self._entries[key] = entry

    def keys(self) -> list[str]:
        return list(self._entries)

    def entry(self, crs: CrsId | str) -> CrsEntry:
        if isinstance(crs, str):
            found = self.lookup(crs)
            if found is None:
                raise UnsupportedCrs(crs)
            return self._entries[found]
        for entry in self._entries.values():
            if entry.crs == crs:
                return entry
        raise UnsupportedCrs(str(crs))

    def get(self, name: str) -> CrsId:
        return self.entry(name).crs

    def lookup(self, name: str) -> str | None:
        """Registry key for a key, alias, code or "AUTH:CODE" string."""
        wanted = _norm(name)
        for key, entry in self._entries.items():
            names = {key, entry.crs.code, f"{entry.crs.authority}:{entry.crs.code}", *entry.aliases}
            if wanted in {_norm(n) for n in names}:
                return key
        return None

    def key_of(self, crs: CrsId) -> str:
        for key, entry in self._entries.items():
            if entry.crs == crs:
                return key
        raise UnsupportedCrs(str(crs))

    def entries(self):
        return self._entries.items()


LAMBERT93 = LccParams(
    ellipsoid=GRS80,
    lat_origin=46.5,
    lon_origin=3.0,
    std_parallel_1=49.0,
    std_parallel_2=44.0,
    false_easting=700000.0,
    false_northing=6600000.0,
)


def default_registry(lamb93_uri: str = LAMB93_URI) -> CrsRegistry:
    return CrsRegistry(
        {
            "WGS84": CrsEntry(
                crs=CrsId("EPSG", "4326", "geographic", WGS84_URI),
                ellipsoid=WGS84_ELLIPSOID,
                base="WGS84",
                aliases=("WGS84GDD", "WGS 84", "WGS_1984", "GCS_WGS_1984", "EPSG:4326"),
            ),
            "LAMB93": CrsEntry(
                crs=CrsId("EPSG", "2154", "projected", lamb93_uri),
                ellipsoid=GRS80,
                lcc=LAMBERT93,
                base="WGS84",
                aliases=("Lambert-93", "RGF93 / Lambert-93", "RGF93_Lambert_93", "IGNF:LAMB93", "EPSG:2154"),
            ),
        }
    )


REGISTRY = default_registry()
WGS84 = REGISTRY.get("WGS84")
LAMB93 = REGISTRY.get("LAMB93")


def load_registry(path: str | Path, base: CrsRegistry | None = None) -> CrsRegistry:
    """Extend a registry from an INI file, one section per CRS.

    Example section::

        [LAMB93]
        uri = http://example.org/crs/lambert93

        [MYLCC]
        authority = LOCAL
        code = 1
        kind = projected
        uri = http://example.org/crs/mylcc
        aliases = My LCC, MyLCC
        semi_major_a = 6378137
        inverse_flattening = 298.257222101
        lat_origin = 46.5
        lon_origin = 3
        std_parallel_1 = 49
        std_parallel_2 = 44
        false_easting = 700000
        false_northing = 6600000

    Sections naming an existing key override only the fields they give.
    """
    registry = CrsRegistry(dict(base.entries()) if base else dict(REGISTRY.entries()))
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    for key in parser.sections():
        sec = parser[key]
        old = dict(registry.entries()).get(key)
        crs = CrsId(
            authority=sec.get("authority", old.crs.authority if old else "LOCAL"),
            code=sec.get("code", old.crs.code if old else key),
            kind=sec.get("kind", old.crs.kind if old else "projected"),
            uri=sec.get("uri", old.crs.uri if old else ""),
        )
        if not re.match(r"^[A-Za-z][A-Za-z0-9+.-]*:\S+$", crs.uri):
            raise ValueError(f"[{key}] uri must be an absolute IRI, got {crs.uri!r}")
        if crs.kind not in ("geographic", "projected"):
            raise ValueError(f"[{key}] kind must be geographic or projected")
        ellipsoid = Ellipsoid(
            sec.getfloat("semi_major_a", old.ellipsoid.semi_major_a if old else GRS80.semi_major_a),
            sec.getfloat("inverse_flattening", old.ellipsoid.inverse_flattening if old else GRS80.inverse_flattening),
        )
        lcc = None
        if crs.kind == "projected":
            prev = old.lcc if old else None

            def num(name):
                if name in sec:
                    return sec.getfloat(name)
                if prev is None:
                    raise ValueError(f"[{key}] missing {name}")
                return getattr(prev, name)

            lcc = LccParams(
                ellipsoid,
                num("lat_origin"),
                num("lon_origin"),
                num("std_parallel_1"),
                num("std_parallel_2"),
                num("false_easting"),
                num("false_northing"),
            )
        aliases = tuple(a.strip() for a in sec.get("aliases", "").split(",") if a.strip())
        registry.add(
            key,
            CrsEntry(
                crs=crs,
                ellipsoid=ellipsoid,
                lcc=lcc,
                base=sec.get("base", old.base if old else ("WGS84" if crs.kind == "projected" else key)),
                aliases=aliases or (old.aliases if old else ()),
            ),
        )
    return registry


def crs_uri(c: CrsId, registry: CrsRegistry = REGISTRY) -> str:
    return registry.entry(c).crs.uri


# -- .prj ---------------------------------------------------------------------

_PARAM_RE = re.compile(r'PARAMETER\s*\[\s*"([^"]*)"\s*,\s*([-+0-9.eE]+)', re.I)
_TOP_RE = re.compile(r'^\s*(PROJCS|GEOGCS|PROJCRS|GEOGCRS|GEODCRS)\s*\[\s*"([^"]*)"', re.I)

_DATUM_RE = re.compile(r'DATUM\s*\[\s*"([^"]*)"', re.I)

_PARAM_NAMES = {
    "standardparallel1": "std_parallel_1",
    "standardparallel2": "std_parallel_2",
    "latitudeofstandardparallel1": "std_parallel_1",
    "latitudeof1ststandardparallel": "std_parallel_1",
    "latitudeof2ndstandardparallel": "std_parallel_2",
    "latitudeoforigin": "lat_origin",
    "latitudeoffalseorigin": "lat_origin",
    "centralmeridian": "lon_origin",
    "longitudeoffalseorigin": "lon_origin",
    "longitudeoforigin": "lon_origin",
    "falseeasting": "false_easting",
    "falsenorthing": "false_northing",
    "eastingatfalseorigin": "false_easting",
    "northingatfalseorigin": "false_northing",
}


def _balanced(text: str) -> bool:
    depth = 0
    in_quote = False
    for ch in text:
        if ch == '"':
            in_quote = not in_quote
        elif not in_quote and ch in "[(":
            depth += 1
        elif not in_quote and ch in "])":
            depth -= 1
            if depth < 0:
                return False
    return depth == 0 and not in_quote


def _lcc_matches(params: dict[str, float], lcc: LccParams, tol: float = 1e-6) -> bool:
    sp = {params.get("std_parallel_1"), params.get("std_parallel_2")}
    if None in sp or not all(
        any(abs(v - w) < tol for v in sp) for w in (lcc.std_parallel_1, lcc.std_parallel_2)
    ):
        return False
    for name in ("lat_origin", "lon_origin", "false_easting", "false_northing"):
        if name in params and abs(params[name] - getattr(lcc, name)) > tol:
            return False
    return True


def parse_prj(text: str, registry: CrsRegistry = REGISTRY) -> CrsId:
    """Identify the CRS described by the WKT text of a .prj file.

    Recognition is keyword based: geographic systems by datum name,
    Lambert Conformal Conic systems by their projection parameters (falling
    back to the CRS name). Anything else raises :class:`UnsupportedCrs`.
    """
    m = _TOP_RE.match(text)
    if not m or not _balanced(text):
        raise ParseError("not a WKT CRS definition", 0)
    keyword, name = m.group(1).upper(), m.group(2)
    upper = _norm(text)

    if keyword in ("GEOGCS", "GEOGCRS", "GEODCRS"):
        datum = _DATUM_RE.search(text)
        datum_name = _norm(datum.group(1)) if datum else ""
        key = registry.lookup("WGS84") if ("WGS84" in datum_name or "WGS1984" in datum_name) else None
        if key is None:
            key = registry.lookup(name)
        if key is not None:
            return registry.get(key)
        raise UnsupportedCrs(name)

    # projected
    if "LAMBERT" in upper and "CONIC" in upper:
        params = {}
        for pname, value in _PARAM_RE.findall(text):
            target = _PARAM_NAMES.get(_norm(pname).lower())
            if target:
                params[target] = float(value)
        for _key, entry in registry.entries():
            if entry.lcc is not None and _lcc_matches(params, entry.lcc):
                return entry.crs
    key = registry.lookup(name)
    if key is not None:
        return registry.get(key)
    raise UnsupportedCrs(name)


# -- reprojection ---------------------------------------------------------------


def map_geometry(g: geo.Geometry, fn) -> geo.Geometry:
    def seq(points):
        return tuple(geo.Coordinate(*fn(x, y)) for x, y in points)

    def ring(r: geo.LinearRing) -> geo.LinearRing:
        return geo.LinearRing(seq(r.points))

    def poly(p: geo.Polygon) -> geo.Polygon:
        return geo.Polygon(ring(p.exterior), tuple(ring(r) for r in p.interiors))

    if isinstance(g, geo.Point):
        return geo.Point(*fn(g.x, g.y))
    if isinstance(g, geo.LineString):
        return geo.LineString(seq(g.points))
    if isinstance(g, geo.MultiPoint):
        return geo.MultiPoint(seq(g.points))
    if isinstance(g, geo.Polygon):
        return poly(g)
    if isinstance(g, geo.MultiPolygon):
        return geo.MultiPolygon(tuple(poly(p) for p in g.members))
    raise TypeError(f"not a geometry: {g!r}")


def transformer(source: CrsId, target: CrsId, registry: CrsRegistry = REGISTRY):
    """Return a function mapping (x, y) in ``source`` to (x, y) in ``target``."""
    if source == target:
        return lambda x, y: (x, y)
    try:
        src = registry.entry(source)
        dst = registry.entry(target)
    except UnsupportedCrs:
        raise UnsupportedTransformation(source, target) from None
    if src.base != dst.base or src.base is None:
        raise UnsupportedTransformation(source, target)

    def fn(x, y):
        if src.lcc is not None:
            x, y = lcc_inverse(x, y, src.lcc)
        if dst.lcc is not None:
            x, y = lcc_forward(x, y, dst.lcc)
        return x, y

    return fn


def transform_geometry(
    g: geo.Geometry, source: CrsId, target: CrsId, registry: CrsRegistry = REGISTRY
) -> geo.Geometry:
    if source == target:
        return g
    return map_geometry(g, transformer(source, target, registry))
