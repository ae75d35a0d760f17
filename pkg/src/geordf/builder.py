"""Turn parsed features into RDF.

Each feature gets a minted IRI, one triple per thematic property, a
structured geometry graph and a GeoSPARQL WKT literal.

Structured geometries use the geom vocabulary::

    MultiPolygon --polygonMember--> Polygon (one or more)
    Polygon      --exterior-->      LinearRing (exactly one)
                 --interior-->      LinearRing (zero or more)
    LinearRing   --points-->        PointsList head
                 --firstAndLast-->  Point (the ring's first = last vertex)
    PointsList   --rdf:first-->     Point, --rdf:rest--> next PointsList
    Point        --coordX/coordY--> xsd:double

A ring's points list is circular: the head carries only geom:firstAndLast
and rdf:rest, the following nodes hold vertices 2..N-1, and the last node's
rdf:rest points back to the head. Lists of LineString and MultiPoint
vertices are ordinary rdf:nil terminated lists. Every geometry node also
carries geom:crs.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence
from urllib.parse import quote

from . import crs as crs_mod
from .errors import EmptyIdentifier, MalformedStructure
from .features import Feature
from .geometry import (
    Coordinate,
    Geometry,
    LinearRing,
    LineString,
    MultiPoint,
    MultiPolygon,
    Point,
    Polygon,
    format_number,
    to_wkt,
)
from .ingest.collection import FieldKind
from .rdf.model import Blank, Graph, Iri, Literal, Term, Triple
from .rdf.namespaces import DEFAULT_PREFIXES, GEOFLA, GEOM, GEOSPARQL, OWL, RDF, RDF_NIL, WKT_LITERAL, XSD

_ABSOLUTE_IRI = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:[^\s<>\"{}|\\^`]+$")


def is_absolute_iri(text: str) -> bool:
    return bool(_ABSOLUTE_IRI.match(text))


# -- URIs -----------------------------------------------------------------------


@dataclass(frozen=True)
class UriTemplate:
    """``<base><class_segment>/<id>``, e.g. http://data.ign.fr/id/geofla/departement/75."""

    base: str

    def __post_init__(self):
        if not is_absolute_iri(self.base):
            raise ValueError(f"base URI must be absolute: {self.base!r}")
        if not self.base.endswith(("/", "#")):
            object.__setattr__(self, "base", self.base + "/")


def mint_feature_uri(t: UriTemplate, class_segment: str, id: str) -> Iri:
    if id is None or str(id) == "":
        raise EmptyIdentifier("feature identifier is empty")
    segment = quote(class_segment, safe="-._~")
    return Iri(f"{t.base}{segment}/{quote(str(id), safe='-._~')}")


# -- thematic properties ---------------------------------------------------------


@dataclass(frozen=True)
class PredicateRule:
    predicate: Iri
    lang: str | None = None
    datatype: str | None = None


@dataclass
class PredicateMapping:
    rules: dict[str, PredicateRule] = field(default_factory=dict)
    vocab: str = str(GEOFLA)
    include_unmapped: bool = True

    def __post_init__(self):
        for name, rule in self.rules.items():
            if not is_absolute_iri(rule.predicate.value):
                raise ValueError(f"mapping for {name!r} is not an absolute IRI")

    def rule_for(self, name: str) -> PredicateRule | None:
        if name in self.rules:
            return self.rules[name]
        if not self.include_unmapped:
            return None
        return PredicateRule(Iri(self.vocab + quote(name, safe="-._~")))


KIND_DATATYPES = {
    FieldKind.CHARACTER: XSD.string.value,
    FieldKind.INTEGER: XSD.integer.value,
    FieldKind.DECIMAL: XSD.double.value,
    FieldKind.LOGICAL: XSD.boolean.value,
    FieldKind.DATE: XSD.date.value,
}


def _expand(name: str, prefixes: dict[str, str]) -> str:
    if name.startswith("<") and name.endswith(">"):
        return name[1:-1]
    prefix, sep, local = name.partition(":")
    if sep and prefix in prefixes:
        return prefixes[prefix] + local
    if is_absolute_iri(name):
        return name
    raise ValueError(f"cannot expand {name!r}: unknown prefix")


def load_predicate_mapping(
    path: str | Path, prefixes: dict[str, str], delimiter: str = ",", **kwargs
) -> PredicateMapping:
    """Read ``PROPERTY,predicate[,@lang | datatype]`` lines; ``#`` starts a comment.

    Predicates and datatypes may be prefixed names (``geofla:codeDpt``) or
    full IRIs.
    """
    rules = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter=delimiter), start=1):
            row = [c.strip() for c in row]
            if not row or not row[0] or row[0].startswith("#"):
                continue
            if len(row) < 2:
                raise ValueError(f"{path}:{lineno}: expected PROPERTY{delimiter}predicate")
            lang = datatype = None
            if len(row) > 2 and row[2]:
                if row[2].startswith("@"):
                    lang = row[2][1:]
                else:
                    datatype = _expand(row[2], prefixes)
            rules[row[0]] = PredicateRule(Iri(_expand(row[1], prefixes)), lang, datatype)
    return PredicateMapping(rules, **kwargs)


def property_literal(prop, rule: PredicateRule) -> Literal:
    if rule.lang:
        return Literal(prop.string_value, lang=rule.lang)
    datatype = rule.datatype or KIND_DATATYPES.get(prop.kind, XSD.string.value)
    return Literal(prop.string_value, datatype)


def build_thematic(f: Feature, uri: Iri, m: PredicateMapping, type_iri: Iri | None = None) -> list[Triple]:
    triples = []
    if type_iri is not None:
        triples.append(Triple(uri, RDF.type, type_iri))
    for prop in f.thematic:
        if prop.value is None:
            continue
        rule = m.rule_for(prop.name)
        if rule is None:
            continue
        triples.append(Triple(uri, rule.predicate, property_literal(prop, rule)))
    return triples


# -- structured geometry -------------------------------------------------------------


def _double(v: float) -> Literal:
    return Literal(format_number(v), XSD.double.value)


class _StructureWriter:
    def __init__(self, crs_iri: Iri, alloc: Callable[[], Term]):
        self.crs = crs_iri
        self.alloc = alloc
        self.triples: list[Triple] = []

    def add(self, s, p, o):
        self.triples.append(Triple(s, p, o))

    def typed(self, node, cls: Iri):
        self.add(node, RDF.type, cls)
        self.add(node, GEOM.crs, self.crs)

    def point(self, c: Coordinate, node: Term | None = None) -> Term:
        node = node if node is not None else self.alloc()
        self.typed(node, GEOM.Point)
        self.add(node, GEOM.coordX, _double(c.x))
        self.add(node, GEOM.coordY, _double(c.y))
        return node

    def ring(self, r: LinearRing) -> Term:
        node = self.alloc()
        head = self.alloc()
        self.typed(node, GEOM.LinearRing)
        self.add(node, GEOM.points, head)
        closing = self.point(r.points[0])
        self.add(node, GEOM.firstAndLast, closing)
        self.add(head, RDF.type, GEOM.PointsList)
        self.add(head, GEOM.firstAndLast, closing)
        prev = head
        for c in r.points[1:-1]:
            cell = self.alloc()
            self.add(prev, RDF.rest, cell)
            self.add(cell, RDF.type, GEOM.PointsList)
            self.add(cell, RDF.first, self.point(c))
            prev = cell
        self.add(prev, RDF.rest, head)
        return node

    def open_list(self, points: Sequence[Coordinate]) -> Term:
        if not points:
            return RDF_NIL
        head = self.alloc()
        cell = head
        for i, c in enumerate(points):
            self.add(cell, RDF.type, GEOM.PointsList)
            self.add(cell, RDF.first, self.point(c))
            nxt = self.alloc() if i + 1 < len(points) else RDF_NIL
            self.add(cell, RDF.rest, nxt)
            cell = nxt
        return head

    def polygon(self, p: Polygon) -> Term:
        node = self.alloc()
        self.typed(node, GEOM.Polygon)
        self.add(node, GEOM.exterior, self.ring(p.exterior))
        for hole in p.interiors:
            self.add(node, GEOM.interior, self.ring(hole))
        return node

    def geometry(self, g: Geometry, node: Term | None = None) -> Term:
        if isinstance(g, Point):
            return self.point(g.coord, node)
        if isinstance(g, Polygon):
            return self.polygon(g)
        if isinstance(g, MultiPolygon):
            node = self.alloc()
            self.typed(node, GEOM.MultiPolygon)
            for member in g.members:
                self.add(node, GEOM.polygonMember, self.polygon(member))
            return node
        if isinstance(g, (LineString, MultiPoint)):
            node = self.alloc()
            self.typed(node, GEOM.LineString if isinstance(g, LineString) else GEOM.MultiPoint)
            self.add(node, GEOM.points, self.open_list(g.points))
            return node
        raise TypeError(f"not a geometry: {g!r}")


def build_structured_geometry(
    g: Geometry,
    crs_iri: Iri,
    feature_uri: Iri | None,
    alloc: Callable[[], Term],
    point_iri: Iri | None = None,
) -> tuple[Term, list[Triple]]:
    """Return the geometry's root node and its triples.

    ``point_iri`` names the node of a Point geometry instead of a fresh
    blank node. With ``feature_uri`` the feature is linked to the root via
    geom:geometry.
    """
    writer = _StructureWriter(crs_iri, alloc)
    root = writer.geometry(g, point_iri if isinstance(g, Point) else None)
    if feature_uri is not None:
        writer.triples.insert(0, Triple(feature_uri, GEOM.geometry, root))
    return root, writer.triples


def build_wkt_literal(g: Geometry, crs_iri: Iri, feature_uri: Iri, precision: int | None = None) -> Triple:
    text = f"<{crs_iri.value}> {to_wkt(g, precision)}"
    return Triple(feature_uri, GEOSPARQL.asWKT, Literal(text, WKT_LITERAL.value))


def build_sameas(pairs: Iterable[tuple[str | Iri, str | Iri]]) -> list[Triple]:
    triples = []
    for local, external in pairs:
        local, external = str(local), str(external)
        for iri in (local, external):
            if not is_absolute_iri(iri):
                raise ValueError(f"not an absolute IRI: {iri!r}")
        triples.append(Triple(Iri(local), OWL.sameAs, Iri(external)))
    return triples


def load_sameas(path: str | Path, delimiter: str = ",") -> list[tuple[str, str]]:
    """Two columns: local identifier (or IRI) and external IRI.

    ``{id}`` in the external column is replaced by the local identifier.
    """
    pairs = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter=delimiter), start=1):
            row = [c.strip() for c in row]
            if not row or not row[0] or row[0].startswith("#"):
                continue
            if len(row) < 2:
                raise ValueError(f"{path}:{lineno}: expected two columns")
            pairs.append((row[0], row[1].replace("{id}", row[0])))
    return pairs


# -- reconstruction ---------------------------------------------------------------

_BN = re.compile(r"^bn(\d+)$")


def _ordered(nodes: list[Term]) -> list[Term]:
    # multi-valued properties carry no order; allocation order is recoverable
    # from bnNNNNNN labels
    labels = [_BN.match(n.label) if isinstance(n, Blank) else None for n in nodes]
    if nodes and all(labels):
        return [n for _, n in sorted(zip((int(m.group(1)) for m in labels), nodes))]
    return nodes


class _Reconstructor:
    def __init__(self, graph: Graph):
        self.g = graph
        self.crs: Term | None = None

    def one(self, node, pred, what: str) -> Term:
        objs = self.g.objects(node, pred)
        if not objs:
            raise MalformedStructure(f"no {what}")
        if len(objs) > 1:
            raise MalformedStructure(f"more than one {what}")
        return objs[0]

    def check_crs(self, node) -> None:
        objs = self.g.objects(node, GEOM.crs)
        if len(objs) != 1:
            raise MalformedStructure(f"{node} has {len(objs)} geom:crs values")
        if not isinstance(objs[0], Iri):
            raise MalformedStructure(f"dangling crs on {node}")
        if self.crs is None:
            self.crs = objs[0]
        elif objs[0] != self.crs:
            raise MalformedStructure(f"inconsistent crs on {node}")

    def check_type(self, node, cls: Iri) -> None:
        if cls not in self.g.objects(node, RDF.type):
            raise MalformedStructure(f"{node} is not typed {cls.value}")

    def number(self, node, pred, what) -> float:
        lit = self.one(node, pred, what)
        if not isinstance(lit, Literal):
            raise MalformedStructure(f"{what} of {node} is not a literal")
        try:
            return float(lit.lexical)
        except ValueError:
            raise MalformedStructure(f"{what} of {node} is not numeric") from None

    def point(self, node) -> Coordinate:
        self.check_type(node, GEOM.Point)
        self.check_crs(node)
        return Coordinate(self.number(node, GEOM.coordX, "coordX"), self.number(node, GEOM.coordY, "coordY"))

    def ring(self, node) -> LinearRing:
        self.check_type(node, GEOM.LinearRing)
        self.check_crs(node)
        head = self.one(node, GEOM.points, "points list")
        closing = self.one(node, GEOM.firstAndLast, "firstAndLast point")
        self.check_type(head, GEOM.PointsList)
        head_closing = self.g.objects(head, GEOM.firstAndLast)
        if head_closing and head_closing != [closing]:
            raise MalformedStructure("firstAndLast of ring and list head disagree")

        members = []
        if self.g.objects(head, RDF.first):
            members.append(self.one(head, RDF.first, "rdf:first"))
        seen = {head}
        cell = head
        while True:
            nxt = self.one(cell, RDF.rest, "rdf:rest")
            if nxt == head:
                break
            if nxt == RDF_NIL:
                raise MalformedStructure("ring points list is not circular")
            if nxt in seen:
                raise MalformedStructure("broken list cycle")
            seen.add(nxt)
            self.check_type(nxt, GEOM.PointsList)
            members.append(self.one(nxt, RDF.first, "rdf:first"))
            cell = nxt
        if members and members[0] == closing:
            members = members[1:]
        if members and members[-1] == closing:
            members = members[:-1]
        first = self.point(closing)
        return LinearRing([first, *(self.point(m) for m in members), first])

    def open_list(self, head) -> list[Coordinate]:
        out = []
        seen = set()
        cell = head
        while cell != RDF_NIL:
            if cell in seen:
                raise MalformedStructure("points list is cyclic")
            seen.add(cell)
            self.check_type(cell, GEOM.PointsList)
            out.append(self.point(self.one(cell, RDF.first, "rdf:first")))
            cell = self.one(cell, RDF.rest, "rdf:rest")
        return out

    def polygon(self, node) -> Polygon:
        self.check_type(node, GEOM.Polygon)
        self.check_crs(node)
        exterior = self.g.objects(node, GEOM.exterior)
        if not exterior:
            raise MalformedStructure("no exterior")
        if len(exterior) > 1:
            raise MalformedStructure("more than one exterior")
        holes = _ordered(self.g.objects(node, GEOM.interior))
        return Polygon(self.ring(exterior[0]), tuple(self.ring(h) for h in holes))

    def geometry(self, node) -> Geometry:
        types = set(self.g.objects(node, RDF.type))
        if GEOM.MultiPolygon in types:
            self.check_crs(node)
            members = _ordered(self.g.objects(node, GEOM.polygonMember))
            if not members:
                raise MalformedStructure("no polygon member")
            return MultiPolygon(tuple(self.polygon(m) for m in members))
        if GEOM.Polygon in types:
            return self.polygon(node)
        if GEOM.Point in types:
            c = self.point(node)
            return Point(c.x, c.y)
        if GEOM.LineString in types or GEOM.MultiPoint in types:
            self.check_crs(node)
            pts = self.open_list(self.one(node, GEOM.points, "points list"))
            return LineString(pts) if GEOM.LineString in types else MultiPoint(pts)
        raise MalformedStructure(f"{node} has no recognised geometry type")


def reconstruct_geometry(g: Graph, geometry_node: Term) -> Geometry:
    """Rebuild the geometry rooted at ``geometry_node``."""
    return _Reconstructor(g).geometry(geometry_node)


def geometry_crs(g: Graph, geometry_node: Term) -> Iri:
    r = _Reconstructor(g)
    r.geometry(geometry_node)
    return r.crs


# -- whole dataset -----------------------------------------------------------------


@dataclass
class BuildConfig:
    template: UriTemplate
    class_segment: str
    type_iri: Iri | None = None
    mapping: PredicateMapping = field(default_factory=PredicateMapping)
    named_points: bool = False
    sameas: Sequence[tuple[str, str]] = ()
    precision: int | None = None
    registry: crs_mod.CrsRegistry = crs_mod.REGISTRY

    def __post_init__(self):
        if self.type_iri is None:
            self.type_iri = GEOFLA[self.class_segment[:1].upper() + self.class_segment[1:]]


def build_feature(f: Feature, config: BuildConfig, alloc: Callable[[], Term]) -> list[Triple]:
    uri = mint_feature_uri(config.template, config.class_segment, f.source_id)
    triples = build_thematic(f, uri, config.mapping, config.type_iri)
    for prop in f.geometric:
        crs_iri = Iri(crs_mod.crs_uri(prop.crs, config.registry))
        point_iri = None
        if config.named_points:
            point_iri = mint_feature_uri(config.template, config.class_segment, f"Point_{f.source_id}")
        _, geometry_triples = build_structured_geometry(prop.geometry, crs_iri, uri, alloc, point_iri)
        triples.extend(geometry_triples)
        triples.append(build_wkt_literal(prop.geometry, crs_iri, uri, config.precision))
    return triples


def build_graph(features: Iterable[Feature], config: BuildConfig, graph: Graph | None = None) -> Graph:
    """Add every feature's triples to ``graph``, in input order."""
    if graph is None:
        graph = Graph(DEFAULT_PREFIXES)
    for f in features:
        graph.add_all(build_feature(f, config, graph.new_blank))
    pairs = []
    for local, external in config.sameas:
        if not is_absolute_iri(local):
            local = mint_feature_uri(config.template, config.class_segment, local).value
        pairs.append((local, external))
    graph.add_all(build_sameas(pairs))
    return graph
