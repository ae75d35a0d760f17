import random

import pytest

from geordf.builder import (
    BuildConfig,
    PredicateMapping,
    PredicateRule,
    UriTemplate,
    build_graph,
    build_sameas,
    build_structured_geometry,
    build_thematic,
    build_wkt_literal,
    geometry_crs,
    load_predicate_mapping,
    load_sameas,
    mint_feature_uri,
    reconstruct_geometry,
)
from geordf.crs import LAMB93, WGS84
from geordf.errors import EmptyIdentifier, MalformedStructure
from geordf.features import Feature, FeatureProperty, make_geometry_property, parse_features
from geordf.geometry import LineString, MultiPoint, Point, Polygon, from_wkt
from geordf.ingest import FieldKind, read_shapefile
from geordf.rdf import DEFAULT_PREFIXES, GEOFLA, GEOM, GEOSPARQL, OWL, RDF, RDFS, XSD, Graph, Iri, Literal
from geordf.rdf.namespaces import RDF_NIL

import geomgen
import shapefixtures
from oracles import axiom_violations, ring_is_circular

BASE = UriTemplate("http://data.ign.fr/id/geofla/")
PARIS = Iri("http://data.ign.fr/id/geofla/departement/75")
WGS84_IRI = Iri("http://data.ign.fr/id/ignf/crs/WGS84GDD")
LISTING_MAPPING = {
    "NOM_DEPT": PredicateRule(RDFS.label, lang="fr"),
    "CODE_DEPT": PredicateRule(GEOFLA.codeDpt),
}


@pytest.fixture
def paris_feature(tmp_path):
    fc = read_shapefile(shapefixtures.write_paris(tmp_path))
    (f,) = parse_features(fc, id_column="CODE_DEPT")
    return f


def structure(g, crs=WGS84_IRI, feature=PARIS):
    graph = Graph()
    root, triples = build_structured_geometry(g, crs, feature, graph.new_blank)
    graph.add_all(triples)
    return graph, root


class TestUris:
    def test_departement(self):
        assert mint_feature_uri(BASE, "departement", "75") == PARIS

    def test_commune(self):
        assert mint_feature_uri(BASE, "commune", "94067").value == "http://data.ign.fr/id/geofla/commune/94067"

    def test_percent_encoding(self):
        assert mint_feature_uri(BASE, "commune", "Saint Mandé").value == (
            "http://data.ign.fr/id/geofla/commune/Saint%20Mand%C3%A9"
        )

    def test_missing_trailing_slash(self):
        assert mint_feature_uri(UriTemplate("http://example.org/id"), "x", "1").value == "http://example.org/id/x/1"

    def test_empty_id(self):
        with pytest.raises(EmptyIdentifier):
            mint_feature_uri(BASE, "departement", "")

    def test_relative_base(self):
        with pytest.raises(ValueError):
            UriTemplate("data/id/")


class TestThematic:
    def test_listing_triples_exactly(self, paris_feature):
        m = PredicateMapping(dict(LISTING_MAPPING), include_unmapped=False)
        triples = build_thematic(paris_feature, PARIS, m, GEOFLA.Departement)
        assert set(triples) == {
            (PARIS, RDF.type, GEOFLA.Departement),
            (PARIS, RDFS.label, Literal("PARIS", lang="fr")),
            (PARIS, GEOFLA.codeDpt, Literal("75", XSD.string.value)),
        }
        assert len(triples) == 3

    def test_unmapped_properties_reuse_names(self, paris_feature):
        triples = build_thematic(paris_feature, PARIS, PredicateMapping(dict(LISTING_MAPPING)))
        assert (PARIS, GEOFLA.NOM_REGION, Literal("ILE DE FRANCE")) in triples
        assert len(triples) == 4

    def test_foo(self):
        f = Feature("1", [FeatureProperty("FOO", "bar", FieldKind.CHARACTER, "bar")])
        m = PredicateMapping(vocab="http://example.org/vocab/")
        assert build_thematic(f, PARIS, m) == [
            (PARIS, Iri("http://example.org/vocab/FOO"), Literal("bar", XSD.string.value))
        ]

    def test_datatypes_per_kind(self):
        f = Feature(
            "1",
            [
                FeatureProperty("N", "3", FieldKind.INTEGER, 3),
                FeatureProperty("D", "2.5", FieldKind.DECIMAL, 2.5),
                FeatureProperty("T", "2013-04-25", FieldKind.DATE, object()),
                FeatureProperty("B", "true", FieldKind.LOGICAL, True),
                FeatureProperty("E", "", FieldKind.INTEGER, None),
            ],
        )
        dts = [t.object.datatype for t in build_thematic(f, PARIS, PredicateMapping())]
        assert dts == [XSD.integer.value, XSD.double.value, XSD.date.value, XSD.boolean.value]

    def test_no_properties_gives_only_type(self):
        assert build_thematic(Feature("1"), PARIS, PredicateMapping(), GEOFLA.Departement) == [
            (PARIS, RDF.type, GEOFLA.Departement)
        ]

    def test_mapping_file(self, tmp_path):
        path = tmp_path / "map.csv"
        path.write_text(
            "# property,predicate,lang or datatype\n"
            "NOM_DEPT,rdfs:label,@fr\n"
            "CODE_DEPT,geofla:codeDpt\n"
            "POP,<http://example.org/pop>,xsd:integer\n"
        )
        m = load_predicate_mapping(path, DEFAULT_PREFIXES)
        assert m.rules["NOM_DEPT"] == PredicateRule(RDFS.label, lang="fr")
        assert m.rules["CODE_DEPT"] == PredicateRule(GEOFLA.codeDpt)
        assert m.rules["POP"] == PredicateRule(Iri("http://example.org/pop"), datatype=XSD.integer.value)

    def test_mapping_file_unexpandable_name(self, tmp_path):
        path = tmp_path / "map.csv"
        path.write_text("A,label\n")
        with pytest.raises(ValueError):
            load_predicate_mapping(path, DEFAULT_PREFIXES)


class TestStructure:
    def test_point_is_four_triples_plus_link(self):
        graph, root = structure(Point(0, 0))
        assert len(graph) == 5
        assert (PARIS, GEOM.geometry, root) in graph
        assert set(graph.predicate_objects(root)) == {
            (RDF.type, GEOM.Point),
            (GEOM.crs, WGS84_IRI),
            (GEOM.coordX, Literal("0", XSD.double.value)),
            (GEOM.coordY, Literal("0", XSD.double.value)),
        }

    def test_paris_shapes(self, paris_feature):
        g = paris_feature.geometric[0].geometry
        graph, root = structure(g)
        assert axiom_violations(graph) == []
        assert graph.objects(root, RDF.type) == [GEOM.MultiPolygon]
        members = graph.objects(root, GEOM.polygonMember)
        assert len(members) == 2
        for poly in members:
            assert len(graph.objects(poly, GEOM.exterior)) == 1
        main = members[0]
        assert len(graph.objects(main, GEOM.interior)) == 1
        ring = graph.value(main, GEOM.exterior)
        head = graph.value(ring, GEOM.points)
        closing = graph.value(ring, GEOM.firstAndLast)
        assert graph.objects(head, GEOM.firstAndLast) == [closing]
        assert graph.objects(head, RDF.first) == []
        assert graph.value(closing, GEOM.coordX) == Literal("2.41633", XSD.double.value)
        assert graph.value(closing, GEOM.coordY) == Literal("48.84923", XSD.double.value)
        assert ring_is_circular(graph, ring)
        second = graph.value(graph.value(head, RDF.rest), RDF.first)
        assert graph.value(second, GEOM.coordX) == Literal("2.41597", XSD.double.value)

    def test_ring_chain_holds_inner_vertices_only(self):
        sq = [(0, 0), (0, 1), (1, 1), (1, 0), (0, 0)]
        graph, root = structure(Polygon(sq))
        ring = graph.value(root, GEOM.exterior)
        assert len(list(graph.triples(None, RDF.first, None))) == 3
        assert len(graph.subjects(RDF.type, GEOM.Point)) == 4
        assert ring_is_circular(graph, ring)

    def test_open_lists_are_nil_terminated(self):
        for g in (LineString([(0, 0), (1, 1)]), MultiPoint([(5, 5)])):
            graph, root = structure(g)
            assert axiom_violations(graph) == []
            assert len(graph.subjects(RDF.rest, RDF_NIL)) == 1
            assert reconstruct_geometry(graph, root) == g

    def test_all_nodes_share_the_crs(self, paris_feature):
        graph, root = structure(paris_feature.geometric[0].geometry)
        assert {t.object for t in graph.triples(None, GEOM.crs, None)} == {WGS84_IRI}
        assert geometry_crs(graph, root) == WGS84_IRI

    def test_round_trip_random(self):
        rng = random.Random(5)
        for _ in range(100):
            g = geomgen.random_geometry(rng)
            graph, root = structure(g)
            assert reconstruct_geometry(graph, root) == g

    def test_head_with_rdf_first_is_accepted(self):
        sq = [(0, 0), (0, 1), (1, 1), (1, 0), (0, 0)]
        graph, root = structure(Polygon(sq))
        ring = graph.value(root, GEOM.exterior)
        head = graph.value(ring, GEOM.points)
        graph.add(head, RDF.first, graph.value(ring, GEOM.firstAndLast))
        assert reconstruct_geometry(graph, root) == Polygon(sq)


class TestMalformed:
    SQ = [(0, 0), (0, 1), (1, 1), (1, 0), (0, 0)]

    def test_no_exterior(self):
        graph, root = structure(Polygon(self.SQ))
        ring = graph.value(root, GEOM.exterior)
        graph.remove(root, GEOM.exterior, ring)
        with pytest.raises(MalformedStructure, match="no exterior"):
            reconstruct_geometry(graph, root)

    def test_nil_instead_of_head(self):
        graph, root = structure(Polygon(self.SQ))
        ring = graph.value(root, GEOM.exterior)
        head = graph.value(ring, GEOM.points)
        (last,) = graph.subjects(RDF.rest, head)
        graph.remove(last, RDF.rest, head)
        graph.add(last, RDF.rest, RDF_NIL)
        with pytest.raises(MalformedStructure):
            reconstruct_geometry(graph, root)

    def test_missing_coordinate(self):
        graph, root = structure(Point(1, 2))
        graph.remove(root, GEOM.coordY, graph.value(root, GEOM.coordY))
        with pytest.raises(MalformedStructure):
            reconstruct_geometry(graph, root)

    def test_inconsistent_crs(self):
        graph, root = structure(Polygon(self.SQ))
        graph.remove(root, GEOM.crs, WGS84_IRI)
        graph.add(root, GEOM.crs, Iri("http://data.ign.fr/id/ignf/crs/LAMB93"))
        with pytest.raises(MalformedStructure):
            reconstruct_geometry(graph, root)

    def test_dangling_crs(self):
        graph, root = structure(Point(1, 2))
        graph.remove(root, GEOM.crs, WGS84_IRI)
        with pytest.raises(MalformedStructure):
            reconstruct_geometry(graph, root)

    def test_untyped_node(self):
        with pytest.raises(MalformedStructure):
            reconstruct_geometry(Graph(), Iri("http://example.org/nothing"))


class TestWkt:
    def test_paris_literal(self, paris_feature):
        g = paris_feature.geometric[0].geometry
        s, p, o = build_wkt_literal(g, WGS84_IRI, PARIS)
        assert (s, p) == (PARIS, GEOSPARQL.asWKT)
        assert o.datatype == "http://www.opengis.net/ont/geosparql#wktLiteral"
        assert o.lexical.startswith(
            "<http://data.ign.fr/id/ignf/crs/WGS84GDD> MULTIPOLYGON(((2.41633 48.84923, 2.41597 48.84662"
        )

    def test_point(self):
        assert build_wkt_literal(Point(0, 0), WGS84_IRI, PARIS).object.lexical == (
            "<http://data.ign.fr/id/ignf/crs/WGS84GDD> POINT(0 0)"
        )


class TestSameAs:
    def test_listing_pairs(self):
        pairs = [
            ("http://data.ign.fr/id/geofla/arrondissement/751", "http://id.insee.fr/geo/arrondissement/751"),
            ("http://data.ign.fr/id/geofla/departement/75", "http://id.insee.fr/geo/departement/75"),
        ]
        assert build_sameas(pairs) == [(Iri(a), OWL.sameAs, Iri(b)) for a, b in pairs]

    def test_empty(self):
        assert build_sameas([]) == []

    def test_relative_rejected(self):
        with pytest.raises(ValueError):
            build_sameas([("75", "http://id.insee.fr/geo/departement/75")])

    def test_file_with_local_ids(self, tmp_path, paris_feature):
        path = tmp_path / "links.csv"
        path.write_text("# local,external\n75,http://id.insee.fr/geo/departement/{id}\n")
        pairs = load_sameas(path)
        assert pairs == [("75", "http://id.insee.fr/geo/departement/75")]
        graph = build_graph([paris_feature], BuildConfig(BASE, "departement", sameas=pairs))
        assert (PARIS, OWL.sameAs, Iri("http://id.insee.fr/geo/departement/75")) in graph


class TestBuildGraph:
    def test_paris(self, paris_feature):
        mapping = PredicateMapping(dict(LISTING_MAPPING), include_unmapped=False)
        graph = build_graph([paris_feature], BuildConfig(BASE, "departement", mapping=mapping))
        assert axiom_violations(graph) == []
        root = graph.value(PARIS, GEOM.geometry)
        assert reconstruct_geometry(graph, root) == paris_feature.geometric[0].geometry
        thematic = [t for t in graph.triples(PARIS) if t.predicate not in (GEOM.geometry, GEOSPARQL.asWKT)]
        assert len(thematic) == 3
        assert graph.value(PARIS, RDF.type) == GEOFLA.Departement

    def test_labels_are_deterministic(self, paris_feature):
        config = BuildConfig(BASE, "departement")
        a = list(build_graph([paris_feature], config))
        b = list(build_graph([paris_feature], config))
        assert a == b
        assert build_graph([paris_feature], config).value(PARIS, GEOM.geometry).label == "bn000001"

    def test_named_points(self):
        f = Feature("94028", geometric=[make_geometry_property(Point(2.4, 48.8), WGS84)])
        graph = build_graph([f], BuildConfig(BASE, "departement", named_points=True))
        uri = Iri("http://data.ign.fr/id/geofla/departement/94028")
        assert graph.value(uri, GEOM.geometry) == Iri("http://data.ign.fr/id/geofla/departement/Point_94028")

    def test_lambert_crs_iri(self):
        f = Feature("1", geometric=[make_geometry_property(Point(700000, 6600000), LAMB93)])
        graph = build_graph([f], BuildConfig(BASE, "departement"))
        lit = graph.value(Iri("http://data.ign.fr/id/geofla/departement/1"), GEOSPARQL.asWKT)
        assert lit.lexical == "<http://data.ign.fr/id/ignf/crs/LAMB93> POINT(700000 6600000)"

    def test_wkt_and_structure_agree(self):
        rng = random.Random(9)
        features = [
            Feature(str(i), geometric=[make_geometry_property(geomgen.random_geometry(rng), WGS84)])
            for i in range(50)
        ]
        graph = build_graph(features, BuildConfig(BASE, "departement"))
        for f in features:
            uri = mint_feature_uri(BASE, "departement", f.source_id)
            crs_text, _, wkt = graph.value(uri, GEOSPARQL.asWKT).lexical.partition(" ")
            root = graph.value(uri, GEOM.geometry)
            assert from_wkt(wkt) == reconstruct_geometry(graph, root)
            assert Iri(crs_text[1:-1]) == geometry_crs(graph, root)
