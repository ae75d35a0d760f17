import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geordf.errors import ParseError
from geordf.rdf import (
    DEFAULT_PREFIXES,
    GEOFLA,
    RDF,
    RDF_LANGSTRING,
    RDFS,
    XSD,
    Blank,
    Graph,
    Iri,
    Literal,
    parse_rdf,
    serialize_ntriples,
    serialize_turtle,
)
from geordf.rdf.serialize import escape_string, nt_term

from oracles import NT_LINE, isomorphic

PARIS = Iri("http://data.ign.fr/id/geofla/departement/75")


def paris_graph():
    g = Graph(DEFAULT_PREFIXES)
    g.add(PARIS, RDF.type, GEOFLA.Departement)
    g.add(PARIS, GEOFLA.code_dept, Literal("75"))
    g.add(PARIS, RDFS.label, Literal("Paris", lang="fr"))
    g.add(PARIS, GEOFLA.population, Literal("2165423", XSD.integer.value))
    return g


class TestTerms:
    def test_lang_literal_has_langstring_datatype(self):
        assert Literal("Paris", lang="fr").datatype == RDF_LANGSTRING

    @pytest.mark.parametrize("label", ["", "a b", "-x", "é"])
    def test_bad_blank_label(self, label):
        with pytest.raises(ValueError):
            Blank(label)

    def test_bad_lang(self):
        with pytest.raises(ValueError):
            Literal("x", lang="fr fr")

    def test_literal_subject_rejected(self):
        with pytest.raises(TypeError):
            Graph().add(Literal("x"), RDF.type, PARIS)

    def test_blank_allocation_order(self):
        g = Graph()
        assert [g.new_blank().label for _ in range(3)] == ["bn000001", "bn000002", "bn000003"]


class TestGraph:
    def test_insertion_is_idempotent(self):
        g = paris_graph()
        n = len(g)
        for t in list(g):
            g.add(*t)
        assert len(g) == n

    def test_pattern_lookup(self):
        g = paris_graph()
        assert g.value(PARIS, GEOFLA.code_dept) == Literal("75")
        assert g.subjects(RDF.type, GEOFLA.Departement) == [PARIS]
        assert len(list(g.triples(None, RDF.type, None))) == 1
        assert len(list(g.triples(PARIS))) == 4

    def test_remove(self):
        g = paris_graph()
        g.remove(PARIS, RDF.type, GEOFLA.Departement)
        assert g.subjects(RDF.type, GEOFLA.Departement) == []
        assert len(g) == 3

    def test_equality_ignores_order(self):
        a, b = paris_graph(), Graph()
        b.add_all(reversed(list(a)))
        assert a == b


class TestNTriples:
    def test_string_literal_is_typed(self):
        assert nt_term(Literal("75")) == '"75"^^<http://www.w3.org/2001/XMLSchema#string>'

    def test_lang_literal(self):
        assert nt_term(Literal("Paris", lang="fr")) == '"Paris"@fr'

    def test_escapes(self):
        assert escape_string('a"b\\c\nd\te\x01') == 'a\\"b\\\\c\\nd\\te\\u0001'

    def test_lines_match_grammar(self):
        g = paris_graph()
        g.add(g.new_blank(), RDFS.comment, Literal('quote " and newline\n and é'))
        text = serialize_ntriples(g)
        assert text.endswith("\n")
        for line in text.splitlines():
            assert NT_LINE.match(line), line

    def test_sorted_is_deterministic(self):
        a = paris_graph()
        b = Graph()
        b.add_all(reversed(list(a)))
        assert serialize_ntriples(a) != serialize_ntriples(b)
        assert serialize_ntriples(a, sorted=True) == serialize_ntriples(b, sorted=True)

    def test_blank_labels_preserved(self):
        g = Graph()
        b = g.new_blank()
        g.add(PARIS, GEOFLA.geometrie, b)
        assert "_:bn000001" in serialize_ntriples(g)
        assert Blank("bn000001") in {t.object for t in parse_rdf(serialize_ntriples(g))}


class TestTurtle:
    def test_prefixes_and_abbreviation(self):
        text = serialize_turtle(paris_graph())
        assert "@prefix geofla: <http://data.ign.fr/def/geofla#> ." in text
        assert "<http://data.ign.fr/id/geofla/departement/75> a geofla:Departement ;" in text
        assert 'geofla:code_dept "75"^^xsd:string' in text
        assert '"Paris"@fr' in text

    def test_multiple_objects_use_commas(self):
        g = Graph(DEFAULT_PREFIXES)
        g.add(PARIS, RDFS.label, Literal("Paris", lang="fr"))
        g.add(PARIS, RDFS.label, Literal("Paris", lang="en"))
        assert 'rdfs:label "Paris"@fr , "Paris"@en .' in serialize_turtle(g)

    def test_round_trip(self):
        g = paris_graph()
        g.add(PARIS, GEOFLA.geometrie, g.new_blank())
        assert parse_rdf(serialize_turtle(g)) == g


class TestReader:
    def test_turtle_features(self):
        text = """
        @prefix ex: <http://example.org/> .
        PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>
        ex:a a ex:C ; ex:n 3 , 2.5 ; ex:b true ;
            ex:s "x\\u00e9"@fr-CA ; .
        _:b1 ex:p ex:a .
        """
        g = parse_rdf(text)
        a = Iri("http://example.org/a")
        assert g.value(a, RDF.type) == Iri("http://example.org/C")
        assert set(g.objects(a, Iri("http://example.org/n"))) == {
            Literal("3", XSD.integer.value),
            Literal("2.5", XSD.decimal.value),
        }
        assert g.value(a, Iri("http://example.org/b")) == Literal("true", XSD.boolean.value)
        assert g.value(a, Iri("http://example.org/s")) == Literal("xé", lang="fr-CA")
        assert len(g) == 6

    @pytest.mark.parametrize(
        "text",
        ["<a> <b> .", "ex:a ex:b ex:c .", "<a> <b> <c>", '<a> <b> "x ."', "<a> <b> <c> . !"],
    )
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_rdf(text)

    def test_offset_is_reported(self):
        with pytest.raises(ParseError) as err:
            parse_rdf("<http://a> <http://b> !")
        assert err.value.offset == 22


_names = st.text(alphabet="abcxyz019_-", min_size=1, max_size=6).filter(lambda s: s[0] not in "-")
_iris = st.builds(lambda ns, n: Iri(ns + n), st.sampled_from(["http://ex.org/", str(GEOFLA), "urn:x:"]), _names)
_text = st.text(st.characters(blacklist_categories=("Cs",)), max_size=20)
_literals = st.one_of(
    st.builds(Literal, _text),
    st.builds(lambda t: Literal(t, lang="fr"), _text),
    st.builds(lambda t: Literal(t, XSD.double.value), _text),
)
_blanks = st.builds(lambda n: Blank(f"bn{n:06d}"), st.integers(1, 20))
_triples = st.tuples(st.one_of(_iris, _blanks), _iris, st.one_of(_iris, _blanks, _literals))


@settings(max_examples=75)
@given(st.lists(_triples, max_size=25))
def test_random_graphs_survive_both_formats(triples):
    g = Graph(DEFAULT_PREFIXES)
    g.add_all(triples)
    nt = serialize_ntriples(g)
    for line in nt.rstrip("\n").split("\n") if nt else []:
        assert NT_LINE.match(line), line
    assert isomorphic(parse_rdf(nt), g)
    assert parse_rdf(serialize_turtle(g)) == g
