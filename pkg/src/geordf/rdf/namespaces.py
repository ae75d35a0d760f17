from __future__ import annotations

from .model import Iri


class Namespace:
    """IRI prefix; ``NS.term`` and ``NS["term"]`` build full IRIs."""

    def __init__(self, base: str):
        self.base = base

    def __getattr__(self, name: str) -> Iri:
        if name.startswith("__"):
            raise AttributeError(name)
        return Iri(self.base + name)

    def __getitem__(self, name: str) -> Iri:
        return Iri(self.base + name)

    def __str__(self) -> str:
        return self.base

    def __repr__(self) -> str:
        return f"Namespace({self.base!r})"


RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")
OWL = Namespace("http://www.w3.org/2002/07/owl#")
GEOM = Namespace("http://data.ign.fr/def/geometrie#")
GEOFLA = Namespace("http://data.ign.fr/def/geofla#")
GEOSPARQL = Namespace("http://www.opengis.net/ont/geosparql#")

RDF_NIL = RDF.nil
WKT_LITERAL = GEOSPARQL.wktLiteral

DEFAULT_PREFIXES = {
    "rdf": str(RDF),
    "rdfs": str(RDFS),
    "xsd": str(XSD),
    "owl": str(OWL),
    "geom": str(GEOM),
    "geofla": str(GEOFLA),
    "geosparql": str(GEOSPARQL),
}
