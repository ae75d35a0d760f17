"""Minimal RDF model with deterministic blank nodes and text serializers."""

from .model import RDF_LANGSTRING, XSD_STRING, Blank, BlankAllocator, Graph, Iri, Literal, Term, Triple
from .namespaces import DEFAULT_PREFIXES, GEOFLA, GEOM, GEOSPARQL, OWL, RDF, RDFS, XSD, Namespace
from .reader import load_graph, parse_rdf
from .serialize import serialize_ntriples, serialize_turtle

__all__ = [
    "RDF_LANGSTRING",
    "XSD_STRING",
    "Blank",
    "BlankAllocator",
    "Graph",
    "Iri",
    "Literal",
    "Term",
    "Triple",
    "DEFAULT_PREFIXES",
    "GEOFLA",
    "GEOM",
    "GEOSPARQL",
    "OWL",
    "RDF",
    "RDFS",
    "XSD",
    "Namespace",
    "load_graph",
    "parse_rdf",
    "serialize_ntriples",
    "serialize_turtle",
]
