"""N-Triples and Turtle writers."""

from __future__ import annotations

import re

from .model import RDF_LANGSTRING, Blank, Graph, Iri, Literal, Term
from .namespaces import RDF

_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_IRI_FORBIDDEN = set('<>"{}|^`\\') | {chr(c) for c in range(0x21)}
_LOCAL_NAME = re.compile(r"^[A-Za-z0-9_]([A-Za-z0-9_\-]*)$")


def escape_string(text: str) -> str:
    out = []
    for ch in text:
        if ch in _STRING_ESCAPES:
            out.append(_STRING_ESCAPES[ch])
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def escape_iri(iri: str) -> str:
    return "".join(f"\\u{ord(c):04X}" if c in _IRI_FORBIDDEN else c for c in iri)


def nt_term(t: Term) -> str:
    if isinstance(t, Iri):
        return f"<{escape_iri(t.value)}>"
    if isinstance(t, Blank):
        return f"_:{t.label}"
    if isinstance(t, Literal):
        body = f'"{escape_string(t.lexical)}"'
        if t.lang is not None:
            return f"{body}@{t.lang}"
        return f"{body}^^<{escape_iri(t.datatype)}>"
    raise TypeError(f"not an RDF term: {t!r}")


def serialize_ntriples(g: Graph, sorted: bool = False) -> str:
    lines = [f"{nt_term(s)} {nt_term(p)} {nt_term(o)} ." for s, p, o in g]
    if sorted:
        lines.sort()
    return "".join(line + "\n" for line in lines)


class _Abbreviator:
    def __init__(self, prefixes: dict[str, str]):
        # longest namespace first so nested namespaces pick the closest prefix
        self.items = sorted(prefixes.items(), key=lambda kv: -len(kv[1]))

    def iri(self, value: str) -> str:
        for prefix, ns in self.items:
            if value.startswith(ns) and _LOCAL_NAME.match(value[len(ns) :]):
                return f"{prefix}:{value[len(ns):]}"
        return f"<{escape_iri(value)}>"

    def term(self, t: Term) -> str:
        if isinstance(t, Iri):
            return self.iri(t.value)
        if isinstance(t, Literal):
            body = f'"{escape_string(t.lexical)}"'
            if t.datatype == RDF_LANGSTRING:
                return f"{body}@{t.lang}"
            return f"{body}^^{self.iri(t.datatype)}"
        return nt_term(t)


def serialize_turtle(g: Graph) -> str:
    """Turtle with @prefix headers; triples grouped by subject."""
    ab = _Abbreviator(g.prefixes)
    out = [f"@prefix {p}: <{escape_iri(ns)}> ." for p, ns in g.prefixes.items()]
    if out:
        out.append("")
    rdf_type = RDF.type
    for s in g.subjects_in_order():
        by_pred: dict[Iri, list[Term]] = {}
        for p, o in g.predicate_objects(s):
            by_pred.setdefault(p, []).append(o)
        parts = []
        for p, objs in by_pred.items():
            pred = "a" if p == rdf_type else ab.term(p)
            parts.append(f"{pred} " + " , ".join(ab.term(o) for o in objs))
        out.append(f"{ab.term(s)} " + " ;\n    ".join(parts) + " .")
    return "\n".join(out) + "\n" if out else ""
