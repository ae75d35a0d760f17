"""RDF terms, triples and an insertion-ordered in-memory graph."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Union

XSD_NS = "http://www.w3.org/2001/XMLSchema#"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD_STRING = XSD_NS + "string"
RDF_LANGSTRING = RDF_NS + "langString"

_BLANK_LABEL = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_\-]*$")
_LANG = re.compile(r"^[A-Za-z]+(-[A-Za-z0-9]+)*$")


@dataclass(frozen=True, order=True)
class Iri:
    value: str

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class Blank:
    label: str

    def __post_init__(self):
        if not _BLANK_LABEL.match(self.label):
            raise ValueError(f"invalid blank node label {self.label!r}")

    def __str__(self) -> str:
        return "_:" + self.label


@dataclass(frozen=True, order=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    lang: Optional[str] = None

    def __post_init__(self):
        if self.lang is not None:
            if not _LANG.match(self.lang):
                raise ValueError(f"invalid language tag {self.lang!r}")
            if self.datatype == XSD_STRING:
                object.__setattr__(self, "datatype", RDF_LANGSTRING)
            elif self.datatype != RDF_LANGSTRING:
                raise ValueError("a language tag requires the rdf:langString datatype")
        elif self.datatype == RDF_LANGSTRING:
            raise ValueError("rdf:langString literal without a language tag")

    def __str__(self) -> str:
        return self.lexical


Term = Union[Iri, Blank, Literal]


class Triple(NamedTuple):
    subject: Term
    predicate: Iri
    object: Term


class BlankAllocator:
    """Hands out labels bn000001, bn000002, ... in call order."""

    def __init__(self, start: int = 1, width: int = 6):
        self.next = start
        self.width = width

    def __call__(self) -> Blank:
        label = f"bn{self.next:0{self.width}d}"
        self.next += 1
        return Blank(label)


class Graph:
    """Ordered set of triples with subject and object indexes."""

    def __init__(self, prefixes: dict[str, str] | None = None):
        self.prefixes: dict[str, str] = dict(prefixes or {})
        self.allocate = BlankAllocator()
        self._triples: dict[Triple, None] = {}
        self._spo: dict[Term, dict[Iri, dict[Term, None]]] = {}
        self._ops: dict[Term, dict[Iri, dict[Term, None]]] = {}

    def new_blank(self) -> Blank:
        return self.allocate()

    def add(self, s: Term, p: Iri, o: Term) -> None:
        if isinstance(s, Literal):
            raise TypeError("a literal cannot be a subject")
        if not isinstance(p, Iri):
            raise TypeError("predicates must be IRIs")
        if not isinstance(o, (Iri, Blank, Literal)):
            raise TypeError(f"not an RDF term: {o!r}")
        t = Triple(s, p, o)
        if t in self._triples:
            return
        self._triples[t] = None
        self._spo.setdefault(s, {}).setdefault(p, {})[o] = None
        self._ops.setdefault(o, {}).setdefault(p, {})[s] = None

    def add_all(self, triples) -> None:
        for t in triples:
            self.add(*t)

    def remove(self, s: Term, p: Iri, o: Term) -> None:
        t = Triple(s, p, o)
        if t not in self._triples:
            return
        del self._triples[t]
        del self._spo[s][p][o]
        del self._ops[o][p][s]

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(list(self._triples))

    def __contains__(self, t) -> bool:
        return Triple(*t) in self._triples

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return set(self._triples) == set(other._triples)

    def subjects_in_order(self) -> list[Term]:
        return list(dict.fromkeys(t.subject for t in self._triples))

    def objects(self, s: Term, p: Iri) -> list[Term]:
        return list(self._spo.get(s, {}).get(p, {}))

    def subjects(self, p: Iri, o: Term) -> list[Term]:
        return list(self._ops.get(o, {}).get(p, {}))

    def predicate_objects(self, s: Term) -> list[tuple[Iri, Term]]:
        return [(p, o) for p, objs in self._spo.get(s, {}).items() for o in objs]

    def value(self, s: Term, p: Iri) -> Term | None:
        objs = self.objects(s, p)
        return objs[0] if objs else None

    def triples(self, s: Term | None = None, p: Iri | None = None, o: Term | None = None) -> Iterator[Triple]:
        """Triples matching a pattern; ``None`` is a wildcard."""
        if s is not None:
            for pred, objs in list(self._spo.get(s, {}).items()):
                if p is not None and pred != p:
                    continue
                for obj in list(objs):
                    if o is None or obj == o:
                        yield Triple(s, pred, obj)
        elif o is not None:
            for pred, subs in list(self._ops.get(o, {}).items()):
                if p is not None and pred != p:
                    continue
                for sub in list(subs):
                    yield Triple(sub, pred, o)
        else:
            for t in list(self._triples):
                if p is None or t.predicate == p:
                    yield t
