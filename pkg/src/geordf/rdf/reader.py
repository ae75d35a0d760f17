"""Reader for the Turtle / N-Triples subset written by :mod:`.serialize`.

Supported: @prefix / PREFIX directives, IRIs, prefixed names, ``a``, blank
node labels, quoted strings with escapes, language tags, ``^^`` datatypes,
bare numbers and booleans, and the ``;`` / ``,`` abbreviations. Collections,
``[]`` blank nodes and long strings are not.
"""

from __future__ import annotations

import re
from pathlib import Path

from ..errors import ParseError
from .model import Blank, Graph, Iri, Literal, Term
from .namespaces import RDF, XSD

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<iri><[^>\s]*>)
  | (?P<blank>_:[A-Za-z0-9_][A-Za-z0-9_\-]*)
  | (?P<string>"(?:[^"\\\n\r]|\\.)*")
  | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<dtype>\^\^)
  | (?P<number>[+-]?(?:\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+))
  | (?P<pname>(?:[A-Za-z][A-Za-z0-9_\-]*)?:(?:[A-Za-z0-9_][A-Za-z0-9_\-]*)?)
  | (?P<word>[A-Za-z]+)
  | (?P<punct>[.;,])
    """,
    re.X,
)

_ESCAPE = re.compile(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|.)")
_SIMPLE = {"t": "\t", "n": "\n", "r": "\r", "b": "\b", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unescape(text: str) -> str:
    def repl(m):
        e = m.group(1)
        if e[0] in "uU":
            return chr(int(e[1:], 16))
        if e in _SIMPLE:
            return _SIMPLE[e]
        raise ValueError(f"bad escape \\{e}")

    return _ESCAPE.sub(repl, text)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r}", self._offset(pos))
            kind = m.lastgroup
            if kind != "ws":
                self.tokens.append((kind, m.group(), pos))
            pos = m.end()
        self.i = 0
        self.prefixes: dict[str, str] = {}

    def _offset(self, pos: int) -> int:
        return len(self.text[:pos].encode("utf-8"))

    def error(self, msg: str) -> ParseError:
        pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        return ParseError(msg, self._offset(pos))

    def peek(self) -> tuple[str, str] | None:
        if self.i < len(self.tokens):
            kind, value, _ = self.tokens[self.i]
            return kind, value
        return None

    def take(self, kind: str | None = None, value: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise self.error(f"expected {want}, found {tok[1] if tok else 'end of input'!r}")
        self.i += 1
        return tok[1]

    def iri_value(self, token: str) -> str:
        try:
            return _unescape(token[1:-1])
        except ValueError as exc:
            raise self.error(str(exc)) from None

    def expand(self, pname: str) -> str:
        prefix, _, local = pname.partition(":")
        if prefix not in self.prefixes:
            raise self.error(f"undeclared prefix {prefix!r}")
        return self.prefixes[prefix] + local

    def term(self, position: str) -> Term:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        kind, value = tok
        self.i += 1
        if kind == "iri":
            return Iri(self.iri_value(value))
        if kind == "pname":
            return Iri(self.expand(value))
        if kind == "blank":
            return Blank(value[2:])
        if kind == "word" and value == "a" and position == "predicate":
            return RDF.type
        if position != "object":
            self.i -= 1
            raise self.error(f"unexpected {value!r} in {position} position")
        if kind == "string":
            try:
                lexical = _unescape(value[1:-1])
            except ValueError as exc:
                raise self.error(str(exc)) from None
            nxt = self.peek()
            if nxt and nxt[0] == "lang":
                self.i += 1
                return Literal(lexical, lang=nxt[1][1:])
            if nxt and nxt[0] == "dtype":
                self.i += 1
                dt = self.term("datatype")
                return Literal(lexical, dt.value)
            return Literal(lexical)
        if kind == "number":
            if "e" in value.lower():
                return Literal(value, XSD.double.value)
            if "." in value:
                return Literal(value, XSD.decimal.value)
            return Literal(value, XSD.integer.value)
        if kind == "word" and value in ("true", "false"):
            return Literal(value, XSD.boolean.value)
        self.i -= 1
        raise self.error(f"unexpected {value!r}")

    def directive(self) -> bool:
        tok = self.peek()
        if tok == ("lang", "@prefix"):
            self.i += 1
            name = self.take("pname")
            self.prefixes[name[:-1]] = self.iri_value(self.take("iri"))
            self.take("punct", ".")
            return True
        if tok and tok[0] == "word" and tok[1].upper() == "PREFIX":
            self.i += 1
            name = self.take("pname")
            self.prefixes[name[:-1]] = self.iri_value(self.take("iri"))
            return True
        return False

    def parse(self, graph: Graph) -> Graph:
        while self.peek() is not None:
            if self.directive():
                continue
            subject = self.term("subject")
            while True:
                predicate = self.term("predicate")
                if not isinstance(predicate, Iri):
                    raise self.error("predicate must be an IRI")
                while True:
                    graph.add(subject, predicate, self.term("object"))
                    if self.peek() == ("punct", ","):
                        self.i += 1
                        continue
                    break
                if self.peek() == ("punct", ";"):
                    self.i += 1
                    if self.peek() == ("punct", "."):
                        break
                    continue
                break
            self.take("punct", ".")
        graph.prefixes.update(self.prefixes)
        return graph


def parse_rdf(text: str, graph: Graph | None = None) -> Graph:
    """Parse Turtle or N-Triples text into ``graph`` (a new one by default)."""
    return _Parser(text).parse(graph if graph is not None else Graph())


def load_graph(path: str | Path) -> Graph:
    return parse_rdf(Path(path).read_text(encoding="utf-8"))
