"""Graph-pattern evaluation with property paths and numeric filters.

Just enough of SPARQL's semantics to run the bounding-box query over
structured geometries: basic graph patterns joined left to right,
predicate / sequence / alternative / zero-or-more paths, and conjunctions
of numeric comparisons.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .rdf.model import Graph, Iri, Literal, Term
from .rdf.namespaces import GEOFLA, GEOM, RDF, RDFS, XSD


class TypeErrorInFilter(Exception):
    """A filter compared a value that is not a numeric literal."""


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Pred:
    iri: Iri


@dataclass(frozen=True)
class Seq:
    first: PathExpr
    second: PathExpr


@dataclass(frozen=True)
class Alt:
    left: PathExpr
    right: PathExpr


@dataclass(frozen=True)
class ZeroOrMore:
    path: PathExpr


PathExpr = Union[Pred, Seq, Alt, ZeroOrMore]


def path(p) -> PathExpr:
    return Pred(p) if isinstance(p, Iri) else p


def seq(*parts) -> PathExpr:
    expr = path(parts[0])
    for p in parts[1:]:
        expr = Seq(expr, path(p))
    return expr


def alt(*parts) -> PathExpr:
    expr = path(parts[0])
    for p in parts[1:]:
        expr = Alt(expr, path(p))
    return expr


@dataclass(frozen=True)
class TriplePattern:
    subject: Union[Term, Var]
    predicate: Union[Iri, PathExpr]
    object: Union[Term, Var]


_OPS = {"<": operator.lt, ">": operator.gt, "<=": operator.le, ">=": operator.ge}


@dataclass(frozen=True)
class Comparison:
    left: Union[Var, float]
    op: str
    right: Union[Var, float]

    def __post_init__(self):
        if self.op not in _OPS:
            raise ValueError(f"unsupported comparison {self.op!r}")

    def variables(self) -> set[str]:
        return {v.name for v in (self.left, self.right) if isinstance(v, Var)}


Binding = dict[str, Term]

NUMERIC_DATATYPES = {
    XSD[t].value
    for t in (
        "double",
        "float",
        "decimal",
        "integer",
        "int",
        "long",
        "short",
        "byte",
        "nonNegativeInteger",
        "positiveInteger",
        "negativeInteger",
        "nonPositiveInteger",
        "unsignedInt",
        "unsignedLong",
    )
}


def numeric_value(t: Term) -> float:
    if not isinstance(t, Literal) or t.datatype not in NUMERIC_DATATYPES:
        raise TypeErrorInFilter(f"{t!r} is not a numeric literal")
    try:
        return float(t.lexical)
    except ValueError:
        raise TypeErrorInFilter(f"{t.lexical!r} is not a valid number") from None


# -- paths -----------------------------------------------------------------------


def _walk(g: Graph, start: Term, p: PathExpr) -> dict[Term, None]:
    """Nodes reachable from ``start`` via ``p``, in discovery order."""
    if isinstance(p, Pred):
        return dict.fromkeys(g.objects(start, p.iri))
    if isinstance(p, Seq):
        out: dict[Term, None] = {}
        for mid in _walk(g, start, p.first):
            out.update(_walk(g, mid, p.second))
        return out
    if isinstance(p, Alt):
        out = _walk(g, start, p.left)
        out.update(_walk(g, start, p.right))
        return out
    if isinstance(p, ZeroOrMore):
        seen = {start: None}
        frontier = [start]
        while frontier:
            node = frontier.pop(0)
            for nxt in _walk(g, node, p.path):
                if nxt not in seen:
                    seen[nxt] = None
                    frontier.append(nxt)
        return seen
    raise TypeError(f"not a path expression: {p!r}")


def eval_path(g: Graph, start: Term, p: PathExpr) -> set[Term]:
    return set(_walk(g, start, path(p)))


# -- basic graph patterns ------------------------------------------------------------


def _resolve(x, binding: Binding):
    if isinstance(x, Var):
        return binding.get(x.name)
    return x


def _all_nodes(g: Graph) -> list[Term]:
    nodes: dict[Term, None] = {}
    for s, _, o in g:
        nodes[s] = None
        nodes[o] = None
    return list(nodes)


def _match(g: Graph, pat: TriplePattern, binding: Binding) -> Iterator[Binding]:
    s = _resolve(pat.subject, binding)
    o = _resolve(pat.object, binding)
    pred = pat.predicate

    if isinstance(pred, (Iri, Pred)):
        iri = pred if isinstance(pred, Iri) else pred.iri
        if s is not None:
            pairs = ((s, obj) for obj in g.objects(s, iri))
        elif o is not None:
            pairs = ((sub, o) for sub in g.subjects(iri, o))
        else:
            pairs = ((t.subject, t.object) for t in g.triples(None, iri, None))
    else:
        starts = [s] if s is not None else _all_nodes(g)
        pairs = ((start, end) for start in starts for end in _walk(g, start, pred))

    for sub, obj in pairs:
        if o is not None and obj != o:
            continue
        new = dict(binding)
        ok = True
        for slot, value in ((pat.subject, sub), (pat.object, obj)):
            if isinstance(slot, Var):
                bound = new.get(slot.name)
                if bound is None:
                    new[slot.name] = value
                elif bound != value:
                    ok = False
        if ok:
            yield new


def _passes(c: Comparison, binding: Binding) -> bool:
    def value(x):
        if isinstance(x, Var):
            return numeric_value(binding[x.name])
        return float(x)

    return _OPS[c.op](value(c.left), value(c.right))


def eval_select(
    g: Graph,
    patterns: Sequence[TriplePattern],
    filters: Sequence[Comparison] = (),
    projection: Sequence[str] | None = None,
    distinct: bool = True,
) -> list[Binding]:
    """Solutions of ``patterns`` satisfying every filter, projected.

    A row whose filter compares a non-numeric value is dropped.
    """
    results: list[Binding] = []
    seen: set[tuple] = set()

    def ready(binding, done):
        return [i for i, c in enumerate(filters) if i not in done and c.variables() <= binding.keys()]

    def solve(i: int, binding: Binding, done: frozenset):
        for idx in ready(binding, done):
            try:
                if not _passes(filters[idx], binding):
                    return
            except TypeErrorInFilter:
                return
            done = done | {idx}
        if i == len(patterns):
            if len(done) != len(filters):
                # filter over a variable no pattern binds
                return
            row = binding if projection is None else {k: binding[k] for k in projection if k in binding}
            key = tuple(sorted(row.items(), key=lambda kv: kv[0]))
            if distinct and key in seen:
                return
            seen.add(key)
            results.append(row)
            return
        for nxt in _match(g, patterns[i], binding):
            solve(i + 1, nxt, done)

    solve(0, {}, frozenset())
    return results


# -- the bounding-box query ------------------------------------------------------------

POINT_PATH = alt(seq(ZeroOrMore(Pred(RDF.rest)), RDF.first), GEOM.firstAndLast)
EXTERIOR_POINTS_PATH = seq(GEOM.geometry, GEOM.polygonMember, GEOM.exterior, GEOM.points)


def bbox_query(
    xmin: float, xmax: float, ymin: float, ymax: float, type_iri: Iri = GEOFLA.Departement
) -> tuple[list[TriplePattern], list[Comparison], list[str]]:
    """Patterns, filters and projection selecting features with an
    exterior-ring vertex strictly inside the box."""
    dep, name, pl, pm, x, y = (Var(n) for n in ("dep", "name", "pl", "pm", "x", "y"))
    patterns = [
        TriplePattern(dep, RDF.type, type_iri),
        TriplePattern(dep, RDFS.label, name),
        TriplePattern(dep, EXTERIOR_POINTS_PATH, pl),
        TriplePattern(pl, RDF.type, GEOM.PointsList),
        TriplePattern(pl, POINT_PATH, pm),
        TriplePattern(pm, RDF.type, GEOM.Point),
        TriplePattern(pm, GEOM.coordX, x),
        TriplePattern(pm, GEOM.coordY, y),
    ]
    filters = [
        Comparison(x, ">", xmin),
        Comparison(x, "<", xmax),
        Comparison(y, ">", ymin),
        Comparison(y, "<", ymax),
    ]
    return patterns, filters, ["name"]


def eval_bbox_query(
    g: Graph, xmin: float, xmax: float, ymin: float, ymax: float, type_iri: Iri = GEOFLA.Departement
) -> list[str]:
    patterns, filters, projection = bbox_query(xmin, xmax, ymin, ymax, type_iri)
    rows = eval_select(g, patterns, filters, projection)
    return sorted({str(r["name"]) for r in rows})
