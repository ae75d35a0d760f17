"""Command line: ``geordf convert`` and ``geordf query``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import crs as crs_mod
from .builder import BuildConfig, PredicateMapping, PredicateRule, UriTemplate, build_graph, load_predicate_mapping, load_sameas
from .errors import GeoRdfError
from .features import parse_features
from .ingest import CsvConfig, read_csv_points, read_shapefile
from .query import eval_bbox_query
from .rdf import DEFAULT_PREFIXES, GEOFLA, RDFS, Iri, load_graph, serialize_ntriples, serialize_turtle

log = logging.getLogger("geordf")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class ConvertConfig:
    input: Path
    output: Path
    input_format: str = "auto"
    base_uri: str = "http://data.ign.fr/id/geofla/"
    class_segment: str = "departement"
    type_iri: str | None = None
    vocab: str = str(GEOFLA)
    id_column: str | None = None
    label_column: str | None = None
    label_lang: str | None = None
    mapping_file: Path | None = None
    only_mapped: bool = False
    target_crs: str | None = None
    source_crs: str | None = None
    output_format: str = "ntriples"
    sameas_file: Path | None = None
    named_points: bool = False
    sorted: bool = False
    encoding: str | None = None
    x_column: str = "lon"
    y_column: str = "lat"
    delimiter: str = ","
    crs_config: Path | None = None
    precision: int | None = None


def _format_of(cfg: ConvertConfig) -> str:
    if cfg.input_format != "auto":
        return cfg.input_format
    suffix = cfg.input.suffix.lower()
    if suffix in (".csv", ".txt", ".tsv"):
        return "csv"
    return "shapefile"


def _input_exists(cfg: ConvertConfig, fmt: str) -> bool:
    if fmt == "csv":
        return cfg.input.is_file()
    base = cfg.input.with_suffix("") if cfg.input.suffix.lower() == ".shp" else cfg.input
    return base.with_suffix(".shp").exists() or base.with_suffix(".SHP").exists()


def run_convert(cfg: ConvertConfig) -> int:
    if cfg.output_format not in ("ntriples", "turtle"):
        raise UsageError(f"unknown output format {cfg.output_format!r}")
    registry = crs_mod.load_registry(cfg.crs_config) if cfg.crs_config else crs_mod.REGISTRY
    fmt = _format_of(cfg)
    if not _input_exists(cfg, fmt):
        raise FileNotFoundError(f"input not found: {cfg.input}")

    if fmt == "csv":
        source = registry.get(cfg.source_crs) if cfg.source_crs else registry.get("WGS84")
        fc = read_csv_points(
            cfg.input,
            CsvConfig(cfg.x_column, cfg.y_column, source, cfg.delimiter, cfg.encoding or "utf-8"),
        )
    else:
        fc = read_shapefile(cfg.input, encoding=cfg.encoding or "latin-1", registry=registry)
        if cfg.source_crs:
            fc = type(fc)(fc.schema, registry.get(cfg.source_crs), fc.features)

    target = registry.get(cfg.target_crs) if cfg.target_crs else None
    features = parse_features(fc, target, cfg.id_column, registry)

    prefixes = dict(DEFAULT_PREFIXES)
    if cfg.mapping_file:
        mapping = load_predicate_mapping(
            cfg.mapping_file, prefixes, vocab=cfg.vocab, include_unmapped=not cfg.only_mapped
        )
    else:
        mapping = PredicateMapping(vocab=cfg.vocab, include_unmapped=not cfg.only_mapped)
    if cfg.label_column:
        mapping.rules[cfg.label_column] = PredicateRule(RDFS.label, lang=cfg.label_lang)

    config = BuildConfig(
        template=UriTemplate(cfg.base_uri),
        class_segment=cfg.class_segment,
        type_iri=Iri(cfg.type_iri) if cfg.type_iri else None,
        mapping=mapping,
        named_points=cfg.named_points,
        sameas=load_sameas(cfg.sameas_file) if cfg.sameas_file else (),
        precision=cfg.precision,
        registry=registry,
    )
    graph = build_graph(features, config)
    if cfg.output_format == "turtle":
        text = serialize_turtle(graph)
    else:
        text = serialize_ntriples(graph, sorted=cfg.sorted)
    cfg.output.write_text(text, encoding="utf-8")

    if target is not None and target != fc.crs:
        transform = f"applied ({fc.crs} -> {target})"
    else:
        transform = f"not applied ({fc.crs})"
    print(
        f"{cfg.input}: {len(features)} features read, {len(graph)} triples emitted, "
        f"CRS transformation {transform}",
        file=sys.stderr,
    )
    return EXIT_OK


def run_query(graph_file: Path, xmin: float, xmax: float, ymin: float, ymax: float, type_iri: str | None = None) -> list[str]:
    graph = load_graph(graph_file)
    kwargs = {"type_iri": Iri(type_iri)} if type_iri else {}
    return eval_bbox_query(graph, xmin, xmax, ymin, ymax, **kwargs)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="geordf", description="Convert vector geodata to RDF and query the result.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("convert", help="convert a shapefile or CSV file to RDF")
    c.add_argument("input", type=Path, help="shapefile (.shp or base path) or CSV file")
    c.add_argument("-o", "--output", type=Path, required=True)
    c.add_argument("--input-format", choices=["auto", "shapefile", "csv"], default="auto")
    c.add_argument("--output-format", choices=["ntriples", "turtle"], default="ntriples")
    c.add_argument("--base-uri", default="http://data.ign.fr/id/geofla/")
    c.add_argument("--class", dest="class_segment", default="departement", help="URI segment for the feature class")
    c.add_argument("--type-iri", help="rdf:type of features (default geofla:<Class>)")
    c.add_argument("--vocab", default=str(GEOFLA), help="namespace for unmapped property predicates")
    c.add_argument("--id-column")
    c.add_argument("--label-column")
    c.add_argument("--label-lang")
    c.add_argument("--mapping", dest="mapping_file", type=Path, help="predicate mapping file")
    c.add_argument("--only-mapped", action="store_true", help="drop properties without a mapping")
    c.add_argument("--target-crs", help="reproject geometries, e.g. WGS84 or LAMB93")
    c.add_argument("--source-crs", help="override the input CRS")
    c.add_argument("--crs-config", type=Path, help="INI file extending the CRS registry")
    c.add_argument("--sameas", dest="sameas_file", type=Path, help="two-column owl:sameAs mapping")
    c.add_argument("--named-points", action="store_true", help="mint IRIs for point geometries")
    c.add_argument("--sorted", action="store_true", help="sort N-Triples lines")
    c.add_argument("--precision", type=int, help="fixed decimals in WKT literals")
    c.add_argument("--encoding", help="text encoding (default latin-1 for .dbf, utf-8 for CSV)")
    c.add_argument("--x-column", default="lon")
    c.add_argument("--y-column", default="lat")
    c.add_argument("--delimiter", default=",")

    q = sub.add_parser("query", help="list features with a vertex inside a bounding box")
    q.add_argument("graph", type=Path)
    q.add_argument("xmin", type=float)
    q.add_argument("xmax", type=float)
    q.add_argument("ymin", type=float)
    q.add_argument("ymax", type=float)
    q.add_argument("--type-iri", help="feature class (default geofla:Departement)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "convert":
            fields = {k: v for k, v in vars(args).items() if k not in ("command", "verbose")}
            try:
                return run_convert(ConvertConfig(**fields))
            except GeoRdfError as exc:
                raise GeoRdfError(f"{args.input}: {exc}") from exc
        if not args.graph.exists():
            raise FileNotFoundError(f"graph file not found: {args.graph}")
        for label in run_query(args.graph, args.xmin, args.xmax, args.ymin, args.ymax, args.type_iri):
            print(label)
        return EXIT_OK
    except UsageError as exc:
        print(f"geordf: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GeoRdfError, OSError, ValueError, KeyError) as exc:
        print(f"geordf: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
