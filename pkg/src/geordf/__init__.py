"""Convert vector geodata (shapefiles, CSV points) to RDF with structured geometries."""

from .builder import build_graph, reconstruct_geometry
from .crs import LAMB93, WGS84, parse_prj, transform_geometry
from .features import parse_features
from .geometry import from_wkt, to_wkt
from .ingest import read_csv_points, read_shapefile
from .query import eval_bbox_query

__version__ = "0.1.0"

__all__ = [
    "build_graph",
    "reconstruct_geometry",
    "LAMB93",
    "WGS84",
    "parse_prj",
    "transform_geometry",
    "parse_features",
    "from_wkt",
    "to_wkt",
    "read_csv_points",
    "read_shapefile",
    "eval_bbox_query",
]
