"""Exception hierarchy shared by every stage of the converter."""

from __future__ import annotations


class GeoRdfError(Exception):
    """Base class for all errors raised by geordf."""


class ParseError(GeoRdfError):
    def __init__(self, message: str, offset: int | None = None):
        self.message = message
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


# CRS


class CrsError(GeoRdfError):
    pass


class UnsupportedCrs(CrsError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unsupported CRS: {name}")


class UnsupportedTransformation(CrsError):
    def __init__(self, source, target):
        self.source = source
        self.target = target
        super().__init__(f"no transformation from {source} to {target}")


class OutOfDomain(CrsError):
    pass


class NoConvergence(CrsError):
    pass


# Input files


class IngestError(GeoRdfError):
    pass


class BadMagic(IngestError):
    pass


class TruncatedRecord(IngestError):
    pass


class TruncatedHeader(IngestError):
    pass


class BadFieldDescriptor(IngestError):
    pass


class RecordCountMismatch(IngestError):
    def __init__(self, shp_count: int, dbf_count: int):
        self.shp_count = shp_count
        self.dbf_count = dbf_count
        super().__init__(f".shp holds {shp_count} records but .dbf holds {dbf_count}")


class UnsupportedShapeType(IngestError):
    def __init__(self, shape_type: int, detail: str = ""):
        self.shape_type = shape_type
        msg = f"unsupported shape type {shape_type}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class InvalidGeometry(IngestError):
    pass


class MissingColumn(IngestError):
    def __init__(self, column: str):
        self.column = column
        super().__init__(f"missing column: {column}")


class NonNumericCoordinate(IngestError):
    def __init__(self, row: int, column: str, value: str = ""):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"row {row}: column {column!r} is not a number: {value!r}")


# RDF building


class EmptyIdentifier(GeoRdfError):
    pass


class MalformedStructure(GeoRdfError):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)
