from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from ..crs import CrsId
from ..geometry import Geometry


class FieldKind(str, enum.Enum):
    CHARACTER = "character"
    INTEGER = "numeric-integer"
    DECIMAL = "numeric-decimal"
    LOGICAL = "logical"
    DATE = "date"
    GEOMETRY = "geometry"


@dataclass(frozen=True)
class FieldDescriptor:
    name: str
    kind: FieldKind
    length: int = 0
    decimal_count: int = 0


@dataclass(frozen=True)
class SourceFeature:
    """One input record: attribute values in schema order plus its geometry."""

    values: tuple[Any, ...]
    geometry: Geometry | None = None


@dataclass(frozen=True)
class FeatureCollection:
    schema: tuple[FieldDescriptor, ...]
    crs: CrsId
    features: tuple[SourceFeature, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "schema", tuple(self.schema))
        object.__setattr__(self, "features", tuple(self.features))
        arity = len(self.schema)
        for i, f in enumerate(self.features):
            if len(f.values) != arity:
                raise ValueError(f"feature {i} has {len(f.values)} values, schema has {arity}")

    def field_names(self) -> list[str]:
        return [f.name for f in self.schema]

    def __len__(self) -> int:
        return len(self.features)
