"""dBASE III attribute tables (.dbf)."""

from __future__ import annotations

import datetime
import struct
from pathlib import Path
from typing import Any

from ..errors import BadFieldDescriptor, TruncatedHeader, TruncatedRecord
from .collection import FieldDescriptor, FieldKind

HEADER = struct.Struct("<BBBBIHH20x")
DESCRIPTOR = struct.Struct("<11sc4xBB14x")
TERMINATOR = 0x0D


def _kind(type_char: str, decimal_count: int) -> FieldKind:
    if type_char == "C":
        return FieldKind.CHARACTER
    if type_char == "N":
        return FieldKind.INTEGER if decimal_count == 0 else FieldKind.DECIMAL
    if type_char == "F":
        return FieldKind.DECIMAL
    if type_char == "L":
        return FieldKind.LOGICAL
    if type_char == "D":
        return FieldKind.DATE
    raise BadFieldDescriptor(f"unsupported field type {type_char!r}")


def parse_header(data: bytes) -> tuple[int, int, int, list[FieldDescriptor]]:
    """Return (record_count, header_length, record_length, fields)."""
    if len(data) < HEADER.size:
        raise TruncatedHeader(f".dbf header needs {HEADER.size} bytes, file has {len(data)}")
    _version, _y, _m, _d, count, header_len, record_len = HEADER.unpack_from(data, 0)
    fields = []
    pos = HEADER.size
    while True:
        if pos >= len(data):
            raise TruncatedHeader("field descriptor array is not terminated")
        if data[pos] == TERMINATOR:
            break
        if pos + DESCRIPTOR.size > len(data):
            raise TruncatedHeader("truncated field descriptor")
        raw_name, type_char, length, decimals = DESCRIPTOR.unpack_from(data, pos)
        name = raw_name.split(b"\0", 1)[0].decode("latin-1").strip()
        if not name:
            raise BadFieldDescriptor(f"empty field name in descriptor at offset {pos}")
        if length == 0:
            raise BadFieldDescriptor(f"field {name!r} has zero length")
        fields.append(FieldDescriptor(name, _kind(type_char.decode("latin-1"), decimals), length, decimals))
        pos += DESCRIPTOR.size
    if header_len < pos + 1 or (count and header_len > len(data)):
        raise TruncatedHeader(f"header length {header_len} inconsistent with descriptors")
    if record_len != 1 + sum(f.length for f in fields):
        raise BadFieldDescriptor(
            f"record length {record_len} does not match field widths ({1 + sum(f.length for f in fields)})"
        )
    return count, header_len, record_len, fields


def decode_value(raw: bytes, fd: FieldDescriptor, encoding: str) -> Any:
    if fd.kind is FieldKind.CHARACTER:
        return raw.decode(encoding).rstrip(" \0")
    text = raw.decode("ascii", errors="replace").strip(" \0")
    if fd.kind in (FieldKind.INTEGER, FieldKind.DECIMAL):
        if not text or set(text) <= {"*"}:
            return None
        if fd.kind is FieldKind.INTEGER:
            try:
                return int(text)
            except ValueError:
                return float(text)
        return float(text)
    if fd.kind is FieldKind.LOGICAL:
        if text[:1] in ("T", "t", "Y", "y"):
            return True
        if text[:1] in ("F", "f", "N", "n"):
            return False
        return None
    if fd.kind is FieldKind.DATE:
        if not text.strip("0"):
            return None
        try:
            return datetime.date(int(text[0:4]), int(text[4:6]), int(text[6:8]))
        except ValueError:
            return None
    raise AssertionError(fd.kind)


def read_dbf(path: str | Path, encoding: str = "latin-1") -> tuple[list[FieldDescriptor], list[tuple]]:
    """Read a dBASE III table; rows flagged deleted are skipped."""
    data = Path(path).read_bytes()
    count, header_len, record_len, fields = parse_header(data)
    end = header_len + count * record_len
    if end > len(data):
        raise TruncatedRecord(f"{path}: {count} records of {record_len} bytes exceed file size")
    rows = []
    for i in range(count):
        start = header_len + i * record_len
        record = data[start : start + record_len]
        if record[0:1] == b"*":
            continue
        pos = 1
        values = []
        for fd in fields:
            values.append(decode_value(record[pos : pos + fd.length], fd, encoding))
            pos += fd.length
        rows.append(tuple(values))
    return fields, rows
