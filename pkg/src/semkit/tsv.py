"""TSV reading/writing helpers shared by the knowledge-base and grammar stores.

All store files are UTF-8, tab-separated, one header line, one record per
line. Free-string fields are percent-escaped so that tabs, newlines, '|'
and ':' can never collide with structural separators.
"""

from __future__ import annotations

import os
import tempfile
from typing import Iterable, Iterator

from .errors import ConfigError, FormatError, StorageError

# Escape '%' first so decoding is unambiguous; decode it last.
_ESCAPES = [("%", "%25"), ("\t", "%09"), ("\n", "%0A"), ("|", "%7C"), (":", "%3A")]


def escape_field(s: str) -> str:
    for ch, code in _ESCAPES:
        s = s.replace(ch, code)
    return s


def unescape_field(s: str) -> str:
    for ch, code in reversed(_ESCAPES):
        s = s.replace(code, ch)
    return s


def read_tsv(path: str, header: list[str]) -> Iterator[tuple[int, list[str]]]:
    """Yield (line_number, fields) for every record line of a TSV file.

    Raises ConfigError if the file is missing and FormatError if the header
    or a record's field count does not match.
    """
    if not os.path.isfile(path):
        raise ConfigError(f"missing store file: {path}")
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if first.rstrip("\n").split("\t") != header:
            raise FormatError(f"{path}:1: expected header {header}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != len(header):
                raise FormatError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(fields)}"
                )
            yield lineno, fields


def atomic_write(path: str, data: str) -> None:
    """Write a file via temp-file-then-rename so readers never see half a file."""
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise StorageError(f"cannot write {path}: {exc}") from exc


def write_tsv(path: str, header: list[str], rows: Iterable[list[str]]) -> None:
    lines = ["\t".join(header)]
    lines.extend("\t".join(row) for row in rows)
    atomic_write(path, "\n".join(lines) + "\n")


def parse_id_list(field: str, path: str, lineno: int) -> list[int]:
    """Parse a comma-joined id list; empty string means no ids."""
    if not field:
        return []
    out = []
    for part in field.split(","):
        try:
            out.append(int(part))
        except ValueError:
            raise FormatError(f"{path}:{lineno}: bad id {part!r}") from None
    return out


def join_ids(ids: Iterable[int]) -> str:
    return ",".join(str(i) for i in sorted(ids))
