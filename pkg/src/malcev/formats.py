"""Text and JSON serializations of Cayley tables.

Text format::

    # comments run to end of line
    3
    theta a b
    theta theta theta
    theta a b
    theta a b

First line is the order n, second the element names, then n rows where the
entry in row a, column b names the product ab.
"""

from __future__ import annotations

import json
import zlib
from typing import Any

from .core import FiniteSemigroup, MalformedTableError


class ParseError(MalformedTableError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


def row_checksum(entries) -> str:
    return f"{zlib.crc32(' '.join(entries).encode()):08x}"


def _tokens(text: str):
    """Non-empty lines as (line number, [(column, token), ...], trailing comment)."""
    for no, raw in enumerate(text.splitlines(), 1):
        body, _, comment = raw.partition("#")
        toks = []
        col = 0
        for part in body.split():
            col = body.index(part, col)
            toks.append((col + 1, part))
            col += len(part)
        if toks:
            yield no, toks, comment.strip()


def parse_text(text: str, validate: bool = True, verify_checksums: bool = False) -> FiniteSemigroup:
    lines = list(_tokens(text))
    if not lines:
        raise ParseError("empty input")
    no, toks, _ = lines[0]
    if len(toks) != 1:
        raise ParseError("first line must hold only the order", no, toks[1][0] if len(toks) > 1 else 1)
    try:
        n = int(toks[0][1])
    except ValueError:
        raise ParseError(f"order {toks[0][1]!r} is not an integer", no, toks[0][0]) from None
    if n < 1:
        raise ParseError("order must be positive", no, toks[0][0])
    if len(lines) != n + 2:
        raise ParseError(f"expected {n + 2} non-comment lines, found {len(lines)}")
    no, toks, _ = lines[1]
    names = [t for _, t in toks]
    if len(names) != n:
        raise ParseError(f"expected {n} names, found {len(names)}", no)
    seen = set()
    for col, t in toks:
        if t in seen:
            raise ParseError(f"duplicate element name {t!r}", no, col)
        seen.add(t)
    index = {t: i for i, t in enumerate(names)}
    table = []
    for no, toks, comment in lines[2:]:
        if len(toks) != n:
            raise ParseError(f"row has {len(toks)} entries, expected {n}", no)
        row = []
        for col, t in toks:
            if t not in index:
                raise ParseError(f"unknown element {t!r}", no, col)
            row.append(index[t])
        if verify_checksums:
            want = comment.removeprefix("crc=").strip()
            got = row_checksum([t for _, t in toks])
            if want != got:
                raise ParseError(f"row checksum {want!r} does not match {got}", no)
        table.append(row)
    return FiniteSemigroup.from_table(table, names, validate=validate)


def format_text(s: FiniteSemigroup, checksums: bool = False, header: str | None = None) -> str:
    out = []
    if header:
        out.extend("# " + line for line in header.splitlines())
    out.append(str(s.order))
    out.append(" ".join(s.names))
    width = max(len(x) for x in s.names)
    for row in s.table:
        entries = [s.names[v] for v in row]
        line = " ".join(e.ljust(width) for e in entries).rstrip()
        if checksums:
            line += f"  # crc={row_checksum(entries)}"
        out.append(line)
    return "\n".join(out) + "\n"


def to_document(s: FiniteSemigroup, expected: dict | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "order": s.order,
        "names": list(s.names),
        "table": [[s.names[v] for v in row] for row in s.table],
    }
    if expected:
        doc["expected"] = expected
    return doc


def from_document(doc: dict, validate: bool = True) -> FiniteSemigroup:
    try:
        names = doc["names"]
        rows = doc["table"]
    except (KeyError, TypeError):
        raise ParseError("document needs 'names' and 'table'") from None
    if "order" in doc and doc["order"] != len(names):
        raise ParseError(f"order {doc['order']} does not match {len(names)} names")
    if len(set(names)) != len(names):
        raise ParseError("duplicate element name")
    index = {t: i for i, t in enumerate(names)}
    table = []
    for r, row in enumerate(rows):
        if len(row) != len(names):
            raise ParseError(f"table row {r} has {len(row)} entries, expected {len(names)}")
        try:
            table.append([index[v] if isinstance(v, str) else int(v) for v in row])
        except KeyError as e:
            raise ParseError(f"table row {r}: unknown element {e.args[0]!r}") from None
    if len(table) != len(names):
        raise ParseError(f"table has {len(table)} rows, expected {len(names)}")
    return FiniteSemigroup.from_table(table, names, validate=validate)


def parse(text: str, validate: bool = True) -> FiniteSemigroup:
    """Either format, sniffed from the first non-blank character."""
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, e.lineno, e.colno) from None
        return from_document(doc, validate=validate)
    return parse_text(text, validate=validate)
