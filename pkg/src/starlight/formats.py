"""Text formats for systems, colourings and claims, plus the JSON export.

System file::

    ESS 1 e=<e> n=<n> blocks=<b>
    <centre>: <leaf> <leaf> ... <leaf>      (b lines, leaves ascending)

Colouring file::

    COL 1 n=<n> k=<k>
    <vertex> <class>                         (n lines)

Lines starting with ``#`` are ignored by both parsers. Ids are 1-based, the
files are ASCII with LF line endings. Rendering and parsing of block lines
are vectorised so that systems with tens of millions of blocks stay cheap.
"""

from __future__ import annotations

import json
import mmap
import os
import re
from collections.abc import Iterator
from pathlib import Path

import numpy as np

from .core import Colouring, StarSystem, id_dtype
from .errors import FormatError, InvalidStar

FORMAT_VERSION = 1
_SYSTEM_HEADER = re.compile(rb"ESS 1 e=(\d+) n=(\d+) blocks=(\d+)")
_COLOURING_HEADER = re.compile(r"COL 1 n=(\d+) k=(\d+)")
_CHUNK_ROWS = 1 << 20
_CHUNK_BYTES = 1 << 24
_DIGIT_TABLE = np.array([10**d for d in range(10)], dtype=np.int64)


def system_header(sys: StarSystem) -> bytes:
    return f"ESS {FORMAT_VERSION} e={sys.e} n={sys.n} blocks={len(sys)}\n".encode()


def _render_rows(arr: np.ndarray) -> bytes:
    """``c: l1 l2 ...\\n`` for every row, built without a per-row Python loop."""
    if arr.shape[0] == 0:
        return b""
    a = arr.astype(np.int64)
    width = a.shape[1]
    ndig = np.searchsorted(_DIGIT_TABLE, a, side="right")
    sep = np.ones(width, dtype=np.int64)
    sep[0] = 2  # ": " after the centre; one byte (space or newline) elsewhere
    field = ndig + sep
    ends = np.cumsum(field, axis=1)
    start = ends - field
    row_start = np.concatenate([[0], np.cumsum(ends[:, -1])[:-1]])
    start += row_start[:, None]
    buf = np.full(int(ends[:, -1].sum()), ord(" "), dtype=np.uint8)
    for d in range(int(ndig.max())):
        mask = ndig > d
        buf[(start + ndig - 1 - d)[mask]] = (a[mask] // 10**d % 10 + 48).astype(np.uint8)
    buf[start[:, 0] + ndig[:, 0]] = ord(":")
    buf[start[:, -1] + ndig[:, -1]] = ord("\n")
    return buf.tobytes()


def iter_system_bytes(sys: StarSystem) -> Iterator[bytes]:
    yield system_header(sys)
    arr = sys.blocks
    for i in range(0, arr.shape[0], _CHUNK_ROWS):
        yield _render_rows(arr[i : i + _CHUNK_ROWS])


def serialize_system(sys: StarSystem) -> bytes:
    return b"".join(iter_system_bytes(sys))


def write_system(sys: StarSystem, path: str | Path) -> None:
    with open(path, "wb") as fh:
        for part in iter_system_bytes(sys):
            fh.write(part)


_ALLOWED = np.zeros(256, dtype=bool)
_ALLOWED[[ord(c) for c in "0123456789 :\n"]] = True


def _parse_rows(chunk: bytes, e: int, first_line: int) -> np.ndarray:
    """Parse complete block lines (each ending in LF) into a (rows, e+1) array."""
    buf = np.frombuffer(chunk, dtype=np.uint8)
    nl = np.flatnonzero(buf == ord("\n"))
    rows = nl.size
    if not _ALLOWED[buf].all():
        bad = int(np.flatnonzero(~_ALLOWED[buf])[0])
        raise FormatError(f"line {first_line + int(np.searchsorted(nl, bad))}: unexpected character")
    colon = np.flatnonzero(buf == ord(":"))
    line_start = np.concatenate([[0], nl[:-1] + 1])
    if colon.size != rows or not np.array_equal(np.searchsorted(nl, colon), np.arange(rows)):
        raise FormatError(f"lines {first_line}..{first_line + rows - 1}: need exactly one ':' per line")
    is_digit = (buf >= 48) & (buf <= 57)
    if not (is_digit[colon - 1].all() and (colon > line_start).all()):
        raise FormatError(f"lines {first_line}..: a block line must start with '<centre>:'")
    digit_start = np.flatnonzero(is_digit & ~np.concatenate([[False], is_digit[:-1]]))
    counts = np.bincount(np.searchsorted(nl, digit_start), minlength=rows)
    if (counts != e + 1).any():
        line = first_line + int(np.flatnonzero(counts != e + 1)[0])
        raise FormatError(f"line {line}: expected a centre and {e} leaves")
    if (digit_start[:: e + 1] != line_start).any():
        raise FormatError(f"lines {first_line}..: centre must start the line")
    values = np.array(chunk.replace(b":", b" ").split(), dtype=np.int64)
    return values.reshape(rows, e + 1)


def _clean_body(body: bytes) -> bytes:
    """Drop comment and blank lines and CR characters from block lines."""
    kept = []
    for raw in body.split(b"\n"):
        raw = raw.rstrip(b"\r").strip()
        if raw and not raw.startswith(b"#"):
            kept.append(raw)
    return b"\n".join(kept) + (b"\n" if kept else b"")


def parse_system(data) -> StarSystem:
    """Parse a system file held in ``bytes``, ``str`` or an ``mmap``.

    Comment lines are skipped; blocks keep file order. The body is parsed in
    chunks straight from ``data`` so large files are never copied whole.
    """
    if isinstance(data, str):
        data = data.encode("ascii", errors="strict")
    pos = 0
    line_no = 1
    header = None
    size = len(data)
    while pos < size:
        end = data.find(b"\n", pos)
        end = size if end < 0 else end
        line = bytes(data[pos:end]).rstrip(b"\r")
        pos = end + 1
        if line.startswith(b"#") or not line.strip():
            line_no += 1
            continue
        header = _SYSTEM_HEADER.fullmatch(line.strip())
        if not header:
            raise FormatError(f"line {line_no}: expected 'ESS 1 e=<e> n=<n> blocks=<b>'")
        line_no += 1
        break
    if header is None:
        raise FormatError("missing header")
    e, n, b = (int(g) for g in header.groups())
    dtype = id_dtype(n)
    irregular = (
        data.find(b"#", pos) >= 0
        or data.find(b"\r", pos) >= 0
        or data.find(b"\n\n", pos) >= 0
        or (pos < size and data[pos : pos + 1] == b"\n")
    )
    if irregular:
        data, pos = _clean_body(bytes(data[pos:])), 0
        size = len(data)
    parts = []
    row = line_no
    while pos < size:
        nxt = data.find(b"\n", pos + _CHUNK_BYTES)
        cut = size if nxt < 0 else nxt + 1
        chunk = bytes(data[pos:cut])
        if not chunk.endswith(b"\n"):
            chunk += b"\n"
        rows = _parse_rows(chunk, e, row)
        if rows.size and (rows.min() < 1 or rows.max() > n):
            raise FormatError(f"vertex ids must lie in 1..{n}")
        row += rows.shape[0]
        parts.append(rows.astype(dtype))
        pos = cut
    arr = np.concatenate(parts) if parts else np.empty((0, e + 1), dtype=dtype)
    del parts
    if arr.shape[0] != b:
        raise FormatError(f"header announces {b} blocks, file has {arr.shape[0]}")
    try:
        return StarSystem(e, n, arr)
    except InvalidStar as exc:
        raise FormatError(str(exc)) from exc


def read_system(path: str | Path) -> StarSystem:
    with open(path, "rb") as fh:
        if os.fstat(fh.fileno()).st_size == 0:
            return parse_system(b"")
        with mmap.mmap(fh.fileno(), 0, access=mmap.ACCESS_READ) as mm:
            return parse_system(mm)


# ---------------------------------------------------------------- colourings


def serialize_colouring(col: Colouring) -> str:
    a = col.as_array()
    lines = [f"COL {FORMAT_VERSION} n={col.n} k={col.k}"]
    lines += [f"{v} {int(a[v])}" for v in range(1, col.n + 1)]
    return "\n".join(lines) + "\n"


def parse_colouring(text: str) -> Colouring:
    lines = [
        (i, ln.strip())
        for i, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise FormatError("missing header")
    i, head = lines[0]
    m = _COLOURING_HEADER.fullmatch(head)
    if not m:
        raise FormatError(f"line {i}: expected 'COL 1 n=<n> k=<k>'")
    n, k = int(m.group(1)), int(m.group(2))
    assign: dict[int, int] = {}
    for i, ln in lines[1:]:
        fields = ln.split()
        if len(fields) != 2 or not all(f.isdigit() for f in fields):
            raise FormatError(f"line {i}: expected '<vertex> <class>'")
        v, c = int(fields[0]), int(fields[1])
        if v in assign:
            raise FormatError(f"line {i}: vertex {v} listed twice")
        if not 1 <= v <= n or not 1 <= c <= k:
            raise FormatError(f"line {i}: vertex or class out of range")
        assign[v] = c
    if len(assign) != n:
        raise FormatError(f"colouring lists {len(assign)} of {n} vertices")
    return Colouring(k, [assign[v] for v in range(1, n + 1)])


def write_colouring(col: Colouring, path: str | Path) -> None:
    Path(path).write_text(serialize_colouring(col), encoding="ascii")


def read_colouring(path: str | Path) -> Colouring:
    return parse_colouring(Path(path).read_text(encoding="ascii"))


# ------------------------------------------------------------ claims, export


def claims_json(claims) -> str:
    return json.dumps(claims.to_dict(), indent=2, sort_keys=True) + "\n"


def export_json(sys: StarSystem, claims: dict | None = None) -> str:
    """JSON document ``{version, e, n, blocks: [[centre, [leaves]]], claims?}``."""
    doc: dict = {
        "version": FORMAT_VERSION,
        "e": sys.e,
        "n": sys.n,
        "blocks": [[row[0], row[1:]] for row in sys.blocks.tolist()],
    }
    if claims is not None:
        doc["claims"] = claims
    return json.dumps(doc, separators=(",", ":")) + "\n"
