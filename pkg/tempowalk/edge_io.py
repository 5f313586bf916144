"""
Readers and writers for edge files, walk files and stats streams.

Edge files are either text (`source<TAB>target<TAB>timestamp` per line, `#` comments) or packed binary (the magic
`TMPW0001` followed by little-endian int64 triples). Walk files are text (`node@time` hops separated by spaces,
one walk per line, `node@-` for a slot without a time) or binary (magic `TMPWALK1`, walk count, stride, lengths,
node slots, time slots, all little-endian int64). Stats are newline-delimited JSON records.
"""

import enum
import json
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import IO, Any

import numpy as np

from tempowalk.edge_store import EdgeBatch, WalkDirection
from tempowalk.errors import EdgeFormatError
from tempowalk.walk_engine import WalkSet

EDGE_MAGIC = b"TMPW0001"
WALK_MAGIC = b"TMPWALK1"
DEFAULT_CHUNK_EDGES = 1 << 20

_LE_INT64 = np.dtype("<i8")
_INT64_MAX = np.iinfo(np.int64).max


class FileFormat(enum.StrEnum):
    TEXT = "text"
    BINARY = "binary"


def detect_edge_format(path: Path | str) -> FileFormat:
    with Path(path).open("rb") as handle:
        return FileFormat.BINARY if handle.read(len(EDGE_MAGIC)) == EDGE_MAGIC else FileFormat.TEXT


def _parse_edge_line(line: str, path: Path, line_number: int) -> tuple[int, int, int] | None:
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    fields = stripped.split()
    if len(fields) != 3:  # noqa: PLR2004
        msg = f"expected 3 fields (source, target, timestamp), got {len(fields)}"
        raise EdgeFormatError(msg, path=str(path), line_number=line_number)
    try:
        source, target, timestamp = (int(value) for value in fields)
    except ValueError:
        msg = f"non-integer field in {stripped!r}"
        raise EdgeFormatError(msg, path=str(path), line_number=line_number) from None
    if source < 0 or target < 0 or timestamp < 0:
        msg = f"negative node id or timestamp in {stripped!r}"
        raise EdgeFormatError(msg, path=str(path), line_number=line_number)
    if max(source, target, timestamp) > _INT64_MAX:
        msg = f"node id or timestamp does not fit in a signed 64-bit integer in {stripped!r}"
        raise EdgeFormatError(msg, path=str(path), line_number=line_number)
    return source, target, timestamp


def _iter_text_lines(path: Path) -> Iterator[tuple[int, str]]:
    """
    Yields numbered lines of a UTF-8 text file, decoding each line on its own so a bad byte is reported with its
    line number.
    """
    with path.open("rb") as handle:
        for line_number, raw in enumerate(handle, start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                msg = f"invalid UTF-8 at byte {e.start}"
                raise EdgeFormatError(msg, path=str(path), line_number=line_number) from None
            yield line_number, line


def _iter_text_chunks(path: Path, chunk_size: int) -> Iterator[EdgeBatch]:
    pending: list[tuple[int, int, int]] = []
    for line_number, line in _iter_text_lines(path):
        edge = _parse_edge_line(line, path, line_number)
        if edge is None:
            continue
        pending.append(edge)
        if len(pending) >= chunk_size:
            yield EdgeBatch.from_edges(pending)
            pending = []
    if pending:
        yield EdgeBatch.from_edges(pending)


def _iter_binary_chunks(path: Path, chunk_size: int) -> Iterator[EdgeBatch]:
    with path.open("rb") as handle:
        if handle.read(len(EDGE_MAGIC)) != EDGE_MAGIC:
            msg = "missing TMPW0001 header"
            raise EdgeFormatError(msg, path=str(path))
        while True:
            raw = handle.read(chunk_size * 3 * _LE_INT64.itemsize)
            if not raw:
                return
            if len(raw) % (3 * _LE_INT64.itemsize):
                msg = "truncated edge record"
                raise EdgeFormatError(msg, path=str(path))
            triples = np.frombuffer(raw, dtype=_LE_INT64).reshape(-1, 3).astype(np.int64)
            if triples.size and triples.min() < 0:
                msg = "negative node id or timestamp"
                raise EdgeFormatError(msg, path=str(path))
            yield EdgeBatch.from_arrays(triples[:, 0], triples[:, 1], triples[:, 2])


def iter_edge_chunks(path: Path | str, chunk_size: int = DEFAULT_CHUNK_EDGES) -> Iterator[EdgeBatch]:
    """
    Streams an edge file in file order, `chunk_size` edges at a time.

    Raises:
        EdgeFormatError: On the first line or record that cannot be parsed.
    """
    path = Path(path)
    if detect_edge_format(path) is FileFormat.BINARY:
        yield from _iter_binary_chunks(path, chunk_size)
    else:
        yield from _iter_text_chunks(path, chunk_size)


def read_edges(path: Path | str) -> EdgeBatch:
    return EdgeBatch.concatenate(list(iter_edge_chunks(path)))


def write_edges(path: Path | str, batch: EdgeBatch, file_format: FileFormat | str = FileFormat.TEXT) -> None:
    path = Path(path)
    if FileFormat(file_format) is FileFormat.BINARY:
        triples = np.column_stack((batch.sources, batch.targets, batch.times)).astype(_LE_INT64)
        with path.open("wb") as handle:
            handle.write(EDGE_MAGIC)
            handle.write(triples.tobytes())
        return
    with path.open("w", encoding="utf-8") as handle:
        for source, target, timestamp in zip(
            batch.sources.tolist(),
            batch.targets.tolist(),
            batch.times.tolist(),
            strict=True,
        ):
            handle.write(f"{source}\t{target}\t{timestamp}\n")


def format_walk(walk: Iterable[tuple[int, int | None]]) -> str:
    return " ".join(f"{node}@{'-' if time_ is None else time_}" for node, time_ in walk)


def write_walks_text(handle: IO[str], walkset: WalkSet) -> None:
    for walk in walkset:
        handle.write(format_walk(walk))
        handle.write("\n")


def write_walks_binary(handle: IO[bytes], walkset: WalkSet) -> None:
    handle.write(WALK_MAGIC)
    handle.write(np.array([walkset.walk_count, walkset.stride], dtype=_LE_INT64).tobytes())
    handle.write(walkset.lengths.astype(_LE_INT64).tobytes())
    handle.write(walkset.nodes.astype(_LE_INT64).tobytes())
    handle.write(walkset.times.astype(_LE_INT64).tobytes())


def _parse_walk_token(token: str, path: Path, line_number: int) -> tuple[int, int | None]:
    node, separator, stamp = token.partition("@")
    try:
        if not separator or stamp in ("-", "*"):
            return int(node), None
        return int(node), int(stamp)
    except ValueError:
        msg = f"cannot parse walk hop {token!r}"
        raise EdgeFormatError(msg, path=str(path), line_number=line_number) from None


def read_walks(path: Path | str) -> list[list[tuple[int, int | None]]]:
    """
    Reads a text or binary walk file. Text hops without `@time` are read as untimed.

    Raises:
        EdgeFormatError: On a hop or header that cannot be parsed.
    """
    path = Path(path)
    with path.open("rb") as handle:
        binary = handle.read(len(WALK_MAGIC)) == WALK_MAGIC
    if binary:
        return list(read_walkset_binary(path))
    walks = []
    for line_number, line in _iter_text_lines(path):
        tokens = line.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        walks.append([_parse_walk_token(token, path, line_number) for token in tokens])
    return walks


def read_walkset_binary(path: Path | str, direction: WalkDirection = WalkDirection.FORWARD) -> WalkSet:
    path = Path(path)
    raw = path.read_bytes()
    if raw[: len(WALK_MAGIC)] != WALK_MAGIC:
        msg = "missing TMPWALK1 header"
        raise EdgeFormatError(msg, path=str(path))
    payload = raw[len(WALK_MAGIC) :]
    if len(payload) < 2 * _LE_INT64.itemsize or len(payload) % _LE_INT64.itemsize:
        msg = "truncated walk file"
        raise EdgeFormatError(msg, path=str(path))
    body = np.frombuffer(payload, dtype=_LE_INT64).astype(np.int64)
    count, stride = int(body[0]), int(body[1])
    expected = 2 + count + 2 * count * stride
    if body.size != expected:
        msg = f"walk file holds {body.size} values, expected {expected}"
        raise EdgeFormatError(msg, path=str(path))
    lengths = body[2 : 2 + count]
    nodes = body[2 + count : 2 + count + count * stride].reshape(count, stride)
    times = body[2 + count + count * stride :].reshape(count, stride)
    return WalkSet(nodes=nodes.copy(), times=times.copy(), lengths=lengths.copy(), direction=direction)


def write_stats_record(handle: IO[str], record: dict[str, Any]) -> None:
    handle.write(json.dumps(record, sort_keys=True, default=_json_default))
    handle.write("\n")
    handle.flush()


def read_stats(path: Path | str) -> list[dict[str, Any]]:
    with Path(path).open(encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]


def _json_default(value: object) -> object:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    msg = f"Object of type {type(value).__name__} is not JSON serializable"
    raise TypeError(msg)


