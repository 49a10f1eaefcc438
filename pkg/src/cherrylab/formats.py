"""Text formats for graphs and colorings, and the JSON embedding certificate.

Graph::

    p graph <n> <m>
    e <u> <v>            (m lines, u < v)

Coloring::

    p ecoloring <n> <num_colors>
    c <u> <v> <color>    (one line per pair u < v)

Blank lines and lines starting with ``#`` are ignored.  Serializers write
pairs in rank order, so parse -> serialize is byte-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .colorings import Embedding, HostColoring, pair_rank
from .graphs import GraphError, PatternGraph

KINDS = ("graph", "coloring", "certificate")


class FormatError(ValueError):
    def __init__(self, msg: str, path=None, line: int | None = None):
        where = f"{path}:" if path is not None else ""
        where += f"{line}: " if line is not None else (" " if where else "")
        super().__init__(f"{where}{msg}")
        self.line = line


def _records(text: str):
    for num, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield num, line.split()


def _ints(fields, num, path, count):
    if len(fields) != count:
        raise FormatError(f"expected {count} fields, got {len(fields)}", path, num)
    try:
        return [int(x) for x in fields]
    except ValueError:
        raise FormatError(f"non-integer field in {' '.join(fields)!r}", path, num) from None


def _header(recs, tag, kind, path):
    try:
        num, fields = next(recs)
    except StopIteration:
        raise FormatError("empty file", path) from None
    if fields[:2] != [tag, kind]:
        raise FormatError(f"header must start with '{tag} {kind}'", path, num)
    a, b = _ints(fields[2:], num, path, 2)
    if a < 1 or b < 0:
        raise FormatError("header counts out of range", path, num)
    return a, b


def parse_graph(text: str, path=None) -> PatternGraph:
    recs = _records(text)
    n, m = _header(recs, "p", "graph", path)
    edges = []
    seen = {}
    for num, fields in recs:
        if fields[0] != "e":
            raise FormatError(f"expected an 'e' line, got {fields[0]!r}", path, num)
        u, v = _ints(fields[1:], num, path, 2)
        if u == v:
            raise FormatError(f"self-loop at vertex {u}", path, num)
        if not (1 <= u <= n and 1 <= v <= n):
            raise FormatError(f"vertex id out of range 1..{n} in edge ({u}, {v})", path, num)
        if u > v:
            raise FormatError(f"edge ({u}, {v}) must be written with u < v", path, num)
        if (u, v) in seen:
            raise FormatError(f"duplicate edge ({u}, {v}), first on line {seen[(u, v)]}", path, num)
        seen[(u, v)] = num
        edges.append((u, v))
    if len(edges) != m:
        raise FormatError(f"header announces {m} edges, file has {len(edges)}", path)
    try:
        return PatternGraph(n, edges)
    except GraphError as exc:
        raise FormatError(str(exc), path) from None


def serialize_graph(G: PatternGraph) -> str:
    lines = [f"p graph {G.n} {G.num_edges}"]
    lines += [f"e {u} {v}" for u, v in G.edges]
    return "\n".join(lines) + "\n"


def parse_coloring(text: str, path=None) -> HostColoring:
    recs = _records(text)
    n, num_colors = _header(recs, "p", "ecoloring", path)
    npairs = n * (n - 1) // 2
    colors = np.full(npairs, -1, dtype=np.int64)
    for num, fields in recs:
        if fields[0] != "c":
            raise FormatError(f"expected a 'c' line, got {fields[0]!r}", path, num)
        u, v, col = _ints(fields[1:], num, path, 3)
        if u == v or not (1 <= u <= n and 1 <= v <= n):
            raise FormatError(f"pair ({u}, {v}) is not an edge of K_{n}", path, num)
        if u > v:
            raise FormatError(f"pair ({u}, {v}) must be written with u < v", path, num)
        if col < 0:
            raise FormatError(f"negative color {col}", path, num)
        rank = pair_rank(n, u, v)
        if colors[rank] >= 0:
            raise FormatError(f"duplicate pair ({u}, {v})", path, num)
        colors[rank] = col
    missing = np.flatnonzero(colors < 0)
    if missing.size:
        i, j = np.triu_indices(n, k=1)
        r = int(missing[0])
        raise FormatError(f"missing pair ({i[r] + 1}, {j[r] + 1}); {missing.size} pair(s) absent", path)
    c = HostColoring(n, colors)
    if npairs and c.report().num_colors != num_colors:
        raise FormatError(f"header announces {num_colors} colors, file uses {c.report().num_colors}", path)
    return c


def serialize_coloring(c: HostColoring) -> str:
    i, j = np.triu_indices(c.n, k=1)
    num = c.report().num_colors if c.n > 1 else 0
    body = "\n".join(f"c {u} {v} {col}" for u, v, col in zip((i + 1).tolist(), (j + 1).tolist(),
                                                              c.colors.tolist()))
    return f"p ecoloring {c.n} {num}\n" + (body + "\n" if body else "")


@dataclass(frozen=True)
class Certificate:
    pattern_file: str
    host_file: str
    mode: str
    map: tuple[int, ...]
    seed: int | None
    resamples: int
    verified: bool = True

    def to_json(self) -> str:
        d = {"pattern_file": self.pattern_file, "host_file": self.host_file, "mode": self.mode,
             "map": list(self.map), "seed": self.seed, "resamples": self.resamples,
             "verified": self.verified}
        return json.dumps(d, indent=2) + "\n"

    def embedding(self) -> Embedding:
        return Embedding(self.map, self.mode)


def parse_certificate(text: str, path=None) -> Certificate:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", path, exc.lineno) from None
    need = {"pattern_file": str, "host_file": str, "mode": str, "map": list, "resamples": int, "verified": bool}
    if not isinstance(d, dict):
        raise FormatError("certificate must be a JSON object", path)
    for key, typ in need.items():
        if not isinstance(d.get(key), typ):
            raise FormatError(f"field {key!r} missing or not a {typ.__name__}", path)
    if "seed" not in d or not (d["seed"] is None or isinstance(d["seed"], int)):
        raise FormatError("field 'seed' must be an integer or null", path)
    if d["mode"] not in ("proper", "rainbow"):
        raise FormatError(f"unknown mode {d['mode']!r}", path)
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in d["map"]):
        raise FormatError("map entries must be integers", path)
    return Certificate(d["pattern_file"], d["host_file"], d["mode"], tuple(d["map"]), d["seed"],
                       d["resamples"], d["verified"])


_PARSERS = {"graph": parse_graph, "coloring": parse_coloring, "certificate": parse_certificate}
_SERIALIZERS = {PatternGraph: serialize_graph, HostColoring: serialize_coloring}


def parse_and_validate(path, expected: str):
    """Read ``path`` strictly as a graph, coloring or certificate."""
    if expected not in KINDS:
        raise ValueError(f"expected must be one of {KINDS}")
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc.strerror}", path) from None
    return _PARSERS[expected](text, path)


def serialize(value) -> str:
    if isinstance(value, Certificate):
        return value.to_json()
    for typ, fn in _SERIALIZERS.items():
        if isinstance(value, typ):
            return fn(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def write(value, path) -> Path:
    p = Path(path)
    p.write_text(serialize(value))
    return p
