"""Total edge-colorings of K_n and proper/rainbow verification of copies.

A coloring is stored as a flat array over the ``C(n, 2)`` unordered pairs in
rank order: ``(1,2), (1,3), ..., (1,n), (2,3), ...``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .graphs import PatternGraph

MODES = ("proper", "rainbow")


class ColoringError(ValueError):
    pass


def pair_rank(n: int, u: int, v: int) -> int:
    """Rank of the pair ``{u, v}`` (1-based vertices) in lexicographic order."""
    if u > v:
        u, v = v, u
    return (u - 1) * (2 * n - u) // 2 + (v - u - 1)


def rank_pair(n: int, rank: int) -> tuple[int, int]:
    """Inverse of :func:`pair_rank`."""
    u = 1
    row = n - 1
    while rank >= row:
        rank -= row
        u += 1
        row -= 1
    return u, u + 1 + rank


def _triu(n: int) -> tuple[np.ndarray, np.ndarray]:
    """1-based endpoint arrays of all pairs in rank order."""
    i, j = np.triu_indices(n, k=1)
    return i + 1, j + 1


@dataclass(frozen=True)
class BoundednessReport:
    k_local: int
    k_global: int
    per_color_totals: dict[int, int] = field(repr=False)

    @property
    def num_colors(self) -> int:
        return len(self.per_color_totals)


class HostColoring:
    """Immutable total coloring of the edges of ``K_n``."""

    def __init__(self, n: int, colors):
        if n < 1:
            raise ColoringError(f"host needs at least one vertex, got n={n}")
        arr = np.asarray(colors)
        npairs = n * (n - 1) // 2
        if arr.shape != (npairs,):
            raise ColoringError(f"expected {npairs} pair colors for n={n}, got shape {arr.shape}")
        if npairs and not np.issubdtype(arr.dtype, np.integer):
            raise ColoringError("color ids must be integers")
        if npairs and int(arr.min()) < 0:
            raise ColoringError("color ids must be nonnegative")
        top = int(arr.max()) if npairs else 0
        arr = arr.astype(np.int32 if top < 2**31 else np.int64, copy=True)
        arr.flags.writeable = False
        self.n = n
        self.colors = arr
        self._report: BoundednessReport | None = None
        self._matrix: np.ndarray | None = None
        self._table: list[list[int]] | None = None
        self._left_base: np.ndarray | None = None

    def __repr__(self) -> str:
        return f"HostColoring(n={self.n})"

    def __eq__(self, other) -> bool:
        return isinstance(other, HostColoring) and self.n == other.n and np.array_equal(self.colors, other.colors)

    __hash__ = None

    @classmethod
    def from_function(cls, n: int, fn) -> "HostColoring":
        """Color every pair ``u < v`` with ``fn(u, v)``."""
        return cls(n, np.fromiter((fn(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)),
                                  dtype=np.int64, count=n * (n - 1) // 2))

    @classmethod
    def from_matrix(cls, mat) -> "HostColoring":
        """From a symmetric ``(n+1) x (n+1)`` array whose row/column 0 is unused."""
        mat = np.asarray(mat)
        n = mat.shape[0] - 1
        i, j = _triu(n)
        if not np.array_equal(mat[i, j], mat[j, i]):
            raise ColoringError("color matrix is not symmetric")
        return cls(n, mat[i, j])

    def color(self, u: int, v: int) -> int:
        if u == v or not (1 <= u <= self.n and 1 <= v <= self.n):
            raise ColoringError(f"no edge ({u}, {v}) in K_{self.n}")
        return int(self.colors[pair_rank(self.n, u, v)])

    def _half_rows(self, v: int) -> np.ndarray:
        """Colors ``c(v, x)`` for ``x = 1..v-1`` then ``x = v+1..n``."""
        if self._left_base is None:
            xs = np.arange(1, self.n + 1, dtype=np.int64)
            self._left_base = (xs - 1) * (2 * self.n - xs) // 2 - xs - 1
        start = (v - 1) * (2 * self.n - v) // 2
        left = self.colors[self._left_base[:v - 1] + v]
        return np.concatenate((left, self.colors[start:start + self.n - v]))

    def row(self, v: int) -> np.ndarray:
        """``row[x] = c(v, x)``; entries 0 and ``v`` are -1."""
        if not 1 <= v <= self.n:
            raise ColoringError(f"no vertex {v} in K_{self.n}")
        half = self._half_rows(v)
        out = np.empty(self.n + 1, dtype=np.int64)
        out[0] = -1
        out[1:v] = half[:v - 1]
        out[v] = -1
        out[v + 1:] = half[v - 1:]
        return out

    def matrix(self) -> np.ndarray:
        """Dense symmetric ``(n+1) x (n+1)`` color matrix, -1 off the edge set."""
        if self._matrix is None:
            n = self.n
            mat = np.full((n + 1, n + 1), -1, dtype=np.int64)
            i, j = _triu(n)
            mat[i, j] = self.colors
            mat[j, i] = self.colors
            mat.flags.writeable = False
            self._matrix = mat
        return self._matrix

    def table(self) -> list[list[int]]:
        """The dense matrix as nested Python lists, for tight scalar loops."""
        if self._table is None:
            self._table = self.matrix().tolist()
        return self._table

    def induced(self, vertices: Sequence[int]) -> "HostColoring":
        """Coloring of the clique on ``vertices``; new vertex ``i`` is ``vertices[i-1]``."""
        vs = np.asarray(vertices, dtype=np.int64)
        if len(set(vs.tolist())) != len(vs) or (len(vs) and (vs.min() < 1 or vs.max() > self.n)):
            raise ColoringError("induced() needs distinct host vertices")
        i, j = _triu(len(vs))
        a, b = vs[i - 1], vs[j - 1]
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        n = self.n
        return HostColoring(len(vs), self.colors[(lo - 1) * (2 * n - lo) // 2 + (hi - lo - 1)])

    def report(self) -> BoundednessReport:
        if self._report is None:
            self._report = boundedness_report(self)
        return self._report


def _max_multiplicity(values: np.ndarray) -> int:
    if values.size == 0:
        return 0
    top = int(values.max())
    if top <= 8 * values.size + 1024:
        return int(np.bincount(values).max())
    _, counts = np.unique(values, return_counts=True)
    return int(counts.max())


def boundedness_report(c: HostColoring) -> BoundednessReport:
    """Exact local and global color multiplicities."""
    if c._report is not None:
        return c._report
    cols = c.colors
    if cols.size == 0:
        return BoundednessReport(0, 0, {})
    top = int(cols.max())
    if top <= 8 * cols.size + 1024:
        counts = np.bincount(cols)
        ids = np.flatnonzero(counts)
        totals = dict(zip(ids.tolist(), counts[ids].tolist()))
        k_global = int(counts.max())
    else:
        ids, counts = np.unique(cols, return_counts=True)
        totals = dict(zip(ids.tolist(), counts.tolist()))
        k_global = int(counts.max())
    k_local = 0
    if top <= 4 * c.n + 1024:
        # few colors: count the two halves of each row separately, no gather+concat
        n = c.n
        c._half_rows(1)
        base = c._left_base
        for v in range(1, n + 1):
            start = (v - 1) * (2 * n - v) // 2
            cnt = np.bincount(cols[start:start + n - v], minlength=top + 1)
            if v > 1:
                cnt += np.bincount(cols[base[:v - 1] + v], minlength=top + 1)
            k_local = max(k_local, int(cnt.max()))
    else:
        for v in range(1, c.n + 1):
            k_local = max(k_local, _max_multiplicity(c._half_rows(v)))
    rep = BoundednessReport(k_local, k_global, totals)
    c._report = rep
    return rep


def is_bounded(c: HostColoring, k: int, mode: str) -> bool:
    """``mode`` is ``proper``/``local`` (local bound) or ``rainbow``/``global``."""
    rep = c.report()
    return (rep.k_local if _bound_kind(mode) == "local" else rep.k_global) <= k


def _bound_kind(mode: str) -> str:
    if mode in ("proper", "local"):
        return "local"
    if mode in ("rainbow", "global"):
        return "global"
    raise ColoringError(f"unknown mode {mode!r}")


class MonoScan:
    """Lazy stream of monochromatic structures with a truncation flag.

    ``kind="triples"`` yields ``(v1, v2, v3)`` with ``c(v1 v2) = c(v2 v3)`` and
    ``v1 < v3`` (the reversed orientation is implied).  ``kind="disjoint_pairs"``
    yields ``(v1, v2, v3, v4)`` with ``c(v1 v2) = c(v3 v4)``, ``v1 < v2``,
    ``v3 < v4``, ``v1 < v3``, all distinct.
    """

    def __init__(self, c: HostColoring, kind: str, limit: int | None = None):
        if kind not in ("triples", "disjoint_pairs"):
            raise ColoringError(f"unknown structure kind {kind!r}")
        self.c = c
        self.kind = kind
        self.limit = limit
        self.truncated = False
        self.count = 0

    def __iter__(self):
        gen = self._triples() if self.kind == "triples" else self._pairs()
        self.truncated = False
        self.count = 0
        for item in gen:
            if self.limit is not None and self.count >= self.limit:
                self.truncated = True
                return
            self.count += 1
            yield item
        if self.kind == "triples":
            c = self.c
            assert 2 * self.count <= c.n * (c.n - 1) * c.report().k_local

    def _triples(self) -> Iterator[tuple[int, int, int]]:
        c = self.c
        for v2 in range(1, c.n + 1):
            row = c.row(v2)
            order = np.argsort(row[1:], kind="stable") + 1
            vals = row[order]
            start = 0
            m = len(order)
            while start < m:
                end = start
                while end < m and vals[end] == vals[start]:
                    end += 1
                if vals[start] >= 0 and end - start > 1:
                    group = sorted(order[start:end].tolist())
                    for i, v1 in enumerate(group):
                        for v3 in group[i + 1:]:
                            yield (v1, v2, v3)
                start = end

    def _pairs(self) -> Iterator[tuple[int, int, int, int]]:
        c = self.c
        i, j = _triu(c.n)
        order = np.argsort(c.colors, kind="stable")
        vals = c.colors[order]
        bounds = np.flatnonzero(np.diff(vals)) + 1
        for grp in np.split(order, bounds):
            if len(grp) < 2:
                continue
            es = list(zip(i[grp].tolist(), j[grp].tolist()))
            for x, (a, b) in enumerate(es):
                for (p, q) in es[x + 1:]:
                    if p != a and p != b and q != a and q != b:
                        yield (a, b, p, q)


def mono_structures(c: HostColoring, kind: str, limit: int | None = None) -> MonoScan:
    return MonoScan(c, kind, limit)


def count_mono_triples(c: HostColoring) -> int:
    """Number of monochromatic cherries ``[v1 v2 v3]`` counted once per orientation pair."""
    total = 0
    for v in range(1, c.n + 1):
        row = c.row(v)
        row = row[row >= 0]
        if row.size:
            _, cnt = np.unique(row, return_counts=True)
            total += int((cnt * (cnt - 1) // 2).sum())
    return total


def count_mono_disjoint_pairs(c: HostColoring) -> int:
    # two distinct same-colored edges either share exactly one vertex or are disjoint
    same = sum(t * (t - 1) // 2 for t in c.report().per_color_totals.values())
    return same - count_mono_triples(c)


def pair_codegree(c: HostColoring, v1: int, v3: int, Q: Sequence[int] | None = None) -> int:
    """``|{v2 in Q - {v1, v3} : c(v1 v2) = c(v2 v3)}|``; ``Q=None`` means all vertices."""
    if v1 == v3:
        raise ColoringError("pair_codegree needs two distinct vertices")
    r1, r3 = c.row(v1), c.row(v3)
    hit = (r1 == r3) & (r1 >= 0) & (r3 >= 0)
    if Q is None:
        return int(hit.sum())
    q = np.asarray(sorted(set(Q)), dtype=np.int64)
    q = q[(q != v1) & (q != v3)]
    return int(hit[q].sum())


@dataclass(frozen=True)
class Embedding:
    """``map[i]`` is the host image of pattern vertex ``i + 1``."""

    map: tuple[int, ...]
    mode: str = "proper"

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(x) for x in self.map))
        if self.mode not in MODES:
            raise ColoringError(f"unknown mode {self.mode!r}")

    def image(self, u: int) -> int:
        return self.map[u - 1]


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: dict | None = None


def validate_embedding(c: HostColoring, G: PatternGraph, f: Embedding) -> None:
    if len(f.map) != G.n:
        raise ColoringError(f"embedding has {len(f.map)} images for {G.n} pattern vertices")
    for x in f.map:
        if not 1 <= x <= c.n:
            raise ColoringError(f"image {x} outside host 1..{c.n}")
    if len(set(f.map)) != len(f.map):
        raise ColoringError("embedding is not injective")


def check_copy(c: HostColoring, G: PatternGraph, f: Embedding, mode: str | None = None) -> Verdict:
    """Check the copy ``f(G)``; returns the first violation as a witness."""
    validate_embedding(c, G, f)
    mode = mode or f.mode
    img = f.map
    col = c.color
    for u1, u2, u3 in G.cherries():
        a, b, d = img[u1 - 1], img[u2 - 1], img[u3 - 1]
        x = col(a, b)
        if x == col(b, d):
            return Verdict(False, {"kind": "cherry", "pattern": [u1, u2, u3], "host": [a, b, d], "color": x})
    if mode == "rainbow":
        seen: dict[int, tuple[int, int]] = {}
        for u, v in G.edges:
            x = col(img[u - 1], img[v - 1])
            if x in seen:
                p, q = seen[x]
                return Verdict(False, {"kind": "disjoint_pair", "pattern": [p, q, u, v],
                                       "host": [img[p - 1], img[q - 1], img[u - 1], img[v - 1]],
                                       "color": x})
            seen[x] = (u, v)
    elif mode != "proper":
        raise ColoringError(f"unknown mode {mode!r}")
    return Verdict(True)


def round_robin_rounds(m: int) -> tuple[int, int]:
    """Size parameters of the round-robin 1-factorization of ``K_m``, ``m`` even."""
    N = m - 1
    return N, (N + 1) // 2


def random_bounded_coloring(n: int, k: int, mode: str = "local", seed: int | None = None) -> HostColoring:
    """Random coloring of ``K_n`` that is locally or globally ``k``-bounded.

    Local mode merges the classes of a randomly relabelled round-robin
    1-factorization ``k`` at a time, so every color is a union of at most ``k``
    matchings.  Global mode deals the shuffled pairs into buckets of size ``k``.
    """
    if n < 2:
        raise ColoringError("need n >= 2")
    if k < 1:
        raise ColoringError("need k >= 1")
    kind = _bound_kind(mode)
    rng = np.random.default_rng(seed)
    npairs = n * (n - 1) // 2
    if kind == "global":
        colors = rng.permutation(npairs) // k
    else:
        m = n if n % 2 == 0 else n + 1
        N, inv2 = round_robin_rounds(m)
        label = rng.permutation(m).astype(np.int64)[:n]
        group = (rng.permutation(N) // k).astype(np.int32)
        half = ((label * inv2) % N).astype(np.intp)
        # doubled so that half[u] + half[v] < 2N indexes it without a reduction
        group2 = np.concatenate((group, group))
        colors = np.empty(npairs, dtype=np.int32)
        pos = 0
        for u in range(n - 1):
            colors[pos:pos + n - 1 - u] = group2[half[u] + half[u + 1:]]
            pos += n - 1 - u
        # the vertex labelled N plays the role of the fixed point of the rotation
        hit = np.flatnonzero(label == N)
        if hit.size:
            w = int(hit[0]) + 1
            xs = np.arange(1, n + 1)
            xs = xs[xs != w]
            lo, hi = np.minimum(xs, w), np.maximum(xs, w)
            colors[(lo - 1) * (2 * n - lo) // 2 + (hi - lo - 1)] = group[label[xs - 1]]
    c = HostColoring(n, colors)
    rep = c.report()
    got = rep.k_local if kind == "local" else rep.k_global
    if got > k:
        raise AssertionError(f"generated coloring is {got}-bounded, wanted {k}")
    return c


def rainbow_coloring(n: int) -> HostColoring:
    return HostColoring(n, np.arange(n * (n - 1) // 2))


def monochromatic_coloring(n: int) -> HostColoring:
    return HostColoring(n, np.zeros(n * (n - 1) // 2, dtype=np.int64))


def is_proper_clique(c: HostColoring, vertices: Sequence[int]) -> bool:
    vs = list(vertices)
    for v in vs:
        seen = set()
        for x in vs:
            if x != v:
                col = c.color(v, x)
                if col in seen:
                    return False
                seen.add(col)
    return True


def is_rainbow_clique(c: HostColoring, vertices: Sequence[int]) -> bool:
    vs = sorted(vertices)
    cols = [c.color(a, b) for i, a in enumerate(vs) for b in vs[i + 1:]]
    return len(cols) == len(set(cols))

