"""Simple undirected pattern graphs and cherry statistics.

Vertices are the dense labels ``1..n``.  A *cherry* is a path on three
vertices; a vertex of degree ``d`` is the middle of ``C(d, 2)`` of them.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence


class GraphError(ValueError):
    pass


class PatternGraph:
    """Immutable simple graph on vertices ``1..n``."""

    __slots__ = ("n", "edges", "adjacency", "_degrees")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise GraphError(f"negative vertex count {n}")
        seen = set()
        adj: list[list[int]] = [[] for _ in range(n + 1)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphError(f"edge ({u}, {v}) out of range 1..{n}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
            adj[u].append(v)
            adj[v].append(u)
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(seen))
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)
        self._degrees = tuple(len(a) for a in self.adjacency)

    @classmethod
    def from_labeled_edges(cls, edges: Iterable[tuple[object, object]], isolated: Iterable[object] = ()):
        """Build a graph from arbitrary hashable labels.

        Labels are remapped to ``1..n`` in sorted order (or first-seen order
        when labels are not mutually comparable).  Returns ``(graph, labels)``
        where ``labels[i - 1]`` is the original label of vertex ``i``.
        """
        edges = list(edges)
        seen: dict[object, None] = {}
        for u, v in edges:
            seen.setdefault(u)
            seen.setdefault(v)
        for u in isolated:
            seen.setdefault(u)
        labels = list(seen)
        try:
            labels.sort()
        except TypeError:
            pass
        index = {lab: i + 1 for i, lab in enumerate(labels)}
        return cls(len(labels), [(index[u], index[v]) for u, v in edges]), labels

    def __repr__(self) -> str:
        return f"PatternGraph(n={self.n}, m={len(self.edges)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PatternGraph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def deg(self, v: int) -> int:
        return self._degrees[v]

    @property
    def degrees(self) -> tuple[int, ...]:
        """Degrees indexed by vertex; entry 0 is a placeholder."""
        return self._degrees

    def max_degree(self) -> int:
        return max(self._degrees[1:], default=0)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adjacency[u]
        i = _bisect(a, v)
        return i < len(a) and a[i] == v

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or not 1 <= v <= self.n:
            raise GraphError(f"invalid vertex {v!r} (expected 1..{self.n})")

    def cherries(self) -> Iterator[tuple[int, int, int]]:
        """Yield every cherry as ``(u1, u2, u3)``: middle ``u2``, ends ``u1 < u3``.

        Order: by middle vertex, then lexicographically by ends.
        """
        for u2 in range(1, self.n + 1):
            for u1, u3 in combinations(self.adjacency[u2], 2):
                yield (u1, u2, u3)

    def disjoint_edge_pairs(self) -> Iterator[tuple[int, int, int, int]]:
        """Yield ``(u1, u2, u3, u4)`` for disjoint edges with u1<u2, u3<u4, u1<u3."""
        edges = self.edges
        for i, (a, b) in enumerate(edges):
            for c, d in edges[i + 1:]:
                if c != a and c != b and d != a and d != b:
                    yield (a, b, c, d)

    def distances_from(self, s: int) -> list[int]:
        dist = [-1] * (self.n + 1)
        dist[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in self.adjacency[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def diameter(self) -> float:
        """Largest eccentricity; ``math.inf`` for a disconnected graph."""
        best = 0
        for s in range(1, self.n + 1):
            dist = self.distances_from(s)
            if min(dist[1:]) < 0:
                return math.inf
            best = max(best, max(dist[1:]))
        return best

    def components(self) -> list[list[int]]:
        seen = [False] * (self.n + 1)
        out = []
        for s in range(1, self.n + 1):
            if seen[s]:
                continue
            comp = [v for v, d in enumerate(self.distances_from(s)) if d >= 0]
            for v in comp:
                seen[v] = True
            out.append(comp)
        return out

    def induced(self, vertices: Sequence[int]) -> "PatternGraph":
        """Induced subgraph, relabelled in the order given."""
        index = {v: i + 1 for i, v in enumerate(vertices)}
        es = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return PatternGraph(len(vertices), es)

    def relabel(self, order: Sequence[int]) -> "PatternGraph":
        """Graph where new vertex ``i`` is old vertex ``order[i - 1]``."""
        if sorted(order) != list(range(1, self.n + 1)):
            raise GraphError("relabel order must be a permutation of 1..n")
        return self.induced(order)


def _bisect(a: Sequence[int], x: int) -> int:
    lo, hi = 0, len(a)
    while lo < hi:
        mid = (lo + hi) // 2
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class CherryStats:
    """Cherry counts; ``per_vertex_*[v - 1]`` belongs to vertex ``v``."""

    r: int
    per_vertex_middle: tuple[int, ...]
    per_vertex_leaf: tuple[int, ...]


@dataclass(frozen=True)
class DegreeOrder:
    order: tuple[int, ...]
    L: tuple[int, ...]
    S: tuple[int, ...]
    delta_S: int
    # whether delta_S * (delta_S - 1) <= 2r / len(L); None when L is empty
    maxdeg_S_holds: bool | None


@dataclass(frozen=True)
class EdgeCheck:
    bound: float
    actual: int
    holds: bool


def count_cherries(G: PatternGraph) -> int:
    return sum(d * (d - 1) // 2 for d in G.degrees)


def leaf_cherry_count(G: PatternGraph, u: int) -> int:
    """Number of cherries having ``u`` as one of the two ends."""
    G.check_vertex(u)
    return sum(G.deg(w) - 1 for w in G.neighbors(u))


def cherry_stats(G: PatternGraph) -> CherryStats:
    middle = tuple(G.deg(v) * (G.deg(v) - 1) // 2 for v in range(1, G.n + 1))
    leaf = tuple(leaf_cherry_count(G, v) for v in range(1, G.n + 1))
    return CherryStats(sum(middle), middle, leaf)


def degree_order(G: PatternGraph, ell: int) -> DegreeOrder:
    """Stable descending-degree order (ties by ascending id) split into L and S."""
    if not 0 <= ell <= G.n:
        raise GraphError(f"ell={ell} outside 0..{G.n}")
    order = tuple(sorted(range(1, G.n + 1), key=lambda v: (-G.deg(v), v)))
    L, S = order[:ell], order[ell:]
    delta_S = max((G.deg(v) for v in S), default=0)
    holds = None
    if ell > 0:
        # delta_S(delta_S - 1) <= 2r / ell, compared over the integers
        holds = delta_S * (delta_S - 1) * ell <= 2 * count_cherries(G)
    return DegreeOrder(order, L, S, delta_S, holds)


def extremal_edge_check(G: PatternGraph, T: Iterable[int] | str = "all") -> EdgeCheck:
    """Compare an edge count against the cherry-based extremal bound.

    For ``"all"`` the bound is ``max(n, sqrt(r n))`` on ``e(G)``; for a vertex
    subset ``T`` it is ``max(4|T|, 2 sqrt(r |T|))`` on the number of edges
    touching ``T``.  The verdict is decided in integers by squaring.
    """
    r = count_cherries(G)
    if isinstance(T, str):
        if T != "all":
            raise GraphError(f"unknown subset spec {T!r}")
        n, e = G.n, G.num_edges
        holds = e <= n or e * e <= r * n
        return EdgeCheck(max(n, math.sqrt(r * n)), e, holds)
    Tset = set(T)
    for v in Tset:
        G.check_vertex(v)
    t = len(Tset)
    e = sum(1 for u, v in G.edges if u in Tset or v in Tset)
    holds = e <= 4 * t or e * e <= 4 * r * t
    return EdgeCheck(max(4 * t, 2 * math.sqrt(r * t)), e, holds)


def random_graph(n: int, p: float, rng: random.Random) -> PatternGraph:
    return PatternGraph(n, [(u, v) for u, v in combinations(range(1, n + 1), 2) if rng.random() < p])


def random_tree(n: int, max_degree: int, rng: random.Random) -> PatternGraph:
    """Random tree on ``1..n`` grown by attaching to unsaturated vertices."""
    if n <= 0:
        return PatternGraph(0, [])
    if max_degree < 2 and n > 2:
        raise GraphError("a tree on more than 2 vertices needs max_degree >= 2")
    deg = [0] * (n + 1)
    open_ = [1]
    edges = []
    for v in range(2, n + 1):
        i = rng.randrange(len(open_))
        u = open_[i]
        edges.append((u, v))
        deg[u] += 1
        deg[v] += 1
        if deg[u] == max_degree:
            open_[i] = open_[-1]
            open_.pop()
        open_.append(v)
    return PatternGraph(n, edges)


def star(leaves: int) -> PatternGraph:
    return PatternGraph(leaves + 1, [(1, i) for i in range(2, leaves + 2)])


def path(n: int) -> PatternGraph:
    return PatternGraph(n, [(i, i + 1) for i in range(1, n)])


def cycle(n: int) -> PatternGraph:
    return PatternGraph(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


def complete(n: int) -> PatternGraph:
    return PatternGraph(n, combinations(range(1, n + 1), 2))


def matching(pairs: int) -> PatternGraph:
    return PatternGraph(2 * pairs, [(2 * i - 1, 2 * i) for i in range(1, pairs + 1)])
