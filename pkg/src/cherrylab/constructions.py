"""Extremal colorings and pattern graphs showing the thresholds are tight."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .colorings import HostColoring, _triu
from .fields import field_table
from .graphs import PatternGraph


class ConstructionError(ValueError):
    pass


def _part_pair_ids(pa: np.ndarray, pb: np.ndarray, t: int) -> np.ndarray:
    """Dense id of the unordered part pair ``{pa, pb}`` (0-based, diagonal allowed)."""
    i, j = np.minimum(pa, pb), np.maximum(pa, pb)
    return i * t - i * (i - 1) // 2 + (j - i)


def _parts_coloring(sizes: list[int]) -> HostColoring:
    n = sum(sizes)
    part = np.repeat(np.arange(len(sizes)), sizes)
    u, v = _triu(n)
    return HostColoring(n, _part_pair_ids(part[u - 1], part[v - 1], len(sizes)))


def part_sizes(n: int, parts: int) -> list[int]:
    """Consecutive near-equal part sizes; the first ``n % parts`` parts are larger."""
    base, extra = divmod(n, parts)
    return [base + 1] * extra + [base] * (parts - extra)


def partition_coloring(total_n: int) -> HostColoring:
    """Parts ``{1,2,3}, {4,5,6}, ...``; an edge is colored by its unordered pair of parts.

    Locally 3-bounded and, from six vertices on, globally 9-bounded.
    """
    if total_n < 3 or total_n % 3:
        raise ConstructionError(f"total_n must be a positive multiple of 3, got {total_n}")
    return _parts_coloring([3] * (total_n // 3))


def diam2_coloring(n: int, ell: int) -> HostColoring:
    """Part coloring with ``ceil(ell/3)`` near-equal parts.

    No properly colored ``ell``-vertex graph of diameter two survives it.
    """
    if ell < 3 or n < ell:
        raise ConstructionError(f"need ell >= 3 and n >= ell, got n={n}, ell={ell}")
    parts = -(-ell // 3)
    c = _parts_coloring(part_sizes(n, parts))
    bound = -(-3 * n // ell)
    if c.report().k_local > bound:
        raise AssertionError(f"k_local {c.report().k_local} exceeds ceil(3n/ell) = {bound}")
    return c


def lex_block_coloring(n: int, ell: int) -> HostColoring:
    """Lexicographic on ``X = {1..4 ell}``, outer endpoint color on X-to-outside
    edges, fresh ids ``n+1, n+2, ...`` (rank order) everywhere else."""
    if ell < 1 or n < 4 * ell:
        raise ConstructionError(f"need ell >= 1 and n >= 4*ell, got n={n}, ell={ell}")
    x = 4 * ell
    u, v = _triu(n)
    colors = np.where(v <= x, u, np.where(u <= x, v, 0)).astype(np.int64)
    outside = u > x
    colors[outside] = n + 1 + np.arange(int(outside.sum()))
    c = HostColoring(n, colors)
    if c.report().k_global > x:
        raise AssertionError("lexicographic block coloring exceeds its global bound")
    return c


def _exact_root(m: int, k: int) -> int | None:
    r = round(m ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == m:
            return cand
    return None


def build_tree(kind: str, m: int) -> PatternGraph:
    """Radius-two trees.

    ``T``: center with ``m^(2/3)`` children, each with ``m^(1/3)`` leaves
    (``m + m^(2/3) + 1`` vertices).  ``Tprime``: center with ``sqrt(m)``
    children, each with ``sqrt(m) - 1`` leaves (``m + 1`` vertices).
    Vertex 1 is the center, then the children, then the leaves child by child.
    """
    if kind == "T":
        b = _exact_root(m, 3)
        if b is None or m < 1:
            raise ConstructionError(f"T_m needs a positive perfect cube, got {m}")
        a, leaves = b * b, b
    elif kind == "Tprime":
        a = _exact_root(m, 2)
        if a is None or m < 1:
            raise ConstructionError(f"T'_m needs a positive perfect square, got {m}")
        leaves = a - 1
    else:
        raise ConstructionError(f"unknown tree kind {kind!r}")
    edges = [(1, 2 + i) for i in range(a)]
    nxt = a + 2
    for i in range(a):
        for _ in range(leaves):
            edges.append((2 + i, nxt))
            nxt += 1
    return PatternGraph(nxt - 1, edges)


def tree_cherry_formula(m: int) -> int:
    """``m^(4/3) + (m - m^(2/3)) / 2`` for a perfect cube ``m``."""
    b = _exact_root(m, 3)
    if b is None:
        raise ConstructionError(f"{m} is not a perfect cube")
    return b**4 + (m - b * b) // 2


def projective_points(q: int) -> list[tuple[int, int, int]]:
    """Points of PG(2, q), scaled so the first nonzero coordinate is 1, sorted."""
    pts = [(0, 0, 1)]
    pts += [(0, 1, b) for b in range(q)]
    pts += [(1, a, b) for a, b in product(range(q), repeat=2)]
    return sorted(pts)


def polarity_graph(q: int) -> PatternGraph:
    """Orthogonal polarity graph: points adjacent iff their dot product is 0.

    Absolute (self-orthogonal) points get no loop, so they have degree ``q``.
    Order, maximum degree and diameter are verified before returning.
    """
    F = field_table(q)
    add, mul = F.add, F.mul
    pts = projective_points(q)

    def dot(x, y):
        return add[add[mul[x[0]][y[0]]][mul[x[1]][y[1]]]][mul[x[2]][y[2]]]

    edges = [(i + 1, j + 1) for i, j in combinations(range(len(pts)), 2) if dot(pts[i], pts[j]) == 0]
    G = PatternGraph(len(pts), edges)
    if G.n != q * q + q + 1 or G.max_degree() != q + 1 or G.diameter() != 2:
        raise AssertionError(f"polarity graph for q={q} failed its structural checks")
    absolute = sum(1 for x in pts if dot(x, x) == 0)
    if sum(1 for v in range(1, G.n + 1) if G.deg(v) == q) != absolute:
        raise AssertionError("degree-q vertices do not match the absolute points")
    return G


def neighborhood_independence_at_most_2(G: PatternGraph, vertices=None) -> bool:
    """True iff no neighborhood contains three pairwise non-adjacent vertices."""
    for v in vertices if vertices is not None else range(1, G.n + 1):
        for a, b, c in combinations(G.neighbors(v), 3):
            if not (G.has_edge(a, b) or G.has_edge(a, c) or G.has_edge(b, c)):
                return False
    return True


def rook_graph(m: int) -> PatternGraph:
    """``H_m`` on the ``m x m`` grid; cell ``(i, j)`` is vertex ``(i-1) m + j``."""
    return rook_union(m, 1)


def rook_union(m: int, copies: int) -> PatternGraph:
    """Disjoint union of ``copies`` rook graphs ``H_m``, each verified."""
    if m < 2 or copies < 1:
        raise ConstructionError(f"need m >= 2 and copies >= 1, got m={m}, copies={copies}")
    size = m * m
    edges = []
    for c in range(copies):
        off = c * size
        cells = [(i, j) for i in range(m) for j in range(m)]
        for a, b in combinations(range(size), 2):
            if cells[a][0] == cells[b][0] or cells[a][1] == cells[b][1]:
                edges.append((off + a + 1, off + b + 1))
    G = PatternGraph(copies * size, edges)
    H = G.induced(list(range(1, size + 1)))
    if any(H.deg(v) != 2 * m - 2 for v in range(1, size + 1)) or H.diameter() != 2:
        raise AssertionError("rook graph failed regularity/diameter checks")
    if not neighborhood_independence_at_most_2(H):
        raise AssertionError("rook graph neighborhood has an independent triple")
    return G


@dataclass(frozen=True)
class LowerBoundInstance:
    """A pattern and a bounded coloring that (by the construction) has no good copy."""

    pattern: PatternGraph
    coloring: HostColoring
    mode: str
    max_degree: int
    claimed_k: Fraction
    actual_k: int


def polarity_instance(q: int, n: int) -> LowerBoundInstance:
    """Polarity graph ``G_q`` against the diameter-two coloring of ``K_n``.

    The coloring is locally ``3.9 n / Delta^2``-bounded with ``Delta = q + 1``
    (up to the rounding of part sizes, reported in ``actual_k``).
    """
    G = polarity_graph(q)
    c = diam2_coloring(n, G.n)
    delta = q + 1
    return LowerBoundInstance(G, c, "proper", delta, Fraction(39, 10) * n / delta**2, c.report().k_local)


def rook_instance(delta: int, n: int) -> LowerBoundInstance:
    """``n / m^2`` disjoint rook graphs ``H_m`` (``m = delta/2 + 1``) against the
    lexicographic block coloring; globally ``16 n / Delta^2``-bounded."""
    if delta < 2 or delta % 2:
        raise ConstructionError(f"delta must be even and positive, got {delta}")
    m = delta // 2 + 1
    if n % (m * m):
        raise ConstructionError(f"(delta/2 + 1)^2 = {m * m} must divide n = {n}")
    ell = n // (m * m)
    G = rook_union(m, ell)
    c = lex_block_coloring(n, ell)
    return LowerBoundInstance(G, c, "rainbow", delta, Fraction(16 * n, delta**2), c.report().k_global)
