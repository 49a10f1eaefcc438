"""Exhaustive search oracles for desk-scale instances.

Each search counts the nodes it expands and gives up with ``"inconclusive"``
once the budget is spent, so a negative answer is only ever reported after
full exhaustion.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import networkx as nx

from .colorings import Embedding, HostColoring, _bound_kind, check_copy
from .graphs import PatternGraph

DEFAULT_BUDGET = 5_000_000


class _OutOfBudget(Exception):
    pass


@dataclass(frozen=True)
class SearchResult:
    status: str  # found | none | inconclusive
    embedding: Embedding | None = None
    nodes: int = 0
    tree: PatternGraph | None = None


@dataclass(frozen=True)
class BlockVerdict:
    status: str  # certified | counterexample | inconclusive
    embedding: Embedding | None = None
    nodes: int = 0


def search_order(G: PatternGraph) -> list[int]:
    """Connectivity-first order: start at a max-degree vertex, then always take
    the vertex with the most already-ordered neighbours (ties: degree, id)."""
    placed: list[int] = []
    seen = set()
    back = [0] * (G.n + 1)
    while len(placed) < G.n:
        best = max((v for v in range(1, G.n + 1) if v not in seen),
                   key=lambda v: (back[v], G.deg(v), -v))
        placed.append(best)
        seen.add(best)
        for w in G.neighbors(best):
            back[w] += 1
    return placed


class _Backtracker:
    def __init__(self, G: PatternGraph, c: HostColoring, mode: str, budget: int, candidates=None):
        self.G, self.c = G, c
        self.rainbow = _bound_kind(mode) == "global"
        self.budget = budget
        self.nodes = 0
        self.order = search_order(G)
        self.tab = c.table()
        self.img = [0] * (G.n + 1)
        self.used_host = [False] * (c.n + 1)
        self.at = [set() for _ in range(G.n + 1)]
        self.all_cols: set[int] = set()
        self.candidates = candidates or (lambda depth, u: range(1, c.n + 1))
        self.prune = lambda depth: False

    def _fits(self, u: int, x: int) -> list[tuple[int, int]] | None:
        """New (neighbour, color) edges if ``u -> x`` keeps the partial map valid."""
        row = self.tab[x]
        new = []
        mine = set()
        for w in self.G.neighbors(u):
            y = self.img[w]
            if not y:
                continue
            col = row[y]
            if col in mine or col in self.at[w]:
                return None
            if self.rainbow and col in self.all_cols:
                return None
            mine.add(col)
            new.append((w, col))
        return new

    def run(self, depth: int = 0) -> bool:
        if self.prune(depth):
            return False
        if depth == self.G.n:
            return True
        u = self.order[depth]
        for x in self.candidates(depth, u):
            if self.used_host[x]:
                continue
            self.nodes += 1
            if self.nodes > self.budget:
                raise _OutOfBudget
            new = self._fits(u, x)
            if new is None:
                continue
            self.img[u] = x
            self.used_host[x] = True
            for w, col in new:
                self.at[w].add(col)
                self.at[u].add(col)
                self.all_cols.add(col)
            if self.run(depth + 1):
                return True
            for w, col in new:
                self.at[w].discard(col)
                self.at[u].discard(col)
                self.all_cols.discard(col)
            self.img[u] = 0
            self.used_host[x] = False
        return False


def brute_force_embed(G: PatternGraph, c: HostColoring, mode: str = "proper",
                      budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Backtracking over injective maps with proper/rainbow pruning."""
    if G.n > c.n:
        return SearchResult("none")
    bt = _Backtracker(G, c, mode, budget)
    try:
        found = bt.run()
    except _OutOfBudget:
        return SearchResult("inconclusive", nodes=bt.nodes)
    if not found:
        return SearchResult("none", nodes=bt.nodes)
    emb = Embedding(tuple(bt.img[1:]), "proper" if not bt.rainbow else "rainbow")
    v = check_copy(c, G, emb)
    if not v.ok:
        raise AssertionError(f"oracle produced an invalid copy: {v.witness}")
    return SearchResult("found", emb, bt.nodes)


def _attach_leaves(c: HostColoring, center: int, children: Sequence[int], rest: Sequence[int]):
    """Match every vertex of ``rest`` to a child so that each child's edges get
    distinct colors, none equal to its edge to the center.  Returns the parent
    map or None."""
    if not rest:
        return {}
    tab = c.table()
    B = nx.Graph()
    B.add_nodes_from(rest)
    for z in rest:
        for y in children:
            col = tab[y][z]
            if col != tab[y][center]:
                B.add_edge(z, ("slot", y, col))
    M = nx.bipartite.hopcroft_karp_matching(B, top_nodes=list(rest))
    if any(z not in M for z in rest):
        return None
    return {z: M[z][1] for z in rest}


def radius2_spanning_tree_search(c: HostColoring, budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Properly colored spanning tree of radius at most two, or a certified "none".

    For every center the children are chosen with pairwise distinct center
    colors (at most one per color class); the remaining vertices must then be
    matched to (child, color) slots, which is exact bipartite matching.
    """
    n = c.n
    tab = c.table()
    nodes = 0
    if n == 1:
        return SearchResult("found", Embedding((1,), "proper"), 0, PatternGraph(1, []))
    for center in range(1, n + 1):
        classes: dict[int, list[int]] = {}
        for x in range(1, n + 1):
            if x != center:
                classes.setdefault(tab[center][x], []).append(x)
        options = [[None, *members] for members in classes.values()]
        for pick in product(*options):
            nodes += 1
            if nodes > budget:
                return SearchResult("inconclusive", nodes=nodes)
            children = [x for x in pick if x is not None]
            if not children:
                continue
            chosen = set(children)
            rest = [x for x in range(1, n + 1) if x != center and x not in chosen]
            parent = _attach_leaves(c, center, children, rest)
            if parent is None:
                continue
            edges = [(center, y) for y in children] + list(parent.items())
            T = PatternGraph(n, [tuple(sorted(e)) for e in edges])
            emb = Embedding(tuple(range(1, n + 1)), "proper")
            v = check_copy(c, T, emb)
            if not v.ok:
                raise AssertionError(f"radius-two witness is not proper: {v.witness}")
            return SearchResult("found", emb, nodes, T)
    return SearchResult("none", nodes=nodes)


def rainbow_block_check(c: HostColoring, H: PatternGraph, X: Sequence[int], t: int,
                        budget: int = DEFAULT_BUDGET) -> BlockVerdict:
    """Certify that no rainbow copy of ``H`` has more than ``t`` vertices in ``X``."""
    Xset = set(X)
    if any(not 1 <= x <= c.n for x in Xset):
        raise ValueError("X must be a set of host vertices")
    if H.n > c.n:
        return BlockVerdict("certified")
    bt = _Backtracker(H, c, "rainbow", budget)
    need = t + 1

    def in_x(depth):
        return sum(1 for u in bt.order[:depth] if bt.img[u] in Xset)

    bt.prune = lambda depth: in_x(depth) + (H.n - depth) < need
    try:
        found = bt.run()
    except _OutOfBudget:
        return BlockVerdict("inconclusive", nodes=bt.nodes)
    if not found:
        return BlockVerdict("certified", nodes=bt.nodes)
    emb = Embedding(tuple(bt.img[1:]), "rainbow")
    if not check_copy(c, H, emb).ok or sum(1 for x in emb.map if x in Xset) < need:
        raise AssertionError("block-check counterexample failed re-verification")
    return BlockVerdict("counterexample", emb, bt.nodes)
