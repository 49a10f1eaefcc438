"""Randomized embedding of few-cherry graphs into bounded colorings.

The high-degree pattern vertices ``L`` are pinned onto a well-behaved clique
``P`` of the host; the rest are placed by a random bijection ``S -> Q`` that is
repaired by resampling the coordinates of violated bad events.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .colorings import (ColoringError, Embedding, HostColoring, _bound_kind, check_copy,
                        is_proper_clique, is_rainbow_clique)
from .graphs import PatternGraph, count_cherries, degree_order
from .lll import (F1_RESOLVED, BadEvent, ThresholdQuery, classify_bad_event, clique_size,
                  shearer_hypothesis_holds, threshold)
from .seeding import derive_seed

log = logging.getLogger(__name__)


class ThresholdViolated(ValueError):
    pass


class CliqueNotFound(RuntimeError):
    pass


def _mode(mode: str) -> str:
    return "proper" if _bound_kind(mode) == "local" else "rainbow"


@dataclass(frozen=True)
class EmbedConfig:
    mode: str = "proper"
    seed: int | None = 0
    max_resamples: int = 10**6
    max_restarts: int = 10
    clique_retry_cap: int = 100
    event_pick: str = "random"
    threads: int = 1
    # full rescan + bijection check after every resample
    debug: bool = False

    def __post_init__(self):
        object.__setattr__(self, "mode", _mode(self.mode))
        if self.max_resamples < 1 or self.max_restarts < 1 or self.clique_retry_cap < 1 or self.threads < 1:
            raise ValueError("caps and thread count must be positive")
        if self.event_pick not in ("first", "random"):
            raise ValueError(f"event_pick must be 'first' or 'random', got {self.event_pick!r}")


# --------------------------------------------------------------------------
# the clique P

@dataclass(frozen=True)
class CliqueResult:
    P: tuple[int, ...]
    Q: tuple[int, ...]
    codegree_cap: float
    attempts: int = 0
    sampled: int = 0
    removed: tuple[int, int, int] = (0, 0, 0)


def _codegree_too_big(codeg: int, k: int, r: int) -> bool:
    # codeg >= 5 k r^(1/4)
    return codeg**4 >= 625 * k**4 * r


def _mono_triple_mins(verts: list[int], mat) -> set[int]:
    out = set()
    for v2 in verts:
        by_col: dict[int, list[int]] = {}
        for x in verts:
            if x != v2:
                by_col.setdefault(int(mat[v2, x]), []).append(x)
        for group in by_col.values():
            if len(group) > 1:
                for a, b in combinations(group, 2):
                    out.add(min(a, b, v2))
    return out


def _mono_pair_mins(verts: list[int], mat) -> set[int]:
    by_col: dict[int, list[tuple[int, int]]] = {}
    for a, b in combinations(verts, 2):
        by_col.setdefault(int(mat[a, b]), []).append((a, b))
    out = set()
    for es in by_col.values():
        for (a, b), (x, y) in combinations(es, 2):
            if len({a, b, x, y}) == 4:
                out.add(min(a, b, x, y))
    return out


class _SampleRows:
    """``rows[a, b]`` lookups for a handful of rows of a large coloring."""

    def __init__(self, c: HostColoring, verts):
        self.rows = {v: c.row(v) for v in verts}

    def __getitem__(self, key):
        a, b = key
        return self.rows[a][b]


def _rows(c: HostColoring, verts: Sequence[int]):
    return c.matrix() if c.n <= 2000 else _SampleRows(c, verts)


def clique_codegrees(c: HostColoring, verts: Sequence[int]) -> dict[tuple[int, int], int]:
    """Monochromatic co-degree over the whole host for every pair in ``verts``."""
    rows = {v: c.row(v) for v in verts}
    out = {}
    for a, b in combinations(sorted(verts), 2):
        ra, rb = rows[a], rows[b]
        out[(a, b)] = int(((ra == rb) & (ra >= 0) & (rb >= 0)).sum())
    return out


def verify_clique(c: HostColoring, P: Sequence[int], r: int, k: int, mode: str) -> bool:
    """Direct scan of the three clique invariants."""
    P = sorted(P)
    if len(P) < clique_size(r):
        return False
    ok = is_proper_clique(c, P) if _mode(mode) == "proper" else is_rainbow_clique(c, P)
    if not ok:
        return False
    return not any(_codegree_too_big(d, k, r) for d in clique_codegrees(c, P).values())


def find_clique_P(c: HostColoring, r: int, k: int, mode: str = "proper", config: EmbedConfig | None = None,
                  check_threshold: bool = True) -> CliqueResult:
    """Sample a properly colored (rainbow) clique with bounded monochromatic co-degrees.

    Each host vertex enters ``P'`` with probability ``5 r^(1/4) / n``; then the
    smaller end of every high-co-degree pair, the smallest vertex of every
    monochromatic cherry and (rainbow mode) of every monochromatic disjoint
    edge pair inside ``P'`` are deleted.  A sample is accepted once at least
    ``ceil(2 r^(1/4))`` vertices survive.
    """
    config = config or EmbedConfig(mode=mode)
    mode = _mode(mode)
    if k < 1:
        raise ValueError("k must be at least 1")
    rep = c.report()
    measured = rep.k_local if mode == "proper" else rep.k_global
    if measured > k:
        raise ColoringError(f"coloring is not {'locally' if mode == 'proper' else 'globally'} "
                            f"{k}-bounded (measured {measured})")
    n = c.n
    if r <= 0:
        return CliqueResult((), tuple(range(1, n + 1)), 0.0)
    if check_threshold and not shearer_hypothesis_holds(n, r, k):
        raise ThresholdViolated(
            f"threshold violated: need n >= 560 k r^(3/4) = {560 * k * r ** 0.75:.1f}, got n={n}")
    ell = clique_size(r)
    cap = 5 * k * r**0.25
    p = min(1.0, 5 * r**0.25 / n)
    rng = np.random.default_rng(derive_seed(config.seed, "clique"))
    best = 0
    for attempt in range(1, config.clique_retry_cap + 1):
        sample = (np.flatnonzero(rng.random(n) < p) + 1).tolist()
        if len(sample) < ell:
            best = max(best, len(sample))
            continue
        mat = _rows(c, sample)
        U1 = {a for (a, b), d in clique_codegrees(c, sample).items() if _codegree_too_big(d, k, r)}
        U2 = _mono_triple_mins(sample, mat)
        U3 = _mono_pair_mins(sample, mat) if mode == "rainbow" else set()
        P = [v for v in sample if v not in U1 and v not in U2 and v not in U3]
        best = max(best, len(P))
        if len(P) >= ell and verify_clique(c, P, r, k, mode):
            Pset = set(P)
            Q = tuple(v for v in range(1, n + 1) if v not in Pset)
            return CliqueResult(tuple(P), Q, cap, attempt, len(sample), (len(U1), len(U2), len(U3)))
    raise CliqueNotFound(f"no clique after {config.clique_retry_cap} samples: expected |P'| = "
                         f"{n * p:.1f}, needed {ell}, best surviving size {best}")


def greedy_clique(c: HostColoring, size: int, mode: str, rng: random.Random) -> list[int] | None:
    """Randomized greedy properly colored (rainbow) clique of the given size."""
    order = list(range(1, c.n + 1))
    rng.shuffle(order)
    tab = c.table()
    P: list[int] = []
    at: dict[int, set[int]] = {}
    used: set[int] = set()
    for v in order:
        if len(P) == size:
            break
        cols = [tab[v][x] for x in P]
        if len(set(cols)) != len(cols):
            continue
        if mode == "proper":
            if any(col in at[x] for col, x in zip(cols, P)):
                continue
        elif any(col in used for col in cols):
            continue
        for col, x in zip(cols, P):
            at[x].add(col)
            used.add(col)
        at[v] = set(cols)
        P.append(v)
    return P if len(P) == size else None


# --------------------------------------------------------------------------
# resampling

def _resample_in_place(img: list[int], S: Sequence[int], pattern_tuple: Sequence[int], ell: int,
                       rng: random.Random) -> list[int]:
    """Swap each S-coordinate of the event with a uniform S vertex; returns touched vertices."""
    touched = []
    for u in pattern_tuple:
        if u > ell:
            w = rng.choice(S)
            img[u], img[w] = img[w], img[u]
            touched.append(u)
            touched.append(w)
    return touched


def resample_event(f2: dict[int, int], event: BadEvent, rng: random.Random) -> dict[int, int]:
    """Re-randomize the S-coordinates of ``event`` by sequential uniform transpositions.

    ``f2`` maps S (pattern vertices) to Q (host vertices); coordinates of the
    event outside S are left alone.  Returns a new bijection.
    """
    S = sorted(f2)
    out = dict(f2)
    for u in event.pattern_tuple:
        if u in out:
            w = rng.choice(S)
            out[u], out[w] = out[w], out[u]
    return out


class _Engine:
    """Incremental violation tracking for a map of rank-labelled pattern
    vertices onto host vertices ``1..n``."""

    def __init__(self, G: PatternGraph, c: HostColoring, mode: str, img: list[int], ell: int):
        self.G = G
        self.mode = mode
        self.ell = ell
        self.img = img
        self.edges = list(G.edges)
        self.inc = [[] for _ in range(G.n + 1)]
        for e, (a, b) in enumerate(self.edges):
            self.inc[a].append(e)
            self.inc[b].append(e)
        if c.n <= 3000:
            tab = c.table()
            self.col = lambda x, y: tab[x][y]
        else:
            self.col = c.color
        self.ecol = [-1] * len(self.edges)
        self.groups: dict = {}
        self.conflicts: set = set()
        for e in range(len(self.edges)):
            self._add(e)

    def _keys(self, e):
        a, b = self.edges[e]
        col = self.ecol[e]
        if self.mode == "proper":
            return ((a, col), (b, col))
        return (col,)

    def _add(self, e):
        a, b = self.edges[e]
        self.ecol[e] = self.col(self.img[a], self.img[b])
        for key in self._keys(e):
            grp = self.groups.setdefault(key, [])
            grp.append(e)
            if len(grp) == 2:
                self.conflicts.add(key)

    def _remove(self, e):
        for key in self._keys(e):
            grp = self.groups[key]
            grp.remove(e)
            if len(grp) == 1:
                self.conflicts.discard(key)
            elif not grp:
                del self.groups[key]

    def update(self, vertices):
        es = sorted({e for u in vertices for e in self.inc[u]})
        for e in es:
            self._remove(e)
        for e in es:
            self._add(e)

    def violation_count(self) -> int:
        return sum(len(self.groups[k]) * (len(self.groups[k]) - 1) // 2 for k in self.conflicts)

    def _event(self, e1: int, e2: int) -> BadEvent:
        a, b = self.edges[e1]
        x, y = self.edges[e2]
        shared = {a, b} & {x, y}
        if shared:
            mid = shared.pop()
            ends = sorted(({a, b} | {x, y}) - {mid})
            t = (ends[0], mid, ends[1])
        else:
            (a, b), (x, y) = sorted([(a, b), (x, y)])
            t = (a, b, x, y)
        cls = classify_bad_event(t, [u > self.ell for u in t])
        return BadEvent(t, tuple(self.img[u] for u in t), cls)

    def pick(self, rng: random.Random, how: str) -> BadEvent:
        keys = sorted(self.conflicts, key=repr) if how == "random" else [min(self.conflicts, key=repr)]
        key = keys[rng.randrange(len(keys))] if how == "random" else keys[0]
        grp = sorted(self.groups[key])
        pairs = list(combinations(grp, 2))
        if how == "random":
            rng.shuffle(pairs)
        for e1, e2 in pairs:
            ev = self._event(e1, e2)
            if ev.cls != F1_RESOLVED:
                return ev
        raise RuntimeError("violated event lies entirely on the pinned clique; clique invariant broken")

    def rescan(self) -> set:
        """Conflict keys recomputed from scratch (debug cross-check)."""
        seen: dict = {}
        for e, (a, b) in enumerate(self.edges):
            col = self.col(self.img[a], self.img[b])
            for key in (((a, col), (b, col)) if self.mode == "proper" else (col,)):
                seen[key] = seen.get(key, 0) + 1
        return {k for k, m in seen.items() if m > 1}


@dataclass
class EmbedResult:
    ok: bool
    embedding: Embedding | None
    resamples: int
    restarts: int
    final_violations: int
    threshold: dict
    clique_source: str = "sampled"
    ell: int = 0
    spanning: bool = True
    events_by_class: dict = field(default_factory=dict)
    seed: int | None = None

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "map": list(self.embedding.map) if self.embedding else None,
            "resamples": self.resamples,
            "restarts": self.restarts,
            "final_violations": self.final_violations,
            "threshold": self.threshold,
            "clique_source": self.clique_source,
            "ell": self.ell,
            "spanning": self.spanning,
            "events_by_class": dict(sorted(self.events_by_class.items())),
            "seed": self.seed,
        }


def threshold_verdict(G: PatternGraph, c: HostColoring, mode: str) -> dict:
    """Where the instance sits relative to the cherry threshold for its mode."""
    mode = _mode(mode)
    r = count_cherries(G)
    rep = c.report()
    k = rep.k_local if mode == "proper" else rep.k_global
    kind = "shearer_proper" if mode == "proper" else "shearer_rainbow"
    res = threshold(ThresholdQuery(kind, G.n, r=r))
    return {"kind": kind, "n": G.n, "r": r, "k_actual": k, "k_threshold": res.k,
            "below_threshold": k <= res.k and not res.vacuous}


@dataclass
class _Attempt:
    ok: bool
    image: list[int] | None
    resamples: int
    violations: int
    clique_source: str
    ell: int
    events_by_class: dict


def _attempt(G: PatternGraph, c: HostColoring, config: EmbedConfig, index: int) -> _Attempt:
    seed = derive_seed(config.seed, "restart", index)
    rng = random.Random(seed)
    mode = config.mode
    if G.n < c.n:
        subset = sorted(rng.sample(range(1, c.n + 1), G.n))
        hc = c.induced(subset)
    else:
        subset = list(range(1, c.n + 1))
        hc = c
    order = degree_order(G, 0).order
    Gr = G.relabel(order)
    r = count_cherries(G)
    ell = min(clique_size(r), G.n)
    rep = hc.report()
    k = max(1, rep.k_local if mode == "proper" else rep.k_global)
    source = "sampled"
    P: list[int] | None
    try:
        res = find_clique_P(hc, r, k, mode, EmbedConfig(mode=mode, seed=derive_seed(seed, "clique"),
                                                        clique_retry_cap=config.clique_retry_cap),
                            check_threshold=False)
        P = sorted(res.P)[:ell]
    except CliqueNotFound:
        P = greedy_clique(hc, ell, mode, rng)
        source = "greedy"
        if P is None:
            P, ell, source = [], 0, "none"
        else:
            P = sorted(P)
    if r == 0:
        source = "none"
    Pset = set(P)
    Q = [v for v in range(1, hc.n + 1) if v not in Pset]
    rng.shuffle(Q)
    img = [0] + list(P) + Q
    S = list(range(ell + 1, G.n + 1))
    eng = _Engine(Gr, hc, mode, img, ell)
    resamples = 0
    by_class: dict[str, int] = {}
    while eng.conflicts and resamples < config.max_resamples:
        ev = eng.pick(rng, config.event_pick)
        by_class[ev.cls] = by_class.get(ev.cls, 0) + 1
        touched = _resample_in_place(img, S, ev.pattern_tuple, ell, rng)
        eng.update(touched)
        resamples += 1
        if config.debug:
            assert sorted(img[1:]) == list(range(1, hc.n + 1)), "map stopped being a bijection"
            assert img[1:ell + 1] == list(P), "pinned coordinates moved"
            assert eng.rescan() == eng.conflicts, "incremental violation tracking diverged"
    if eng.conflicts:
        return _Attempt(False, None, resamples, eng.violation_count(), source, ell, by_class)
    image = [0] * G.n
    for rank, v in enumerate(order, start=1):
        image[v - 1] = subset[img[rank] - 1]
    return _Attempt(True, image, resamples, 0, source, ell, by_class)


def embed(G: PatternGraph, c: HostColoring, config: EmbedConfig | None = None) -> EmbedResult:
    """Find a properly colored (rainbow) copy of ``G`` by pinned clique plus resampling.

    Restart ``i`` uses a seed derived from ``(config.seed, i)``, so the outcome
    does not depend on ``config.threads``: the lowest-indexed successful
    restart wins.
    """
    config = config or EmbedConfig()
    if G.n > c.n:
        raise ValueError(f"pattern has {G.n} vertices but the host only {c.n}")
    verdict = threshold_verdict(G, c, config.mode)
    spanning = G.n == c.n
    total = 0
    last = None
    done = 0
    batch = config.threads
    with ThreadPoolExecutor(max_workers=batch) if batch > 1 else _Inline() as pool:
        while done < config.max_restarts:
            idx = list(range(done, min(done + batch, config.max_restarts)))
            attempts = list(pool.map(lambda i: _attempt(G, c, config, i), idx))
            for i, att in zip(idx, attempts):
                total += att.resamples
                last = att
                if att.ok:
                    emb = Embedding(tuple(att.image), config.mode)
                    v = check_copy(c, G, emb)
                    if not v.ok:
                        raise AssertionError(f"embed produced an invalid copy: {v.witness}")
                    return EmbedResult(True, emb, total, i, 0, verdict, att.clique_source, att.ell,
                                       spanning, att.events_by_class, config.seed)
            done = idx[-1] + 1
    log.info("embed failed after %d restarts (%d resamples)", config.max_restarts, total)
    return EmbedResult(False, None, total, config.max_restarts, last.violations, verdict, last.clique_source,
                       last.ell, spanning, last.events_by_class, config.seed)


class _Inline:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False

    def map(self, fn, items):
        return map(fn, items)
