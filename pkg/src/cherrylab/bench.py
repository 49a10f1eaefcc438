"""Fixed-seed benchmark suites emitting CSV rows."""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .colorings import random_bounded_coloring
from .embedder import CliqueNotFound, EmbedConfig, ThresholdViolated, embed, find_clique_P
from .graphs import count_cherries, random_tree
from .lll import lll_budget
from .seeding import derive_seed

SUITES = ("embed-scaling", "clique-scaling", "budget-eval")
COLUMNS = ("n", "r", "k", "success", "resamples", "millis")
BUDGET_COLUMNS = ("mode", "C", "total", "total_float", "below_quarter", "millis")


@dataclass
class BenchResult:
    suite: str
    columns: tuple[str, ...]
    rows: list[dict] = field(default_factory=list)
    truncated: bool = False

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.columns, lineterminator="\n")
        w.writeheader()
        w.writerows(self.rows)
        return buf.getvalue()

    def summary(self) -> dict:
        out = {"suite": self.suite, "rows": len(self.rows), "truncated": self.truncated}
        if self.suite == "clique-scaling" and self.rows:
            out["mean_retries"] = sum(r["resamples"] for r in self.rows) / len(self.rows)
        if self.suite != "budget-eval" and self.rows:
            out["success_rate"] = sum(r["success"] for r in self.rows) / len(self.rows)
        return out


def _ms(t0: float) -> int:
    return round((time.perf_counter() - t0) * 1000)


def run_bench(suite: str, seed: int | None = 0, seeds: int = 3, budget_s: float | None = None,
              sizes: tuple[int, ...] | None = None, k: int = 2, threads: int = 1) -> BenchResult:
    """Run a suite; cases are visited in a fixed order and the run stops (with
    ``truncated`` set) once ``budget_s`` wall-clock seconds are used up."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    start = time.perf_counter()

    def over():
        return budget_s is not None and time.perf_counter() - start > budget_s

    if suite == "budget-eval":
        res = BenchResult(suite, BUDGET_COLUMNS)
        for mode in ("proper", "rainbow"):
            for C in sizes or (100, 560, 1512):
                if over():
                    res.truncated = True
                    return res
                t0 = time.perf_counter()
                b = lll_budget(mode, C)
                res.rows.append({"mode": mode, "C": C, "total": b.total_str(),
                                 "total_float": f"{float(b.total):.6f}",
                                 "below_quarter": int(b.total < Fraction(1, 4)), "millis": _ms(t0)})
        return res

    res = BenchResult(suite, COLUMNS)
    if suite == "embed-scaling":
        for i, n in product(range(seeds), sizes or (30, 60, 120)):
            if over():
                res.truncated = True
                break
            s = derive_seed(seed, "bench", suite, i, n)
            G = random_tree(n, 3, random.Random(s))
            c = random_bounded_coloring(n, k, "local", s)
            t0 = time.perf_counter()
            out = embed(G, c, EmbedConfig(mode="proper", seed=s, threads=threads))
            res.rows.append({"n": n, "r": count_cherries(G), "k": k, "success": int(out.ok),
                             "resamples": out.resamples, "millis": _ms(t0)})
    else:
        r = 16
        for n in sizes or (8960,):
            for i in range(seeds):
                if over():
                    res.truncated = True
                    return res
                s = derive_seed(seed, "bench", suite, i, n)
                c = random_bounded_coloring(n, k, "local", s)
                t0 = time.perf_counter()
                try:
                    cr = find_clique_P(c, r, k, "proper", EmbedConfig(seed=s))
                    ok, tries = 1, cr.attempts
                except CliqueNotFound:
                    ok, tries = 0, EmbedConfig().clique_retry_cap
                except ThresholdViolated:
                    ok, tries = 0, 0
                res.rows.append({"n": n, "r": r, "k": k, "success": ok, "resamples": tries,
                                 "millis": _ms(t0)})
    return res
