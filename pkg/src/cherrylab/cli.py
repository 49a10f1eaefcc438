"""``cherrylab`` command line.

Exit codes: 0 success or claim certified, 1 claim refuted or embedding failed,
2 inconclusive (search or time budget spent), 3 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bench import SUITES, run_bench
from .colorings import ColoringError, check_copy, random_bounded_coloring
from .constructions import (ConstructionError, build_tree, diam2_coloring, lex_block_coloring,
                            partition_coloring, polarity_graph, rook_union)
from .embedder import (CliqueNotFound, EmbedConfig, ThresholdViolated, embed, find_clique_P)
from .fields import FieldError
from .formats import Certificate, FormatError, parse_and_validate, write
from .graphs import GraphError, cherry_stats, extremal_edge_check, leaf_cherry_count, random_tree
from .lll import (LllError, ThresholdQuery, closed_form_total, lll_budget, lll_feasibility_check,
                  threshold)
from .oracles import DEFAULT_BUDGET, brute_force_embed, radius2_spanning_tree_search, rainbow_block_check
from .seeding import derive_seed

EXIT_OK, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3

log = logging.getLogger("cherrylab")


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict
    outcome: dict = field(default_factory=dict)
    timings_ms: dict = field(default_factory=dict)
    seed: int | None = None
    artifacts: list[str] = field(default_factory=list)
    # json | text; how main() prints the report, not part of it
    format: str = "json"

    def as_dict(self) -> dict:
        return {"command": self.command, "inputs": self.inputs, "outcome": self.outcome,
                "timings_ms": self.timings_ms, "seed": self.seed, "artifacts": self.artifacts}


class _Timer:
    def __init__(self, report: RunReport, phase: str):
        self.report, self.phase = report, phase

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        ms = (time.perf_counter() - self.t0) * 1000
        self.report.timings_ms[self.phase] = round(ms, 3)
        return False


# --------------------------------------------------------------------------
# argument parsing

GLOBAL_DEFAULTS = {"seed": 0, "mode": "proper", "max_resamples": 10**6, "max_restarts": 10,
                   "threads": 1, "out": None, "format": "json"}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--mode", choices=["proper", "rainbow", "local", "global"], default=None)
    g.add_argument("--max-resamples", type=int, default=None)
    g.add_argument("--max-restarts", type=int, default=None)
    g.add_argument("--threads", type=int, default=None)
    g.add_argument("--out", default=None, help="path for the command's artifact")
    g.add_argument("--format", choices=["json", "text"], default=None)
    g.add_argument("--config", default=None, help="key=value file mirroring the flags; flags win")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="cherrylab", description=__doc__.splitlines()[0],
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=f"cherrylab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def cmd(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    p = cmd("gen-graph", "write a pattern graph")
    p.add_argument("--kind", required=True, choices=["tree-T", "tree-Tprime", "polarity", "rook", "random-tree"])
    p.add_argument("--m", type=int, help="tree parameter or rook side length")
    p.add_argument("--q", type=int, help="field order for the polarity graph")
    p.add_argument("--copies", type=int, default=1)
    p.add_argument("--n", type=int, help="vertex count for random trees")
    p.add_argument("--max-degree", type=int, default=3)

    p = cmd("gen-coloring", "write a host coloring")
    p.add_argument("--kind", required=True, choices=["partition", "diam2", "lex-block", "random"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int)
    p.add_argument("--k", type=int)

    p = cmd("check-bounds", "local and global boundedness of a coloring")
    p.add_argument("--coloring", required=True)
    p.add_argument("--k", type=int, help="also test k-boundedness in --mode")

    p = cmd("cherries", "cherry statistics and extremal bounds of a graph")
    p.add_argument("--graph", required=True)

    p = cmd("threshold", "largest k covered by a theorem")
    p.add_argument("--kind", required=True, choices=["shearer-proper", "shearer-rainbow", "bkp-local", "bkp-global"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--delta", type=int)

    p = cmd("lll-check", "exact local-lemma budget")
    p.add_argument("--C", type=Fraction, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--ell", type=int)

    p = cmd("clique-p", "sample the pinned clique P")
    p.add_argument("--coloring", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--clique-retry-cap", type=int, default=100)
    p.add_argument("--skip-threshold-check", action="store_true")

    p = cmd("embed", "randomized embedding with resampling")
    p.add_argument("--graph", required=True)
    p.add_argument("--coloring", required=True)
    p.add_argument("--event-pick", choices=["first", "random"], default="random")
    p.add_argument("--clique-retry-cap", type=int, default=100)

    p = cmd("brute-embed", "exhaustive embedding search")
    p.add_argument("--graph", required=True)
    p.add_argument("--coloring", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = cmd("verify", "re-check an embedding certificate")
    p.add_argument("--certificate", required=True)

    p = cmd("radius2-search", "properly colored spanning tree of radius at most two")
    p.add_argument("--coloring", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = cmd("block-check", "rainbow copies with many vertices in a block")
    p.add_argument("--coloring", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--X", required=True, help="vertex set, e.g. 1-12 or 1,2,5")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = cmd("bench", "benchmark suites (CSV)")
    p.add_argument("--suite", required=True, choices=list(SUITES))
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--budget-seconds", type=float, default=None)
    p.add_argument("--sizes", default=None, help="comma-separated n (or C for budget-eval)")
    p.add_argument("--k", type=int, default=2)
    return ap


def read_config(path) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment; keys are flag names."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for num, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("_", "-")] = value.strip("\"'")
    return out


def _config_path(argv: list[str]) -> str | None:
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--config="):
            return a.split("=", 1)[1]
    return None


def _with_config(argv: list[str]) -> list[str]:
    """Splice config entries in front of the command's own flags, so that an
    explicit flag (parsed later) wins."""
    path = _config_path(argv)
    if path is None or not argv:
        return argv
    extra = []
    for key, value in read_config(path).items():
        if value.lower() in ("true", "yes", "on"):
            extra.append(f"--{key}")
        elif value.lower() not in ("false", "no", "off"):
            extra += [f"--{key}", value]
    return argv[:1] + extra + argv[1:]


def _finish_args(args: argparse.Namespace) -> None:
    for key, default in GLOBAL_DEFAULTS.items():
        if getattr(args, key) is None:
            setattr(args, key, default)
    args.mode = "proper" if args.mode in ("proper", "local") else "rainbow"
    if args.threads < 1:
        raise UsageError("--threads must be positive")


def _vertex_set(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required here")


def _out(args, report, value):
    if not args.out:
        raise UsageError("--out is required for this command")
    write(value, args.out)
    report.artifacts.append(str(args.out))


# --------------------------------------------------------------------------
# commands; each returns an exit code and fills the report

def cmd_gen_graph(args, rep):
    kind = args.kind
    if kind in ("tree-T", "tree-Tprime"):
        _need(args, "m")
        G = build_tree("T" if kind == "tree-T" else "Tprime", args.m)
    elif kind == "polarity":
        _need(args, "q")
        G = polarity_graph(args.q)
    elif kind == "rook":
        _need(args, "m")
        G = rook_union(args.m, args.copies)
    else:
        _need(args, "n")
        rep.seed = args.seed
        G = random_tree(args.n, args.max_degree, random.Random(derive_seed(args.seed, "gen-graph")))
    _out(args, rep, G)
    rep.outcome = {"n": G.n, "edges": G.num_edges, "max_degree": G.max_degree()}
    return EXIT_OK


def cmd_gen_coloring(args, rep):
    kind = args.kind
    if kind == "partition":
        c = partition_coloring(args.n)
    elif kind == "diam2":
        _need(args, "ell")
        c = diam2_coloring(args.n, args.ell)
    elif kind == "lex-block":
        _need(args, "ell")
        c = lex_block_coloring(args.n, args.ell)
    else:
        _need(args, "k")
        rep.seed = args.seed
        c = random_bounded_coloring(args.n, args.k, args.mode, derive_seed(args.seed, "gen-coloring"))
    _out(args, rep, c)
    r = c.report()
    rep.outcome = {"n": c.n, "k_local": r.k_local, "k_global": r.k_global, "num_colors": r.num_colors}
    return EXIT_OK


def cmd_check_bounds(args, rep):
    c = parse_and_validate(args.coloring, "coloring")
    with _Timer(rep, "report"):
        r = c.report()
    rep.outcome = {"n": c.n, "k_local": r.k_local, "k_global": r.k_global, "num_colors": r.num_colors}
    if args.k is None:
        return EXIT_OK
    measured = r.k_local if args.mode == "proper" else r.k_global
    rep.outcome["bounded"] = measured <= args.k
    return EXIT_OK if measured <= args.k else EXIT_REFUTED


def cmd_cherries(args, rep):
    G = parse_and_validate(args.graph, "graph")
    st = cherry_stats(G)
    e = extremal_edge_check(G, "all")
    leaf_ok = all(leaf_cherry_count(G, u) ** 2 <= 2 * st.r * G.deg(u) for u in range(1, G.n + 1))
    delta = G.max_degree()
    rep.outcome = {"n": G.n, "edges": G.num_edges, "r": st.r, "max_degree": delta,
                   "edge_bound": e.bound, "edge_bound_holds": e.holds, "leaf_bound_holds": leaf_ok,
                   "maxdeg_bound_holds": delta * (delta - 1) <= 2 * st.r}
    ok = e.holds and leaf_ok and rep.outcome["maxdeg_bound_holds"]
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_threshold(args, rep):
    q = ThresholdQuery(args.kind, args.n, r=args.r, delta=args.delta)
    res = threshold(q)
    rep.outcome = {"kind": q.kind, "inputs": {"n": q.n, "r": q.r, "delta": q.delta}, "k": res.k,
                   "constant": str(res.constant), "clamped": res.clamped, "vacuous": res.vacuous}
    return EXIT_OK


def cmd_lll_check(args, rep):
    b = lll_budget(args.mode, args.C)
    if b.total != closed_form_total(args.mode, args.C):
        raise AssertionError("per-class budget disagrees with the closed form")
    feasible = b.total <= Fraction(1, 4)
    out = {"kind": f"lll_{args.mode}", "inputs": {"mode": args.mode, "C": str(args.C)},
           "budget_total": b.total_str(), "total": b.total_str(), "total_float": float(b.total),
           "per_class": {k: f"{v.numerator}/{v.denominator}" for k, v in b.per_class_terms.items()}}
    if args.n is not None:
        _need(args, "ell")
        v = lll_feasibility_check(args.n, args.ell, b)
        out["inputs"].update(n=args.n, ell=args.ell)
        out["single_event_ok"] = v.single_event_ok
        feasible = v.ok
    out["feasible"] = feasible
    rep.outcome = out
    return EXIT_OK if feasible else EXIT_REFUTED


def cmd_clique_p(args, rep):
    c = parse_and_validate(args.coloring, "coloring")
    rep.seed = args.seed
    cfg = EmbedConfig(mode=args.mode, seed=args.seed, clique_retry_cap=args.clique_retry_cap)
    try:
        with _Timer(rep, "clique"):
            res = find_clique_P(c, args.r, args.k, args.mode, cfg,
                                check_threshold=not args.skip_threshold_check)
    except (ThresholdViolated, CliqueNotFound, ColoringError) as exc:
        rep.outcome = {"found": False, "reason": str(exc)}
        return EXIT_REFUTED
    rep.outcome = {"found": True, "P": list(res.P), "size": len(res.P), "attempts": res.attempts,
                   "codegree_cap": res.codegree_cap, "removed": list(res.removed)}
    return EXIT_OK


def _certificate(args, G_path, c_path, mode, emb, seed, resamples, rep):
    cert = Certificate(str(G_path), str(c_path), mode, emb.map, seed, resamples)
    if args.out:
        write(cert, args.out)
        rep.artifacts.append(str(args.out))
    return cert


def cmd_embed(args, rep):
    G = parse_and_validate(args.graph, "graph")
    c = parse_and_validate(args.coloring, "coloring")
    rep.seed = args.seed
    cfg = EmbedConfig(mode=args.mode, seed=args.seed, max_resamples=args.max_resamples,
                      max_restarts=args.max_restarts, clique_retry_cap=args.clique_retry_cap,
                      event_pick=args.event_pick, threads=args.threads)
    with _Timer(rep, "embed"):
        res = embed(G, c, cfg)
    rep.outcome = res.as_dict()
    if not res.ok:
        return EXIT_REFUTED
    _certificate(args, args.graph, args.coloring, cfg.mode, res.embedding, args.seed, res.resamples, rep)
    return EXIT_OK


def cmd_brute_embed(args, rep):
    G = parse_and_validate(args.graph, "graph")
    c = parse_and_validate(args.coloring, "coloring")
    with _Timer(rep, "search"):
        res = brute_force_embed(G, c, args.mode, args.budget)
    rep.outcome = {"status": res.status, "nodes": res.nodes,
                   "map": list(res.embedding.map) if res.embedding else None}
    if res.status == "found":
        _certificate(args, args.graph, args.coloring, args.mode, res.embedding, None, 0, rep)
        return EXIT_OK
    return EXIT_REFUTED if res.status == "none" else EXIT_INCONCLUSIVE


def _resolve(path: str, base: Path) -> Path:
    p = Path(path)
    if p.is_absolute() or p.exists():
        return p
    return base / p


def cmd_verify(args, rep):
    cert = parse_and_validate(args.certificate, "certificate")
    base = Path(args.certificate).resolve().parent
    G = parse_and_validate(_resolve(cert.pattern_file, base), "graph")
    c = parse_and_validate(_resolve(cert.host_file, base), "coloring")
    if len(cert.map) != G.n:
        rep.outcome = {"ok": False, "reason": f"map has {len(cert.map)} entries, pattern has {G.n} vertices"}
        return EXIT_REFUTED
    try:
        v = check_copy(c, G, cert.embedding())
    except ColoringError as exc:
        rep.outcome = {"ok": False, "reason": str(exc)}
        return EXIT_REFUTED
    rep.outcome = {"ok": v.ok, "mode": cert.mode, "witness": v.witness}
    return EXIT_OK if v.ok else EXIT_REFUTED


def cmd_radius2(args, rep):
    c = parse_and_validate(args.coloring, "coloring")
    with _Timer(rep, "search"):
        res = radius2_spanning_tree_search(c, args.budget)
    rep.outcome = {"verdict": res.status, "nodes": res.nodes,
                   "tree_edges": [list(e) for e in res.tree.edges] if res.tree else None}
    # "none" certifies that no properly colored radius-two spanning tree exists
    return {"none": EXIT_OK, "found": EXIT_REFUTED}.get(res.status, EXIT_INCONCLUSIVE)


def cmd_block_check(args, rep):
    c = parse_and_validate(args.coloring, "coloring")
    H = parse_and_validate(args.graph, "graph")
    try:
        X = _vertex_set(args.X)
    except ValueError:
        raise UsageError(f"cannot parse vertex set {args.X!r}") from None
    with _Timer(rep, "search"):
        v = rainbow_block_check(c, H, X, args.t, args.budget)
    rep.outcome = {"verdict": v.status, "nodes": v.nodes,
                   "map": list(v.embedding.map) if v.embedding else None}
    return {"certified": EXIT_OK, "counterexample": EXIT_REFUTED}.get(v.status, EXIT_INCONCLUSIVE)


def cmd_bench(args, rep):
    try:
        sizes = tuple(int(x) for x in args.sizes.split(",")) if args.sizes else None
    except ValueError:
        raise UsageError(f"cannot parse --sizes {args.sizes!r}") from None
    rep.seed = args.seed
    with _Timer(rep, "bench"):
        res = run_bench(args.suite, args.seed, args.seeds, args.budget_seconds, sizes, args.k, args.threads)
    if args.out:
        Path(args.out).write_text(res.csv())
        rep.artifacts.append(str(args.out))
    else:
        sys.stderr.write(res.csv())
    rep.outcome = res.summary()
    return EXIT_INCONCLUSIVE if res.truncated else EXIT_OK


COMMANDS = {
    "gen-graph": cmd_gen_graph, "gen-coloring": cmd_gen_coloring, "check-bounds": cmd_check_bounds,
    "cherries": cmd_cherries, "threshold": cmd_threshold, "lll-check": cmd_lll_check,
    "clique-p": cmd_clique_p, "embed": cmd_embed, "brute-embed": cmd_brute_embed, "verify": cmd_verify,
    "radius2-search": cmd_radius2, "block-check": cmd_block_check, "bench": cmd_bench,
}


def _inputs(args) -> dict:
    return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in sorted(vars(args).items())
            if k not in ("command", "format", "config")}


def _emit(rep: RunReport, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(rep.as_dict(), sort_keys=True))
        return
    print(f"command: {rep.command}")
    for k, v in rep.outcome.items():
        print(f"{k}: {v}")
    for a in rep.artifacts:
        print(f"wrote: {a}")


def run(argv=None) -> tuple[int, RunReport | None]:
    """Parse ``argv``, run the command, and return its exit code and report."""
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_with_config(argv))
    except UsageError as exc:
        log.error("%s", exc)
        return EXIT_USAGE, None
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_USAGE), None
    rep = RunReport(args.command, {})
    try:
        _finish_args(args)
        rep.format = args.format
        rep.inputs = _inputs(args)
        with _Timer(rep, "total"):
            code = COMMANDS[args.command](args, rep)
    except (UsageError, FormatError, GraphError, ConstructionError, FieldError, LllError, ColoringError,
            ValueError, OSError) as exc:
        log.debug("usage error", exc_info=True)
        rep.outcome = {"error": str(exc)}
        code = EXIT_USAGE
    rep.outcome.setdefault("exit_code", code)
    return code, rep


def main(argv=None) -> int:
    level = os.environ.get("CHERRYLAB_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    code, rep = run(argv)
    if rep is not None:
        _emit(rep, rep.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
