from fractions import Fraction

import pytest

from cherrylab.bench import BUDGET_COLUMNS, COLUMNS, run_bench
from cherrylab.cli import EXIT_INCONCLUSIVE, EXIT_OK, run


def test_embed_scaling_rows_per_seed():
    res = run_bench("embed-scaling", seed=0, seeds=2, sizes=(30, 60))
    assert len(res.rows) == 4 and not res.truncated
    assert [r["n"] for r in res.rows] == [30, 60, 30, 60]
    assert res.csv().splitlines()[0] == ",".join(COLUMNS)
    assert res.summary()["success_rate"] == 1.0


def test_embed_scaling_deterministic():
    strip = lambda res: [{k: v for k, v in r.items() if k != "millis"} for r in res.rows]  # noqa: E731
    assert strip(run_bench("embed-scaling", 5, 1, sizes=(30,))) == strip(run_bench("embed-scaling", 5, 1, sizes=(30,)))


def test_budget_eval_monotone():
    res = run_bench("budget-eval")
    assert res.csv().splitlines()[0] == ",".join(BUDGET_COLUMNS)
    for mode in ("proper", "rainbow"):
        totals = [Fraction(r["total"]) for r in res.rows if r["mode"] == mode]
        assert len(totals) == 3 and totals == sorted(totals, reverse=True)
    proper560 = next(r for r in res.rows if r["mode"] == "proper" and r["C"] == 560)
    assert proper560["total"] == "3307/15996" and proper560["below_quarter"] == 1


def test_clique_scaling_small():
    res = run_bench("clique-scaling", seed=1, seeds=2, sizes=(4480,), k=1)
    assert len(res.rows) == 2 and all(r["success"] for r in res.rows)
    assert res.summary()["mean_retries"] >= 1


def test_truncation():
    res = run_bench("embed-scaling", seeds=5, budget_s=0.0)
    assert res.truncated and len(res.rows) < 15


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_bench("nope")


def test_cli_bench(tmp_path):
    out = tmp_path / "b.csv"
    code, rep = run(["bench", "--suite", "budget-eval", "--out", str(out)])
    assert code == EXIT_OK and out.read_text().startswith("mode,C,")
    code, rep = run(["bench", "--suite", "embed-scaling", "--budget-seconds", "0", "--out", str(out)])
    assert code == EXIT_INCONCLUSIVE and rep.outcome["truncated"]
