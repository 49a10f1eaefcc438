import json
import subprocess
import sys

import pytest

from cherrylab.cli import EXIT_INCONCLUSIVE, EXIT_OK, EXIT_REFUTED, EXIT_USAGE, main, read_config, run
from cherrylab.constructions import partition_coloring
from cherrylab.formats import parse_and_validate, write
from cherrylab.graphs import PatternGraph


def ok(argv):
    code, rep = run([str(a) for a in argv])
    assert rep is not None
    return code, rep


@pytest.fixture
def files(tmp_path):
    write(partition_coloring(9), tmp_path / "partition9.ecc")
    tree = PatternGraph(9, [(1, 2), (1, 3), (1, 4), (1, 5), (2, 6), (3, 7), (4, 8), (5, 9)])
    write(tree, tmp_path / "r2tree.g")
    return tmp_path


class TestExamples:
    def test_threshold(self):
        code, rep = ok(["threshold", "--kind", "shearer-proper", "--n", 8960, "--r", 16])
        assert code == EXIT_OK and rep.outcome["k"] == 2
        assert set(rep.as_dict()) == {"command", "inputs", "outcome", "timings_ms", "seed", "artifacts"}

    def test_lll_check(self):
        code, rep = ok(["lll-check", "--mode", "proper", "--C", 560])
        assert code == EXIT_OK
        assert rep.outcome["total"] == rep.outcome["budget_total"] == "3307/15996"
        assert rep.outcome["feasible"] is True

    def test_lll_check_infeasible(self):
        code, rep = ok(["lll-check", "--mode", "proper", "--C", 10])
        assert code == EXIT_REFUTED and rep.outcome["feasible"] is False

    def test_radius2_none_is_certified(self, files):
        code, rep = ok(["radius2-search", "--coloring", files / "partition9.ecc"])
        assert code == EXIT_OK and rep.outcome["verdict"] == "none"

    def test_radius2_budget(self, files):
        code, _ = ok(["radius2-search", "--coloring", files / "partition9.ecc", "--budget", 2])
        assert code == EXIT_INCONCLUSIVE


class TestGenerators:
    @pytest.mark.parametrize("argv,kind", [
        (["gen-graph", "--kind", "tree-T", "--m", 27], "graph"),
        (["gen-graph", "--kind", "polarity", "--q", 5], "graph"),
        (["gen-graph", "--kind", "rook", "--m", 3, "--copies", 2], "graph"),
        (["gen-graph", "--kind", "random-tree", "--n", 20], "graph"),
        (["gen-coloring", "--kind", "partition", "--n", 12], "coloring"),
        (["gen-coloring", "--kind", "diam2", "--n", 20, "--ell", 7], "coloring"),
        (["gen-coloring", "--kind", "lex-block", "--n", 16, "--ell", 1], "coloring"),
        (["gen-coloring", "--kind", "random", "--n", 30, "--k", 2, "--mode", "global"], "coloring"),
    ])
    def test_artifacts_reread(self, tmp_path, argv, kind):
        out = tmp_path / "artifact"
        code, rep = ok(argv + ["--out", out])
        assert code == EXIT_OK and rep.artifacts == [str(out)]
        parse_and_validate(out, kind)

    def test_missing_parameter(self, tmp_path):
        code, rep = ok(["gen-graph", "--kind", "polarity", "--out", tmp_path / "x"])
        assert code == EXIT_USAGE and "--q" in rep.outcome["error"]

    def test_missing_out(self):
        assert ok(["gen-coloring", "--kind", "partition", "--n", 9])[0] == EXIT_USAGE


class TestAnalysis:
    def test_check_bounds(self, files):
        code, rep = ok(["check-bounds", "--coloring", files / "partition9.ecc", "--k", 3])
        assert code == EXIT_OK and (rep.outcome["k_local"], rep.outcome["k_global"]) == (3, 9)
        code, _ = ok(["check-bounds", "--coloring", files / "partition9.ecc", "--k", 3, "--mode", "global"])
        assert code == EXIT_REFUTED

    def test_cherries(self, files):
        code, rep = ok(["cherries", "--graph", files / "r2tree.g"])
        assert code == EXIT_OK and rep.outcome["r"] == 10

    def test_clique_threshold(self, files):
        code, rep = ok(["clique-p", "--coloring", files / "partition9.ecc", "--r", 16, "--k", 3])
        assert code == EXIT_REFUTED and "threshold violated" in rep.outcome["reason"]


class TestEmbedVerify:
    def test_embed_then_verify(self, tmp_path):
        ok(["gen-graph", "--kind", "random-tree", "--n", 30, "--seed", 4, "--out", tmp_path / "t.g"])
        ok(["gen-coloring", "--kind", "random", "--n", 30, "--k", 2, "--seed", 4, "--out", tmp_path / "h.ecc"])
        code, rep = ok(["embed", "--graph", tmp_path / "t.g", "--coloring", tmp_path / "h.ecc",
                        "--seed", 9, "--out", tmp_path / "cert.json"])
        assert code == EXIT_OK and rep.seed == 9
        cert = parse_and_validate(tmp_path / "cert.json", "certificate")
        assert cert.verified and cert.seed == 9
        assert ok(["verify", "--certificate", tmp_path / "cert.json"])[0] == EXIT_OK

    def test_embed_failure(self, files):
        code, rep = ok(["embed", "--graph", files / "r2tree.g", "--coloring", files / "partition9.ecc",
                        "--max-resamples", 200, "--max-restarts", 2, "--out", files / "c.json"])
        assert code == EXIT_REFUTED and rep.outcome["ok"] is False
        assert not (files / "c.json").exists()

    def test_brute_and_tampered_certificate(self, files, tmp_path):
        code, rep = ok(["brute-embed", "--graph", files / "r2tree.g", "--coloring", files / "partition9.ecc"])
        assert code == EXIT_REFUTED and rep.outcome["status"] == "none"
        cert = {"pattern_file": "r2tree.g", "host_file": "partition9.ecc", "mode": "proper",
                "map": list(range(1, 10)), "seed": None, "resamples": 0, "verified": True}
        (files / "bad.json").write_text(json.dumps(cert))
        code, rep = ok(["verify", "--certificate", files / "bad.json"])
        assert code == EXIT_REFUTED and rep.outcome["witness"]["kind"] == "cherry"

    def test_block_check(self, tmp_path):
        ok(["gen-coloring", "--kind", "lex-block", "--n", 12, "--ell", 3, "--out", tmp_path / "lex.ecc"])
        ok(["gen-graph", "--kind", "rook", "--m", 3, "--out", tmp_path / "h3.g"])
        code, rep = ok(["block-check", "--coloring", tmp_path / "lex.ecc", "--graph", tmp_path / "h3.g",
                        "--X", "1-12", "--t", 3])
        assert code == EXIT_OK and rep.outcome["verdict"] == "certified"
        assert ok(["block-check", "--coloring", tmp_path / "lex.ecc", "--graph", tmp_path / "h3.g",
                   "--X", "a-b", "--t", 3])[0] == EXIT_USAGE


class TestDeterminism:
    def _embed(self, tmp_path, threads, name):
        out = tmp_path / name
        code, rep = ok(["embed", "--graph", tmp_path / "t.g", "--coloring", tmp_path / "h.ecc",
                        "--seed", 3, "--threads", threads, "--max-restarts", 4, "--out", out])
        assert code == EXIT_OK
        return out.read_bytes(), rep

    def test_thread_counts_agree(self, tmp_path):
        ok(["gen-graph", "--kind", "random-tree", "--n", 40, "--out", tmp_path / "t.g"])
        ok(["gen-coloring", "--kind", "random", "--n", 40, "--k", 2, "--out", tmp_path / "h.ecc"])
        a, ra = self._embed(tmp_path, 1, "a.json")
        b, rb = self._embed(tmp_path, 1, "b.json")
        c, _ = self._embed(tmp_path, 4, "c.json")
        assert a == b == c
        da, db = ra.as_dict(), rb.as_dict()
        for d in (da, db):
            d.pop("timings_ms")
            d.pop("artifacts")
            d["inputs"].pop("out")
        assert json.dumps(da, sort_keys=True) == json.dumps(db, sort_keys=True)


class TestUsage:
    def test_exit_3_cases(self, tmp_path):
        assert run(["frobnicate"])[0] == EXIT_USAGE
        assert run([])[0] == EXIT_USAGE
        assert run(["check-bounds", "--coloring", str(tmp_path / "missing")])[0] == EXIT_USAGE
        (tmp_path / "junk").write_text("p ecoloring 3 1\nc 1 2 0\n")
        code, rep = run(["check-bounds", "--coloring", str(tmp_path / "junk")])
        assert code == EXIT_USAGE and "missing pair (1, 3)" in rep.outcome["error"]
        assert run(["embed", "--graph", "x", "--coloring", "y", "--threads", "0"])[0] == EXIT_USAGE

    def test_config_mirrors_flags_and_flags_win(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# defaults\nkind = shearer-proper\nn = 8960\nr = 81\nformat = text\n")
        assert read_config(cfg)["kind"] == "shearer-proper"
        code, rep = run(["threshold", "--config", str(cfg)])
        assert code == EXIT_OK and rep.inputs["r"] == 81 and rep.format == "text"
        code, rep = run(["threshold", "--config", str(cfg), "--r", "16"])
        assert rep.inputs["r"] == 16 and rep.outcome["k"] == 2

    def test_bad_config(self, tmp_path):
        (tmp_path / "c").write_text("no equals sign\n")
        assert run(["threshold", "--config", str(tmp_path / "c")])[0] == EXIT_USAGE

    def test_main_prints_json(self, capsys):
        assert main(["lll-check", "--mode", "rainbow", "--C", "1512"]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["outcome"]["feasible"] is True and out["command"] == "lll-check"

    def test_text_format(self, capsys):
        main(["threshold", "--kind", "shearer-proper", "--n", "8960", "--r", "16", "--format", "text"])
        assert "k: 2" in capsys.readouterr().out

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "cherrylab", "threshold", "--kind", "shearer-proper",
                               "--n", "8960", "--r", "16"], capture_output=True, text=True, check=False)
        assert proc.returncode == 0 and json.loads(proc.stdout)["outcome"]["k"] == 2
