import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cherrylab.colorings import HostColoring, random_bounded_coloring
from cherrylab.constructions import build_tree, partition_coloring, polarity_graph
from cherrylab.formats import (Certificate, FormatError, parse_and_validate, parse_certificate, parse_coloring,
                               parse_graph, serialize, serialize_coloring, serialize_graph, write)
from cherrylab.graphs import random_graph


class TestGraphFormat:
    def test_roundtrip(self):
        for G in (build_tree("T", 27), polarity_graph(4), random_graph(15, 0.3, random.Random(1))):
            text = serialize_graph(G)
            assert parse_graph(text) == G
            assert serialize_graph(parse_graph(text)) == text

    def test_comments_and_blank_lines(self):
        G = parse_graph("# a path\np graph 3 2\n\ne 1 2\ne 2 3\n")
        assert G.edges == ((1, 2), (2, 3))

    @pytest.mark.parametrize("text,line,msg", [
        ("p graph 3 1\ne 1 1\n", 2, "self-loop"),
        ("p graph 3 2\ne 1 2\ne 1 2\n", 3, "duplicate edge"),
        ("p graph 3 1\ne 1 4\n", 2, "out of range"),
        ("p graph 3 1\ne 2 1\n", 2, "u < v"),
        ("p graph 3 1\ne 1 x\n", 2, "non-integer"),
        ("p grph 3 1\n", 1, "header"),
        ("p graph 3 1\nc 1 2 0\n", 2, "'e' line"),
    ])
    def test_errors_carry_line_numbers(self, text, line, msg):
        with pytest.raises(FormatError, match=msg) as info:
            parse_graph(text, "g.txt")
        assert info.value.line == line
        assert str(info.value).startswith(f"g.txt:{line}:")

    def test_edge_count_mismatch(self):
        with pytest.raises(FormatError, match="announces 2 edges"):
            parse_graph("p graph 3 2\ne 1 2\n")

    def test_empty(self):
        with pytest.raises(FormatError, match="empty"):
            parse_graph("# nothing\n")


class TestColoringFormat:
    def test_nine_vertex_file(self):
        c = parse_coloring(serialize_coloring(partition_coloring(9)))
        assert c.n == 9 and len(c.colors) == 36

    def test_partition12_byte_identical(self):
        text = serialize_coloring(partition_coloring(12))
        assert serialize_coloring(parse_coloring(text)) == text
        # four in-part colors plus one per pair of parts
        assert text.splitlines()[0] == "p ecoloring 12 10"

    def test_missing_pair_named(self):
        lines = serialize_coloring(partition_coloring(9)).splitlines()
        dropped = [ln for ln in lines if not ln.startswith("c 3 7 ")]
        with pytest.raises(FormatError, match=r"missing pair \(3, 7\)"):
            parse_coloring("\n".join(dropped))

    def test_duplicate_pair_line(self):
        text = "p ecoloring 3 2\nc 1 2 0\nc 1 3 1\nc 1 2 1\nc 2 3 0\n"
        with pytest.raises(FormatError, match="duplicate pair") as info:
            parse_coloring(text)
        assert info.value.line == 4

    def test_color_count_mismatch(self):
        with pytest.raises(FormatError, match="announces 5 colors"):
            parse_coloring("p ecoloring 3 5\nc 1 2 0\nc 1 3 1\nc 2 3 0\n")

    @pytest.mark.parametrize("bad,msg", [("c 1 1 0", "not an edge"), ("c 2 1 0", "u < v"),
                                         ("c 1 2 -3", "negative"), ("c 1 2", "expected 3 fields")])
    def test_bad_lines(self, bad, msg):
        with pytest.raises(FormatError, match=msg):
            parse_coloring(f"p ecoloring 3 1\n{bad}\n")

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 12), st.integers(1, 5), st.integers(0, 10**6))
    def test_roundtrip_random(self, n, k, seed):
        c = random_bounded_coloring(n, k, "local", seed=seed)
        text = serialize_coloring(c)
        back = parse_coloring(text)
        assert back == c and serialize_coloring(back) == text


class TestCertificate:
    CERT = Certificate("g.txt", "c.txt", "proper", (3, 1, 2), 7, 12)

    def test_roundtrip(self):
        text = self.CERT.to_json()
        assert parse_certificate(text) == self.CERT
        assert set(json.loads(text)) == {"pattern_file", "host_file", "mode", "map", "seed", "resamples",
                                         "verified"}

    def test_rejects(self):
        with pytest.raises(FormatError, match="invalid JSON"):
            parse_certificate("{")
        d = json.loads(self.CERT.to_json())
        d["mode"] = "weird"
        with pytest.raises(FormatError, match="unknown mode"):
            parse_certificate(json.dumps(d))
        del d["map"]
        with pytest.raises(FormatError, match="'map'"):
            parse_certificate(json.dumps(d))


class TestFiles:
    def test_write_and_read_each_kind(self, tmp_path):
        G = build_tree("T", 8)
        c = partition_coloring(9)
        cert = Certificate("g", "c", "rainbow", (1, 2), None, 0)
        for value, kind in ((G, "graph"), (c, "coloring"), (cert, "certificate")):
            p = write(value, tmp_path / kind)
            assert parse_and_validate(p, kind) == value

    def test_wrong_kind_and_missing(self, tmp_path):
        p = write(partition_coloring(9), tmp_path / "c.txt")
        with pytest.raises(FormatError, match="header"):
            parse_and_validate(p, "graph")
        with pytest.raises(FormatError, match="cannot read"):
            parse_and_validate(tmp_path / "nope", "graph")
        with pytest.raises(ValueError):
            parse_and_validate(p, "picture")

    def test_serialize_unknown(self):
        with pytest.raises(TypeError):
            serialize(3)

    def test_single_vertex_coloring(self):
        c = HostColoring(1, [])
        assert parse_coloring(serialize_coloring(c)) == c
