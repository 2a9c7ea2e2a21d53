import json
import subprocess
import sys

import pytest

from ghm.cli import main
from ghm.generators import fixture
from ghm.graph import write_edgelist
from ghm.split import SparseSplit, write_sparse_split


@pytest.fixture()
def p5_file(tmp_path):
    path = tmp_path / "p5.el"
    path.write_text(write_edgelist(fixture("P5")))
    return str(path)


@pytest.fixture()
def c4_file(tmp_path):
    path = tmp_path / "c4.el"
    path.write_text(write_edgelist(fixture("C4")))
    return str(path)


@pytest.fixture()
def sun3_file(tmp_path):
    path = tmp_path / "sun3.el"
    path.write_text(write_edgelist(fixture("SUN3")))
    return str(path)


@pytest.fixture()
def split_file(tmp_path):
    h = SparseSplit((0, 1, 2), (3, 4), ((0,), (1,)))
    path = tmp_path / "h2.ss"
    path.write_text(write_sparse_split(h))
    return str(path)


def run_main(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestHellyCommands:
    def test_radius_json(self, p5_file, capsys):
        code, out, err = run_main(["helly", "radius", "--input", p5_file,
                                   "--seed", "1", "--json"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["result"]["radius"] == 2
        assert payload["result"]["diam_upper"] == 4
        assert "wall_time_ms" in err

    def test_diameter(self, p5_file, capsys):
        code, out, _ = run_main(["helly", "diameter", "--input", p5_file,
                                 "--seed", "1", "--json"], capsys)
        assert code == 0
        assert json.loads(out)["result"]["diameter"] == 4

    def test_ecc_le(self, p5_file, capsys):
        code, out, _ = run_main(["helly", "ecc-le", "--input", p5_file,
                                 "--seed", "1", "--k", "3", "--json"], capsys)
        assert code == 0
        assert json.loads(out)["result"]["vertices"] == [1, 2, 3]

    def test_seed_required_in_json_mode(self, p5_file, capsys):
        code, _, err = run_main(["helly", "radius", "--input", p5_file, "--json"], capsys)
        assert code == 1
        assert "--seed" in err

    def test_byte_identical_reports(self, p5_file, capsys):
        _, out1, _ = run_main(["helly", "radius", "--input", p5_file,
                               "--seed", "7", "--json"], capsys)
        _, out2, _ = run_main(["helly", "radius", "--input", p5_file,
                               "--seed", "7", "--json"], capsys)
        assert out1 == out2

    def test_reported_distance_replays_by_bfs(self, p5_file, capsys):
        from ghm import bfs, load_graph

        _, out, _ = run_main(["helly", "diameter", "--input", p5_file,
                              "--seed", "3", "--json"], capsys)
        res = json.loads(out)["result"]
        g = load_graph(p5_file)
        x, y = res["pair"]
        assert int(bfs(g, [x]).dist[y]) == res["diameter"]


class TestC4hCommands:
    def test_center(self, p5_file, capsys):
        code, out, _ = run_main(["c4h", "center", "--input", p5_file, "--json"], capsys)
        assert code == 0
        assert json.loads(out)["result"] == {"center": 2, "radius": 2}

    def test_all_ecc(self, p5_file, capsys):
        code, out, _ = run_main(["c4h", "all-ecc", "--input", p5_file, "--json"], capsys)
        assert json.loads(out)["result"]["eccentricities"] == [4, 3, 2, 3, 4]

    def test_class_violation_exit_code(self, sun3_file, capsys):
        code, _, err = run_main(["c4h", "diameter", "--input", sun3_file, "--json"], capsys)
        assert code == 2
        assert "class violation" in err

    def test_certify_chordal(self, sun3_file, capsys):
        code, out, _ = run_main(["c4h", "certify-chordal", "--input", sun3_file,
                                 "--json"], capsys)
        assert code == 0
        payload = json.loads(out)["result"]
        assert payload["certified"] is False
        assert payload["not_helly_reason"]


class TestSplitCommands:
    def test_diam_and_pair(self, split_file, capsys):
        code, out, _ = run_main(["split", "diam", "--input", split_file, "--json"], capsys)
        assert json.loads(out)["result"]["diameter"] == 3
        code, out, _ = run_main(["split", "pair", "--input", split_file, "--json"], capsys)
        assert json.loads(out)["result"]["pair"] == [3, 4]

    def test_disjoint_kernels_agree(self, split_file, capsys):
        outs = []
        for kernel in ("naive", "packed"):
            _, out, _ = run_main(["split", "disjoint", "--input", split_file,
                                  "--kernel", kernel, "--json"], capsys)
            outs.append(json.loads(out)["result"]["disjoint_pair"])
        assert outs[0] is not None and outs[1] is not None

    def test_edgelist_format(self, tmp_path, capsys):
        path = tmp_path / "split.el"
        path.write_text(write_edgelist(fixture("SPLIT-H2")))
        code, out, _ = run_main(["split", "diam", "--input", str(path),
                                 "--format", "edgelist", "--json"], capsys)
        assert json.loads(out)["result"]["diameter"] == 3


class TestChordalCommands:
    def test_diam(self, sun3_file, capsys):
        code, out, _ = run_main(["chordal", "diam", "--input", sun3_file,
                                 "--seed", "7", "--json"], capsys)
        assert code == 0
        payload = json.loads(out)["result"]
        assert payload["diameter"] == 2

    def test_ecc_approx(self, p5_file, capsys):
        code, out, _ = run_main(["chordal", "ecc-approx", "--input", p5_file,
                                 "--json"], capsys)
        approx = json.loads(out)["result"]["eccentricity_lower_bounds"]
        truth = [4, 3, 2, 3, 4]
        assert all(a <= t <= a + 1 for a, t in zip(approx, truth))

    def test_emit_splits(self, tmp_path, capsys):
        import os

        from ghm.generators import random_chordal
        from ghm.split import read_sparse_split

        path = tmp_path / "g.el"
        path.write_text(write_edgelist(random_chordal(40, seed=3)))
        out_dir = str(tmp_path / "splits")
        code, out, _ = run_main(["chordal", "emit-splits", "--input", str(path),
                                 "--seed", "1", "--out-dir", out_dir, "--json"], capsys)
        assert code == 0
        names = json.loads(out)["result"]["instances"]
        assert names
        for name in names:
            with open(os.path.join(out_dir, name)) as fh:
                read_sparse_split(fh.read())

    def test_not_chordal_exit(self, c4_file, capsys):
        code, _, _ = run_main(["chordal", "diam", "--input", c4_file,
                               "--seed", "1", "--json"], capsys)
        assert code == 2


class TestOracleAndGen:
    def test_oracle_check_c4(self, c4_file, capsys):
        code, out, _ = run_main(["oracle", "check", "--input", c4_file, "--json"], capsys)
        res = json.loads(out)["result"]
        assert res["helly"] is False and res["chordal"] is False
        assert res["helly_witness"]

    def test_gen_roundtrip(self, tmp_path, capsys):
        out_file = str(tmp_path / "t.el")
        code, out, _ = run_main(["gen", "tree", "--n", "30", "--seed", "4",
                                 "--out", out_file, "--json"], capsys)
        assert code == 0
        res = json.loads(out)["result"]
        assert res["n"] == 30 and res["certificates"]["chordal"] is True
        from ghm.graph import load_graph

        g = load_graph(out_file)
        assert g.n == 30 and g.m == 29

    def test_gen_king(self, tmp_path, capsys):
        out_file = str(tmp_path / "k.el")
        code, out, _ = run_main(["gen", "king", "--a", "3", "--b", "3",
                                 "--out", out_file, "--json"], capsys)
        assert json.loads(out)["result"]["n"] == 9


class TestErrorPaths:
    def test_missing_file(self, capsys):
        code, _, err = run_main(["helly", "radius", "--input", "/nonexistent.el",
                                 "--seed", "1", "--json"], capsys)
        assert code == 1

    def test_format_error_line_number(self, tmp_path, capsys):
        path = tmp_path / "bad.el"
        path.write_text("2 1\n0 x\n")
        code, _, err = run_main(["helly", "radius", "--input", str(path),
                                 "--seed", "1", "--json"], capsys)
        assert code == 1
        assert "line 2" in err

    def test_subprocess_entrypoint(self, p5_file):
        proc = subprocess.run(
            [sys.executable, "-m", "ghm.cli", "helly", "radius", "--input",
             p5_file, "--seed", "1", "--json"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["result"]["radius"] == 2


class TestBenchCommand:
    def test_bench_csv(self, capsys):
        code, out, _ = run_main(["bench", "split-kernels", "--seed", "1",
                                 "--runs", "1", "--scale", "0.1"], capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,m,algo,median_s,runs"
        assert any("disjoint_packed" in ln for ln in lines[1:])
