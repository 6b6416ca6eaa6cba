import json

import numpy as np
import pytest

from graphunc.cli import EXIT_INVALID, EXIT_IO, EXIT_OK, main, parse_ratios
from graphunc.fileio import read_graph, read_table, signal_csv, write_text


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture
def work(tmp_path):
    assert run("graph", "gen", "--kind", "sensor", "--n", 30, "--seed", 4, "--out", tmp_path / "g.csv") == EXIT_OK
    f = np.random.default_rng(0).standard_normal(30)
    write_text(tmp_path / "f.csv", signal_csv(f))
    return tmp_path


def test_graph_gen_formats(work):
    assert run("graph", "gen", "--kind", "modified_path", "--n", 10, "--param", "d=5", "--out", work / "m.mtx") == 0
    g = read_graph(work / "m.mtx")
    assert g.weights[0] == pytest.approx(0.2)
    assert (work / "m.mtx.manifest.json").exists()
    assert run("graph", "gen", "--kind", "path", "--n", 5, "--param", "oops", "--out", work / "x.csv") == EXIT_INVALID


def test_pipeline(work):
    assert run("spectrum", "--graph", work / "g.csv", "--out", work / "basis.json", "--eigvecs", work / "U.bin") == 0
    basis = json.loads((work / "basis.json").read_text())
    assert basis["n"] == 30 and len(basis["nu"]) == 30 and basis["eigenvectors_file"] == "U.bin"
    assert run("frame", "design", "--graph", work / "g.csv", "--design", "gabor_uniform", "--k", 6,
               "--out", work / "bank.json") == 0
    assert run("frame", "analyze", "--bank", work / "bank.json", "--signal", work / "f.csv",
               "--out", work / "C.csv") == 0
    header, rows = read_table(work / "C.csv")
    assert header == ["i", "k", "re", "im"] and len(rows) == 180
    assert run("bounds", "global", "--graph", work / "g.csv", "--signal", work / "f.csv", "--which", "all",
               "--p", "4/3", "--bank", work / "bank.json", "--out", work / "rep.json") == 0
    reps = json.loads((work / "rep.json").read_text())
    assert isinstance(reps, list) and all(r["holds"] for r in reps)
    assert {"support", "lp", "entropic", "folland_energy", "hausdorff_young", "lieb_frame"} <= {r["name"] for r in reps}
    assert run("bounds", "local", "--graph", work / "g.csv", "--bank", work / "bank.json", "--p", "inf",
               "--all", "--out", work / "local.csv") == 0
    header, rows = read_table(work / "local.csv")
    assert header == ["i0", "k0", "sp", "bound_mid", "bound_outer", "lower", "k_tilde", "i_tilde", "hop"]
    assert run("bounds", "local", "--bank", work / "bank.json", "--i0", 1, "--k0", 2, "--format", "json",
               "--out", work / "one.json") == 0
    assert len(json.loads((work / "one.json").read_text())["rows"]) == 1


def test_outputs_are_byte_identical(work):
    for name in ("a", "b"):
        assert run("experiment", "inpaint", "--kind", "sensor", "--n", 40, "--ratios", "0.2,0.4",
                   "--trials", 2, "--seed", 7, "--out", work / f"{name}.csv") == 0
    assert (work / "a.csv").read_bytes() == (work / "b.csv").read_bytes()
    assert run("experiment", "inpaint-plot", "--in", work / "a.csv", "--out", work / "a.svg") == 0
    assert run("experiment", "inpaint-plot", "--in", work / "b.csv", "--out", work / "b.svg") == 0
    assert (work / "a.svg").read_bytes() == (work / "b.svg").read_bytes()


def test_repro_commands(work):
    assert run("repro", "table1", "--seeds", 0, "--out", work / "t.csv") == 0
    header, rows = read_table(work / "t.csv")
    assert header[:3] == ["graph", "seed", "mu"] and len(rows) == 8
    assert run("repro", "modified-path", "--d", "1,10,100", "--out", work / "mp.csv", "--svg", work / "mp.svg") == 0
    assert (work / "mp.svg").read_text().startswith("<svg")


def test_exit_codes(work):
    assert run("spectrum", "--graph", work / "missing.csv", "--out", work / "x.json") == EXIT_IO
    (work / "loop.csv").write_text("i,j,w\n1,1,1\n")
    assert run("spectrum", "--graph", work / "loop.csv", "--out", work / "x.json") == EXIT_INVALID
    assert run("spectrum", "--graph", work / "g.csv", "--ring-dft", "--out", work / "x.json") == 3
    assert run("spectrum", "--graph", work / "g.csv") == EXIT_INVALID
    with pytest.raises(SystemExit) as exc:
        run("frame", "design", "--graph", work / "g.csv", "--design", "nope", "--out", work / "x.json")
    assert exc.value.code == 2


def test_parse_ratios():
    assert parse_ratios("0.1:0.5:0.05") == [0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5]
    assert parse_ratios("0.2,0.3") == [0.2, 0.3]
