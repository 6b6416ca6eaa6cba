import math

import numpy as np
import pytest

from graphunc.fileio import (
    FormatError, RunManifest, bank_dict, dumps, fmt, loads, read_bank, read_eigenvectors, read_graph,
    read_signal, signal_csv, write_eigenvectors, write_graph, write_text,
)
from graphunc.frames import design_bank
from graphunc.graph import GraphError, path, ring, sensor
from graphunc.spectral import basis_for


def test_fmt_round_trips():
    rng = np.random.default_rng(0)
    for x in rng.standard_normal(200) * 10.0 ** rng.integers(-300, 300, 200):
        assert float(fmt(x)) == x
    assert fmt(1.0) == "1" and fmt(math.inf) == "inf" and fmt(3) == "3"


def test_json_round_trip():
    obj = {"a": [0.1, 1 / 3, math.inf], "b": {"c": None, "d": True}, "e": np.arange(3)}
    back = loads(dumps(obj))
    assert back["a"][1] == 1 / 3 and back["a"][2] == math.inf and back["e"] == [0, 1, 2]
    assert dumps(obj) == dumps(obj)


@pytest.mark.parametrize("suffix", [".csv", ".mtx"])
def test_graph_round_trip(tmp_path, suffix):
    for g in (path(3), sensor(30, seed=1)):
        f = tmp_path / f"g{suffix}"
        write_graph(g, f, manifest_id="abc")
        assert read_graph(f) == g


def test_graph_csv_parsing(tmp_path):
    f = tmp_path / "g.csv"
    f.write_text("i,j,w\n1,2,0.5\n")
    g = read_graph(f)
    assert g.edges.tolist() == [[0, 1]] and g.weights.tolist() == [0.5]
    f.write_text("i,j,w\n1,1,1.0\n")
    with pytest.raises(GraphError, match="self loop"):
        read_graph(f)
    f.write_text("i,j,w\n1,2,0\n")
    with pytest.raises(GraphError):
        read_graph(f)
    f.write_text("a,b\n1,2\n")
    with pytest.raises(FormatError):
        read_graph(f)
    f.write_text("i,j,w\n1,2,x\n")
    with pytest.raises(FormatError):
        read_graph(f)
    f.write_text("i,j,w\n1,2,1\n3,4,1\n")
    with pytest.raises(GraphError, match="connected"):
        read_graph(f)


def test_signal_round_trip(tmp_path):
    f = tmp_path / "s.csv"
    x = np.random.default_rng(1).standard_normal(7)
    write_text(f, signal_csv(x))
    np.testing.assert_array_equal(read_signal(f), x)
    z = x + 1j * x[::-1]
    write_text(f, signal_csv(z))
    np.testing.assert_array_equal(read_signal(f), z)
    f.write_text("i,value\n1,0\n3,1\n")
    with pytest.raises(FormatError):
        read_signal(f)


def test_bank_round_trip(tmp_path):
    g = path(12)
    b = basis_for(g)
    bank = design_bank(b, "wavelet_log", 5)
    f = tmp_path / "bank.json"
    write_text(f, dumps(bank_dict(bank, b, g, manifest_id="m")))
    back, g2, raw = read_bank(f)
    assert g2 == g and raw["manifest_id"] == "m"
    np.testing.assert_array_equal(back.values, bank.values)
    f.write_text("{}")
    with pytest.raises(FormatError):
        read_bank(f)


def test_eigenvector_sidecar(tmp_path):
    f = tmp_path / "U.bin"
    U = basis_for(sensor(20, seed=0)).eigenvectors
    write_eigenvectors(U, f)
    np.testing.assert_array_equal(read_eigenvectors(f), U)
    Z = basis_for(ring(8), ring_dft=True).eigenvectors
    write_eigenvectors(Z, f)
    np.testing.assert_array_equal(read_eigenvectors(f), Z)
    f.write_bytes(b"nope")
    with pytest.raises(FormatError):
        read_eigenvectors(f)


def test_manifest_id_ignores_destinations(tmp_path):
    src = tmp_path / "in.csv"
    src.write_text("x")
    a = RunManifest(["spectrum", "--graph", str(src), "--out", "a.json"])
    a.add_input(src)
    b = RunManifest(["spectrum", "--graph", str(src), "--out", "b.json"], wall_time=9.0)
    b.add_input(src)
    assert a.id == b.id
    c = RunManifest(["spectrum", "--graph", str(src), "--out", "a.json", "--ring-dft"])
    c.add_input(src)
    assert c.id != a.id
