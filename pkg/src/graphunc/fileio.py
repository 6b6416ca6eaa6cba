"""Reading and writing graphs, signals, filter banks, bases and reports.

Vertex and band indices are 1-based in every file and 0-based in memory.
Floats are written with 17 significant digits so that reading a file back
reproduces the in-memory value bit for bit.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import struct
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.io import mmread

from . import __version__
from .frames import FilterBank
from .graph import Graph, GraphError
from .spectral import SpectralBasis


class FormatError(ValueError):
    """A file could not be parsed into the expected object."""


def fmt(x) -> str:
    """Round-trip-safe text for one number."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


# --- JSON ---------------------------------------------------------------------

def _to_json(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no literal for these; keep them readable as strings.
        return json.dumps(fmt(x)) if not math.isfinite(x) else fmt(x)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _to_json(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_to_json(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_to_json(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _to_json(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _to_json(obj, indent, 0) + "\n"


def _num(x):
    if isinstance(x, str) and x in ("inf", "-inf", "nan"):
        return float(x)
    return x


def loads(text: str):
    def fix(o):
        if isinstance(o, dict):
            return {k: fix(v) for k, v in o.items()}
        if isinstance(o, list):
            return [fix(v) for v in o]
        return _num(o)
    return fix(json.loads(text))


def write_text(path, text: str) -> None:
    if str(path) == "-":
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")


def read_text(path) -> str:
    return Path(path).read_text(encoding="utf-8")


# --- run manifests ------------------------------------------------------------

def file_hash(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


OUTPUT_FLAGS = ("--out", "--svg", "--eigvecs")


@dataclass
class RunManifest:
    """Provenance for one CLI invocation.

    The id hashes everything except the wall time, so repeating a command
    with the same inputs and seeds yields the same id and identical outputs.
    """

    command: list
    seeds: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    version: str = __version__
    wall_time: float = 0.0

    @property
    def id(self) -> str:
        # Output destinations and input file names do not affect the id; input contents do.
        cmd, skip = [], False
        for tok in self.command:
            if skip:
                skip = False
                continue
            if tok in OUTPUT_FLAGS:
                skip = True
                continue
            if tok.split("=", 1)[0] in OUTPUT_FLAGS:
                continue
            cmd.append(tok if tok not in self.inputs else "<input>")
        core = {"command": cmd, "seeds": self.seeds, "inputs": sorted(self.inputs.values()), "version": self.version}
        return hashlib.sha256(json.dumps(core, sort_keys=True).encode()).hexdigest()[:16]

    def add_input(self, path) -> None:
        self.inputs[str(path)] = file_hash(path)

    def to_dict(self) -> dict:
        return {"id": self.id, "command": self.command, "version": self.version,
                "seeds": self.seeds, "inputs": self.inputs, "wall_time": self.wall_time}

    def sidecar(self, out) -> Path:
        return Path(str(out) + ".manifest.json")

    def write_sidecar(self, out) -> None:
        if str(out) != "-":
            self.sidecar(out).write_text(dumps(self.to_dict()), encoding="utf-8")


# --- tables -------------------------------------------------------------------

def table_csv(header, rows, manifest_id: str | None = None) -> str:
    buf = io.StringIO()
    if manifest_id:
        buf.write(f"# manifest_id={manifest_id}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in r])
    return buf.getvalue()


def table_json(header, rows, manifest_id: str | None = None) -> str:
    recs = [dict(zip(header, r)) for r in rows]
    if manifest_id:
        return dumps({"manifest_id": manifest_id, "rows": recs})
    return dumps(recs)


def read_table(path) -> tuple[list[str], list[list[str]]]:
    lines = [ln for ln in read_text(path).splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise FormatError(f"{path}: empty table")
    rows = list(csv.reader(lines))
    return [h.strip() for h in rows[0]], rows[1:]


# --- graphs -------------------------------------------------------------------

def graph_csv(g: Graph, manifest_id: str | None = None) -> str:
    rows = [(int(i) + 1, int(j) + 1, w) for (i, j), w in zip(g.edges, g.weights)]
    return table_csv(["i", "j", "w"], rows, manifest_id)


def graph_mtx(g: Graph, manifest_id: str | None = None) -> str:
    lines = ["%%MatrixMarket matrix coordinate real symmetric"]
    if manifest_id:
        lines.append(f"% manifest_id={manifest_id}")
    lines.append(f"{g.n} {g.n} {g.n_edges}")
    # Lower triangle: row index >= column index.
    lines += [f"{j + 1} {i + 1} {fmt(w)}" for (i, j), w in zip(g.edges, g.weights)]
    return "\n".join(lines) + "\n"


def write_graph(g: Graph, path, manifest_id: str | None = None) -> None:
    text = graph_mtx(g, manifest_id) if str(path).endswith(".mtx") else graph_csv(g, manifest_id)
    write_text(path, text)


def _parse_edges(path):
    header, rows = read_table(path)
    if header != ["i", "j", "w"]:
        raise FormatError(f"{path}: expected header 'i,j,w', got {','.join(header)!r}")
    edges, weights = [], []
    for ln, r in enumerate(rows, start=2):
        if len(r) != 3:
            raise FormatError(f"{path}: line {ln}: expected 3 fields")
        try:
            i, j, w = int(r[0]), int(r[1]), float(r[2])
        except ValueError as exc:
            raise FormatError(f"{path}: line {ln}: {exc}") from exc
        if i < 1 or j < 1:
            raise FormatError(f"{path}: line {ln}: vertex indices are 1-based")
        if i == j:
            raise GraphError(f"{path}: line {ln}: self loop at vertex {i}")
        edges.append((i - 1, j - 1))
        weights.append(w)
    if not edges:
        raise FormatError(f"{path}: no edges")
    return np.array(edges), np.array(weights)


def read_graph(path, n: int | None = None) -> Graph:
    """Load a CSV edge list or a Matrix Market weight matrix.

    For CSV the vertex count is the largest index unless ``n`` is given.
    """
    if str(path).endswith(".mtx"):
        try:
            W = mmread(str(path)).tocoo()
        except (ValueError, IndexError) as exc:
            raise FormatError(f"{path}: {exc}") from exc
        if W.shape[0] != W.shape[1]:
            raise FormatError(f"{path}: weight matrix must be square")
        if np.any(W.row == W.col):
            raise GraphError("self loop in weight matrix")
        keep = W.row > W.col
        if np.any(W.row < W.col):
            # General storage: both triangles present, they must agree.
            dense = W.toarray()
            if not np.allclose(dense, dense.T, rtol=0, atol=0):
                raise GraphError("weight matrix is not symmetric")
        edges = np.column_stack((W.col[keep], W.row[keep]))
        return Graph(W.shape[0], edges, W.data[keep].astype(float))
    edges, weights = _parse_edges(path)
    return Graph(n if n is not None else int(edges.max()) + 1, edges, weights)


# --- signals ------------------------------------------------------------------

def signal_csv(f, manifest_id: str | None = None) -> str:
    f = np.asarray(f)
    idx = range(1, len(f) + 1)
    if np.iscomplexobj(f):
        return table_csv(["i", "re", "im"], zip(idx, f.real, f.imag), manifest_id)
    return table_csv(["i", "value"], zip(idx, f), manifest_id)


def read_signal(path) -> np.ndarray:
    """Signal CSV with header ``i,value`` (real) or ``i,re,im`` (complex)."""
    header, rows = read_table(path)
    if header not in (["i", "value"], ["i", "re", "im"]):
        raise FormatError(f"{path}: expected header 'i,value' or 'i,re,im'")
    try:
        idx = np.array([int(r[0]) for r in rows])
        vals = np.array([[float(x) for x in r[1:]] for r in rows])
    except (ValueError, IndexError) as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if len(idx) == 0 or not np.array_equal(np.sort(idx), np.arange(1, len(idx) + 1)):
        raise FormatError(f"{path}: indices must be exactly 1..N")
    order = np.argsort(idx)
    vals = vals[order]
    return vals[:, 0] + 1j * vals[:, 1] if vals.shape[1] == 2 else vals[:, 0]


def coefficients_csv(C, manifest_id: str | None = None) -> str:
    """Analysis coefficients ``C[i, k]`` as rows ``i,k,re,im``."""
    C = np.asarray(C)
    rows = ((i + 1, k + 1, C[i, k].real, C[i, k].imag) for i in range(C.shape[0]) for k in range(C.shape[1]))
    return table_csv(["i", "k", "re", "im"], rows, manifest_id)


# --- filter banks -------------------------------------------------------------

def bank_dict(bank: FilterBank, b: SpectralBasis, g: Graph, *, laplacian: str = "combinatorial",
              ring_dft: bool = False, manifest_id: str | None = None) -> dict:
    """Self-contained bank description: the graph, the spectrum and the sampled kernels."""
    if np.iscomplexobj(bank.values):
        raise FormatError("only real kernel tables can be serialized")
    d = {
        "design": bank.design,
        "K": bank.K,
        "N": bank.N,
        "A": bank.A,
        "B": bank.B,
        "laplacian": laplacian,
        "ring_dft": ring_dft,
        "graph": {"n": g.n, "kind": g.kind, "edges": [[int(i) + 1, int(j) + 1, float(w)]
                                                       for (i, j), w in zip(g.edges, g.weights)]},
        "eigenvalues": b.eigenvalues,
        "kernels": bank.values,
    }
    if manifest_id:
        d["manifest_id"] = manifest_id
    return d


def read_bank(path) -> tuple[FilterBank, Graph, dict]:
    """Load a bank file; returns the bank, its graph and the raw record."""
    try:
        d = loads(read_text(path))
        edges = np.array([[e[0] - 1, e[1] - 1] for e in d["graph"]["edges"]])
        weights = np.array([e[2] for e in d["graph"]["edges"]], dtype=float)
        values = np.array(d["kernels"], dtype=float)
    except (KeyError, TypeError, IndexError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: malformed bank file ({exc})") from exc
    g = Graph(int(d["graph"]["n"]), edges, weights, kind=d["graph"].get("kind", "custom"))
    if values.ndim != 2 or values.shape[1] != g.n:
        raise FormatError(f"{path}: kernel table shape {values.shape} does not match N={g.n}")
    return FilterBank(values, d.get("design", "custom"), (), {"K": values.shape[0]}), g, d


# --- spectral bases -----------------------------------------------------------

# Eigenvector sidecar: 8-byte magic, then little-endian uint32 version,
# uint64 rows, uint64 cols, uint32 complex flag, then the row-major matrix as
# float64 (complex entries interleaved as real, imaginary).
EIG_MAGIC = b"GUNCEIG\x00"
EIG_HEADER = struct.Struct("<8sIQQI")
EIG_VERSION = 1


def write_eigenvectors(U, path) -> None:
    U = np.asarray(U)
    cplx = np.iscomplexobj(U)
    data = np.ascontiguousarray(U, dtype=np.complex128 if cplx else np.float64)
    with open(path, "wb") as fh:
        fh.write(EIG_HEADER.pack(EIG_MAGIC, EIG_VERSION, U.shape[0], U.shape[1], int(cplx)))
        fh.write(data.view(np.float64).astype("<f8").tobytes())


def read_eigenvectors(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < EIG_HEADER.size:
        raise FormatError(f"{path}: truncated header")
    magic, ver, rows, cols, cplx = EIG_HEADER.unpack_from(raw)
    if magic != EIG_MAGIC or ver != EIG_VERSION:
        raise FormatError(f"{path}: not an eigenvector file")
    width = 2 if cplx else 1
    body = np.frombuffer(raw, dtype="<f8", offset=EIG_HEADER.size)
    if body.size != rows * cols * width:
        raise FormatError(f"{path}: expected {rows}x{cols} entries")
    if cplx:
        return body.view(np.complex128).reshape(rows, cols).copy()
    return body.reshape(rows, cols).copy()


def basis_dict(b: SpectralBasis, eigvec_file: str | None = None, manifest_id: str | None = None) -> dict:
    d = {"n": b.n, "lambda_max": b.lambda_max, "mu": b.mu, "eigenvalues": b.eigenvalues, "nu": b.nu}
    if eigvec_file:
        d["eigenvectors_file"] = eigvec_file
    if manifest_id:
        d["manifest_id"] = manifest_id
    return d
