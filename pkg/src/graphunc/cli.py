"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O failure.
Vertex and band indices on the command line and in files are 1-based.
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from contextlib import nullcontext
from pathlib import Path

import numpy as np

from . import __version__
from .fileio import (
    FormatError, RunManifest, bank_dict, basis_dict, coefficients_csv, dumps, read_bank,
    read_graph, read_signal, read_table, table_csv, table_json, write_eigenvectors,
    write_graph, write_text,
)
from .frames import DESIGNS, FrameError, analysis, design_bank, global_lieb
from .global_bounds import (
    entropic_uncertainty, hausdorff_young, local_folland, lp_uncertainty, support_uncertainty,
)
from .graph import GENERATORS, GenerationError, Graph, GraphError, generate
from .local_bounds import local_bound, local_bounds_all
from .measures import norm
from .repro import MP_HEADER, TABLE1_HEADER, TABLE1_K, default_d_grid, repro_modified_path, repro_table1
from .sampling import run_experiment, summarize
from .spectral import SpectralError, basis_for
from .svg import Series, plot

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

BOUNDS = ("all", "support", "lp", "entropic", "folland", "hausdorff_young", "lieb")
LOCAL_HEADER = ["i0", "k0", "sp", "bound_mid", "bound_outer", "lower", "k_tilde", "i_tilde", "hop"]
INPAINT_HEADER = ["kind", "seed", "trial", "ratio", "strategy", "error"]


class CliError(Exception):
    def __init__(self, msg, code=EXIT_INVALID):
        super().__init__(msg)
        self.code = code


# --- argument helpers ---------------------------------------------------------

def _value(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def _params(items) -> dict:
    out = {}
    for it in items or ():
        key, sep, val = it.partition("=")
        if not sep or not key:
            raise CliError(f"--param expects key=value, got {it!r}")
        out[key] = _value(val)
    return out


def _p(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    if "/" in text:
        a, b = text.split("/", 1)
        return float(a) / float(b)
    return float(text)


def parse_ratios(text: str) -> list[float]:
    """``a:b:step`` (inclusive of ``b``) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise CliError("ratio range must be start:stop:step")
        a, b, s = map(float, parts)
        if s <= 0 or b < a:
            raise CliError("ratio range needs step > 0 and stop >= start")
        k = int(round((b - a) / s))
        return [round(a + i * s, 12) for i in range(k + 1)]
    return [float(x) for x in text.split(",") if x.strip()]


def _indices(text: str | None):
    if text is None:
        return None
    idx = [int(x) for x in text.split(",") if x.strip()]
    if not idx or min(idx) < 1:
        raise CliError("vertex indices are 1-based and must be positive")
    return [i - 1 for i in idx]


def _require_out(args):
    if not args.out:
        raise CliError("--out is required")
    return args.out


def _manifest(args, seeds=None, inputs=()) -> RunManifest:
    m = RunManifest(command=list(args.argv), seeds=seeds or {})
    for p in inputs:
        m.add_input(p)
    return m


def _finish(args, m: RunManifest, out, text: str):
    write_text(out, text)
    m.wall_time = round(time.perf_counter() - args.t0, 6)
    m.write_sidecar(out)


def _table(args, m, out, header, rows):
    fmt = args.format or ("json" if str(out).endswith(".json") else "csv")
    text = table_json(header, rows, m.id) if fmt == "json" else table_csv(header, rows, m.id)
    _finish(args, m, out, text)


def _basis(g: Graph, args):
    return basis_for(g, args.laplacian, args.ring_dft)


# --- commands -----------------------------------------------------------------

def cmd_graph_gen(args):
    out = _require_out(args)
    params = _params(args.param)
    g = generate(args.kind, args.n, seed=args.seed, **params)
    m = _manifest(args, {"graph": args.seed})
    write_graph(g, out, m.id)
    m.wall_time = round(time.perf_counter() - args.t0, 6)
    m.write_sidecar(out)


def cmd_spectrum(args):
    out = _require_out(args)
    g = read_graph(args.graph)
    b = _basis(g, args)
    m = _manifest(args, inputs=[args.graph])
    eig = None
    if args.eigvecs:
        write_eigenvectors(b.eigenvectors, args.eigvecs)
        eig = Path(args.eigvecs).name
    _finish(args, m, out, dumps(basis_dict(b, eig, m.id)))


def cmd_frame_design(args):
    out = _require_out(args)
    g = read_graph(args.graph)
    b = _basis(g, args)
    bank = design_bank(b, args.design, args.k)
    m = _manifest(args, inputs=[args.graph])
    d = bank_dict(bank, b, g, laplacian=args.laplacian, ring_dft=args.ring_dft, manifest_id=m.id)
    _finish(args, m, out, dumps(d))


def _bank_basis(path):
    bank, g, raw = read_bank(path)
    b = basis_for(g, raw.get("laplacian", "combinatorial"), bool(raw.get("ring_dft", False)))
    stored = np.asarray(raw.get("eigenvalues", b.eigenvalues), dtype=float)
    if stored.shape != b.eigenvalues.shape or np.max(np.abs(stored - b.eigenvalues)) > 1e-9 * max(1.0, b.lambda_max):
        raise SpectralError("recomputed spectrum does not match the bank file")
    return bank, g, b


def cmd_frame_analyze(args):
    out = _require_out(args)
    bank, g, b = _bank_basis(args.bank)
    f = read_signal(args.signal)
    if len(f) != g.n:
        raise CliError(f"signal has {len(f)} entries, graph has {g.n} vertices")
    C = analysis(b, bank, f)
    m = _manifest(args, inputs=[args.bank, args.signal])
    _finish(args, m, out, coefficients_csv(C, m.id))


def cmd_table1(args):
    out = _require_out(args)
    seeds = args.seeds if args.seeds else [args.seed if args.seed is not None else 0]
    rows = repro_table1(seeds=seeds, n=args.n, K=args.k, ring_dft=not args.no_ring_dft)
    m = _manifest(args, {"graphs": list(seeds)})
    _table(args, m, out, TABLE1_HEADER, rows)


def _global_reports(b, f, which, p, subset):
    reps = []
    want = lambda name: which in ("all", name)  # noqa: E731
    if want("support"):
        reps += support_uncertainty(b, f)
    if want("lp"):
        if which == "lp" and p > 2:
            raise CliError("the lp inequality needs p in [1, 2]")
        reps += lp_uncertainty(b, f, min(p, 2.0))
    if want("entropic"):
        reps += entropic_uncertainty(b, f / norm(f, 2))
    if want("folland"):
        reps += local_folland(b, f, subset if subset is not None else [int(np.argmax(np.abs(f)))])
    if want("hausdorff_young"):
        reps += hausdorff_young(b, f, p)
    return reps


def cmd_bounds_global(args):
    out = _require_out(args)
    g = read_graph(args.graph)
    f = read_signal(args.signal)
    if len(f) != g.n:
        raise CliError(f"signal has {len(f)} entries, graph has {g.n} vertices")
    if not np.any(f):
        raise CliError("signal must be nonzero")
    b = _basis(g, args)
    p = _p(args.p)
    reps = _global_reports(b, f, args.which, p, _indices(args.subset)) if args.which != "lieb" else []
    if args.which == "lieb" or (args.which == "all" and args.bank):
        if not args.bank:
            raise CliError("--which lieb needs --bank")
        bank, _, bb = _bank_basis(args.bank)
        reps += global_lieb(bb, bank, p, f)
    m = _manifest(args, inputs=[args.graph, args.signal] + ([args.bank] if args.bank else []))
    _finish(args, m, out, dumps([r.to_dict() for r in reps]))


def cmd_bounds_local(args):
    out = _require_out(args)
    bank, g, b = _bank_basis(args.bank)
    inputs = [args.bank]
    if args.graph:
        if read_graph(args.graph) != g:
            raise CliError("--graph differs from the graph stored in the bank")
        inputs.insert(0, args.graph)
    p = _p(args.p)
    if args.all:
        reps = local_bounds_all(b, bank, p, g)
    else:
        if args.i0 is None or args.k0 is None:
            raise CliError("give --all or both --i0 and --k0")
        if not (1 <= args.i0 <= g.n and 1 <= args.k0 <= bank.K):
            raise CliError("--i0/--k0 out of range")
        reps = [local_bound(b, bank, args.i0 - 1, args.k0 - 1, p, g)]
    rows = [[r.i0 + 1, r.k0 + 1, r.sp, r.bound_mid, r.bound_outer, r.lower, r.k_tilde + 1, r.i_tilde + 1, r.hop]
            for r in reps]
    m = _manifest(args, inputs=inputs)
    _table(args, m, out, LOCAL_HEADER, rows)


def cmd_inpaint(args):
    out = _require_out(args)
    seed = args.seed if args.seed is not None else 0
    ratios = parse_ratios(args.ratios)
    res = run_experiment(args.kind, args.n, ratios, args.trials, seed=seed, tau=args.tau,
                         squared=not args.unsquared, graph_params=_params(args.param))
    rows = [[r.kind, r.seed, r.trial, r.ratio, r.strategy, r.error] for r in res]
    m = _manifest(args, {"master": seed})
    _table(args, m, out, INPAINT_HEADER, rows)
    for s in summarize(res):
        print(f"ratio={s['ratio']:.2f} uniform={s['mean_uniform']:.4f} "
              f"nonuniform={s['mean_nonuniform']:.4f} wins={s['wins']}/{s['trials']}", file=sys.stderr)


def read_inpaint(path):
    header, rows = read_table(path)
    if header != INPAINT_HEADER:
        raise FormatError(f"{path}: expected header {','.join(INPAINT_HEADER)}")
    try:
        return [(r[0], float(r[3]), r[4], float(r[5])) for r in rows]
    except (ValueError, IndexError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def cmd_inpaint_plot(args):
    out = _require_out(args)
    recs = read_inpaint(args.input)
    groups = {}
    for kind, ratio, strategy, err in recs:
        groups.setdefault((kind, strategy), {}).setdefault(ratio, []).append(err)
    if not groups:
        raise CliError("no rows to plot")
    series = []
    for (kind, strategy), by in sorted(groups.items()):
        rs = sorted(by)
        series.append(Series(f"{kind} {strategy}", rs, [float(np.mean(by[r])) for r in rs], style="both"))
    plot(series, out, title="Inpainting error", xlabel="sampling ratio m/N", ylabel="mean relative error")
    m = _manifest(args, inputs=[args.input])
    m.write_sidecar(out)


def cmd_repro_mp(args):
    out = _require_out(args)
    grid = np.asarray([float(x) for x in args.d.split(",")]) if args.d else default_d_grid(args.points)
    rows = repro_modified_path(grid, n=args.n, K=args.k)
    m = _manifest(args)
    _table(args, m, out, MP_HEADER, rows)
    if args.svg:
        col = {h: i for i, h in enumerate(MP_HEADER)}
        d = [r[0] for r in rows]
        ser = [Series(name, d, [r[col[name]] for r in rows])
               for name in ("mu", "s1_first", "s1_last", "local_first_k0", "local_first_k2", "local_last_k0", "global")]
        plot(ser, args.svg, title="Modified path", xlabel="d = 1/W12", ylabel="value", logx=True)
        m.write_sidecar(args.svg)


# --- parser -------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--seed", type=int, default=None, help="master random seed")
    c.add_argument("--threads", type=int, default=None, help="cap BLAS threads")
    c.add_argument("--out", default=None, help="output path ('-' for stdout)")
    c.add_argument("--format", choices=("csv", "json"), default=None, help="table output format")
    return c


def _basis_opts(p):
    p.add_argument("--laplacian", choices=("combinatorial", "normalized"), default="combinatorial")
    p.add_argument("--ring-dft", action="store_true", help="use the analytic DFT basis (ring graphs only)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="graphunc", description=__doc__.splitlines()[0], parents=[common])
    ap.add_argument("--version", action="version", version=__version__)
    top = ap.add_subparsers(dest="command", required=True)

    gp = top.add_parser("graph", help="graph construction").add_subparsers(dest="sub", required=True)
    p = gp.add_parser("gen", parents=[common], help="generate a graph (CSV or .mtx by extension)")
    p.add_argument("--kind", required=True, choices=sorted(GENERATORS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--param", action="append", metavar="KEY=VAL", help="generator parameter (repeatable)")
    p.set_defaults(func=cmd_graph_gen)

    p = top.add_parser("spectrum", parents=[common], help="eigenvalues, mu and nu of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--eigvecs", default=None, help="also write eigenvectors to this binary file")
    _basis_opts(p)
    p.set_defaults(func=cmd_spectrum)

    fp = top.add_parser("frame", help="filter bank frames").add_subparsers(dest="sub", required=True)
    p = fp.add_parser("design", parents=[common], help="build a tight filter bank")
    p.add_argument("--graph", required=True)
    p.add_argument("--design", required=True, choices=DESIGNS)
    p.add_argument("--k", type=int, default=TABLE1_K)
    _basis_opts(p)
    p.set_defaults(func=cmd_frame_design)
    p = fp.add_parser("analyze", parents=[common], help="analysis coefficients of a signal")
    p.add_argument("--bank", required=True)
    p.add_argument("--signal", required=True)
    p.set_defaults(func=cmd_frame_analyze)
    p = fp.add_parser("table1", parents=[common], help="coherence and atom-norm table")
    _table1_opts(p)

    bp = top.add_parser("bounds", help="uncertainty bounds").add_subparsers(dest="sub", required=True)
    p = bp.add_parser("global", parents=[common], help="global inequalities for one signal")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--which", choices=BOUNDS, default="all")
    p.add_argument("--p", default="1", help="exponent (number, a/b or inf)")
    p.add_argument("--subset", default=None, help="1-based vertex list for the local energy bound")
    p.add_argument("--bank", default=None, help="bank file for the frame (lieb) bounds")
    _basis_opts(p)
    p.set_defaults(func=cmd_bounds_global)
    p = bp.add_parser("local", parents=[common], help="local bounds for frame atoms")
    p.add_argument("--graph", default=None, help="optional; must match the bank's graph")
    p.add_argument("--bank", required=True)
    p.add_argument("--p", default="inf")
    p.add_argument("--all", action="store_true")
    p.add_argument("--i0", type=int, default=None)
    p.add_argument("--k0", type=int, default=None)
    p.set_defaults(func=cmd_bounds_local)

    ep = top.add_parser("experiment", help="sampling experiments").add_subparsers(dest="sub", required=True)
    p = ep.add_parser("inpaint", parents=[common], help="uniform vs. uncertainty-weighted sampling")
    p.add_argument("--kind", required=True, choices=sorted(GENERATORS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ratios", default="0.1:0.5:0.05")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--tau", type=float, default=10.0, help="heat probe exp(-tau lam / lam_max)")
    p.add_argument("--unsquared", action="store_true", help="weight by ||T_i g|| instead of ||T_i g^2||")
    p.add_argument("--param", action="append", metavar="KEY=VAL", help="graph generator parameter")
    p.set_defaults(func=cmd_inpaint)
    p = ep.add_parser("inpaint-plot", parents=[common], help="plot an inpainting results file")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_inpaint_plot)

    rp = top.add_parser("repro", help="table and figure drivers").add_subparsers(dest="sub", required=True)
    p = rp.add_parser("table1", parents=[common], help="coherence and atom-norm table")
    _table1_opts(p)
    p = rp.add_parser("modified-path", parents=[common], help="sweep the first edge of a modified path")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--k", type=int, default=TABLE1_K)
    p.add_argument("--points", type=int, default=31, help="log-spaced d values in [1, 1000]")
    p.add_argument("--d", default=None, help="explicit comma-separated d values")
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_repro_mp)
    return ap


def _table1_opts(p):
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--k", type=int, default=TABLE1_K)
    p.add_argument("--seeds", type=int, nargs="*", default=None)
    p.add_argument("--no-ring-dft", action="store_true", help="use the solver basis for the ring row")
    p.set_defaults(func=cmd_table1)


def _code(exc: BaseException) -> int:
    if isinstance(exc, CliError):
        return exc.code
    if isinstance(exc, (SpectralError, GenerationError, np.linalg.LinAlgError, ArithmeticError, RuntimeError)):
        return EXIT_NUMERIC
    if isinstance(exc, (GraphError, FrameError, FormatError, ValueError, KeyError, TypeError)):
        return EXIT_INVALID
    if isinstance(exc, OSError):
        return EXIT_IO
    raise exc


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.argv, args.t0 = argv, time.perf_counter()
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_INVALID
    if args.threads:
        from threadpoolctl import threadpool_limits
        limit = threadpool_limits(args.threads)
    else:
        limit = nullcontext()
    try:
        with limit:
            args.func(args)
    except Exception as exc:  # noqa: BLE001 - mapped to exit codes
        code = _code(exc)
        print(f"error: {exc}", file=sys.stderr)
        return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
