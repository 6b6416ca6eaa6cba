"""Uncertainty-weighted random sampling and Tikhonov inpainting on graphs."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .frames import Kernel, _kvals, atom_norm_map, heat, lowpass
from .graph import generate, laplacian
from .spectral import SpectralBasis, eigendecompose, gft, igft

# SeedSequence stream ids for the per-trial random streams.
GRAPH_STREAM, SIGNAL_STREAM, UNIFORM_STREAM, ADAPTED_STREAM = 0, 1, 2, 3


@dataclass(frozen=True)
class SamplingMask:
    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim != 1 or idx.size == 0:
            raise ValueError("mask must hold at least one vertex")
        if np.any(np.diff(idx) <= 0):
            raise ValueError("mask indices must be strictly increasing")
        object.__setattr__(self, "indices", idx)

    @property
    def m(self) -> int:
        return int(self.indices.size)


@dataclass
class ExperimentResult:
    kind: str
    seed: int
    trial: int
    ratio: float
    strategy: str
    error: float

    def to_dict(self):
        return asdict(self)


def smooth_signal(b: SpectralBasis, h=None, seed=None) -> np.ndarray:
    """Gaussian noise filtered by ``h`` (default ``1 / (1 + 100 lam / lam_max)``)."""
    hv = _kvals(b, h) if h is not None else lowpass(b.eigenvalues, b)
    w = np.random.default_rng(seed).standard_normal(b.n)
    x = igft(b, hv * gft(b, w))
    return x.real if np.isrealobj(w) and not b.is_complex else x


def sampling_distribution(b: SpectralBasis, g: Kernel | None = None, squared: bool = True) -> np.ndarray:
    """Sampling probabilities proportional to ``||T_i g^2||_2`` (or ``||T_i g||_2``
    with ``squared=False``). The default probe is ``exp(-10 lam / lam_max)``."""
    gv = _kvals(b, g if g is not None else heat(10.0, normalized=True))
    if np.any(np.imag(gv) != 0) or np.any(np.real(gv) < 0):
        raise ValueError("probe kernel must be nonnegative")
    w = atom_norm_map(b, np.abs(gv) ** 2 if squared else gv)
    tot = w.sum()
    if not tot > 0:
        raise ValueError("all localized kernel norms vanish")
    return w / tot


def draw_mask(p, m: int, seed=None) -> SamplingMask:
    """``m`` distinct vertices drawn one at a time with probabilities ``p``,
    renormalized over the remaining vertices after each draw."""
    p = np.asarray(p, dtype=float)
    n = len(p)
    if not 1 <= m <= n:
        raise ValueError(f"cannot draw {m} of {n} vertices")
    if np.any(p < 0) or not p.sum() > 0:
        raise ValueError("probabilities must be nonnegative with positive sum")
    if m == n:
        return SamplingMask(np.arange(n))
    idx = np.random.default_rng(seed).choice(n, size=m, replace=False, p=p / p.sum())
    return SamplingMask(np.sort(idx))


def inpaint(L, mask: SamplingMask | np.ndarray, y) -> np.ndarray:
    """Minimizer of ``x^T L x`` with ``x[mask] = y``: harmonic extension off the mask."""
    L = np.asarray(L, dtype=float)
    idx = mask.indices if isinstance(mask, SamplingMask) else np.asarray(mask, dtype=np.int64)
    y = np.asarray(y, dtype=float)
    n = L.shape[0]
    if idx.size == 0:
        raise ValueError("mask must be nonempty")
    if y.shape != idx.shape:
        raise ValueError("need one observation per masked vertex")
    free = np.setdiff1d(np.arange(n), idx)
    x = np.empty(n)
    x[idx] = y
    if free.size:
        try:
            cf = cho_factor(L[np.ix_(free, free)])
        except np.linalg.LinAlgError as exc:
            raise RuntimeError("reduced Laplacian block is singular") from exc
        x[free] = cho_solve(cf, -L[np.ix_(free, idx)] @ y)
    return x


def _seed(master, trial, stream, ratio_idx=0):
    ss = np.random.SeedSequence([int(master), int(trial), int(stream), int(ratio_idx)])
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def run_experiment(kind: str, n: int, ratios, trials: int, seed: int = 0,
                   tau: float = 10.0, squared: bool = True, graph_params=None) -> list[ExperimentResult]:
    """Uniform vs. uncertainty-weighted sampling followed by inpainting.

    Each trial draws a fresh graph and smooth signal, shared by both strategies
    and all ratios; every (trial, ratio, strategy) gets its own mask seed.
    """
    ratios = [float(r) for r in ratios]
    if any(not 0 < r <= 1 for r in ratios):
        raise ValueError("ratios must lie in (0, 1]")
    out = []
    for t in range(trials):
        gseed = _seed(seed, t, GRAPH_STREAM)
        g = generate(kind, n, seed=gseed, **(graph_params or {}))
        L = laplacian(g)
        b = eigendecompose(L)
        x = smooth_signal(b, seed=_seed(seed, t, SIGNAL_STREAM))
        nx = np.linalg.norm(x)
        p_adapt = sampling_distribution(b, heat(tau, normalized=True), squared=squared)
        p_unif = np.full(n, 1.0 / n)
        for r_i, r in enumerate(ratios):
            m = max(1, int(round(r * n)))
            for strategy, p, stream in (("uniform", p_unif, UNIFORM_STREAM),
                                        ("nonuniform", p_adapt, ADAPTED_STREAM)):
                mask = draw_mask(p, m, seed=_seed(seed, t, stream, r_i))
                xr = inpaint(L, mask, x[mask.indices])
                err = float(np.linalg.norm(xr - x) / nx)
                out.append(ExperimentResult(kind, gseed, t, r, strategy, err))
    return out


def summarize(results) -> list[dict]:
    """Mean error per (ratio, strategy), plus the paired win count per ratio."""
    by = {}
    for r in results:
        by.setdefault((r.ratio, r.trial), {})[r.strategy] = r.error
    rows = {}
    for (ratio, _), d in sorted(by.items()):
        row = rows.setdefault(ratio, {"ratio": ratio, "uniform": [], "nonuniform": [], "wins": 0, "ties": 0})
        row["uniform"].append(d["uniform"])
        row["nonuniform"].append(d["nonuniform"])
        if d["nonuniform"] < d["uniform"]:
            row["wins"] += 1
        elif d["nonuniform"] == d["uniform"]:
            row["ties"] += 1
    out = []
    for ratio, row in sorted(rows.items()):
        out.append({
            "ratio": ratio,
            "mean_uniform": float(np.mean(row["uniform"])),
            "mean_nonuniform": float(np.mean(row["nonuniform"])),
            "wins": row["wins"],
            "ties": row["ties"],
            "trials": len(row["uniform"]),
        })
    return out
