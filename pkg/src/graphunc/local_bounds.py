"""Ambiguity functions and local uncertainty bounds for localized filter frames."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .frames import FilterBank, Kernel, _kvals, analysis, atom_norms, atoms, heat, localize, wavelet
from .global_bounds import _inv
from .graph import Graph, hop_distances
from .measures import norm, sparsity
from .spectral import TIE_RTOL, SpectralBasis, argmax_lowest

SANDWICH_TOL = 1e-9


def kernel_product(g, h) -> np.ndarray:
    """Spectral product ``g_hat * conj(h_hat)`` (plain product for real kernels)."""
    return np.asarray(g) * np.conj(np.asarray(h))


def kernel_product_localization(b: SpectralBasis, g, h, i: int, j: int) -> dict:
    """``<T_i g, T_j h>`` evaluated as ``sqrt(N) T_i(g.h)(j)``.

    Returns the value together with the direct inner product and their
    difference so callers can audit the identity.
    """
    gv, hv = _kvals(b, g), _kvals(b, h)
    via = math.sqrt(b.n) * localize(b, kernel_product(gv, hv), i)[j]
    direct = np.vdot(localize(b, hv, j), localize(b, gv, i))
    return {"value": complex(via), "direct": complex(direct), "difference": float(abs(via - direct))}


def ambiguity(b: SpectralBasis, bank: FilterBank, i0: int, k0: int) -> np.ndarray:
    """``(N, K)`` array of ``<T_i0 g_k0, T_i g_k>``: the analysis of one frame atom."""
    return analysis(b, bank, localize(b, bank.values[k0], i0))


def product_localizations(b: SpectralBasis, bank: FilterBank, i0: int, k0: int) -> np.ndarray:
    """``(N, K)`` array with entry ``(i, k) = T_i0(g_k0 . g_k)(i)``."""
    U = b.eigenvectors
    prod = bank.values[k0][None, :] * bank.values.conj()  # (K, N)
    return math.sqrt(b.n) * (U @ (prod.T * U[i0].conj()[:, None]))


def ambiguity_row_norm(b: SpectralBasis, bank: FilterBank, i0: int, k0: int, p: float) -> float:
    """``||A T_i0 g_k0||_p`` through the product-kernel route."""
    P = product_localizations(b, bank, i0, k0)
    return math.sqrt(b.n) * norm(P, p)


@dataclass
class LocalBoundReport:
    i0: int
    k0: int
    p: float
    sp: float
    bound_mid: float
    bound_outer: float
    lower: float
    k_tilde: int
    i_tilde: int
    hop: int | None = None

    def chain_holds(self, tol: float = SANDWICH_TOL) -> bool:
        """``lower <= sp <= bound_mid <= bound_outer``; the lower link is only
        guaranteed for ``p = inf`` and is skipped otherwise."""
        ok = self.sp <= self.bound_mid * (1 + tol) + tol and self.bound_mid <= self.bound_outer * (1 + tol) + tol
        if math.isinf(self.p):
            ok = ok and self.lower <= self.sp * (1 + tol) + tol
        return ok

    def to_dict(self) -> dict:
        return asdict(self)


class _LocalContext:
    """Precomputed quantities shared by every ``(i0, k0)`` evaluation on one bank."""

    def __init__(self, b: SpectralBasis, bank: FilterBank, g: Graph | None = None):
        if not bank.is_frame:
            raise ValueError("local bounds need a frame (A > 0)")
        self.b, self.bank = b, bank
        self.norms = atom_norms(b, bank)  # (N, K)
        self.kernel_norms = np.sqrt(np.sum(np.abs(bank.values) ** 2, axis=1))
        self.hops = hop_distances(g) if g is not None else None

    def report(self, i0: int, k0: int, p: float) -> LocalBoundReport:
        b, bank = self.b, self.bank
        atom2 = self.norms[i0, k0]
        if not atom2 > 0:
            raise ValueError(f"atom ({i0}, {k0}) is zero")
        P = np.abs(product_localizations(b, bank, i0, k0))  # (N, K)
        kt = argmax_lowest(P.max(axis=0))
        it = argmax_lowest(P[:, kt])
        coeffs = math.sqrt(b.n) * P
        sp = sparsity(coeffs, p)
        A, B = bank.A, bank.B
        ip = _inv(p)
        e = abs(1 - 2 * ip)
        c = B ** min(ip, 1 - ip) / math.sqrt(A)
        mid = c * self.norms[it, kt] ** e
        outer = c * (math.sqrt(b.n) * b.nu[it] * self.kernel_norms[kt]) ** e
        hop = int(self.hops[i0, it]) if self.hops is not None else None
        return LocalBoundReport(i0, k0, float(p), float(sp), float(mid), float(outer),
                                float(atom2 / math.sqrt(B)), kt, it, hop)


def local_bound(b: SpectralBasis, bank: FilterBank, i0: int, k0: int, p: float = math.inf,
                g: Graph | None = None) -> LocalBoundReport:
    """Local concentration bound for the analysis of atom ``T_i0 g_k0``.

    ``k_tilde`` maximizes ``||T_i0(g_k0 . g_k)||_inf`` over ``k`` and ``i_tilde``
    maximizes ``|T_i0(g_k0 . g_k_tilde)(i)|``; ties go to the lowest index. Pass
    the graph to also get the hop distance from ``i0`` to ``i_tilde``.
    """
    return _LocalContext(b, bank, g).report(i0, k0, p)


def local_bounds_all(b: SpectralBasis, bank: FilterBank, p: float = math.inf,
                     g: Graph | None = None) -> list[LocalBoundReport]:
    ctx = _LocalContext(b, bank, g)
    return [ctx.report(i0, k0, p) for i0 in range(b.n) for k0 in range(bank.K) if ctx.norms[i0, k0] > 0]


def tightness_hypotheses(b: SpectralBasis, bank: FilterBank, i0: int, k0: int,
                         rtol: float = TIE_RTOL) -> dict:
    """Whether the frame is tight, ``k0`` attains ``max_k ||T_i0(g_k . g_k0)||_inf``
    and ``i0`` attains ``max_j |T_i0 g_k0^2 (j)|`` (ties within ``rtol`` count)."""
    P = np.abs(product_localizations(b, bank, i0, k0))
    colmax = P.max(axis=0)
    top = colmax.max()
    own = P[:, k0]
    return {
        "tight_frame": bool(bank.is_tight),
        "k0_is_argmax": bool(colmax[k0] >= top * (1 - rtol)),
        "i0_is_argmax": bool(own[i0] >= own.max() * (1 - rtol)),
    }


def tight_equality_gap(b: SpectralBasis, bank: FilterBank, i0: int, k0: int) -> float:
    """``|s_inf(A T_i0 g_k0) - ||T_i0 g_k0||_2 / sqrt(A)|``."""
    coeffs = ambiguity(b, bank, i0, k0)
    return abs(sparsity(coeffs, math.inf) - norm(localize(b, bank.values[k0], i0), 2) / math.sqrt(bank.A))


def overlap(b: SpectralBasis, g, j: int, p: float) -> float:
    """Overlap ``||T_j g^2||_p / ||T_j g^2||_2`` of atom ``T_j g`` with all other translates."""
    gv = _kvals(b, g)
    t = localize(b, kernel_product(gv, gv), j)
    d = norm(t, 2)
    if d == 0:
        raise ValueError("degenerate kernel: T_j g^2 vanishes")
    return norm(t, p) / d


def overlap_direct(b: SpectralBasis, g, j: int, p: float) -> float:
    """Overlap from its definition via inner products of translates (oracle route)."""
    T = atoms(b, g)
    ip = T.conj().T @ T[:, j]  # <T_j g, T_i g>
    return norm(ip, p) / norm(ip, 2)


def localization_spread_stats(b: SpectralBasis, g: Graph, family: str = "heat",
                              dilations=(0.1, 0.2, 0.5, 1, 2, 5, 10)) -> list[dict]:
    """How far the peak of ``T_i g_a`` sits from its center ``i`` for dilated kernels.

    ``family`` is ``"heat"`` (``exp(-10 a lam / lam_max)``) or ``"wavelet"``
    (``sqrt(40) a lam exp(-40 a lam / lam_max)``).
    """
    if not len(dilations):
        raise ValueError("need at least one dilation")
    hops = hop_distances(g)
    rows = []
    for a in dilations:
        if family == "heat":
            k: Kernel = heat(10 * a, normalized=True)
        elif family == "wavelet":
            k = wavelet(a)
        else:
            raise ValueError(f"unknown kernel family {family!r}")
        T = np.abs(atoms(b, k))  # column i = |T_i g|
        peak = T.max(axis=0)
        center = T[np.arange(b.n), np.arange(b.n)]
        it = np.array([argmax_lowest(T[:, i]) for i in range(b.n)])
        h = hops[np.arange(b.n), it]
        with np.errstate(invalid="ignore", divide="ignore"):
            rel = np.where(peak > 0, (peak - center) / peak, 0.0)
        rows.append({
            "family": family,
            "a": float(a),
            "mean_rel_error": float(rel.mean()),
            "mean_hop": float(h.mean()),
            "max_hop": int(h.max()),
        })
    return rows
