"""Localized spectral filter frames: kernels, localization, filter-bank design,
analysis operator and the Lieb-type bounds on coefficient concentration."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .global_bounds import BoundReport, _inv
from .measures import norm, sparsity
from .spectral import SpectralBasis, gft

TIGHT_TOL = 1e-9
DESIGNS = ("gabor_uniform", "gabor_adapted", "wavelet_log", "wavelet_adapted")


class FrameError(ValueError):
    pass


# --- kernels ----------------------------------------------------------------

@dataclass(frozen=True)
class Kernel:
    """Spectral kernel ``g_hat``; ``func(lam, basis)`` evaluates it on eigenvalues."""

    name: str
    func: Callable[[np.ndarray, SpectralBasis], np.ndarray]
    params: dict = field(default_factory=dict)

    def sample(self, b: SpectralBasis) -> np.ndarray:
        v = np.asarray(self.func(b.eigenvalues, b))
        v = np.broadcast_to(v, b.eigenvalues.shape).copy()
        if not np.all(np.isfinite(v)):
            raise FrameError(f"kernel {self.name} produced non-finite samples")
        return v

    def __call__(self, b: SpectralBasis) -> np.ndarray:
        return self.sample(b)


def mother_window(t) -> np.ndarray:
    """``sin(pi/2 cos^2(pi t))`` on ``[-1/2, 1/2]``, zero outside.

    Half-overlapping translates satisfy ``w(t)^2 + w(t - 1/2)^2 = 1``.
    """
    t = np.asarray(t, dtype=float)
    return np.where(np.abs(t) <= 0.5, np.sin(0.5 * np.pi * np.cos(np.pi * t) ** 2), 0.0)


def heat(tau: float, normalized: bool = False) -> Kernel:
    """``exp(-tau lam)``, or ``exp(-tau lam / lam_max)`` when ``normalized``."""
    def f(lam, b):
        x = lam / b.lambda_max if normalized else lam
        return np.exp(-tau * x)
    return Kernel("heat", f, {"tau": tau, "normalized": normalized})


def gaussian(tau: float) -> Kernel:
    """``exp(-lam^2 tau^2 / lam_max^2)``."""
    return Kernel("gaussian", lambda lam, b: np.exp(-((lam / b.lambda_max) ** 2) * tau**2), {"tau": tau})


def wavelet(a: float = 1.0) -> Kernel:
    """Band-pass ``sqrt(40) x exp(-40 x / lam_max)`` with ``x = a lam``."""
    return Kernel(
        "wavelet",
        lambda lam, b: math.sqrt(40) * a * lam * np.exp(-40 * a * lam / b.lambda_max),
        {"a": a},
    )


def mother_translate(center: float, width: float) -> Kernel:
    return Kernel("mother_translate", lambda lam, b: mother_window((lam - center) / width),
                  {"center": center, "width": width})


def rect(lo: float, hi: float) -> Kernel:
    return Kernel("rect", lambda lam, b: ((lam >= lo) & (lam <= hi)).astype(float), {"lo": lo, "hi": hi})


def table(values) -> Kernel:
    v = np.asarray(values)
    return Kernel("table", lambda lam, b: v, {"values": v.tolist()})


def lowpass(lam, b, scale: float = 100.0):
    return 1.0 / (1.0 + scale * lam / b.lambda_max)


def dc_indicator() -> Kernel:
    """Indicator of the zero eigenvalue."""
    return Kernel("dc", lambda lam, b: (lam == 0).astype(float))


# --- spectral warps ---------------------------------------------------------

def cdf_warp(b: SpectralBasis) -> Callable[[np.ndarray], np.ndarray]:
    """Piecewise-linear empirical spectral CDF scaled to ``[0, lam_max]``.

    Repeated eigenvalues take the rank of their last occurrence so that the
    map is increasing with ``w(0) = 0`` and ``w(lam_max) = lam_max``.
    """
    lam = b.eigenvalues
    lmax = b.lambda_max
    xs, last = np.unique(lam[::-1], return_index=True)
    ranks = (len(lam) - 1 - last) / (len(lam) - 1)
    return lambda x: np.interp(x, xs, ranks * lmax)


def log_warp(b: SpectralBasis, ref: float | None = None) -> Callable[[np.ndarray], np.ndarray]:
    """``lam_max * ln(1 + x/ref) / ln(1 + lam_max/ref)``; ``ref`` defaults to the smallest nonzero eigenvalue."""
    lmax = b.lambda_max
    if ref is None:
        nz = b.eigenvalues[b.eigenvalues > 0]
        ref = float(nz[0])
    if not ref > 0:
        raise FrameError("log warp reference must be positive")
    den = math.log1p(lmax / ref)
    return lambda x: lmax * np.log1p(np.asarray(x) / ref) / den


def design_warp(b: SpectralBasis, design: str) -> Callable[[np.ndarray], np.ndarray]:
    if design == "gabor_uniform":
        return lambda x: np.asarray(x, dtype=float)
    if design == "gabor_adapted":
        return cdf_warp(b)
    if design == "wavelet_log":
        return log_warp(b)
    if design == "wavelet_adapted":
        c = cdf_warp(b)
        nz = b.eigenvalues[b.eigenvalues > 0]
        lw = log_warp(b, ref=float(c(nz[0])))
        return lambda x: lw(c(x))
    raise FrameError(f"unknown design {design!r}; expected one of {DESIGNS}")


def uniform_translates(K: int, lam_max: float, warp=None) -> list[Kernel]:
    """``K`` half-overlapping mother-window translates tiling ``[0, lam_max]``.

    Kernel ``k`` is ``w(tau(x) - k/2)`` with ``tau(x) = x (K-1) / (2 lam_max)``
    and ``x`` the (optionally warped) eigenvalue. The first and last kernels are
    half windows, so the squared sum is exactly one on the whole interval.
    """
    if K < 2:
        raise FrameError("a filter bank needs K >= 2 kernels")
    warp = warp or (lambda x: x)
    scale = (K - 1) / (2 * lam_max)

    def make(k):
        def f(lam, b):
            x = np.clip(warp(lam), 0.0, lam_max)
            if not np.all(np.isfinite(x)):
                raise FrameError("warp produced non-finite values")
            return mother_window(x * scale - k / 2)
        return Kernel("mother_translate", f, {"k": k, "K": K})

    return [make(k) for k in range(K)]


# --- filter banks -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FilterBank:
    """``K`` kernels sampled on the spectrum: ``values[k, l] = g_hat_k(lam_l)``."""

    values: np.ndarray
    design: str = "custom"
    kernels: tuple = ()
    meta: dict = field(default_factory=dict)

    @property
    def K(self) -> int:
        return self.values.shape[0]

    @property
    def N(self) -> int:
        return self.values.shape[1]

    @property
    def G(self) -> np.ndarray:
        return np.sum(np.abs(self.values) ** 2, axis=0)

    @property
    def A(self) -> float:
        return float(self.N * self.G.min())

    @property
    def B(self) -> float:
        return float(self.N * self.G.max())

    @property
    def is_frame(self) -> bool:
        return self.A > 0

    @property
    def is_tight(self) -> bool:
        return self.B - self.A <= TIGHT_TOL * self.B


def bank_from_kernels(b: SpectralBasis, kernels, design: str = "custom", **meta) -> FilterBank:
    vals = [k.sample(b) if isinstance(k, Kernel) else np.asarray(k) for k in kernels]
    if not vals:
        raise FrameError("a filter bank needs at least one kernel")
    V = np.vstack(vals)
    if V.shape[1] != b.n:
        raise FrameError("kernel tables must have one value per eigenvalue")
    ks = tuple(k for k in kernels if isinstance(k, Kernel))
    return FilterBank(V, design, ks, meta)


def design_bank(b: SpectralBasis, design: str, K: int) -> FilterBank:
    """One of the four tight designs: uniform or spectrum-adapted Gabor, log-warped or
    spectrum-adapted wavelets. All satisfy ``G(lam) = 1`` on the spectrum."""
    warp = design_warp(b, design)
    kernels = uniform_translates(K, b.lambda_max, warp)
    bank = bank_from_kernels(b, kernels, design, K=K)
    if not bank.is_frame:
        raise FrameError(f"{design} with K={K} does not cover the spectrum")
    return bank


# --- localization and analysis -----------------------------------------------

def _kvals(b, g):
    if isinstance(g, Kernel):
        return g.sample(b)
    v = np.asarray(g)
    if v.shape != (b.n,):
        raise FrameError(f"kernel table must have length {b.n}")
    return v


def localize(b: SpectralBasis, g, i: int) -> np.ndarray:
    """``T_i g(n) = sqrt(N) sum_l g_hat(lam_l) conj(u_l(i)) u_l(n)``."""
    if not 0 <= i < b.n:
        raise IndexError(f"vertex {i} out of range")
    gh = _kvals(b, g)
    U = b.eigenvectors
    return math.sqrt(b.n) * (U @ (gh * U[i].conj()))


def atoms(b: SpectralBasis, g) -> np.ndarray:
    """All localizations at once: column ``i`` is ``T_i g``."""
    gh = _kvals(b, g)
    return math.sqrt(b.n) * b.operator(gh)


def atom_norm_map(b: SpectralBasis, g) -> np.ndarray:
    """``||T_i g||_2`` for every vertex ``i``."""
    gh = _kvals(b, g)
    return math.sqrt(b.n) * np.sqrt(np.abs(b.eigenvectors) ** 2 @ (np.abs(gh) ** 2))


def atom_norms(b: SpectralBasis, bank: FilterBank) -> np.ndarray:
    """``(N, K)`` array of ``||T_i g_k||_2``."""
    P = np.abs(b.eigenvectors) ** 2
    return math.sqrt(b.n) * np.sqrt(P @ (np.abs(bank.values.T) ** 2))


def max_atom_norm(b: SpectralBasis, bank: FilterBank) -> float:
    return float(atom_norms(b, bank).max())


def analysis(b: SpectralBasis, bank: FilterBank, f) -> np.ndarray:
    """Analysis coefficients ``C[i, k] = <f, T_i g_k>``, shape ``(N, K)``.

    A 2-D ``(N, S)`` input returns an ``(S, N, K)`` stack.
    """
    f = np.asarray(f)
    if f.shape[0] != b.n or bank.N != b.n:
        raise FrameError("signal, bank and basis sizes differ")
    fh = gft(b, f)
    U = b.eigenvectors
    gc = bank.values.conj()
    if f.ndim == 1:
        return math.sqrt(b.n) * (U @ (gc.T * fh[:, None]))
    # (S, N, K) = U @ (gc.T[None] * fh.T[:, :, None])
    return math.sqrt(b.n) * np.einsum("nl,lk,ls->snk", U, gc.T, fh, optimize=True)


def lieb_bounds(A: float, B: float, max_norm: float, outer_norm: float, p: float):
    if A <= 0:
        raise FrameError("degenerate frame: lower bound A is zero")
    ip = _inv(p)
    c = B ** min(0.5, ip) / A ** max(0.5, ip)
    e = abs(1 - 2 * ip)
    return c * max_norm**e, c * outer_norm**e


def global_lieb(b: SpectralBasis, bank: FilterBank, p: float, f=None) -> list[BoundReport]:
    """Bound on ``s_p`` of analysis coefficients in terms of the largest atom norm,
    and its coherence-based relaxation. With a signal ``f``, also checks
    ``s_p(A f)`` against the first bound."""
    if p < 1:
        raise ValueError("p must lie in [1, inf]")
    mx = max_atom_norm(b, bank)
    outer = math.sqrt(b.n) * b.mu * float(np.sqrt(np.sum(np.abs(bank.values) ** 2, axis=1)).max())
    b1, b2 = lieb_bounds(bank.A, bank.B, mx, outer, p)
    ctx = {"p": p, "A": bank.A, "B": bank.B, "max_atom_norm": mx}
    out = [BoundReport("lieb_atom_vs_coherence", b1, b2, "le", ctx)]
    if f is not None:
        sp = sparsity(analysis(b, bank, f), p)
        out.insert(0, BoundReport("lieb_frame", sp, b1, "le", ctx))
    return out


def frame_energy_check(b: SpectralBasis, bank: FilterBank, f) -> list[BoundReport]:
    """``A ||f||^2 <= ||A f||^2 <= B ||f||^2``."""
    e = norm(analysis(b, bank, f), 2) ** 2
    fe = norm(f, 2) ** 2
    return [
        BoundReport("frame_lower", e, bank.A * fe, "ge"),
        BoundReport("frame_upper", e, bank.B * fe, "le"),
    ]


# --- discrete windowed Fourier transform --------------------------------------

def dwft(f, g) -> np.ndarray:
    """``C[u, k] = sum_n f[n] conj(g[n - u]) exp(-2 pi i k n / N)`` with periodic indices."""
    f = np.asarray(f)
    g = np.asarray(g)
    if f.shape != g.shape or f.ndim != 1:
        raise ValueError("f and g must be 1-D of equal length")
    N = len(f)
    shifts = np.stack([np.roll(g, u) for u in range(N)])  # row u: g[n - u]
    return np.fft.fft(f[None, :] * shifts.conj(), axis=1)


def lieb_discrete_check(f, g, p: float) -> BoundReport:
    """Discrete periodic Lieb inequality: ``||C||_p`` vs ``N^(1/p) ||f|| ||g||``."""
    C = dwft(f, g)
    N = len(f)
    lhs = norm(C, p)
    rhs = N ** _inv(p) * norm(f, 2) * norm(g, 2)
    return BoundReport("lieb_discrete", lhs, rhs, "le" if p >= 2 else "ge", {"p": p, "N": N})
