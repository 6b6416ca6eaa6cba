"""Global uncertainty inequalities between a signal and its graph Fourier transform.

Every function returns a list of :class:`BoundReport`, one per inequality
link, so that a failing chain points at the exact link that broke.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .measures import entropy, norm, sparsity, support
from .spectral import SpectralBasis, gft

HOLD_TOL = 1e-9


@dataclass
class BoundReport:
    """One evaluated inequality.

    ``direction`` is ``"ge"`` for ``lhs >= rhs`` and ``"le"`` for ``lhs <= rhs``;
    ``slack`` is signed so that a satisfied inequality has ``slack >= 0``.
    """

    name: str
    lhs: float
    rhs: float
    direction: str
    context: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        d = self.lhs - self.rhs
        return d if self.direction == "ge" else -d

    @property
    def holds(self) -> bool:
        return self.slack >= -HOLD_TOL

    def to_dict(self) -> dict:
        out = asdict(self)
        out["slack"] = self.slack
        out["holds"] = self.holds
        return out


def conjugate(p: float) -> float:
    """Hölder conjugate exponent ``q`` with ``1/p + 1/q = 1``."""
    p = float(p)
    if p < 1:
        raise ValueError(f"p must lie in [1, inf], got {p}")
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


def _inv(p):
    return 0.0 if math.isinf(p) else 1.0 / p


def _nonzero(f):
    f = np.asarray(f)
    if not np.any(f):
        raise ValueError("signal must be nonzero")
    return f


def support_uncertainty(b: SpectralBasis, f) -> list[BoundReport]:
    f = _nonzero(f)
    s, sh = support(f), support(gft(b, f))
    geo = math.sqrt(s * sh)
    return [
        BoundReport("support", geo, 1 / b.mu, "ge", {"support": s, "support_hat": sh}),
        BoundReport("support_arithmetic", (s + sh) / 2, geo, "ge"),
    ]


def lp_uncertainty(b: SpectralBasis, f, p: float) -> list[BoundReport]:
    if not 1 <= p <= 2:
        raise ValueError("lp uncertainty needs p in [1, 2]")
    f = _nonzero(f)
    lhs = norm(f, p) * norm(gft(b, f), p)
    rhs = b.mu ** (1 - 2 / p) * norm(f, 2) ** 2
    return [BoundReport("lp", lhs, rhs, "ge", {"p": p})]


def entropic_uncertainty(b: SpectralBasis, f, atol: float = 1e-8) -> list[BoundReport]:
    f = _nonzero(f)
    if abs(norm(f, 2) - 1) > atol:
        raise ValueError("entropic uncertainty needs a unit-norm signal")
    lhs = entropy(f) + entropy(gft(b, f))
    return [BoundReport("entropic", lhs, -2 * math.log(b.mu), "ge")]


def local_folland(b: SpectralBasis, f, subset) -> list[BoundReport]:
    subset = np.unique(np.asarray(subset, dtype=np.int64))
    if subset.size == 0:
        raise ValueError("vertex subset must be nonempty")
    f = np.asarray(f)
    lhs = float(np.sum(np.abs(f[subset]) ** 2))
    mid = subset.size * norm(f, np.inf) ** 2
    right = subset.size * b.mu**2 * norm(gft(b, f), 1) ** 2
    ctx = {"subset_size": int(subset.size)}
    return [
        BoundReport("folland_energy", lhs, mid, "le", ctx),
        BoundReport("folland_fourier", mid, right, "le", ctx),
    ]


def hausdorff_young(b: SpectralBasis, f, p: float) -> list[BoundReport]:
    """Graph Hausdorff-Young inequality in the direction fixed by ``p``, plus the
    concentration-product form ``s_p(f) s_q(f_hat) <= mu^|1 - 2/q|``."""
    f = _nonzero(f)
    q = conjugate(p)
    fh = gft(b, f)
    lhs = norm(fh, q)
    rhs = b.mu ** (1 - 2 * _inv(q)) * norm(f, p)
    ctx = {"p": p, "q": q}
    out = [BoundReport("hausdorff_young", lhs, rhs, "le" if p <= 2 else "ge", ctx)]
    prod = sparsity(f, p) * sparsity(fh, q)
    out.append(BoundReport("sparsity_product", prod, b.mu ** abs(1 - 2 * _inv(q)), "le", ctx))
    return out


def all_global(b: SpectralBasis, f, p: float = 1.0, subset=None) -> list[BoundReport]:
    """Every global inequality for one signal. ``lp`` uses ``min(p, 2)``;
    the entropic bound is evaluated on ``f / ||f||_2``."""
    f = _nonzero(f)
    if subset is None:
        subset = [int(np.argmax(np.abs(f)))]
    reps = support_uncertainty(b, f)
    reps += lp_uncertainty(b, f, min(p, 2.0))
    reps += entropic_uncertainty(b, f / norm(f, 2))
    reps += local_folland(b, f, subset)
    reps += hausdorff_young(b, f, p)
    return reps


def min_slacks(b: SpectralBasis, F, ps=(1.0, 4 / 3, 2.0, 4.0, math.inf), subset=None) -> dict:
    """Vectorized sweep: smallest slack of every global inequality over the columns of ``F``.

    ``F`` is an ``(N, S)`` stack of nonzero signals. Used for large randomized
    checks where building per-signal report objects would dominate runtime.
    The local energy inequality uses ``subset`` (default: first quarter of the vertices).
    """
    F = np.asarray(F)
    if subset is None:
        subset = np.arange(max(1, b.n // 4))
    subset = np.unique(np.asarray(subset, dtype=np.int64))
    Fh = gft(b, F)
    a, ah = np.abs(F), np.abs(Fh)
    n2 = np.sqrt(np.sum(a**2, axis=0))
    mu = b.mu

    def cn(x, p):
        return x.max(axis=0) if math.isinf(p) else np.sum(x**p, axis=0) ** (1 / p)

    def sp(x, p):
        return cn(x, 2) / cn(x, p) if p <= 2 else cn(x, p) / cn(x, 2)

    out = {}
    rt = 1e-10 * a.max(axis=0)
    rth = 1e-10 * ah.max(axis=0)
    s = np.count_nonzero(a > rt, axis=0)
    sh = np.count_nonzero(ah > rth, axis=0)
    geo = np.sqrt(s * sh)
    out["support"] = np.min(geo - 1 / mu)
    out["support_arithmetic"] = np.min((s + sh) / 2 - geo)
    e = (a / n2) ** 2
    eh = (ah / n2) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        H = -np.sum(np.where(e > 0, e * np.log(e), 0.0), axis=0)
        Hh = -np.sum(np.where(eh > 0, eh * np.log(eh), 0.0), axis=0)
    out["entropic"] = np.min(H + Hh + 2 * math.log(mu))
    inf_ = a.max(axis=0)
    m = subset.size
    out["folland_energy"] = np.min(m * inf_**2 - np.sum(a[subset] ** 2, axis=0))
    out["folland_fourier"] = np.min(m * mu**2 * cn(ah, 1) ** 2 - m * inf_**2)
    for p in ps:
        q = conjugate(p)
        if p <= 2:
            out[f"lp[p={p:g}]"] = np.min(cn(a, p) * cn(ah, p) - mu ** (1 - 2 / p) * n2**2)
            out[f"hausdorff_young[p={p:g}]"] = np.min(mu ** (1 - 2 * _inv(q)) * cn(a, p) - cn(ah, q))
        else:
            out[f"hausdorff_young[p={p:g}]"] = np.min(cn(ah, q) - mu ** (1 - 2 * _inv(q)) * cn(a, p))
        out[f"sparsity_product[p={p:g}]"] = np.min(mu ** abs(1 - 2 * _inv(q)) - sp(a, p) * sp(ah, q))
    return {k: float(v) for k, v in out.items()}
