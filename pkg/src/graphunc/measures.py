"""Concentration measures for signals and coefficient arrays."""
from __future__ import annotations

import math

import numpy as np

SUPPORT_RTOL = 1e-10


def _p(p) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"p must lie in [1, inf], got {p}")
    return p


def norm(f, p) -> float:
    """l^p norm of the flattened array; ``p = inf`` gives the max-norm."""
    p = _p(p)
    a = np.abs(np.asarray(f)).ravel()
    if math.isinf(p):
        return float(a.max(initial=0.0))
    if p == 1:
        return float(a.sum())
    # Scale by the largest entry so tiny or huge signals neither underflow nor overflow.
    m = a.max(initial=0.0)
    if m == 0:
        return 0.0
    if p == 2:
        s = a / m
        return float(m * np.sqrt(np.sum(s * s)))
    return float(m * np.sum((a / m) ** p) ** (1 / p))


def support(f, rtol: float = SUPPORT_RTOL) -> int:
    """Number of entries with ``|f(n)| > rtol * max|f|``."""
    a = np.abs(np.asarray(f)).ravel()
    m = a.max(initial=0.0)
    if m == 0:
        return 0
    return int(np.count_nonzero(a > rtol * m))


def sparsity(f, p) -> float:
    """Norm ratio ``s_p``: 1 for a single spike, ``N^-|1/p - 1/2|`` for a flat signal."""
    p = _p(p)
    n2 = norm(f, 2)
    if n2 == 0:
        raise ValueError("sparsity of the zero signal is undefined")
    np_ = norm(f, p)
    return n2 / np_ if p <= 2 else np_ / n2


def entropy(f, strict: bool = False, atol: float = 1e-8) -> float:
    """Shannon entropy ``-sum |f|^2 ln |f|^2`` of a unit-energy signal.

    With ``strict=True`` a signal whose 2-norm differs from 1 by more than
    ``atol`` is rejected; otherwise it is normalized first.
    """
    a = np.abs(np.asarray(f)).ravel()
    n2 = norm(a, 2)
    if n2 == 0:
        raise ValueError("entropy of the zero signal is undefined")
    if abs(n2 - 1) > atol:
        if strict:
            raise ValueError(f"signal must have unit 2-norm, got {n2:.6g}")
        a = a / n2
    e = a * a
    e = e[e > 0]
    return float(-np.sum(e * np.log(e)))


def norms_columns(F, p) -> np.ndarray:
    """Column-wise l^p norms of a 2-D array (vectorized helper for sweeps)."""
    p = _p(p)
    a = np.abs(np.asarray(F))
    if math.isinf(p):
        return a.max(axis=0)
    return np.sum(a**p, axis=0) ** (1 / p)


def sparsity_columns(F, p) -> np.ndarray:
    p = _p(p)
    n2 = norms_columns(F, 2)
    np_ = norms_columns(F, p)
    return n2 / np_ if p <= 2 else np_ / n2
