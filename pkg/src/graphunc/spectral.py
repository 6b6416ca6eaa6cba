"""Laplacian eigendecomposition, graph Fourier transform and Fourier coherence."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, laplacian, ring

ZERO_EIG_TOL = 1e-10
SYMMETRY_TOL = 1e-12
TIE_RTOL = 1e-12


class SpectralError(ValueError):
    pass


def argmax_lowest(values, rtol: float = TIE_RTOL) -> int:
    """Index of the maximum of ``values``; near-ties (relative ``rtol``) go to the lowest index."""
    v = np.asarray(values, dtype=float).ravel()
    top = v.max()
    return int(np.flatnonzero(v >= top - rtol * abs(top))[0])


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Ascending eigenvalues and orthonormal eigenvectors (column ``l`` pairs with ``eigenvalues[l]``).

    ``nu[i] = max_l |U[i, l]|`` and ``mu = max_i nu[i]`` are computed with
    respect to this particular basis; repeated eigenvalues make them
    basis dependent.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    nu: np.ndarray
    mu: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.eigenvectors)

    @classmethod
    def from_arrays(cls, eigenvalues, eigenvectors) -> "SpectralBasis":
        lam = np.asarray(eigenvalues, dtype=float).copy()
        U = np.asarray(eigenvectors)
        U.setflags(write=False)
        lam.setflags(write=False)
        nu = np.abs(U).max(axis=1)
        nu.setflags(write=False)
        return cls(lam, U, nu, float(nu.max()))

    def operator(self, values) -> np.ndarray:
        """Dense matrix ``sum_l values[l] u_l u_l^H``."""
        U = self.eigenvectors
        return (U * np.asarray(values)[None, :]) @ U.conj().T


def _fix_signs(U):
    a = np.abs(U)
    top = a.max(axis=0)
    first = np.argmax(a >= top[None, :] * (1 - 1e-9), axis=0)
    s = np.sign(U[first, np.arange(U.shape[1])])
    s[s == 0] = 1
    return U * s[None, :]


def eigendecompose(L) -> SpectralBasis:
    """Full symmetric eigendecomposition with the sign and zero-clamp conventions applied.

    Each eigenvector is flipped so that its first entry of largest magnitude is
    nonnegative, and eigenvalues with ``|lambda| < 1e-10`` are set to zero.
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise SpectralError("Laplacian must be square")
    if not np.all(np.isfinite(L)):
        raise SpectralError("Laplacian has non-finite entries")
    if np.max(np.abs(L - L.T), initial=0.0) > SYMMETRY_TOL * max(1.0, np.abs(L).max()):
        raise SpectralError("Laplacian is not symmetric")
    try:
        lam, U = np.linalg.eigh(0.5 * (L + L.T))
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"eigensolver failed: {exc}") from exc
    lam = np.where(np.abs(lam) < ZERO_EIG_TOL, 0.0, lam)
    lam = np.maximum.accumulate(lam)
    return SpectralBasis.from_arrays(lam, _fix_signs(U))


def ring_dft_basis(n: int) -> SpectralBasis:
    """Complex-exponential eigenbasis of the unit-weight ring Laplacian.

    Columns are ordered by ascending eigenvalue ``2 - 2 cos(2 pi k / n)`` with
    frequencies ``0, 1, n-1, 2, n-2, ...``; every entry has modulus ``1/sqrt(n)``.
    """
    ks = [0]
    for k in range(1, n // 2 + 1):
        ks.append(k)
        if n - k != k:
            ks.append(n - k)
    ks = np.array(ks)
    lam = 2 - 2 * np.cos(2 * np.pi * ks / n)
    lam[0] = 0.0
    order = np.argsort(lam, kind="stable")
    ks, lam = ks[order], lam[order]
    t = np.arange(n)
    U = np.exp(2j * np.pi * np.outer(t, ks) / n) / np.sqrt(n)
    return SpectralBasis.from_arrays(lam, U)


def basis_for(g: Graph, variant: str = "combinatorial", ring_dft: bool = False) -> SpectralBasis:
    """Eigenbasis of ``g``; unit-weight rings may use the analytic DFT basis instead."""
    if ring_dft:
        if g.n < 3 or g != ring(g.n) or variant != "combinatorial":
            raise SpectralError("the DFT basis applies only to unit-weight rings (combinatorial Laplacian)")
        return ring_dft_basis(g.n)
    return eigendecompose(laplacian(g, variant))


def _check_len(b, f):
    f = np.asarray(f)
    if f.shape[0] != b.n:
        raise SpectralError(f"signal length {f.shape[0]} does not match N={b.n}")
    return f


def gft(b: SpectralBasis, f) -> np.ndarray:
    """Graph Fourier transform ``f_hat[l] = sum_n f[n] conj(u_l[n])``.

    Accepts a single signal or an ``(N, S)`` stack of signals.
    """
    f = _check_len(b, f)
    return b.eigenvectors.conj().T @ f


def igft(b: SpectralBasis, fhat) -> np.ndarray:
    fhat = _check_len(b, fhat)
    return b.eigenvectors @ fhat


def coherence(b: SpectralBasis) -> tuple[float, np.ndarray]:
    return b.mu, b.nu


def coherence_witness(b: SpectralBasis) -> tuple[int, int]:
    """Lowest ``(i, l)`` (vertex-major) with ``|u_l(i)| = mu``."""
    i = argmax_lowest(b.nu)
    l = argmax_lowest(np.abs(b.eigenvectors[i]))
    return i, l
