"""Uncertainty principles for signals on weighted graphs.

Graph construction, graph Fourier analysis, localized spectral filter
frames, global and local uncertainty bounds, and uncertainty-weighted
sampling for inpainting.
"""
__version__ = "0.1.0"

from .graph import Graph, GraphError, generate, laplacian  # noqa: E402
from .spectral import SpectralBasis, basis_for, eigendecompose, gft, igft  # noqa: E402
from .frames import FilterBank, design_bank  # noqa: E402

__all__ = [
    "FilterBank", "Graph", "GraphError", "SpectralBasis", "basis_for", "design_bank",
    "eigendecompose", "generate", "gft", "igft", "laplacian",
]
