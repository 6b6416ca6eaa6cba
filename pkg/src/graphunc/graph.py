"""Weighted undirected graphs: validation, generators, Laplacians, hop distance.

Vertices are 0-based everywhere inside the library. File formats and the CLI
use 1-based indices; the conversion happens only in :mod:`graphunc.fileio`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, shortest_path
from scipy.spatial import cKDTree

MAX_RETRIES = 200


class GraphError(ValueError):
    """Invalid graph structure or generator parameters."""


class DisconnectedGraphError(GraphError):
    """The graph has more than one connected component."""


class GenerationError(RuntimeError):
    """A random generator could not produce a connected graph within its retry budget."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected, connected, positively weighted graph.

    ``edges`` is an ``(E, 2)`` integer array with ``i < j`` in every row and
    ``weights`` the matching length-``E`` float array. Rows are sorted
    lexicographically so that equal graphs compare equal.
    """

    n: int
    edges: np.ndarray
    weights: np.ndarray
    kind: str = "custom"
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if self.n < 2:
            raise GraphError(f"graph needs at least 2 vertices, got {self.n}")
        if len(edges) != len(weights):
            raise GraphError("edges and weights differ in length")
        if np.any(edges < 0) or np.any(edges >= self.n):
            raise GraphError("edge endpoint out of range")
        if np.any(edges[:, 0] == edges[:, 1]):
            bad = edges[edges[:, 0] == edges[:, 1]][0]
            raise GraphError(f"self loop at vertex {bad[0]}")
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise GraphError("edge weights must be finite and strictly positive")
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        order = np.lexsort((hi, lo))
        edges = np.column_stack((lo, hi))[order]
        weights = weights[order]
        if len(edges) > 1 and np.any(np.all(edges[1:] == edges[:-1], axis=1)):
            raise GraphError("duplicate edge")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", weights)
        ncomp, _ = connected_components(self._sparse(), directed=False)
        if ncomp != 1:
            raise DisconnectedGraphError(f"graph has {ncomp} connected components")

    def _sparse(self):
        e, w = self.edges, self.weights
        rows = np.concatenate((e[:, 0], e[:, 1]))
        cols = np.concatenate((e[:, 1], e[:, 0]))
        return coo_matrix((np.concatenate((w, w)), (rows, cols)), shape=(self.n, self.n)).tocsr()

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        W = np.zeros((self.n, self.n))
        W[self.edges[:, 0], self.edges[:, 1]] = self.weights
        W[self.edges[:, 1], self.edges[:, 0]] = self.weights
        return W

    def degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=1)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.edges, other.edges)
            and np.array_equal(self.weights, other.weights)
        )

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.n_edges}, kind={self.kind!r})"


def laplacian(g: Graph, variant: str = "combinatorial") -> np.ndarray:
    """Dense graph Laplacian ``D - W`` or ``D^-1/2 (D - W) D^-1/2``."""
    W = g.adjacency()
    d = W.sum(axis=1)
    L = np.diag(d) - W
    if variant == "combinatorial":
        return L
    if variant == "normalized":
        s = np.zeros_like(d)
        s[d > 0] = 1.0 / np.sqrt(d[d > 0])
        Ln = s[:, None] * L * s[None, :]
        return 0.5 * (Ln + Ln.T)
    raise ValueError(f"unknown Laplacian variant {variant!r}")


def hop_distance(g: Graph, i: int, j: int) -> int:
    """Number of edges on a shortest unweighted path between ``i`` and ``j``."""
    for v in (i, j):
        if not 0 <= v < g.n:
            raise IndexError(f"vertex {v} out of range")
    if i == j:
        return 0
    return int(hop_distances(g)[i, j])


def hop_distances(g: Graph) -> np.ndarray:
    """All-pairs unweighted hop distances as an ``(N, N)`` integer array."""
    d = shortest_path(g._sparse(), directed=False, unweighted=True)
    return d.astype(np.int64)


# --- generators -------------------------------------------------------------

def _path_edges(n):
    i = np.arange(n - 1)
    return np.column_stack((i, i + 1))


def path(n: int) -> Graph:
    return Graph(n, _path_edges(n), np.ones(n - 1), kind="path", params={"n": n})


def modified_path(n: int, d: float) -> Graph:
    """Path graph whose first edge has weight ``1/d``; ``d = 1`` is the plain path."""
    if not d > 0 or not math.isfinite(d):
        raise GraphError("distance d must be positive and finite")
    w = np.ones(n - 1)
    w[0] = 1.0 / d
    return Graph(n, _path_edges(n), w, kind="modified_path", params={"n": n, "d": d})


def ring(n: int) -> Graph:
    if n < 3:
        raise GraphError("ring needs n >= 3")
    i = np.arange(n)
    return Graph(n, np.column_stack((i, (i + 1) % n)), np.ones(n), kind="ring", params={"n": n})


def comet(n: int, k: int | None = None) -> Graph:
    """Star with ``k`` leaves on vertex 0 plus a tail of ``n - 1 - k`` vertices hanging off it.

    The default ``k`` keeps a tail of 10 vertices (``k = 53`` for ``n = 64``).
    """
    if k is None:
        k = n - 11
    if k < 1 or n - 1 - k < 1:
        raise GraphError(f"comet needs 1 <= k <= n - 2, got n={n}, k={k}")
    leaves = [(0, v) for v in range(1, k + 1)]
    tail = list(range(k + 1, n))
    chain = [(0, tail[0])] + [(a, b) for a, b in zip(tail[:-1], tail[1:])]
    e = np.array(leaves + chain)
    return Graph(n, e, np.ones(len(e)), kind="comet", params={"n": n, "k": k})


def _bridge(n, e, rng):
    """Join the components of an edge list with one random unit edge each."""
    A = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n)) if len(e) else coo_matrix((n, n))
    ncomp, labels = connected_components(A, directed=False)
    extra = []
    for c in range(1, ncomp):
        inside = np.flatnonzero(labels == c)
        before = np.flatnonzero(labels < c)
        extra.append((rng.choice(before), rng.choice(inside)))
    return np.vstack([e.reshape(-1, 2), np.array(extra, dtype=np.int64).reshape(-1, 2)])


def _retry(build, kind, seed, params, bridge=False):
    """Resample until connected. With ``bridge``, the last sample is instead
    connected with unit edges once the retry budget runs out."""
    rng = np.random.default_rng(seed)
    last = None
    for _ in range(MAX_RETRIES):
        out = build(rng)
        if out is None:
            continue
        n, e, w = last = out
        try:
            return Graph(n, e, w, kind=kind, params=params, seed=seed)
        except DisconnectedGraphError:
            continue
    if bridge and last is not None:
        n, e, _ = last
        e = _bridge(n, np.asarray(e, dtype=np.int64).reshape(-1, 2), rng)
        return Graph(n, e, np.ones(len(e)), kind=kind, params={**params, "bridged": True}, seed=seed)
    raise GenerationError(f"{kind}: no connected graph after {MAX_RETRIES} attempts")


def sensor(n: int, seed: int | None = None, neighbors: int = 8) -> Graph:
    """Random geometric graph: uniform points in the unit square, symmetrized k-NN,
    Gaussian weights ``exp(-d^2 / sigma^2)`` with sigma the mean k-NN distance."""
    if n <= neighbors:
        raise GraphError(f"sensor graph needs n > {neighbors}")

    def build(rng):
        pts = rng.random((n, 2))
        dist, idx = cKDTree(pts).query(pts, k=neighbors + 1)
        dist, idx = dist[:, 1:], idx[:, 1:]
        sigma = dist.mean()
        rows = np.repeat(np.arange(n), neighbors)
        lo = np.minimum(rows, idx.ravel())
        hi = np.maximum(rows, idx.ravel())
        pairs, first = np.unique(np.column_stack((lo, hi)), axis=0, return_index=True)
        d = dist.ravel()[first]
        return n, pairs, np.exp(-(d**2) / sigma**2)

    return _retry(build, "sensor", seed, {"n": n, "neighbors": neighbors})


def _bernoulli_edges(rng, prob):
    n = prob.shape[0]
    iu = np.triu_indices(n, 1)
    keep = rng.random(len(iu[0])) < prob[iu]
    return np.column_stack((iu[0][keep], iu[1][keep]))


def _community_sizes(n, c, rng, min_size):
    # Uniform random composition of n into c parts, each at least min_size.
    spare = n - c * min_size
    cuts = np.sort(rng.integers(0, spare + 1, size=c - 1))
    return np.diff(np.concatenate(([0], cuts, [spare]))) + min_size


def community(n: int, c: int | None = None, seed: int | None = None,
              p_in: float = 0.3, p_out: float = 0.01, sizes: str = "random",
              min_size: int = 5) -> Graph:
    """Stochastic block model with ``c`` communities and unit weights.

    ``sizes="random"`` draws community sizes as a uniform random composition of
    ``n`` (each at least ``min_size``); ``sizes="equal"`` splits ``n`` evenly.
    """
    if c is None:
        c = int(math.floor(math.sqrt(n) / 2)) + 1
    if not 1 <= c <= n:
        raise GraphError("number of communities must lie in [1, n]")
    if sizes not in ("random", "equal"):
        raise GraphError(f"sizes must be 'random' or 'equal', got {sizes!r}")
    if sizes == "random" and c * min_size > n:
        raise GraphError("c * min_size exceeds n")
    params = {"n": n, "c": c, "p_in": p_in, "p_out": p_out, "sizes": sizes}

    def build(rng):
        if sizes == "equal":
            counts = [n // c + (r < n % c) for r in range(c)]
        else:
            counts = _community_sizes(n, c, rng, min_size)
        labels = np.repeat(np.arange(c), counts)
        prob = np.where(labels[:, None] == labels[None, :], p_in, p_out)
        e = _bernoulli_edges(rng, prob)
        return n, e, np.ones(len(e))

    return _retry(build, "community", seed, params, bridge=True)


def erdos_renyi(n: int, p: float | None = None, seed: int | None = None) -> Graph:
    if p is None:
        p = 2 * math.log(n) / n
    if not 0 < p <= 1:
        raise GraphError("edge probability must lie in (0, 1]")
    prob = np.full((n, n), p)

    def build(rng):
        e = _bernoulli_edges(rng, prob)
        return n, e, np.ones(len(e))

    return _retry(build, "erdos_renyi", seed, {"n": n, "p": p}, bridge=True)


def _pair_stubs(n, deg, rng):
    # Stub matching that only rejects the offending pairs, restarting when stuck.
    stubs = np.repeat(np.arange(n), deg)
    edges = set()
    while len(stubs):
        rng.shuffle(stubs)
        left = []
        for a, b in zip(stubs[0::2], stubs[1::2]):
            key = (min(a, b), max(a, b))
            if a == b or key in edges:
                left.extend((a, b))
            else:
                edges.add(key)
        if len(left) == len(stubs):
            pending = np.unique(left)
            if not any(
                u != v and (min(u, v), max(u, v)) not in edges
                for u in pending for v in pending
            ):
                return None
        stubs = np.array(left, dtype=np.int64)
    return sorted(edges)


def random_regular(n: int, deg: int = 6, seed: int | None = None) -> Graph:
    if (n * deg) % 2:
        raise GraphError("n * deg must be even for a regular graph")
    if not 1 <= deg < n:
        raise GraphError("degree must lie in [1, n - 1]")

    def build(rng):
        e = _pair_stubs(n, deg, rng)
        if e is None:
            return None
        return n, np.array(e), np.ones(len(e))

    return _retry(build, "random_regular", seed, {"n": n, "deg": deg})


GENERATORS = {
    "path": path,
    "modified_path": modified_path,
    "ring": ring,
    "comet": comet,
    "sensor": sensor,
    "community": community,
    "erdos_renyi": erdos_renyi,
    "random_regular": random_regular,
}
RANDOM_KINDS = {"sensor", "community", "erdos_renyi", "random_regular"}


def generate(kind: str, n: int, seed: int | None = None, **params) -> Graph:
    """Build a graph of the named ``kind``; random kinds are reproducible from ``seed``."""
    try:
        fn = GENERATORS[kind]
    except KeyError:
        raise GraphError(f"unknown graph kind {kind!r}; expected one of {sorted(GENERATORS)}") from None
    if kind in RANDOM_KINDS:
        return fn(n, seed=seed, **params)
    return fn(n, **params)
