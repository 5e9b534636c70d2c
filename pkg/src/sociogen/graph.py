"""Undirected graph container plus the node metrics the pipeline needs.

Graphs are stored once as a deduplicated edge array and once as CSR adjacency
(sorted neighbor lists), which is what the kernels and the sparse linear
algebra want.  Node ids are dense: 0 .. num_nodes - 1.  Ids that appear in no
edge are legal and simply have degree zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import kernels
from .errors import GraphError, ParseError


class Graph:
    """Immutable undirected simple graph (no self-loops, no multi-edges)."""

    def __init__(self, num_nodes: int, edges: np.ndarray):
        """Build from a unique, lexicographically sorted (E, 2) array with u < v.

        Use :meth:`from_edges` for raw, possibly messy pairs.
        """
        if num_nodes < 1:
            raise GraphError("graph needs at least one node")
        self.num_nodes = int(num_nodes)
        self.edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        src = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        dst = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        order = np.lexsort((dst, src))
        counts = np.bincount(src, minlength=self.num_nodes)
        self.indptr = np.zeros(self.num_nodes + 1, np.int64)
        np.cumsum(counts, out=self.indptr[1:])
        self.indices = dst[order]
        for arr in (self.edges, self.indptr, self.indices):
            arr.setflags(write=False)

    @classmethod
    def from_edges(cls, num_nodes: int, u, v) -> "Graph":
        """Create a graph from parallel endpoint arrays.

        Self-loops are dropped and duplicate edges (in either orientation)
        collapse to one.

        Args:
            num_nodes: total node count; every id must be < num_nodes.
            u, v: endpoint arrays of equal length.

        Returns:
            The deduplicated simple graph.
        """
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if u.shape != v.shape:
            raise GraphError("endpoint arrays differ in length")
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= num_nodes):
            raise GraphError(f"node id out of range for num_nodes={num_nodes}")
        keep = u != v
        u, v = u[keep], v[keep]
        pairs = np.stack([np.minimum(u, v), np.maximum(u, v)], axis=1)
        if pairs.shape[0]:
            pairs = np.unique(pairs, axis=0)
        return cls(num_nodes, pairs)

    @property
    def num_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor ids of v (read-only view)."""
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        i = np.searchsorted(nbrs, v)
        return i < nbrs.size and nbrs[i] == v

    def adjacency(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency as scipy CSR."""
        data = np.ones(self.indices.size, np.float64)
        return sp.csr_matrix(
            (data, self.indices, self.indptr), shape=(self.num_nodes, self.num_nodes)
        )

    def __repr__(self):
        return f"Graph(num_nodes={self.num_nodes}, num_edges={self.num_edges})"


def load_edge_list(path) -> Graph:
    """Read an edge-list file into a graph.

    Accepts one edge per line, endpoints separated by tabs, spaces, or
    semicolons.  Blank lines are skipped.  Self-loops are dropped (the node
    itself survives with degree zero) and duplicates are merged.  The node
    count is the largest id seen plus one, so ids absent from every line but
    below the maximum become isolated nodes.

    Raises:
        ParseError: on a malformed line, with path and line number.
        GraphError: if no edges remain after filtering.
    """
    path = str(path)
    us, vs = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            parts = line.replace(";", " ").split()
            if len(parts) != 2:
                raise ParseError(
                    f"expected two node ids, got {line!r}", path=path, line=lineno
                )
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(
                    f"non-integer node id in {line!r}", path=path, line=lineno
                ) from None
            if a < 0 or b < 0:
                raise ParseError(
                    f"negative node id in {line!r}", path=path, line=lineno
                )
            us.append(a)
            vs.append(b)
    if not us:
        raise GraphError(f"{path}: file contains no edges")
    u = np.array(us, np.int64)
    v = np.array(vs, np.int64)
    g = Graph.from_edges(int(max(u.max(), v.max())) + 1, u, v)
    if g.num_edges == 0:
        raise GraphError(f"{path}: no edges left after dropping self-loops")
    return g


def save_edge_list(g: Graph, path) -> None:
    """Write one tab-separated edge per line, sorted by (u, v)."""
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in g.edges:
            fh.write(f"{u}\t{v}\n")


def average_degree(g: Graph) -> float:
    return 2.0 * g.num_edges / g.num_nodes


def triangle_counts(g: Graph) -> np.ndarray:
    """Number of triangles through each node."""
    return kernels.triangle_counts(g.indptr, g.indices)


def clustering_coefficients(g: Graph) -> np.ndarray:
    """Local clustering coefficient per node; 0.0 when degree < 2."""
    deg = g.degrees.astype(np.float64)
    tri = triangle_counts(g).astype(np.float64)
    denom = deg * (deg - 1.0)
    out = np.zeros(g.num_nodes)
    mask = denom > 0
    out[mask] = 2.0 * tri[mask] / denom[mask]
    return out


def clustering_coefficient(g: Graph, v: int) -> float:
    """Local clustering of a single node, from first principles."""
    nbrs = g.neighbors(v)
    k = nbrs.size
    if k < 2:
        return 0.0
    closed = 0
    for u in nbrs:
        closed += np.intersect1d(g.neighbors(u), nbrs, assume_unique=True).size
    # each closing edge (u, w) seen from both u and w
    return closed / (k * (k - 1))


def nodes_within_distance(g: Graph, v: int, d: int) -> set[int]:
    """All nodes at hop distance 1..d from v (v itself excluded)."""
    if d < 0:
        raise ValueError("distance must be non-negative")
    seen = {int(v)}
    frontier = [int(v)]
    out: set[int] = set()
    for _ in range(d):
        nxt = []
        for u in frontier:
            for w in g.neighbors(u):
                w = int(w)
                if w not in seen:
                    seen.add(w)
                    out.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return out


@dataclass
class NodeMetrics:
    """Per-node structural scores produced by :func:`hits`."""

    degree: np.ndarray
    clustering: np.ndarray
    authority: np.ndarray
    hub: np.ndarray
    converged: bool
    iterations: int


def hits(g: Graph, max_iters: int = 100, tol: float = 1e-8) -> NodeMetrics:
    """HITS authority/hub scores by power iteration on the adjacency matrix.

    The graph is undirected, so the update is the symmetric A @ x with L2
    normalization each half-step; authority and hub converge to the same
    principal eigenvector.  Scores are L2-normalized.  If the max-abs change
    between successive authority vectors never drops below ``tol`` within
    ``max_iters`` iterations, ``converged`` is False and the last iterate is
    returned anyway.

    Degree and local clustering ride along so callers get the full metric
    set from one call.
    """
    n = g.num_nodes
    adj = g.adjacency()
    auth = np.full(n, 1.0 / np.sqrt(n))
    hub = auth.copy()
    converged = False
    iterations = 0
    for iterations in range(1, max_iters + 1):
        new_auth = adj @ hub
        norm = np.linalg.norm(new_auth)
        if norm == 0.0:
            # edgeless graph: scores collapse to zero and stay there
            auth = np.zeros(n)
            hub = np.zeros(n)
            converged = True
            break
        new_auth /= norm
        new_hub = adj @ new_auth
        new_hub /= np.linalg.norm(new_hub)
        delta = np.max(np.abs(new_auth - auth))
        auth, hub = new_auth, new_hub
        if delta < tol:
            converged = True
            break
    return NodeMetrics(
        degree=g.degrees.copy(),
        clustering=clustering_coefficients(g),
        authority=auth,
        hub=hub,
        converged=converged,
        iterations=iterations,
    )
