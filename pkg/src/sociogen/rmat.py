"""Recursive-matrix (RMAT) random graph generation.

Each directed edge draw walks ``depth`` levels of a 2^depth x 2^depth
adjacency matrix, picking one quadrant per level with probabilities
(a, b, c, d); the chosen row/column bits concatenate into source and
destination ids.  Draws happen for all edges at once, one vectorized random
batch per level.  The undirected graph is obtained by dropping self-loops
and collapsing duplicates, so the realized edge count is at most the
requested one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import ConfigError, GraphError
from .graph import Graph


@dataclass(frozen=True)
class RmatParams:
    """Knobs for one generation run.

    The quadrant probabilities follow the usual reading order of the
    adjacency matrix: ``a`` top-left, ``b`` top-right, ``c`` bottom-left,
    ``d`` bottom-right.  Rows are sources, so ``a + b`` is the chance a draw
    keeps its source in the upper half at each level.
    """

    num_nodes: int
    num_edges: int
    a: float = 0.45
    b: float = 0.15
    c: float = 0.15
    d: float = 0.25
    rng_seed: int = 0

    def __post_init__(self):
        if self.num_nodes < 2:
            raise ConfigError("num_nodes must be at least 2")
        if self.num_edges < 1:
            raise ConfigError("num_edges must be at least 1")
        probs = (self.a, self.b, self.c, self.d)
        if any(p < 0.0 or p > 1.0 for p in probs):
            raise ConfigError("quadrant probabilities must lie in [0, 1]")
        if abs(sum(probs) - 1.0) > 1e-9:
            raise ConfigError(f"quadrant probabilities sum to {sum(probs)}, expected 1")

    @property
    def depth(self) -> int:
        """Number of recursion levels: ceil(log2(num_nodes))."""
        return max(1, math.ceil(math.log2(self.num_nodes)))

    @property
    def rho(self) -> float:
        """Per-level probability that a draw's source stays in the top half."""
        return self.a + self.b


def sample_directed_edges(params: RmatParams, rng=None):
    """Raw directed draws before any dedup/self-loop filtering.

    Returns (src, dst) int64 arrays of length ``params.num_edges``.  Ids run
    over the full 2^depth matrix side, which may exceed ``num_nodes``.
    """
    if rng is None:
        rng = np.random.default_rng(params.rng_seed)
    e = params.num_edges
    src = np.zeros(e, np.int64)
    dst = np.zeros(e, np.int64)
    ab = params.a + params.b
    abc = ab + params.c
    for _ in range(params.depth):
        r = rng.random(e)
        row = r >= ab
        col = ((r >= params.a) & (r < ab)) | (r >= abc)
        src = (src << 1) | row
        dst = (dst << 1) | col
    return src, dst


def generate(params: RmatParams) -> Graph:
    """Generate the undirected simple graph for ``params``.

    Self-loops are dropped and duplicate draws collapse, so
    ``result.num_edges <= params.num_edges``.  Ids below ``num_nodes`` are
    always kept (isolated or not); ids at or above ``num_nodes`` exist only
    while they carry an edge and are squeezed down to the first free ids
    otherwise, keeping the id space dense.

    Raises:
        GraphError: if every draw was a self-loop and nothing remains.
    """
    src, dst = sample_directed_edges(params)
    keep = src != dst
    src, dst = src[keep], dst[keep]
    if src.size == 0:
        raise GraphError("no edges: every draw was a self-loop")
    n = params.num_nodes
    overflow = np.unique(np.concatenate([src, dst]))
    overflow = overflow[overflow >= n]
    if overflow.size:
        lookup = np.full(int(overflow.max()) + 1, -1, np.int64)
        lookup[overflow] = n + np.arange(overflow.size)
        high = src >= n
        src = src.copy()
        src[high] = lookup[src[high]]
        high = dst >= n
        dst = dst.copy()
        dst[high] = lookup[dst[high]]
    total = n + overflow.size
    return Graph.from_edges(total, src, dst)


def _log_binom(n, k):
    return gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)


def expected_outdegree_count(k: int, params: RmatParams) -> float:
    """Expected number of sources with raw out-degree k.

    This is the count over the directed multigraph draws (before dedup):
    sum over i of C(depth, i) * C(E, k) * p_i^k * (1 - p_i)^(E - k) with
    p_i = rho^(depth - i) * (1 - rho)^i.  Everything runs in log space; the
    p_i in {0, 1} corners are added exactly.  Summing over k = 0..E yields
    2^depth, the matrix side.
    """
    e = params.num_edges
    if k < 0 or k > e:
        raise ValueError(f"out-degree must lie in [0, {e}]")
    n = params.depth
    rho = params.rho
    i = np.arange(n + 1, dtype=np.float64)
    with np.errstate(divide="ignore"):
        log_p = (n - i) * np.log(rho) if rho > 0 else np.where(i == n, 0.0, -np.inf)
        log_q = i * np.log(1.0 - rho) if rho < 1 else np.where(i == 0, 0.0, -np.inf)
    log_pi = log_p + log_q
    total = 0.0
    regular = []
    for j in range(n + 1):
        if log_pi[j] == -np.inf:  # p_i == 0: only k == 0 survives
            if k == 0:
                total += math.exp(_log_binom(n, j))
        elif log_pi[j] == 0.0:  # p_i == 1: only k == E survives
            if k == e:
                total += math.exp(_log_binom(n, j))
        else:
            pi = math.exp(log_pi[j])
            regular.append(
                _log_binom(n, j)
                + _log_binom(e, k)
                + k * log_pi[j]
                + (e - k) * math.log1p(-pi)
            )
    if regular:
        total += math.exp(logsumexp(np.array(regular)))
    return float(total)


def suggested_filename(params: RmatParams) -> str:
    """Conventional file name, e.g. 1000 x 10000 -> ``1kby10k.csv``."""

    def token(x: int) -> str:
        if x >= 1000 and x % 1000 == 0:
            return f"{x // 1000}k"
        return str(x)

    return f"{token(params.num_nodes)}by{token(params.num_edges)}.csv"
