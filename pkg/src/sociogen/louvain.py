"""Louvain community detection, constrained to a fixed community count.

The classic two-phase loop (local moves until quiet, then aggregate) runs at
a given resolution.  To land on exactly ``target`` communities the detector
first raises the resolution multiplicatively until the raw partition has at
least ``target`` parts (finer resolution means more, smaller communities),
then folds every community ranked 10th or later by size into the last label.
A wall-clock budget bounds the whole search; when it expires with fewer than
``target`` parts the labeling is returned as-is with a warning flag.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ParseError, SociogenError
from .graph import Graph


@dataclass
class CommunityLabeling:
    """Result of community detection.

    ``assignment`` maps node id to final label.  Labels are ranked by size:
    label 0 is the largest community, ties broken by smallest member id.
    ``raw_num_communities`` is what plain Louvain found at the starting
    resolution, before any constraint was applied; ``resolution`` is the
    value that produced the partition actually used.
    """

    assignment: np.ndarray
    num_communities: int
    quality: float
    resolution: float
    raw_num_communities: int
    incomplete: bool = False
    timed_out: bool = False


def modularity(g: Graph, labels, resolution: float = 1.0) -> float:
    """Newman modularity of a labeling, with a resolution multiplier.

    Q = sum over communities of m_c / m - resolution * (D_c / 2m)^2, where
    m_c counts internal edges and D_c sums member degrees.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape[0] != g.num_nodes:
        raise ValueError("labeling length does not match node count")
    m = g.num_edges
    if m == 0:
        return 0.0
    k = int(labels.max()) + 1
    lu = labels[g.edges[:, 0]]
    lv = labels[g.edges[:, 1]]
    internal = np.bincount(lu[lu == lv], minlength=k).astype(np.float64)
    deg_sum = np.bincount(labels, weights=g.degrees.astype(np.float64), minlength=k)
    return float(np.sum(internal / m - resolution * (deg_sum / (2.0 * m)) ** 2))


def _aggregate(indptr, indices, weights, strength, comm_dense, k):
    """Collapse a level onto its communities; self-edges fold into strength."""
    n = strength.shape[0]
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    csrc = comm_dense[src]
    cdst = comm_dense[indices]
    strength_new = np.bincount(comm_dense, weights=strength, minlength=k)
    cross = csrc != cdst
    key = csrc[cross] * np.int64(k) + cdst[cross]
    uniq, inv = np.unique(key, return_inverse=True)
    w_new = np.bincount(inv, weights=weights[cross])
    s_new = uniq // k
    d_new = uniq % k
    counts = np.bincount(s_new, minlength=k)
    indptr_new = np.zeros(k + 1, np.int64)
    np.cumsum(counts, out=indptr_new[1:])
    return indptr_new, d_new.astype(np.int64), w_new, strength_new


def _louvain_once(g: Graph, resolution: float, rng, deadline: float):
    """Run full Louvain at one resolution; returns (labels, timed_out)."""
    indptr = np.array(g.indptr)
    indices = np.array(g.indices)
    weights = np.ones(indices.shape[0], np.float64)
    strength = g.degrees.astype(np.float64)
    m2 = float(strength.sum())
    node_map = np.arange(g.num_nodes, dtype=np.int64)
    if m2 == 0.0:
        return node_map, False
    timed_out = False
    while True:
        n_lv = strength.shape[0]
        comm = np.arange(n_lv, dtype=np.int64)
        comm_tot = strength.copy()
        level_moves = 0
        for _ in range(256):
            order = rng.permutation(n_lv).astype(np.int64, copy=False)
            moves = kernels.louvain_move_pass(
                indptr, indices, weights, order, comm, strength, comm_tot, m2, resolution
            )
            level_moves += moves
            if moves == 0:
                break
            if time.monotonic() > deadline:
                timed_out = True
                break
        uniq, comm_dense = np.unique(comm, return_inverse=True)
        comm_dense = comm_dense.astype(np.int64, copy=False)
        node_map = comm_dense[node_map]
        if level_moves == 0 or uniq.size == n_lv or timed_out:
            return node_map, timed_out
        if time.monotonic() > deadline:
            return node_map, True
        indptr, indices, weights, strength = _aggregate(
            indptr, indices, weights, strength, comm_dense, uniq.size
        )


def _rank_labels(labels, k):
    """Old labels ordered by descending size, ties by smallest member id."""
    sizes = np.bincount(labels, minlength=k)
    first_member = np.full(k, labels.shape[0], np.int64)
    np.minimum.at(first_member, labels, np.arange(labels.shape[0], dtype=np.int64))
    return np.lexsort((first_member, -sizes))


def _relabel(labels, cap=None):
    """Rank-relabel; with ``cap`` everything ranked past cap-1 folds together."""
    k = int(labels.max()) + 1
    ranked = _rank_labels(labels, k)
    new_of_old = np.empty(k, np.int64)
    for pos, old in enumerate(ranked):
        new_of_old[old] = pos if cap is None or pos < cap else cap - 1
    return new_of_old[labels]


def detect_communities(
    g: Graph,
    target: int | None = 10,
    timeout: float = 30.0,
    rng_seed: int = 0,
    resolution: float = 1.0,
    resolution_growth: float = 1.1,
    max_resolution: float = 1e6,
) -> CommunityLabeling:
    """Detect communities, constrained to exactly ``target`` labels.

    Args:
        g: the graph.
        target: required community count; ``None`` disables the constraint
            and returns whatever a single run at ``resolution`` finds.
        timeout: wall-clock budget in seconds for the whole search; checked
            between move passes and between resolution attempts.
        rng_seed: seeds the shuffle of node visit orders, making the result
            reproducible.
        resolution: starting resolution.
        resolution_growth: multiplier applied when a partition comes back
            too coarse.
        max_resolution: hard ceiling on the search, a termination guard.

    Returns:
        A :class:`CommunityLabeling`.  ``incomplete`` is set when the budget
        ran out before ``target`` communities existed; in that case fewer
        labels are present.
    """
    if target is not None and target < 1:
        raise ValueError("target must be positive")
    deadline = time.monotonic() + timeout
    seeds = np.random.SeedSequence(rng_seed)
    res = float(resolution)
    best_labels = None
    best_k = -1
    best_res = res
    raw_first = 0
    timed_out = False
    while True:
        rng = np.random.default_rng(seeds.spawn(1)[0])
        labels, hit = _louvain_once(g, res, rng, deadline)
        timed_out = timed_out or hit
        k = int(labels.max()) + 1
        if best_labels is None:
            raw_first = k
        if k > best_k:
            best_labels, best_k, best_res = labels, k, res
        if target is None or best_k >= target:
            break
        if time.monotonic() >= deadline or res >= max_resolution:
            timed_out = True
            break
        res *= resolution_growth
    if target is None:
        final = _relabel(best_labels)
        num = best_k
        incomplete = False
    else:
        final = _relabel(best_labels, cap=target)
        num = min(best_k, target)
        incomplete = best_k < target
    return CommunityLabeling(
        assignment=final,
        num_communities=num,
        quality=modularity(g, final, best_res),
        resolution=best_res,
        raw_num_communities=raw_first,
        incomplete=incomplete,
        timed_out=timed_out,
    )


def save_communities(labeling, path) -> None:
    """Write ``node<TAB>community`` lines, ascending node id."""
    labels = labeling.assignment if isinstance(labeling, CommunityLabeling) else labeling
    with open(path, "w", encoding="utf-8") as fh:
        for node, label in enumerate(labels):
            fh.write(f"{node}\t{label}\n")


def load_communities(path) -> np.ndarray:
    """Read a community file back into a label array.

    Accepts tab, space, or semicolon separators.  Every node id in
    0..max_id must appear exactly once.
    """
    path = str(path)
    pairs = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            parts = line.replace(";", " ").split()
            if len(parts) != 2:
                raise ParseError(
                    f"expected 'node community', got {line!r}", path=path, line=lineno
                )
            try:
                node, label = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(
                    f"non-integer field in {line!r}", path=path, line=lineno
                ) from None
            if node < 0 or label < 0:
                raise ParseError(
                    f"negative id in {line!r}", path=path, line=lineno
                )
            if node in pairs:
                raise ParseError(f"duplicate node {node}", path=path, line=lineno)
            pairs[node] = label
    if not pairs:
        raise ParseError("no community assignments found", path=path)
    n = max(pairs) + 1
    missing = n - len(pairs)
    if missing:
        raise SociogenError(
            f"{path}: {missing} node(s) in 0..{n - 1} missing a community"
        )
    labels = np.empty(n, np.int64)
    for node, label in pairs.items():
        labels[node] = label
    return labels
