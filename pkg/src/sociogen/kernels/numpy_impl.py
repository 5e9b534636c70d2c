"""Pure-python/numpy backend.

``louvain_move_pass`` and ``fill_remaining_pass`` run the shared loop source
directly so their float semantics match the numba backend bit for bit.
Triangle counting swaps the merge loop for python set intersections, which
are far faster without jit; the result is integer and order-free, so both
backends still agree exactly.
"""

import numpy as np

from ._loops import fill_remaining_pass, louvain_move_pass  # noqa: F401


def triangle_counts(indptr, indices):
    n = indptr.shape[0] - 1
    neighbor_sets = [set(indices[indptr[v]:indptr[v + 1]].tolist()) for v in range(n)]
    counts = np.zeros(n, np.int64)
    for v in range(n):
        sv = neighbor_sets[v]
        for u in sv:
            if u <= v:
                continue
            for w in sv & neighbor_sets[u]:
                counts[w] += 1
    return counts
