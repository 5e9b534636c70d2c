"""Hot-loop kernels, written so the same source compiles under numba.

Every function here is shape-stable, allocation-light, and free of python
containers, which keeps it valid input for ``numba.njit``.  The numpy backend
runs these exact functions as plain python; the numba backend jit-compiles
them.  Sharing the source guarantees both backends execute the same
floating-point operations in the same order, so results are bit-identical.

Randomness never happens inside a kernel.  Callers pre-draw whatever random
numbers a pass needs and hand them in as arrays, which is what makes the
backends interchangeable.
"""

import numpy as np


def louvain_move_pass(indptr, indices, weights, order, comm, strength, comm_tot, m2, resolution):
    """One local-move sweep over ``order``; returns the number of moves.

    ``comm`` and ``comm_tot`` are updated in place.  ``comm_tot[c]`` must hold
    the summed strength of community ``c`` on entry.  Candidate communities
    are scored as ``l_vc - resolution * k_v * tot_c / m2`` with the node's own
    strength removed from its community first; ties keep the current
    community because only a strictly better score triggers a move.
    """
    n = comm.shape[0]
    acc = np.zeros(n, np.float64)
    touched = np.empty(n, np.int64)
    moves = 0
    for idx in range(order.shape[0]):
        v = order[idx]
        kv = strength[v]
        cv = comm[v]
        t = 0
        for e in range(indptr[v], indptr[v + 1]):
            c = comm[indices[e]]
            if acc[c] == 0.0:
                touched[t] = c
                t += 1
            acc[c] += weights[e]
        comm_tot[cv] -= kv
        best_c = cv
        best_score = acc[cv] - resolution * kv * comm_tot[cv] / m2
        for i in range(t):
            c = touched[i]
            if c == cv:
                continue
            score = acc[c] - resolution * kv * comm_tot[c] / m2
            if score > best_score:
                best_score = score
                best_c = c
        comm_tot[best_c] += kv
        if best_c != cv:
            comm[v] = best_c
            moves += 1
        for i in range(t):
            acc[touched[i]] = 0.0
    return moves


def triangle_counts_merge(indptr, indices):
    """Triangles through each node, via sorted-adjacency merge intersection.

    For every edge (v, u) with v < u, each common neighbor w closes one
    triangle; crediting w once per closing edge credits every corner of every
    triangle exactly once.
    """
    n = indptr.shape[0] - 1
    counts = np.zeros(n, np.int64)
    for v in range(n):
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            if u <= v:
                continue
            i = indptr[v]
            j = indptr[u]
            iv = indptr[v + 1]
            ju = indptr[u + 1]
            while i < iv and j < ju:
                a = indices[i]
                b = indices[j]
                if a == b:
                    counts[a] += 1
                    i += 1
                    j += 1
                elif a < b:
                    i += 1
                else:
                    j += 1
    return counts


def fill_remaining_pass(indptr, indices, order, codes, assigned, n_values, p, coins, picks, fallback):
    """Single cumulative pass assigning attribute codes to ``order`` nodes.

    Nodes are visited in the given order; a node assigned earlier in the pass
    counts as an assigned neighbor for later ones.  Per node and attribute:
    with probability 1 - p take the modal value among assigned neighbors
    (ties resolved to the lowest code), otherwise copy a uniformly chosen
    assigned neighbor.  A node with no assigned neighbor takes the pre-drawn
    schema sample in ``fallback``.  ``codes`` (one row per attribute) and
    ``assigned`` are updated in place.
    """
    num_attrs = codes.shape[0]
    max_vals = 0
    for a in range(num_attrs):
        if n_values[a] > max_vals:
            max_vals = n_values[a]
    counts = np.zeros(max_vals, np.int64)
    buf = np.empty(assigned.shape[0], np.int64)
    for i in range(order.shape[0]):
        v = order[i]
        n_asg = 0
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            if assigned[u]:
                buf[n_asg] = u
                n_asg += 1
        for a in range(num_attrs):
            if n_asg == 0:
                code = fallback[i, a]
            elif coins[i, a] < 1.0 - p:
                for j in range(n_asg):
                    counts[codes[a, buf[j]]] += 1
                best = np.int64(-1)
                code = np.int16(0)
                for c in range(n_values[a]):
                    if counts[c] > best:
                        best = counts[c]
                        code = np.int16(c)
                    counts[c] = 0
            else:
                j = int(picks[i, a] * n_asg)
                if j >= n_asg:
                    j = n_asg - 1
                code = codes[a, buf[j]]
            codes[a, v] = code
        assigned[v] = True
