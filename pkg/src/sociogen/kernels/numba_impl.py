"""numba-compiled backend: jit wrappers around the shared loop kernels."""

import numba

from . import _loops

louvain_move_pass = numba.njit(cache=True)(_loops.louvain_move_pass)
triangle_counts = numba.njit(cache=True)(_loops.triangle_counts_merge)
fill_remaining_pass = numba.njit(cache=True)(_loops.fill_remaining_pass)
