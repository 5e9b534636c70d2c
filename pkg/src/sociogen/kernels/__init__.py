"""Backend selection for the hot-loop kernels.

The environment variable ``SOCIOGEN_BACKEND`` picks the implementation:

* ``numba`` - jit-compiled kernels (error if numba is unavailable)
* ``numpy`` - plain python/numpy fallback
* unset    - numba when importable, else the fallback

Both backends produce identical results; see ``benchmarks/bench_kernels.py``
for the speed difference.
"""

import os

from ..errors import ConfigError
from . import numpy_impl

_requested = os.environ.get("SOCIOGEN_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ConfigError(
        f"SOCIOGEN_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

_active = None
if _requested != "numpy":
    try:
        from . import numba_impl

        _active = numba_impl
    except ImportError:
        if _requested == "numba":
            raise
if _active is None:
    _active = numpy_impl

BACKEND = "numba" if _active is not numpy_impl else "numpy"

louvain_move_pass = _active.louvain_move_pass
triangle_counts = _active.triangle_counts
fill_remaining_pass = _active.fill_remaining_pass


def warmup():
    """Trigger jit compilation on tiny inputs so later calls run hot."""
    import numpy as np

    indptr = np.array([0, 1, 2], np.int64)
    indices = np.array([1, 0], np.int64)
    louvain_move_pass(
        indptr,
        indices,
        np.ones(2),
        np.arange(2, dtype=np.int64),
        np.arange(2, dtype=np.int64),
        np.ones(2),
        np.ones(2),
        2.0,
        1.0,
    )
    triangle_counts(indptr, indices)
    fill_remaining_pass(
        indptr,
        indices,
        np.array([1], np.int64),
        np.zeros((1, 2), np.int16),
        np.array([True, False]),
        np.array([2], np.int64),
        0.3,
        np.zeros((1, 1)),
        np.zeros((1, 1)),
        np.zeros((1, 1), np.int16),
    )
