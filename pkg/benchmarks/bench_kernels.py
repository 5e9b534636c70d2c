"""Time the jit-compiled kernels against the plain-python/numpy fallback.

Both backends run the exact same loop source on the exact same inputs, so
besides the timing table this doubles as an agreement check: every kernel's
outputs must match bit for bit.

Run from the repository root:

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --nodes 4000 --edges 40000 --repeats 5
"""

import argparse
import time

import numpy as np

from sociogen.graph import Graph
from sociogen.kernels import numba_impl, numpy_impl
from sociogen.rmat import RmatParams, generate


def best_of(repeats, fn, *args):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def louvain_inputs(g: Graph):
    weights = np.ones(g.indices.size, np.float64)
    strength = g.degrees.astype(np.float64)
    return {
        "weights": weights,
        "order": np.arange(g.num_nodes, dtype=np.int64),
        "strength": strength,
        "m2": float(weights.sum()),
    }


def run_louvain(impl, g, base, repeats):
    def once():
        comm = np.arange(g.num_nodes, dtype=np.int64)
        comm_tot = base["strength"].copy()
        impl.louvain_move_pass(
            g.indptr, g.indices, base["weights"], base["order"],
            comm, base["strength"], comm_tot, base["m2"], 1.0,
        )
        return comm
    return best_of(repeats, once)


def fill_inputs(g: Graph, rng):
    num_attrs, n_values = 3, np.array([7, 5, 9], np.int64)
    codes = np.full((num_attrs, g.num_nodes), -1, np.int16)
    assigned = np.zeros(g.num_nodes, bool)
    seeds = rng.choice(g.num_nodes, size=max(1, g.num_nodes // 20), replace=False)
    assigned[seeds] = True
    for a in range(num_attrs):
        codes[a, seeds] = rng.integers(0, n_values[a], seeds.size)
    order = np.flatnonzero(~assigned)
    coins = rng.random((order.size, num_attrs))
    picks = rng.random((order.size, num_attrs))
    fallback = np.empty((order.size, num_attrs), np.int16)
    for a in range(num_attrs):
        fallback[:, a] = rng.integers(0, n_values[a], order.size)
    return codes, assigned, order, n_values, coins, picks, fallback


def run_fill(impl, g, inputs, repeats):
    codes0, assigned0, order, n_values, coins, picks, fallback = inputs

    def once():
        codes = codes0.copy()
        assigned = assigned0.copy()
        impl.fill_remaining_pass(
            g.indptr, g.indices, order, codes, assigned,
            n_values, 0.3, coins, picks, fallback,
        )
        return codes
    return best_of(repeats, once)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=1000)
    parser.add_argument("--edges", type=int, default=10_000)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    g = generate(RmatParams(num_nodes=args.nodes, num_edges=args.edges, rng_seed=args.seed))
    rng = np.random.default_rng(args.seed)
    print(f"graph: {g.num_nodes} nodes, {g.num_edges} edges; best of {args.repeats}")

    lv = louvain_inputs(g)
    fi = fill_inputs(g, rng)

    # first calls compile the jit kernels; keep that out of the timings
    run_louvain(numba_impl, g, lv, 1)
    numba_impl.triangle_counts(g.indptr, g.indices)
    run_fill(numba_impl, g, fi, 1)

    rows = []
    for name, runner in (
        ("triangle_counts", lambda impl: best_of(
            args.repeats, impl.triangle_counts, g.indptr, g.indices)),
        ("louvain_move_pass", lambda impl: run_louvain(impl, g, lv, args.repeats)),
        ("fill_remaining_pass", lambda impl: run_fill(impl, g, fi, args.repeats)),
    ):
        t_jit, out_jit = runner(numba_impl)
        t_np, out_np = runner(numpy_impl)
        agree = np.array_equal(np.asarray(out_jit), np.asarray(out_np))
        rows.append((name, t_jit, t_np, agree))

    print(f"\n{'kernel':<22}{'numba':>12}{'numpy':>12}{'speedup':>9}  agree")
    for name, t_jit, t_np, agree in rows:
        print(
            f"{name:<22}{t_jit * 1e3:>10.2f}ms{t_np * 1e3:>10.2f}ms"
            f"{t_np / t_jit:>8.1f}x  {'yes' if agree else 'NO'}"
        )
    if not all(agree for *_, agree in rows):
        raise SystemExit("backend outputs disagree")


if __name__ == "__main__":
    main()
