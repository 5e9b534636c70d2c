"""Seed selection: high-authority nodes, spread out within each community.

The target count is sigma = min(floor(|V| / avg_degree), ceil(percent * |V| /
100)).  Within a community no two seeds may sit closer than shortest-path
distance 3, so picking a seed blocks its radius-2 ball for that community.
Per-community quotas follow community size but are capped at a measured
packing capacity, so an infeasible demand never triggers a long decrement
cascade.  Selection makes several noisy-ranked tries; if a try cannot place
the full quota within its inspection budget, sigma drops by one and the
search restarts.  A final greedy pass tops the set back up toward the
original target wherever room remains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GraphError
from .graph import Graph, average_degree, hits, nodes_within_distance
from .profiles import GenerationConfig


def stage_rng(master_seed: int, stage: int) -> np.random.Generator:
    """Independent, reproducible stream for one pipeline stage."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(stage,)))


# pipeline stage offsets shared with the propagator
STAGE_SEEDS = 0
STAGE_NEIGHBORS = 1
STAGE_REMAINDER = 2
STAGE_WEIGHTS = 3
STAGE_CLASS = 4


@dataclass
class SeedSet:
    """Chosen seeds plus the bookkeeping the run report wants."""

    seeds: np.ndarray
    per_community: dict[int, list[int]]
    sigma_requested: int
    sigma_achieved: int
    coverage: float
    covered: np.ndarray
    warnings: list[str] = field(default_factory=list)


def requested_seed_count(g: Graph, seeds_percent: float) -> int:
    """min(floor(|V|/avg_degree), ceil(percent of |V|)); the density cap wins
    on dense graphs."""
    phi = average_degree(g)
    if phi == 0.0:
        raise GraphError("graph has no edges, cannot place seeds")
    cap = int(g.num_nodes / phi)
    want = math.ceil(seeds_percent * g.num_nodes / 100.0)
    return max(1, min(cap, want))


def _quotas(sizes: dict[int, int], caps: dict[int, int], sigma: int) -> dict[int, int]:
    """Largest-remainder split of sigma over communities, capped per community.

    Shares are proportional to community size; ``caps`` bounds what each
    community can actually host, and leftover units spill over to communities
    with room until either sigma or the total capacity is exhausted.
    """
    total = sum(sizes.values())
    quotas = {}
    fracs = []
    for c in sorted(sizes):
        exact = sigma * sizes[c] / total if total else 0.0
        quotas[c] = min(int(exact), caps[c])
        fracs.append((-(exact - int(exact)), -sizes[c], c))
    fracs.sort()
    leftover = sigma - sum(quotas.values())
    while leftover > 0:
        progressed = False
        for _, _, c in fracs:
            if leftover <= 0:
                break
            if quotas[c] < caps[c]:
                quotas[c] += 1
                leftover -= 1
                progressed = True
        if not progressed:
            break
    return quotas


def _ranked(nodes: np.ndarray, authority: np.ndarray, rng) -> np.ndarray:
    """Authority-descending order with random tie-noise.

    The noise is a small fraction of the community's score spread, so it
    reshuffles near-ties between tries without letting weak nodes jump the
    queue; iterating the result front-first realizes the
    top-quartile-then-widen preference.
    """
    scores = authority[nodes]
    spread = float(scores.std())
    noise = rng.normal(0.0, 0.05 * spread if spread > 0 else 1e-12, nodes.size)
    return nodes[np.argsort(-(scores + noise), kind="stable")]


def _greedy_pick(g, ranked, limit):
    """Walk a ranked list picking nodes until ``limit``, blocking each pick's
    radius-2 ball.  Returns the picks and the resulting blocked mask."""
    picked = []
    mask = np.zeros(g.num_nodes, bool)
    for v in ranked:
        if len(picked) == limit:
            break
        v = int(v)
        if mask[v]:
            continue
        picked.append(v)
        mask[v] = True
        for w in nodes_within_distance(g, v, 2):
            mask[w] = True
    return picked, mask


def _try_fill(g, comm_nodes, quotas, authority, rng, budget):
    """One try: greedily fill every community quota; None when over budget
    or any quota cannot be met."""
    chosen = {}
    blocked = {}
    inspections = 0
    for c in sorted(comm_nodes):
        if quotas.get(c, 0) == 0:
            chosen[c] = []
            continue
        picked = []
        mask = np.zeros(g.num_nodes, bool)
        for v in _ranked(comm_nodes[c], authority, rng):
            if len(picked) == quotas[c]:
                break
            inspections += 1
            if inspections > budget:
                return None
            v = int(v)
            if mask[v]:
                continue
            picked.append(v)
            mask[v] = True
            for w in nodes_within_distance(g, v, 2):
                mask[w] = True
        if len(picked) < quotas[c]:
            return None
        chosen[c] = picked
        blocked[c] = mask
    return chosen, blocked


def assign_seeds(
    g: Graph,
    labeling,
    config: GenerationConfig,
    metrics=None,
    rng=None,
    tries: int = 10,
    iterations: int | None = None,
) -> SeedSet:
    """Pick seeds for every community of ``labeling``.

    Args:
        g: the graph.
        labeling: a CommunityLabeling or plain label array covering ``g``.
        config: supplies ``seeds_percent`` and the default RNG seed.
        metrics: optional precomputed :func:`sociogen.graph.hits` result.
        rng: optional generator; defaults to the seed-stage stream derived
            from ``config.rng_seed``, so standalone calls match pipeline
            runs.
        tries: noisy-ranked attempts per sigma value before decrementing.
        iterations: inspection budget per try (default 100 * sigma).

    Returns:
        A :class:`SeedSet`; ``warnings`` lists communities left seedless.
    """
    labels = getattr(labeling, "assignment", labeling)
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape[0] != g.num_nodes:
        raise GraphError("labeling does not cover the graph")
    if metrics is None:
        metrics = hits(g)
    if rng is None:
        rng = stage_rng(config.rng_seed, STAGE_SEEDS)
    sigma_requested = requested_seed_count(g, config.seeds_percent)
    communities = [int(c) for c in np.unique(labels)]
    comm_nodes = {c: np.flatnonzero(labels == c) for c in communities}
    sizes = {c: int(comm_nodes[c].size) for c in communities}

    # one unbounded greedy pass per community measures how many seeds it can
    # actually host; quotas above that would only stall the decrement loop
    capacities = {
        c: len(_greedy_pick(g, _ranked(comm_nodes[c], metrics.authority, rng), sizes[c])[0])
        for c in communities
    }

    result = None
    sigma = sigma_requested
    while sigma >= 1 and result is None:
        quotas = _quotas(sizes, capacities, sigma)
        budget = iterations if iterations is not None else 100 * sigma
        for _ in range(tries):
            attempt = _try_fill(g, comm_nodes, quotas, metrics.authority, rng, budget)
            if attempt is not None:
                result = attempt
                break
        sigma -= 1
    if result is None:
        raise GraphError("could not place even a single seed")
    chosen, blocked = result

    # augmentation: climb back toward the original target, never past it
    total = sum(len(v) for v in chosen.values())
    if total < sigma_requested:
        order = np.argsort(-metrics.authority, kind="stable")
        for v in order:
            if total >= sigma_requested:
                break
            v = int(v)
            c = int(labels[v])
            if c not in blocked:
                blocked[c] = np.zeros(g.num_nodes, bool)
            if blocked[c][v]:
                continue
            chosen.setdefault(c, []).append(v)
            total += 1
            blocked[c][v] = True
            for w in nodes_within_distance(g, v, 2):
                blocked[c][w] = True

    warnings = [
        f"community {c} has no seeds" for c in communities if not chosen.get(c)
    ]
    all_seeds = np.array(sorted(s for lst in chosen.values() for s in lst), np.int64)
    covered = np.zeros(g.num_nodes, bool)
    covered[all_seeds] = True
    for s in all_seeds:
        covered[g.neighbors(int(s))] = True
    return SeedSet(
        seeds=all_seeds,
        per_community={c: sorted(chosen.get(c, [])) for c in communities},
        sigma_requested=sigma_requested,
        sigma_achieved=int(all_seeds.size),
        coverage=float(covered.sum() / g.num_nodes),
        covered=covered,
        warnings=warnings,
    )


def verify_seed_distances(g: Graph, seed_set: SeedSet) -> list[tuple[int, int, int]]:
    """Independent BFS audit: (u, v, distance) for every same-community seed
    pair closer than 3.  Empty list means the constraint holds."""
    violations = []
    for c, seeds in seed_set.per_community.items():
        for i, u in enumerate(seeds):
            near = nodes_within_distance(g, u, 2)
            for v in seeds[i + 1:]:
                if v in near:
                    dist = 1 if g.has_edge(u, v) else 2
                    violations.append((u, v, dist))
    return violations


@dataclass
class RepresentativenessReport:
    degree_distance: float
    clustering_distance: float
    delta: float

    @property
    def degree_ok(self) -> bool:
        return self.degree_distance <= self.delta

    @property
    def clustering_ok(self) -> bool:
        return self.clustering_distance <= self.delta

    @property
    def passed(self) -> bool:
        return self.degree_ok and self.clustering_ok


def _degree_histogram(degrees: np.ndarray, max_degree: int) -> np.ndarray:
    """Normalized histogram over logarithmic degree bins (0 kept separate)."""
    top = max(1, int(max_degree))
    n_bins = int(math.floor(math.log2(top))) + 2  # bin 0 for degree 0
    hist = np.zeros(n_bins)
    for d in degrees:
        idx = 0 if d == 0 else 1 + int(math.floor(math.log2(int(d))))
        hist[idx] += 1
    return hist / max(1, degrees.size)


def _clustering_histogram(values: np.ndarray) -> np.ndarray:
    hist, _ = np.histogram(values, bins=10, range=(0.0, 1.0))
    return hist / max(1, values.size)


def check_representativeness(
    g: Graph, seed_set: SeedSet, metrics=None, delta: float = 0.05
) -> RepresentativenessReport:
    """Compare seed-neighborhood metric distributions to the whole graph.

    The sample is the union of the seeds' neighborhoods.  For degree and
    local clustering, the normalized histogram of the sample (degree in log2
    bins, clustering in 10 uniform bins) is compared to the whole-graph
    histogram by L1 distance; each metric passes when its distance is at
    most ``delta``.
    """
    if metrics is None:
        metrics = hits(g)
    sample = np.zeros(g.num_nodes, bool)
    for s in seed_set.seeds:
        sample[g.neighbors(int(s))] = True
    idx = np.flatnonzero(sample)
    max_deg = int(metrics.degree.max()) if g.num_nodes else 1
    deg_dist = float(
        np.abs(
            _degree_histogram(metrics.degree[idx], max_deg)
            - _degree_histogram(metrics.degree, max_deg)
        ).sum()
    )
    clu_dist = float(
        np.abs(
            _clustering_histogram(metrics.clustering[idx])
            - _clustering_histogram(metrics.clustering)
        ).sum()
    )
    return RepresentativenessReport(deg_dist, clu_dist, delta)
