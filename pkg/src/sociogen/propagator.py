"""Four-step attribute generation over a labeled graph.

(i) pick seeds, (ii) stamp each seed with its community's profile verbatim,
(iii) give every seed neighbor a noisy copy of the seed's values, (iv) fill
everyone else from already-assigned neighbors in one ascending-id pass.
The diversity parameter p is the probability that a propagated value is
replaced by a fresh draw from the schema proportions, so p=0 means pure
copying and p=1 means schema-random data.

Attribute values travel as small integer codes (index into the attribute's
value tuple); labels only materialize at file emission.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigError, ParseError
from .graph import Graph, hits
from .louvain import CommunityLabeling
from .profiles import Attribute, GenerationConfig, Profile
from .seeder import (
    STAGE_CLASS,
    STAGE_NEIGHBORS,
    STAGE_REMAINDER,
    STAGE_SEEDS,
    STAGE_WEIGHTS,
    SeedSet,
    assign_seeds,
    stage_rng,
)

NUMFRIENDS_LABELS = ("LOW", "MEDIUM", "HIGH")
NUMFRIENDS_MEDIUM_AT = 10
NUMFRIENDS_HIGH_AT = 50

UNASSIGNED = np.int16(-1)


@dataclass
class PartialTable:
    """Attribute codes mid-pipeline; -1 marks a not-yet-assigned value."""

    schema: list[Attribute]
    codes: np.ndarray
    assigned: np.ndarray

    @property
    def num_nodes(self) -> int:
        return self.codes.shape[1]

    def is_complete(self) -> bool:
        return bool(self.assigned.all())


@dataclass
class UserTable:
    """One record per node: attribute codes plus the derived columns."""

    schema: list[Attribute]
    codes: np.ndarray
    numfriends: np.ndarray
    classvalue: np.ndarray
    authority: np.ndarray
    community: np.ndarray

    @property
    def num_nodes(self) -> int:
        return self.codes.shape[1]

    def value(self, node: int, attr_name: str) -> str:
        for i, attr in enumerate(self.schema):
            if attr.name == attr_name:
                return attr.values[self.codes[i, node]]
        raise ConfigError(f"no attribute named {attr_name!r}")


@dataclass
class WeightedEdges:
    """outg rows: each undirected edge once, keyed by its higher endpoint."""

    user: np.ndarray
    userf: np.ndarray
    weight: np.ndarray

    @property
    def num_edges(self) -> int:
        return self.user.shape[0]


@dataclass
class RunReport:
    num_nodes: int
    num_edges: int
    p: float
    rng_seed: int
    sigma_requested: int
    sigma_achieved: int
    coverage: float
    assigned_after_neighbors: int
    remainder_count: int
    timings: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


@dataclass
class GenerationResult:
    users: UserTable
    weighted_edges: WeightedEdges
    seeds: SeedSet
    report: RunReport


def _profile_codes(profile: Profile, schema: list[Attribute]) -> np.ndarray:
    return np.array(
        [attr.index_of(profile.choices[attr.name]) for attr in schema], np.int16
    )


def assign_seed_profiles(
    seeds: SeedSet,
    assignment: dict[int, int],
    profiles: list[Profile],
    schema: list[Attribute],
    num_nodes: int,
) -> PartialTable:
    """Step (ii): every seed gets its community's profile values verbatim."""
    by_id = {p.profile_id: p for p in profiles}
    codes = np.full((len(schema), num_nodes), UNASSIGNED, np.int16)
    assigned = np.zeros(num_nodes, bool)
    for community, members in seeds.per_community.items():
        if not members:
            continue
        if community not in assignment:
            raise ConfigError(f"community {community} has no profile assigned")
        pid = assignment[community]
        if pid not in by_id:
            raise ConfigError(f"community {community} maps to unknown profile {pid}")
        stamp = _profile_codes(by_id[pid], schema)
        codes[:, members] = stamp[:, None]
        assigned[members] = True
    return PartialTable(schema=schema, codes=codes, assigned=assigned)


def propagate_to_neighbors(
    g: Graph, seeds: SeedSet, p: float, table: PartialTable, metrics, rng
) -> PartialTable:
    """Step (iii): seed neighbors copy their seed with probability 1 - p,
    otherwise draw from the schema proportions.

    A node touching several seeds inherits from the highest-authority one
    (ties to the lowest seed id).  Targets are processed in ascending id
    order and random numbers are drawn in fixed batches, so the result is a
    pure function of the rng state.
    """
    auth = metrics.authority
    parent = np.full(g.num_nodes, -1, np.int64)
    priority = sorted(seeds.seeds.tolist(), key=lambda s: (-auth[s], s))
    for s in priority:
        for u in g.neighbors(s):
            if not table.assigned[u] and parent[u] == -1:
                parent[u] = s
    targets = np.flatnonzero(parent != -1)
    if targets.size:
        num_attrs = len(table.schema)
        coins = rng.random((targets.size, num_attrs))
        draws = np.vstack([attr.sample(rng, targets.size) for attr in table.schema])
        inherited = table.codes[:, parent[targets]]
        copy_mask = coins.T < (1.0 - p)
        table.codes[:, targets] = np.where(copy_mask, inherited, draws)
        table.assigned[targets] = True
    return table


def assign_remaining(g: Graph, table: PartialTable, p: float, rng) -> PartialTable:
    """Step (iv): fill still-unassigned nodes in one ascending-id pass.

    Per node and attribute: probability 1 - p takes the modal value among
    assigned neighbors (nodes filled earlier in this same pass count),
    probability p copies a uniformly chosen assigned neighbor; with no
    assigned neighbor at all the value is a schema draw.
    """
    order = np.flatnonzero(~table.assigned)
    if order.size:
        num_attrs = len(table.schema)
        coins = rng.random((order.size, num_attrs))
        picks = rng.random((order.size, num_attrs))
        fallback = np.column_stack(
            [attr.sample(rng, order.size) for attr in table.schema]
        ).astype(np.int16)
        n_values = np.array([attr.num_values for attr in table.schema], np.int64)
        kernels.fill_remaining_pass(
            g.indptr,
            g.indices,
            order,
            table.codes,
            table.assigned,
            n_values,
            float(p),
            coins,
            picks,
            fallback,
        )
    return table


def assign_edge_weights(g: Graph, rng) -> WeightedEdges:
    """Uniform [0, 1] link weights, rounded to 2 decimals, one per edge.

    Rows come out in the emission order of the outg file: higher endpoint
    descending, then lower endpoint ascending; weights are drawn in that
    same order.
    """
    lo = g.edges[:, 0]
    hi = g.edges[:, 1]
    order = np.lexsort((lo, -hi))
    weights = np.round(rng.random(order.size), 2)
    return WeightedEdges(user=hi[order], userf=lo[order], weight=weights)


def generate(
    g: Graph, labeling, config: GenerationConfig, metrics=None
) -> GenerationResult:
    """Run the full pipeline.

    Args:
        g: input graph.
        labeling: CommunityLabeling (or plain label array) covering ``g``.
        config: validated run configuration; ``config.rng_seed`` is the
            master seed from which every stage derives its own stream.
        metrics: optional precomputed HITS metrics for ``g``.

    Returns:
        A :class:`GenerationResult` with the complete user table, the
        weighted edge list, the seed set, and a run report (sigma, coverage,
        assigned counts, per-stage timings).
    """
    labels = labeling.assignment if isinstance(labeling, CommunityLabeling) else labeling
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape[0] != g.num_nodes:
        raise ConfigError("labeling does not cover the graph")
    timings: dict[str, float] = {}
    t = time.perf_counter()
    if metrics is None:
        metrics = hits(g)
    timings["metrics"] = time.perf_counter() - t

    t = time.perf_counter()
    seeds = assign_seeds(
        g, labels, config, metrics=metrics, rng=stage_rng(config.rng_seed, STAGE_SEEDS)
    )
    timings["seeds"] = time.perf_counter() - t

    t = time.perf_counter()
    table = assign_seed_profiles(
        seeds, config.assignment, config.profiles, config.schema, g.num_nodes
    )
    timings["seed_profiles"] = time.perf_counter() - t

    p = config.p
    t = time.perf_counter()
    table = propagate_to_neighbors(
        g, seeds, p, table, metrics, stage_rng(config.rng_seed, STAGE_NEIGHBORS)
    )
    timings["neighbors"] = time.perf_counter() - t
    assigned_after_neighbors = int(table.assigned.sum())

    t = time.perf_counter()
    table = assign_remaining(g, table, p, stage_rng(config.rng_seed, STAGE_REMAINDER))
    timings["remainder"] = time.perf_counter() - t

    t = time.perf_counter()
    weighted = assign_edge_weights(g, stage_rng(config.rng_seed, STAGE_WEIGHTS))
    timings["weights"] = time.perf_counter() - t

    t = time.perf_counter()
    class_rng = stage_rng(config.rng_seed, STAGE_CLASS)
    classvalue = class_rng.random(g.num_nodes) < config.class_yes_proportion
    degrees = g.degrees
    numfriends = np.where(
        degrees >= NUMFRIENDS_HIGH_AT, 2, np.where(degrees >= NUMFRIENDS_MEDIUM_AT, 1, 0)
    ).astype(np.int8)
    users = UserTable(
        schema=config.schema,
        codes=table.codes,
        numfriends=numfriends,
        classvalue=classvalue,
        authority=metrics.authority,
        community=labels,
    )
    timings["finalize"] = time.perf_counter() - t

    report = RunReport(
        num_nodes=g.num_nodes,
        num_edges=g.num_edges,
        p=p,
        rng_seed=config.rng_seed,
        sigma_requested=seeds.sigma_requested,
        sigma_achieved=seeds.sigma_achieved,
        coverage=seeds.coverage,
        assigned_after_neighbors=assigned_after_neighbors,
        remainder_count=g.num_nodes - assigned_after_neighbors,
        timings=timings,
        warnings=list(seeds.warnings),
    )
    return GenerationResult(users=users, weighted_edges=weighted, seeds=seeds, report=report)


def _split_columns(schema: list[Attribute]):
    """Demographic columns precede the friend-count bucket; Like* follow it."""
    demo = [i for i, a in enumerate(schema) if not a.name.lower().startswith("like")]
    likes = [i for i, a in enumerate(schema) if a.name.lower().startswith("like")]
    return demo, likes


def user_table_header(schema: list[Attribute]) -> str:
    demo, likes = _split_columns(schema)
    names = (
        ["user"]
        + [schema[i].name.lower() for i in demo]
        + ["numfriends"]
        + [schema[i].name.lower() for i in likes]
        + ["classvalue", "auth", "community"]
    )
    return "\t".join(names)


def write_user_table(users: UserTable, path) -> None:
    """Emit the user records file: tab-separated, node ids descending."""
    demo, likes = _split_columns(users.schema)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(user_table_header(users.schema) + "\n")
        for v in range(users.num_nodes - 1, -1, -1):
            cells = [str(v)]
            cells += [users.schema[i].values[users.codes[i, v]] for i in demo]
            cells.append(NUMFRIENDS_LABELS[users.numfriends[v]])
            cells += [users.schema[i].values[users.codes[i, v]] for i in likes]
            cells.append("YES" if users.classvalue[v] else "NO")
            cells.append(f"{users.authority[v]:.6f}")
            cells.append(str(int(users.community[v])))
            fh.write("\t".join(cells) + "\n")


def read_user_table(path, schema: list[Attribute]) -> UserTable:
    """Parse a user records file written by :func:`write_user_table`.

    The header must match the schema-derived header byte for byte; every
    node id 0..max must appear exactly once.
    """
    path = str(path)
    demo, likes = _split_columns(schema)
    expected = user_table_header(schema)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != expected:
            raise ParseError(f"unexpected header {header!r}", path=path, line=1)
        rows = {}
        for lineno, raw in enumerate(fh, 2):
            line = raw.rstrip("\n")
            if not line:
                continue
            cells = line.split("\t")
            # user, schema columns, then numfriends/classvalue/auth/community
            want = 1 + len(schema) + 4
            if len(cells) != want:
                raise ParseError(
                    f"expected {want} columns, got {len(cells)}", path=path, line=lineno
                )
            try:
                user = int(cells[0])
                order = demo + likes
                labels = cells[1:1 + len(demo)] + cells[2 + len(demo):2 + len(demo) + len(likes)]
                codes = np.empty(len(schema), np.int16)
                for attr_idx, label in zip(order, labels):
                    codes[attr_idx] = schema[attr_idx].index_of(label)
                nf = NUMFRIENDS_LABELS.index(cells[1 + len(demo)])
                tail = cells[2 + len(demo) + len(likes):]
                classv = tail[0] == "YES"
                if tail[0] not in ("YES", "NO"):
                    raise ValueError(f"bad classvalue {tail[0]!r}")
                auth = float(tail[1])
                community = int(tail[2])
            except (ValueError, ConfigError) as exc:
                raise ParseError(str(exc), path=path, line=lineno) from None
            if user in rows:
                raise ParseError(f"duplicate user {user}", path=path, line=lineno)
            rows[user] = (codes, nf, classv, auth, community)
    if not rows:
        raise ParseError("no user records found", path=path)
    n = max(rows) + 1
    if len(rows) != n:
        raise ParseError(f"user ids do not cover 0..{n - 1}", path=path)
    out_codes = np.empty((len(schema), n), np.int16)
    numfriends = np.empty(n, np.int8)
    classvalue = np.empty(n, bool)
    authority = np.empty(n, np.float64)
    community = np.empty(n, np.int64)
    for user, (codes, nf, classv, auth, comm) in rows.items():
        out_codes[:, user] = codes
        numfriends[user] = nf
        classvalue[user] = classv
        authority[user] = auth
        community[user] = comm
    return UserTable(
        schema=schema,
        codes=out_codes,
        numfriends=numfriends,
        classvalue=classvalue,
        authority=authority,
        community=community,
    )


def write_weighted_edges(edges: WeightedEdges, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("user\tuserf\tlinkweight\n")
        for u, v, w in zip(edges.user, edges.userf, edges.weight):
            fh.write(f"{u}\t{v}\t{w:.2f}\n")


def read_weighted_edges(path) -> WeightedEdges:
    path = str(path)
    users, userfs, weights = [], [], []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != "user\tuserf\tlinkweight":
            raise ParseError(f"unexpected header {header!r}", path=path, line=1)
        for lineno, raw in enumerate(fh, 2):
            line = raw.rstrip("\n")
            if not line:
                continue
            cells = line.split("\t")
            if len(cells) != 3:
                raise ParseError("expected 3 columns", path=path, line=lineno)
            try:
                users.append(int(cells[0]))
                userfs.append(int(cells[1]))
                weights.append(float(cells[2]))
            except ValueError:
                raise ParseError(f"bad row {line!r}", path=path, line=lineno) from None
    return WeightedEdges(
        user=np.array(users, np.int64),
        userf=np.array(userfs, np.int64),
        weight=np.array(weights, np.float64),
    )
