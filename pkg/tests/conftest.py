import pathlib

import numpy as np
import pytest

from sociogen import kernels
from sociogen.graph import Graph, load_edge_list

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # jit compilation must not count against any timed assertion
    kernels.warmup()


@pytest.fixture(scope="session")
def karate() -> Graph:
    return load_edge_list(DATA / "karate.csv")


@pytest.fixture()
def two_cliques() -> Graph:
    """Two disjoint 4-cliques: nodes 0-3 and 4-7."""
    edges = []
    for base in (0, 4):
        for i in range(4):
            for j in range(i + 1, 4):
                edges.append((base + i, base + j))
    return Graph.from_edges(8, *np.array(edges).T)


@pytest.fixture()
def path5() -> Graph:
    u = np.arange(4)
    return Graph.from_edges(5, u, u + 1)


def star_graph(leaves: int) -> Graph:
    hub = np.zeros(leaves, dtype=np.int64)
    return Graph.from_edges(leaves + 1, hub, np.arange(1, leaves + 1))
