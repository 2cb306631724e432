"""
Общие фикстуры: LPS-графы X_{5,29}, X_{5,13} и малые графы-оракулы
(K₄, K₇, C₄, граф Петерсена), собранные из генераторов networkx.
"""

import networkx as nx
import numpy as np
import pytest

from cayley import CayleyGraph, build_lps


def graph_from_networkx(nxg: nx.Graph) -> CayleyGraph:
    """Регулярный граф networkx → CayleyGraph без образующих (только смежность)."""
    nodes = sorted(nxg.nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    degrees = {d for _, d in nxg.degree()}
    assert len(degrees) == 1, "граф должен быть регулярным"
    rows = [sorted(idx[w] for w in nxg.neighbors(v)) for v in nodes]
    return CayleyGraph(n=len(nodes), k=degrees.pop(), adjacency=np.array(rows, dtype=np.uint32).ravel())


def dense_adjacency(g: CayleyGraph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for v in range(g.n):
        for w in g.row(v):
            a[v, w] += 1
    return a


def brute_force_nbw(g: CayleyGraph, x: int, R: int) -> np.ndarray:
    """Перебор всех неотступающих путей длины R из x (для простых графов)."""
    counts = np.zeros(g.n, dtype=np.int64)

    def walk(prev: int, cur: int, left: int) -> None:
        if left == 0:
            counts[cur] += 1
            return
        for w in g.row(cur):
            if int(w) != prev:
                walk(cur, int(w), left - 1)

    walk(-1, x, R)
    return counts


def jacobi_r4(N: int) -> int:
    """r₄(N) = 8·Σ d по делителям d ∤ 4."""
    return 8 * sum(d for d in range(1, N + 1) if N % d == 0 and d % 4)


@pytest.fixture(scope="session")
def x529() -> CayleyGraph:
    return build_lps(5, 29)


@pytest.fixture(scope="session")
def x513() -> CayleyGraph:
    return build_lps(5, 13)


@pytest.fixture(scope="session")
def k4() -> CayleyGraph:
    return graph_from_networkx(nx.complete_graph(4))


@pytest.fixture(scope="session")
def k7() -> CayleyGraph:
    return graph_from_networkx(nx.complete_graph(7))


@pytest.fixture(scope="session")
def c4() -> CayleyGraph:
    return graph_from_networkx(nx.cycle_graph(4))


@pytest.fixture(scope="session")
def petersen() -> CayleyGraph:
    return graph_from_networkx(nx.petersen_graph())
