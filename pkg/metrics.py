"""
Точные комбинаторные характеристики графа: уровни BFS, эксцентриситет,
диаметр, обхват, расстояние, двудольность.

BFS идёт по уровням: фронт — массив индексов, посещённость — массив
расстояний (-1 = не посещена). Соседи всего фронта берутся одним срезом
строк смежности, без циклов по вершинам.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

import config
from cayley import CayleyGraph

logger = logging.getLogger(__name__)

UNREACHED = -1


@dataclass(frozen=True)
class LevelProfile:
    """N(r) — число вершин на расстоянии r от корня, r = 0..ecc."""

    root: int
    counts: tuple[int, ...]

    @property
    def eccentricity(self) -> int:
        return len(self.counts) - 1

    @property
    def total(self) -> int:
        return sum(self.counts)

    def as_dict(self) -> dict:
        return {"root": self.root, "counts": list(self.counts), "eccentricity": self.eccentricity}


def _check_vertex(g: CayleyGraph, v: int) -> None:
    if not 0 <= v < g.n:
        raise ValueError(f"вершина {v} вне [0, {g.n})")


# ──────────────────────────────────────────────
# BFS
# ──────────────────────────────────────────────

def distances_from(g: CayleyGraph, root: int, stop: int | None = None) -> np.ndarray:
    """
    Массив расстояний от root (int32, UNREACHED для недостижимых).

    stop — вершина, при достижении которой обход прекращается досрочно.
    """
    _check_vertex(g, root)
    rows = g.rows
    dist = np.full(g.n, UNREACHED, dtype=np.int32)
    dist[root] = 0
    frontier = np.array([root], dtype=np.int64)
    level = 0

    while frontier.size and (stop is None or dist[stop] == UNREACHED):
        nbrs = rows[frontier].ravel()
        nbrs = np.unique(nbrs[dist[nbrs] == UNREACHED])
        level += 1
        dist[nbrs] = level
        frontier = nbrs.astype(np.int64)
        logger.debug("BFS от %d: уровень %d, %d вершин", root, level, frontier.size)
    return dist


def bfs_levels(g: CayleyGraph, root: int = 0) -> LevelProfile:
    dist = distances_from(g, root)
    counts = np.bincount(dist[dist != UNREACHED])
    return LevelProfile(root=root, counts=tuple(int(c) for c in counts))


def eccentricity(g: CayleyGraph, v: int = 0) -> int:
    dist = distances_from(g, v)
    if (dist == UNREACHED).any():
        raise ValueError("граф несвязен — эксцентриситет не определён")
    return int(dist.max())


def eccentricities(g: CayleyGraph, roots: Iterable[int], threads: int | None = None) -> list[int]:
    """Эксцентриситеты нескольких корней; обходы идут параллельно на пуле потоков."""
    roots = list(roots)
    workers = config.resolve_threads(threads)
    if workers == 1 or len(roots) < 2:
        return [eccentricity(g, v) for v in roots]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda v: eccentricity(g, v), roots))


def diameter(g: CayleyGraph, exhaustive: bool = False, threads: int | None = None) -> int:
    """
    Диаметр связного графа.

    Граф Кэли вершинно-транзитивен, поэтому достаточно эксцентриситета
    вершины 0. exhaustive=True перебирает все корни (для тестовых графов,
    которые не обязаны быть транзитивными).
    """
    if exhaustive:
        return max(eccentricities(g, range(g.n), threads))
    return eccentricity(g, 0)


def distance(g: CayleyGraph, u: int, v: int) -> int:
    _check_vertex(g, v)
    d = int(distances_from(g, u, stop=v)[v])
    if d == UNREACHED:
        raise ValueError(f"вершина {v} недостижима из {u}")
    return d


def girth(g: CayleyGraph, root: int = 0) -> float:
    """
    Длина кратчайшего цикла через root (для графа Кэли — обхват).

    На уровне ℓ ребро между двумя вершинами уровня ℓ замыкает цикл 2ℓ+1,
    вершина уровня ℓ+1 с двумя и более слотами из уровня ℓ — цикл 2ℓ+2.
    Первый уровень, где встретилось одно из двух, и даёт ответ. Петля даёт
    цикл длины 1, кратное ребро цикл длины 2. Для ацикличного графа math.inf.
    """
    _check_vertex(g, root)
    rows = g.rows
    dist = np.full(g.n, UNREACHED, dtype=np.int32)
    dist[root] = 0
    frontier = np.array([root], dtype=np.int64)
    level = 0

    while frontier.size:
        nbrs = rows[frontier].ravel()
        if (dist[nbrs] == level).any():
            return 2 * level + 1
        fresh, slots = np.unique(nbrs[dist[nbrs] == UNREACHED], return_counts=True)
        if (slots > 1).any():
            return 2 * level + 2
        level += 1
        dist[fresh] = level
        frontier = fresh.astype(np.int64)
    return math.inf


def is_bipartite(g: CayleyGraph) -> tuple[bool, np.ndarray | None]:
    """Раскраска по чётности расстояния от 0; (True, цвета) или (False, None)."""
    dist = distances_from(g, 0)
    if (dist == UNREACHED).any():
        raise ValueError("граф несвязен — проверка двудольности определена для связных графов")
    colors = (dist % 2).astype(np.uint8)
    if (colors[g.rows] == colors[:, None]).any():
        return False, None
    return True, colors


# ──────────────────────────────────────────────
# Оценки Любоцкого и дерево
# ──────────────────────────────────────────────

def diameter_upper_bound(n: int, p: int) -> float:
    """diam X_{p,m} ≤ 2·log_p(n) + 2·log_p(2) + 1."""
    return 2 * math.log(n, p) + 2 * math.log(2, p) + 1


def girth_lower_bound(n: int, p: int) -> float:
    """girth X_{p,m} ≥ (2/3)·log_p(n) − 2·log_p(2)."""
    return 2 / 3 * math.log(n, p) - 2 * math.log(2, p)


def tree_profile(k: int, radius: int) -> list[int]:
    """Размеры сфер k-регулярного дерева: 1, k, k(k−1), …, k(k−1)^{radius−1}."""
    if radius < 0:
        raise ValueError(f"радиус должен быть ≥ 0, получено {radius}")
    return [1] + [k * (k - 1) ** (r - 1) for r in range(1, radius + 1)]


def essential_radius(profile: LevelProfile, fraction: float = 0.99) -> int:
    """Наименьшее r, при котором шар радиуса r содержит не меньше fraction всех вершин."""
    if not 0 < fraction <= 1:
        raise ValueError(f"доля должна быть в (0, 1], получено {fraction}")
    need = fraction * profile.total
    covered = 0
    for r, c in enumerate(profile.counts):
        covered += c
        if covered >= need - 1e-9:
            return r
    return profile.eccentricity
