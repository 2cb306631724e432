import math
import random

import networkx as nx
import pytest

from cayley import build_lps, build_random_cayley
from conftest import graph_from_networkx
from metrics import (
    LevelProfile,
    bfs_levels,
    diameter,
    diameter_upper_bound,
    distance,
    distances_from,
    eccentricities,
    eccentricity,
    essential_radius,
    girth,
    girth_lower_bound,
    is_bipartite,
    tree_profile,
)
from pgl import Kind, canonical

TABLE1 = (1, 6, 30, 150, 750, 3026, 5970, 2195, 52)


# ── уровни ────────────────────────────────────────────────────────────────────

def test_level_structure_of_x529(x529):
    profile = bfs_levels(x529, 0)
    assert profile.counts == TABLE1
    assert profile.total == 12180
    assert profile.eccentricity == 8


def test_levels_follow_tree_below_half_girth(x529):
    counts = bfs_levels(x529).counts
    tree = tree_profile(6, len(counts) - 1)
    assert counts[1:5] == tuple(6 * 5 ** (r - 1) for r in range(1, 5))
    assert all(c <= t for c, t in zip(counts, tree))


def test_tree_profile():
    assert tree_profile(6, 3) == [1, 6, 30, 150]
    assert tree_profile(3, 0) == [1]


def test_essential_radius():
    profile = LevelProfile(root=0, counts=TABLE1)
    assert essential_radius(profile, 1.0) == 8
    assert essential_radius(profile, 0.99) == 7
    assert essential_radius(profile, 0.5) == 6


def test_essential_radius_rejects_bad_fraction():
    with pytest.raises(ValueError):
        essential_radius(LevelProfile(root=0, counts=(1, 3)), 0)


# ── диаметр и эксцентриситет ──────────────────────────────────────────────────

def test_diameter_x529(x529):
    assert diameter(x529) == 8


@pytest.mark.slow
def test_diameter_x5_229():
    assert diameter(build_lps(5, 229)) == 13


def test_diameter_small_graphs(k4, petersen, c4):
    assert diameter(k4) == 1
    assert diameter(petersen, exhaustive=True) == 2
    assert diameter(c4, exhaustive=True) == 2


@pytest.mark.parametrize("graph", ["x529", "random29"])
def test_eccentricity_is_vertex_independent(graph, x529):
    g = x529 if graph == "x529" else build_random_cayley(29, 5)
    roots = random.Random(20).sample(range(g.n), 20)
    assert set(eccentricities(g, roots, threads=4)) == {eccentricity(g, 0)}


def test_diameter_sandwich_lps(x529, x513):
    for g in (x529, x513):
        d = diameter(g)
        assert math.log(g.n, g.k - 1) <= d <= diameter_upper_bound(g.n, 5)


# ── обхват ────────────────────────────────────────────────────────────────────

def test_girth_x529(x529):
    assert girth(x529) == 9


@pytest.mark.parametrize("fixture, expected", [("k4", 3), ("k7", 3), ("petersen", 5), ("c4", 4)])
def test_girth_small_graphs(fixture, expected, request):
    assert girth(request.getfixturevalue(fixture)) == expected


def test_girth_matches_networkx_on_oracle_graphs():
    for nxg in (nx.petersen_graph(), nx.heawood_graph(), nx.dodecahedral_graph(), nx.moebius_kantor_graph()):
        assert girth(graph_from_networkx(nxg)) == nx.girth(nxg)


def test_girth_of_acyclic_graph_is_infinite():
    assert girth(graph_from_networkx(nx.complete_graph(2))) == math.inf


@pytest.mark.parametrize("q", [13, 29, 41])
def test_girth_lower_bound_lps(q):
    g = build_lps(5, q)
    assert girth(g) >= girth_lower_bound(g.n, 5)


# ── расстояния ────────────────────────────────────────────────────────────────

def test_distance_to_self_and_generators(x529):
    assert distance(x529, 0, 0) == 0
    for v in x529.row(0):
        assert distance(x529, 0, int(v)) == 1


def test_distance_is_symmetric(x529):
    rng = random.Random(100)
    for _ in range(100):
        u, v = rng.randrange(x529.n), rng.randrange(x529.n)
        assert distance(x529, u, v) == distance(x529, v, u)


def test_distance_agrees_with_full_bfs(x529):
    dist = distances_from(x529, 0)
    w = x529.index_of(canonical((0, 1, 28, 0), 29, Kind.PSL))
    assert distance(x529, 0, w) == dist[w]


def test_distance_rejects_bad_vertex(x529):
    with pytest.raises(ValueError):
        distance(x529, 0, x529.n)


# ── двудольность ──────────────────────────────────────────────────────────────

def test_is_bipartite(x513, x529, c4):
    ok, colors = is_bipartite(x513)
    assert ok and colors is not None
    assert (colors[x513.rows] != colors[:, None]).all()
    assert is_bipartite(x529) == (False, None)
    assert is_bipartite(c4)[0]


def test_diameter_and_girth_bound_formulas():
    assert diameter_upper_bound(12180, 5) == pytest.approx(2 * math.log(12180, 5) + 2 * math.log(2, 5) + 1)
    assert girth_lower_bound(12180, 5) == pytest.approx(2 / 3 * math.log(12180, 5) - 2 * math.log(2, 5))
