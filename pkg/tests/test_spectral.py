import math
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

import spectral
from cayley import build_lps
from conftest import brute_force_nbw, dense_adjacency, graph_from_networkx
from errors import ConvergenceError, UnsupportedGraphError
from metrics import distances_from
from spectral import (
    chebyshev_sphere_vector,
    extreme_nontrivial_eigenvalue,
    matvec,
    nbw_count_vector,
    sphere_variance,
    unreachable_count,
)

RAMANUJAN_6 = 2 * math.sqrt(5)

# радиусы до удвоенного диаметра
RADII = [(f, R) for f, top in (("x529", 16), ("petersen", 4), ("k7", 2)) for R in range(top + 1)]


def _dense_lambda_star(g) -> float:
    vals = np.sort(np.linalg.eigvalsh(dense_adjacency(g)))
    inner = vals[:-1]
    if abs(inner[0] + g.k) < 1e-8:
        inner = inner[1:]
    return float(np.abs(inner).max())


def _walk_count_total(k: int, r: int) -> int:
    return 1 if r == 0 else k * (k - 1) ** (r - 1)


# ── умножение на A ────────────────────────────────────────────────────────────

def test_matvec_matches_dense(petersen):
    x = np.arange(petersen.n, dtype=np.float64)
    assert np.allclose(matvec(petersen, x), dense_adjacency(petersen) @ x)


def test_matvec_threads_agree(x529, monkeypatch):
    monkeypatch.setattr(spectral, "_PARALLEL_MIN_ROWS", 0)
    x = np.random.default_rng(1).standard_normal(x529.n)
    assert np.array_equal(matvec(x529, x, threads=1), matvec(x529, x, threads=4))


# ── λ* ────────────────────────────────────────────────────────────────────────

@pytest.mark.parametrize("fixture, expected", [("k7", 1.0), ("petersen", 2.0), ("c4", 0.0)])
def test_lambda_star_small_graphs(fixture, expected, request):
    summary = extreme_nontrivial_eigenvalue(request.getfixturevalue(fixture))
    assert summary.lambda_star == pytest.approx(expected, abs=1e-8)
    assert summary.ramanujan


def test_c4_deflates_both_trivial_eigenvalues(c4):
    assert extreme_nontrivial_eigenvalue(c4).bipartite


def test_petersen_theta(petersen):
    summary = extreme_nontrivial_eigenvalue(petersen)
    assert summary.ramanujan_bound == pytest.approx(2 * math.sqrt(2))
    assert summary.theta_star == pytest.approx(math.pi / 4, abs=1e-7)


@pytest.mark.parametrize("nxg", [nx.heawood_graph(), nx.dodecahedral_graph(), nx.moebius_kantor_graph()])
def test_lambda_star_matches_dense_eigensolver(nxg):
    g = graph_from_networkx(nxg)
    assert extreme_nontrivial_eigenvalue(g).lambda_star == pytest.approx(_dense_lambda_star(g), abs=1e-6)


def test_lambda_star_x513_matches_dense(x513):
    summary = extreme_nontrivial_eigenvalue(x513)
    assert summary.bipartite
    assert summary.lambda_star == pytest.approx(_dense_lambda_star(x513), abs=1e-6)
    assert summary.ramanujan


def test_x529_is_ramanujan(x529):
    summary = extreme_nontrivial_eigenvalue(x529, tol=1e-8)
    assert summary.lambda_star <= RAMANUJAN_6 + 1e-6
    assert summary.lambda_star > RAMANUJAN_6 - 0.5
    assert summary.ramanujan and not summary.bipartite


@pytest.mark.slow
@pytest.mark.parametrize("q", [41, 61])
def test_larger_lps_graphs_are_ramanujan(q):
    summary = extreme_nontrivial_eigenvalue(build_lps(5, q))
    assert summary.lambda_star <= RAMANUJAN_6 + 1e-6


def test_lanczos_is_deterministic_for_seed(petersen):
    assert extreme_nontrivial_eigenvalue(petersen, seed=3) == extreme_nontrivial_eigenvalue(petersen, seed=3)


def test_lanczos_reports_non_convergence(x529):
    with pytest.raises(ConvergenceError) as exc:
        extreme_nontrivial_eigenvalue(x529, tol=1e-15, max_iter=10)
    lo, hi = exc.value.interval
    assert exc.value.iterations == 10
    assert lo <= hi


def test_lanczos_rejects_bad_tol(petersen):
    with pytest.raises(ValueError):
        extreme_nontrivial_eigenvalue(petersen, tol=0)


# ── S(R) и неотступающие пути ─────────────────────────────────────────────────

def test_small_radius_vectors(x529):
    assert list(np.flatnonzero(chebyshev_sphere_vector(x529, 0, 0).values)) == [0]
    s1 = chebyshev_sphere_vector(x529, 0, 1).values
    assert sorted(np.flatnonzero(s1)) == sorted(int(v) for v in x529.row(0))
    assert s1.sum() == 6


@pytest.mark.parametrize("fixture, R", RADII)
def test_sphere_is_sum_of_walk_counts(fixture, R, request):
    g = request.getfixturevalue(fixture)
    sphere = chebyshev_sphere_vector(g, 0, R).values
    walks = sum(nbw_count_vector(g, 0, R - 2 * i).values for i in range(R // 2 + 1))
    assert np.array_equal(sphere, walks)


@pytest.mark.parametrize("fixture, R", RADII)
def test_sphere_satisfies_three_term_recurrence(fixture, R, request):
    g = request.getfixturevalue(fixture)
    current = chebyshev_sphere_vector(g, 0, R).values
    previous = chebyshev_sphere_vector(g, 0, R - 1).values if R else np.zeros_like(current)
    following = chebyshev_sphere_vector(g, 0, R + 1).values
    assert np.array_equal(matvec(g, current) - (g.k - 1) * previous, following)


@pytest.mark.parametrize("fixture", ["k4", "petersen"])
@pytest.mark.parametrize("R", range(0, 7))
def test_walk_counts_match_brute_force(fixture, R, request):
    g = request.getfixturevalue(fixture)
    assert np.array_equal(nbw_count_vector(g, 0, R).values, brute_force_nbw(g, 0, R))


@pytest.mark.parametrize("fixture, R", RADII)
def test_walk_count_total_mass(fixture, R, request):
    g = request.getfixturevalue(fixture)
    assert nbw_count_vector(g, 0, R).total == _walk_count_total(g.k, R)
    assert chebyshev_sphere_vector(g, 0, R).total == sum(_walk_count_total(g.k, r) for r in range(R % 2, R + 1, 2))


def test_no_nonbacktracking_return_in_two_steps(x529, petersen):
    assert nbw_count_vector(x529, 0, 2)[0] == 0
    assert nbw_count_vector(petersen, 3, 2)[3] == 0


def test_walks_below_half_girth_are_geodesics(x529):
    dist = distances_from(x529, 0)
    for R in range(5):
        assert np.array_equal(nbw_count_vector(x529, 0, R).values, (dist == R).astype(np.int64))


def test_sphere_vector_matches_spectral_decomposition(petersen):
    vals, vecs = np.linalg.eigh(dense_adjacency(petersen))
    for R in range(9):
        u_prev, u = np.zeros_like(vals), np.ones_like(vals)
        for r in range(R):
            u_prev, u = u, vals * u - (0 if r == 0 else 2) * u_prev
        expected = vecs @ (u * vecs[2])
        assert np.allclose(chebyshev_sphere_vector(petersen, 2, R).values, expected, atol=1e-6)


@pytest.mark.parametrize("R", [6, 8, 10])
def test_positive_entries_are_within_radius(x529, R):
    values = chebyshev_sphere_vector(x529, 0, R).values
    dist = distances_from(x529, 0)
    assert (values >= 0).all()
    assert (dist[values > 0] <= R).all()


def test_large_radius_switches_to_python_ints(k7):
    R = 30
    sphere = chebyshev_sphere_vector(k7, 0, R)
    assert sphere.values.dtype == object
    assert sphere.total == sum(_walk_count_total(6, r) for r in range(R % 2, R + 1, 2))


def test_sphere_rejects_negative_radius(x529):
    with pytest.raises(ValueError):
        chebyshev_sphere_vector(x529, 0, -1)


# ── недостижимые вершины ──────────────────────────────────────────────────────

def test_unreachable_at_radius_zero(x529):
    report = unreachable_count(x529, 0, 0)
    assert report.unreachable == x529.n - 1
    assert report.raw_holds
    assert report.theorem_bound is None and report.theorem_holds is None


@pytest.mark.parametrize("fixture, max_radius", [("x529", 16), ("petersen", 4), ("k7", 2)])
def test_unreachable_bound_holds_up_to_twice_diameter(fixture, max_radius, request):
    g = request.getfixturevalue(fixture)
    for R in range(max_radius + 1):
        report = unreachable_count(g, 0, R)
        assert report.holds, report.as_dict()
        assert report.as_dict()["raw_lhs"] < report.as_dict()["raw_rhs"]


def test_unreachable_vanishes_past_diameter(x529):
    report = unreachable_count(x529, 0, 16)
    assert report.unreachable == 0
    assert report.epsilon > 0 and report.theorem_holds


def test_unreachable_requires_branching(c4):
    with pytest.raises(UnsupportedGraphError):
        unreachable_count(c4, 0, 2)


# ── дисперсия ─────────────────────────────────────────────────────────────────

def test_variance_of_k7_first_sphere(k7):
    report = sphere_variance(k7, 0, 1)
    assert report.value == Fraction(6, 7)
    assert report.tree_centered == Fraction(6, 7)
    assert report.bound == 20
    assert report.holds


@pytest.mark.parametrize("fixture, R", [(f, R) for f, R in RADII if R >= 1])
def test_variance_bound_up_to_twice_diameter(fixture, R, request):
    report = sphere_variance(request.getfixturevalue(fixture), 0, R)
    assert report.value >= 0
    assert report.holds, report


def test_variance_rejects_bipartite(x513):
    with pytest.raises(UnsupportedGraphError):
        sphere_variance(x513, 0, 3)


def test_variance_rejects_radius_zero(k7):
    with pytest.raises(ValueError):
        sphere_variance(k7, 0, 0)
