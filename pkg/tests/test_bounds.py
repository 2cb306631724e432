import dataclasses
import math

import pytest

import config
from bounds import (
    WitnessPattern,
    corollary_hypotheses,
    default_witness_modulus,
    diophantine_distance_floor,
    thm1_threshold,
    verify_thm1,
    witness_vertices,
)
from cayley import build_lps, build_random_cayley
from errors import ResourceLimitError, UnsupportedGraphError
from pgl import Kind, canonical


# ── пороги ────────────────────────────────────────────────────────────────────

@pytest.mark.parametrize("p, q, bipartite, expected", [(5, 29, False, 7.5076), (5, 13, True, 5.5134)])
def test_proof_threshold(p, q, bipartite, expected):
    th = thm1_threshold(p, q, bipartite)
    assert th.proof == pytest.approx(math.log(q ** 4 / 4, p))
    assert th.proof == pytest.approx(expected, abs=1e-4)
    assert math.ceil(th.proof) == (8 if q == 29 else 6)


@pytest.mark.parametrize("q", [13, 29, 41, 101])
def test_headline_below_proof_threshold(q):
    th = thm1_threshold(5, q, bipartite=True)
    assert th.headline <= th.proof + 1e-9


def test_headline_uses_cover_penalty():
    m = 29 * 41
    base = thm1_threshold(5, 29, bipartite=False, m=29)
    cover = thm1_threshold(5, 29, bipartite=False, m=m)
    n = (m ** 3 - m) // 2
    expected = 4 / 3 * math.log(n, 5) - 2 / 3 * math.log(2, 5) - 4 * math.log(41, 5)
    assert cover.headline == pytest.approx(expected)
    assert cover.proof == base.proof


def test_headline_actual_uses_given_vertex_count():
    th = thm1_threshold(5, 29, bipartite=False, n=12180)
    assert th.headline_actual == pytest.approx(4 / 3 * math.log(12180, 5) - 2 / 3 * math.log(2, 5))


def test_threshold_rejects_bad_arguments():
    with pytest.raises(ValueError):
        thm1_threshold(1, 29, False)


# ── свидетели ─────────────────────────────────────────────────────────────────

def test_witnesses_for_prime_modulus():
    w, iprime = witness_vertices(29, 29, Kind.PSL)
    assert w == canonical((0, 1, 28, 0), 29, Kind.PSL)
    assert iprime.is_identity


def test_witnesses_for_cover():
    w, iprime = witness_vertices(65, 13, Kind.PSL)
    assert w == canonical((0, 1, 64, 0), 65, Kind.PSL)
    assert iprime == canonical((1, 13, 0, 1), 65, Kind.PSL)
    assert not iprime.is_identity


def test_bipartite_graph_has_no_iprime():
    assert witness_vertices(13, 13, Kind.PGL)[1] is None


def test_witness_modulus_must_divide_m():
    with pytest.raises(ValueError):
        witness_vertices(29, 13, Kind.PSL)


@pytest.mark.parametrize("m, bipartite, q", [(29, True, 29), (29, False, 29), (845, False, 169), (29 * 41, False, 41)])
def test_default_witness_modulus(m, bipartite, q):
    assert default_witness_modulus(m, bipartite) == q


# ── диофантов оракул ──────────────────────────────────────────────────────────

@pytest.mark.parametrize("p, q, kind, K", [
    (5, 13, "bipartite_W", 5),
    (5, 29, "nonbip_Iprime", 7),
    (5, 29, WitnessPattern.NONBIP_W, 6),
])
def test_oracle_finds_no_short_representation(p, q, kind, K):
    assert diophantine_distance_floor(p, q, kind, K) is None


def test_oracle_depth_zero_is_empty():
    assert diophantine_distance_floor(5, 29, "nonbip_W", 0) is None


def test_oracle_unconstrained_modulus_is_immediate():
    assert diophantine_distance_floor(5, 1, "nonbip_Iprime", 3) == 1


def test_oracle_respects_norm_budget(monkeypatch):
    monkeypatch.setattr(config, "ORACLE_MAX_NORM", 100)
    with pytest.raises(ResourceLimitError):
        diophantine_distance_floor(5, 29, "nonbip_W", 5)


def test_oracle_rejects_negative_depth():
    with pytest.raises(ValueError):
        diophantine_distance_floor(5, 29, "nonbip_W", -1)


def test_oracle_rejects_unknown_pattern():
    with pytest.raises(ValueError):
        diophantine_distance_floor(5, 29, "diagonal", 3)


# ── проверка оценки ───────────────────────────────────────────────────────────

def test_verify_x529(x529):
    report = verify_thm1(x529, oracle_depth=8)
    assert report.degenerate and report.dist_Iprime is None
    assert report.required == 8
    assert report.diameter == 8
    assert report.satisfied and report.holds
    assert report.floor_bound == 7 and report.floor_holds
    assert report.oracle_consistent
    assert report.dist_W <= report.diameter
    assert report.diameter_vs_threshold is True
    assert report.witness_parity is None


def test_verify_x513(x513):
    report = verify_thm1(x513, oracle_depth=8)
    assert report.bipartite and report.dist_Iprime is None and not report.degenerate
    assert report.required == 6
    assert report.dist_W >= 6
    assert report.dist_W % 2 == 0 and report.witness_parity is True
    assert report.satisfied
    assert report.oracle_consistent
    assert report.oracle_W is None or report.oracle_W <= report.dist_W


@pytest.mark.slow
def test_verify_degenerate_x561_does_not_fail_on_diameter():
    report = verify_thm1(build_lps(5, 61))
    assert report.degenerate and report.required == 10
    assert report.diameter == 9
    assert report.diameter_vs_threshold is False
    assert report.satisfied and report.holds


@pytest.mark.slow
def test_verify_x541_with_oracle():
    report = verify_thm1(build_lps(5, 41), oracle_depth=8)
    assert report.degenerate and report.required == 9
    assert report.diameter == 9 and report.diameter_vs_threshold is True
    assert report.oracle_consistent
    assert report.oracle_W is None or report.oracle_W <= report.dist_W
    assert report.holds


def test_holds_requires_even_witness_distance_on_bipartite(x513):
    report = dataclasses.replace(verify_thm1(x513), witness_parity=False)
    assert report.satisfied and not report.holds


def test_verify_report_serialises(x529):
    record = verify_thm1(x529).as_dict()
    assert record["p"] == 5 and record["m"] == 29 and record["holds"] is True
    assert record["oracle_consistent"] is None


def test_verify_rejects_non_lps(petersen):
    with pytest.raises(UnsupportedGraphError):
        verify_thm1(petersen)


def test_verify_rejects_random_cayley():
    with pytest.raises(UnsupportedGraphError):
        verify_thm1(build_random_cayley(13, 0))


# ── условия следствия ─────────────────────────────────────────────────────────

@pytest.mark.parametrize("p, m, expected", [
    (1259, 65, True),
    (1259, 5 * 13 ** 2, True),
    (5, 65, False),
    (1259, 55, False),
    (1259, 5 * 13 * 17, False),
    (1259, 29, False),
])
def test_corollary_hypotheses(p, m, expected):
    assert corollary_hypotheses(p, m) is expected
