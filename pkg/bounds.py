"""
Нижняя оценка диаметра LPS-графа через свидетелей W и I′.

Путь длины k из единицы — это целый кватернион (a, b, c, d) нормы p^k
с a нечётным и b, c, d чётными. Если путь ведёт в W или в I′, на (a, b, c, d)
накладываются сравнения по q. diophantine_distance_floor ищет наименьшее k,
при котором такие представления вообще существуют; BFS-расстояние до
свидетеля не может быть меньше.
"""

import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum

import config
from cayley import CayleyGraph
from errors import ResourceLimitError, UnsupportedGraphError
from metrics import UNREACHED, distances_from
from ntheory import (
    CongruencePattern,
    CoordinateConstraint,
    Parity,
    Sign,
    factorize,
    four_squares_with_pattern,
    is_prime,
)
from pgl import Kind, ProjMatrix, canonical

logger = logging.getLogger(__name__)

_GUARD = 1e-9
COROLLARY_MIN_P = 1250


# ──────────────────────────────────────────────
# Пороги
# ──────────────────────────────────────────────

@dataclass(frozen=True)
class Thresholds:
    proof: float             # log_p(q⁴/4)
    headline: float          # формулировка теоремы при n = (m³−m)/2
    headline_actual: float   # то же выражение при фактическом числе вершин


def thm1_threshold(p: int, q: int, bipartite: bool, m: int | None = None, n: int | None = None) -> Thresholds:
    if p < 2 or q < 2:
        raise ValueError(f"нужны p ≥ 2 и q ≥ 2, получено p={p}, q={q}")
    m = m or q

    def log_p(x: float) -> float:
        return math.log(x) / math.log(p)

    def headline(vertices: int) -> float:
        value = 4 / 3 * log_p(vertices) - 2 / 3 * log_p(2)
        if not bipartite:
            value -= 4 * log_p(m / q)
        return value

    proof_n = (m ** 3 - m) // 2
    return Thresholds(
        proof=log_p(q ** 4 / 4),
        headline=headline(proof_n),
        headline_actual=headline(n or proof_n),
    )


def witness_vertices(m: int, q: int, kind: Kind) -> tuple[ProjMatrix, ProjMatrix | None]:
    """W = [[0,1],[−1,0]] и I′ = [[1,q],[0,1]]; у двудольного графа I′ нет."""
    if q < 1 or m % q:
        raise ValueError(f"q={q} не делит m={m}")
    w = canonical((0, 1, m - 1, 0), m, kind)
    if kind is Kind.PGL:
        return w, None
    return w, canonical((1, q % m, 0, 1), m, kind)


# ──────────────────────────────────────────────
# Диофантов оракул
# ──────────────────────────────────────────────

class WitnessPattern(str, Enum):
    BIPARTITE_W   = "bipartite_W"
    NONBIP_IPRIME = "nonbip_Iprime"
    NONBIP_W      = "nonbip_W"


def witness_pattern(kind: WitnessPattern, q: int) -> CongruencePattern:
    """
    Сравнения на (a, b, c, d), при которых кватернион проецируется в свидетеля.

    W:  a ≡ b ≡ d ≡ 0 (mod q), a нечётно, b, d ≡ 0 (mod 2q), c чётно.
    I′: b ≡ c ≡ d ≡ 0 (mod 2q), a нечётно, хотя бы одно из b, c, d ≠ 0.
    Знак кватерниона нормируется условием a > 0.
    """
    tail = CoordinateConstraint(modulus=2 * q)
    if kind is WitnessPattern.NONBIP_IPRIME:
        return CongruencePattern(
            a=CoordinateConstraint(parity=Parity.ODD, sign=Sign.POSITIVE),
            b=tail, c=tail, d=tail,
            nonzero_tail=True,
        )
    return CongruencePattern(
        a=CoordinateConstraint(modulus=q, parity=Parity.ODD, sign=Sign.POSITIVE),
        b=tail,
        c=CoordinateConstraint(parity=Parity.EVEN),
        d=tail,
    )


def diophantine_distance_floor(p: int, q: int, pattern_kind: WitnessPattern, K: int) -> int | None:
    """
    Наименьшее k ≤ K, при котором p^k представимо с нужными сравнениями, или None.

    None означает, что расстояние до свидетеля больше K. У двудольного графа
    W лежит в той же доле, что и единица, поэтому нечётные k пропускаются.
    """
    if K < 0:
        raise ValueError(f"K должно быть ≥ 0, получено {K}")
    pattern_kind = WitnessPattern(pattern_kind)
    pattern = witness_pattern(pattern_kind, q)
    for k in range(1, K + 1):
        if pattern_kind is WitnessPattern.BIPARTITE_W and k % 2:
            continue
        norm = p ** k
        if norm > config.ORACLE_MAX_NORM:
            raise ResourceLimitError(
                f"p^k = {p}^{k} превышает бюджет оракула {config.ORACLE_MAX_NORM} (дошли до k={k})"
            )
        if four_squares_with_pattern(norm, pattern):
            logger.debug("Оракул %s: первое представление при k=%d", pattern_kind.value, k)
            return k
    return None


# ──────────────────────────────────────────────
# Проверка теоремы
# ──────────────────────────────────────────────

@dataclass(frozen=True)
class BoundReport:
    p: int
    m: int
    q: int
    n: int
    bipartite: bool
    threshold: float
    required: int
    headline: float
    headline_actual: float
    dist_W: int
    dist_Iprime: int | None
    degenerate: bool
    diameter: int
    satisfied: bool
    floor_bound: int
    floor_holds: bool
    corollary_hypotheses: bool
    oracle_depth: int = 0
    oracle_W: int | None = None
    oracle_Iprime: int | None = None
    oracle_consistent: bool | None = None
    diameter_vs_threshold: bool | None = None
    witness_parity: bool | None = None

    @property
    def holds(self) -> bool:
        return (
            self.satisfied
            and self.oracle_consistent is not False
            and self.witness_parity is not False
        )

    def as_dict(self) -> dict:
        return asdict(self) | {"holds": self.holds}


def default_witness_modulus(m: int, bipartite: bool) -> int:
    """q по умолчанию: сам m у двудольного графа, иначе наибольшая степень простого, делящая m."""
    if bipartite:
        return m
    return max(prime ** e for prime, e in factorize(m).items())


def corollary_hypotheses(p: int, m: int) -> bool:
    """p > 1250 и m = 5·q^j с простым q ≡ 1 (mod 4)."""
    if p <= COROLLARY_MIN_P or m % 5:
        return False
    factors = factorize(m // 5)
    if len(factors) != 1:
        return False
    (q, _), = factors.items()
    return is_prime(q) and q % 4 == 1


def _oracle_agrees(floor: int | None, dist: int | None, depth: int) -> bool:
    if dist is None:
        return True
    if floor is None:
        return dist > depth
    return dist >= floor


def verify_thm1(g: CayleyGraph, q: int | None = None, oracle_depth: int = 0) -> BoundReport:
    """
    Расстояния до свидетелей по BFS против порога ⌈log_p(q⁴/4)⌉.

    При m = q свидетель I′ совпадает с единицей: такой случай помечается как
    вырожденный: утверждение на нём не проверяется, а сравнение диаметра
    с порогом попадает в отчёт только для сведения. У двудольного графа W
    лежит в доле единицы, поэтому dist(I, W) обязано быть чётным.
    """
    if not g.is_lps:
        raise UnsupportedGraphError("проверка применима только к LPS-графам")
    p, m = g.provenance.p, g.provenance.m
    bipartite = g.kind is Kind.PGL
    q = q or default_witness_modulus(m, bipartite)

    w, iprime = witness_vertices(m, q, g.kind)
    dist = distances_from(g, 0)
    if (dist == UNREACHED).any():
        raise ValueError("граф несвязен")
    diam = int(dist.max())
    dist_w = int(dist[g.index_of(w)])
    degenerate = iprime is not None and iprime.is_identity
    dist_i = None if iprime is None or degenerate else int(dist[g.index_of(iprime)])

    th = thm1_threshold(p, q, bipartite, m=m, n=g.n)
    required = math.ceil(th.proof - _GUARD)
    diameter_vs_threshold = None
    if bipartite:
        satisfied = dist_w >= required
    elif degenerate:
        satisfied = True
        diameter_vs_threshold = diam >= required
    else:
        satisfied = max(dist_w, dist_i) >= required

    floor_bound = math.floor(4 / 3 * math.log(g.n) / math.log(p) + _GUARD)

    oracle_w = oracle_i = consistent = None
    if oracle_depth > 0:
        kind_w = WitnessPattern.BIPARTITE_W if bipartite else WitnessPattern.NONBIP_W
        oracle_w = diophantine_distance_floor(p, q, kind_w, oracle_depth)
        consistent = _oracle_agrees(oracle_w, dist_w, oracle_depth)
        if dist_i is not None:
            oracle_i = diophantine_distance_floor(p, q, WitnessPattern.NONBIP_IPRIME, oracle_depth)
            consistent = consistent and _oracle_agrees(oracle_i, dist_i, oracle_depth)

    report = BoundReport(
        p=p,
        m=m,
        q=q,
        n=g.n,
        bipartite=bipartite,
        threshold=th.proof,
        required=required,
        headline=th.headline,
        headline_actual=th.headline_actual,
        dist_W=dist_w,
        dist_Iprime=dist_i,
        degenerate=degenerate,
        diameter=diam,
        satisfied=satisfied,
        floor_bound=floor_bound,
        floor_holds=diam >= floor_bound,
        corollary_hypotheses=corollary_hypotheses(p, m),
        oracle_depth=oracle_depth,
        oracle_W=oracle_w,
        oracle_Iprime=oracle_i,
        oracle_consistent=consistent,
        diameter_vs_threshold=diameter_vs_threshold,
        witness_parity=dist_w % 2 == 0 if bipartite else None,
    )
    logger.info(
        "X_{%d,%d}: dist(I,W)=%d, dist(I,I′)=%s, порог %.4f → %d, выполнено: %s",
        p, m, dist_w, dist_i, th.proof, required, satisfied,
    )
    return report
