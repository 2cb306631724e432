"""
Спектр и сферический оператор Чебышёва.

- extreme_nontrivial_eigenvalue — Ланцош с полной переортогонализацией
  на ортогональном дополнении к константе (и к вектору знаков, если граф
  двудольный); проверка свойства Рамануджана.
- chebyshev_sphere_vector / nbw_count_vector — точные целые векторы
  S(R)(x, ·) и N_R(x, ·) через трёхчленные рекурсии.
- unreachable_count / sphere_variance — неравенства для множества
  недостижимых вершин и дисперсии сферы.

Целые векторы считаются в int64, пока это заведомо безопасно, иначе в
Python int (dtype=object). Собственные векторы графа не строятся никогда.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

import config
from cayley import CayleyGraph
from errors import ConvergenceError, UnsupportedGraphError
from metrics import is_bipartite

logger = logging.getLogger(__name__)

_CHECK_EVERY = 10
_PARALLEL_MIN_ROWS = 1 << 16
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class SpectralSummary:
    k: int
    lambda_star: float
    ramanujan: bool
    bipartite: bool
    tol: float
    iterations: int

    @property
    def ramanujan_bound(self) -> float:
        return 2 * math.sqrt(self.k - 1)

    @property
    def theta_star(self) -> float | None:
        """θ из λ* = 2√(k−1)·cos θ; None, если λ* за границей Рамануджана."""
        ratio = self.lambda_star / self.ramanujan_bound
        if ratio > 1:
            return None
        return math.acos(ratio)

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "lambda_star": self.lambda_star,
            "ramanujan_bound": self.ramanujan_bound,
            "theta_star": self.theta_star,
            "ramanujan": self.ramanujan,
            "bipartite": self.bipartite,
            "tol": self.tol,
            "iterations": self.iterations,
        }


@dataclass(frozen=True, eq=False)
class SphereVector:
    root: int
    radius: int
    values: np.ndarray      # int64 или object (Python int)

    @property
    def zeros(self) -> int:
        return int(np.count_nonzero(self.values == 0))

    @property
    def total(self) -> int:
        return int(sum(int(v) for v in self.values)) if self.values.dtype == object else int(self.values.sum())

    def __getitem__(self, y: int) -> int:
        return int(self.values[y])


# ──────────────────────────────────────────────
# Умножение на матрицу смежности
# ──────────────────────────────────────────────

def matvec(g: CayleyGraph, x: np.ndarray, threads: int | None = None) -> np.ndarray:
    """
    (A·x)[v] = Σ_s x[v·s].

    Строки делятся на непрерывные диапазоны между потоками; каждая строка
    суммируется в одном и том же порядке, так что результат совпадает
    с последовательным побитно.
    """
    rows = g.rows
    workers = config.resolve_threads(threads)
    if workers == 1 or g.n < _PARALLEL_MIN_ROWS:
        return x[rows].sum(axis=1)

    out = np.empty(g.n, dtype=x.dtype)
    bounds = np.linspace(0, g.n, workers + 1, dtype=np.int64)

    def part(i: int) -> None:
        lo, hi = bounds[i], bounds[i + 1]
        out[lo:hi] = x[rows[lo:hi]].sum(axis=1)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(part, range(workers)))
    return out


# ──────────────────────────────────────────────
# Ланцош
# ──────────────────────────────────────────────

def _trivial_directions(g: CayleyGraph, bipartite: bool, colors: np.ndarray | None) -> list[np.ndarray]:
    ones = np.full(g.n, 1 / math.sqrt(g.n))
    if not bipartite:
        return [ones]
    signs = np.where(colors == 0, 1.0, -1.0) / math.sqrt(g.n)
    return [ones, signs]


def _deflate(v: np.ndarray, directions: list[np.ndarray]) -> None:
    for u in directions:
        v -= (u @ v) * u


def extreme_nontrivial_eigenvalue(
    g: CayleyGraph,
    tol: float = 1e-8,
    max_iter: int | None = None,
    seed: int = 0,
    threads: int | None = None,
) -> SpectralSummary:
    """
    max |λ| по нетривиальным собственным значениям (без k, а у двудольного и без −k).

    Сходимость проверяется каждые 10 шагов: остаток Ритца β·|y_last| ≤ tol,
    либо оценка изменилась не больше чем на tol с прошлой проверки, либо
    подпространство Крылова исчерпано. Иначе ConvergenceError.
    """
    if tol <= 0:
        raise ValueError(f"tol должен быть > 0, получено {tol}")
    max_iter = max_iter or config.LANCZOS_MAX_ITER
    bipartite, colors = is_bipartite(g)
    directions = _trivial_directions(g, bipartite, colors)
    dim = g.n - len(directions)
    if dim < 1:
        raise ValueError(f"у графа на {g.n} вершинах нет нетривиального спектра")

    rng = np.random.Generator(np.random.PCG64(seed))
    q = rng.standard_normal(g.n)
    _deflate(q, directions)
    q /= np.linalg.norm(q)

    cap = min(max_iter, dim) + 1
    basis = np.empty((cap, g.n))
    basis[0] = q
    alphas: list[float] = []
    betas: list[float] = []
    q_prev, beta = np.zeros(g.n), 0.0
    previous: float | None = None
    estimate, residual = 0.0, math.inf

    for j in range(min(max_iter, dim)):
        w = matvec(g, q, threads).astype(np.float64)
        _deflate(w, directions)
        alpha = float(q @ w)
        w -= alpha * q + beta * q_prev
        # полная переортогонализация, дважды
        for _ in range(2):
            w -= basis[:j + 1].T @ (basis[:j + 1] @ w)
        alphas.append(alpha)
        beta = float(np.linalg.norm(w))

        exhausted = beta <= 1e-10 * g.k or j + 1 == dim
        if exhausted or (j + 1) % _CHECK_EVERY == 0 or j + 1 == max_iter:
            T = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
            vals, vecs = np.linalg.eigh(T)
            i = int(np.argmax(np.abs(vals)))
            estimate = float(abs(vals[i]))
            residual = beta * abs(float(vecs[-1, i]))
            logger.debug("Ланцош: шаг %d, λ* ≈ %.12f, остаток %.3e", j + 1, estimate, residual)
            stalled = previous is not None and abs(estimate - previous) <= tol
            if exhausted or residual <= tol or stalled:
                ramanujan = estimate <= 2 * math.sqrt(g.k - 1) + tol
                logger.info("λ* = %.10f за %d итераций (Рамануджан: %s)", estimate, j + 1, ramanujan)
                return SpectralSummary(
                    k=g.k,
                    lambda_star=estimate,
                    ramanujan=ramanujan,
                    bipartite=bipartite,
                    tol=tol,
                    iterations=j + 1,
                )
            previous = estimate

        betas.append(beta)
        q_prev, q = q, w / beta
        basis[j + 1] = q

    logger.warning("Ланцош не сошёлся: λ* ≈ %.10f, остаток %.3e", estimate, residual)
    raise ConvergenceError((estimate, estimate + residual), min(max_iter, dim))


# ──────────────────────────────────────────────
# Сферический оператор и неотступающие пути
# ──────────────────────────────────────────────

def _integer_dtype(k: int, radius: int):
    """int64, пока (R+2)·k²·(k−1)^R заведомо меньше 2^62; иначе Python int."""
    if (radius + 2) * k * k * max(k - 1, 1) ** radius < _INT64_SAFE:
        return np.int64
    return object


def _delta(g: CayleyGraph, x: int, dtype) -> np.ndarray:
    if not 0 <= x < g.n:
        raise ValueError(f"вершина {x} вне [0, {g.n})")
    v = np.zeros(g.n, dtype=dtype)
    v[x] = 1
    return v


def chebyshev_sphere_vector(g: CayleyGraph, x: int, R: int, threads: int | None = None) -> SphereVector:
    """S(R)(x, ·): s₀ = δ_x, s₁ = A·s₀, s_{r+1} = A·s_r − (k−1)·s_{r−1}."""
    if R < 0:
        raise ValueError(f"радиус должен быть ≥ 0, получено {R}")
    dtype = _integer_dtype(g.k, R)
    prev, cur = None, _delta(g, x, dtype)
    for _ in range(R):
        nxt = matvec(g, cur, threads)
        if prev is not None:
            nxt = nxt - (g.k - 1) * prev
        prev, cur = cur, nxt
    return SphereVector(root=x, radius=R, values=cur)


def nbw_count_vector(g: CayleyGraph, x: int, R: int, threads: int | None = None) -> SphereVector:
    """
    N_R(x, ·) — число неотступающих путей длины ровно R.

    N₀ = δ, N₁ = A·δ, N₂ = A·N₁ − k·N₀, далее N_{r+1} = A·N_r − (k−1)·N_{r−1}.
    """
    if R < 0:
        raise ValueError(f"радиус должен быть ≥ 0, получено {R}")
    dtype = _integer_dtype(g.k, R)
    prev, cur = None, _delta(g, x, dtype)
    for r in range(R):
        nxt = matvec(g, cur, threads)
        if prev is not None:
            nxt = nxt - (g.k if r == 1 else g.k - 1) * prev
        prev, cur = cur, nxt
    return SphereVector(root=x, radius=R, values=cur)


@dataclass(frozen=True)
class UnreachableReport:
    n: int
    k: int
    root: int
    radius: int
    unreachable: int                  # |{y : S(R)(x,y) = 0}|
    exact_length_unreachable: int     # |{y : N_R(x,y) = 0}|
    raw_holds: bool                   # |M|·(k−1)^R < n²(R+1)²
    epsilon: float
    theorem_bound: float | None       # n^{1−ε}(1+R)², None при ε ≤ 0
    theorem_holds: bool | None

    @property
    def holds(self) -> bool:
        return self.raw_holds and self.theorem_holds is not False

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "x": self.root,
            "R": self.radius,
            "unreachable": self.unreachable,
            "exact_length_unreachable": self.exact_length_unreachable,
            "raw_lhs": self.unreachable * (self.k - 1) ** self.radius,
            "raw_rhs": self.n ** 2 * (self.radius + 1) ** 2,
            "raw_holds": self.raw_holds,
            "epsilon": self.epsilon,
            "theorem_bound": self.theorem_bound,
            "theorem_holds": self.theorem_holds,
            "holds": self.holds,
        }


def _require_branching(g: CayleyGraph) -> None:
    if g.k < 3:
        raise UnsupportedGraphError(f"оценки определены для k ≥ 3, получено k={g.k}")


def unreachable_count(g: CayleyGraph, x: int, R: int, threads: int | None = None) -> UnreachableReport:
    """
    Размер M(x, R) = {y : S(R)(x, y) = 0} и обе формы оценки.

    Сырое неравенство сравнивается точно в целых; форма n^{1−ε}(1+R)²
    с ε = R/log_{k−1}(n) − 1 — в логарифмах и только при ε > 0.
    """
    _require_branching(g)
    sphere = chebyshev_sphere_vector(g, x, R, threads)
    walks = nbw_count_vector(g, x, R, threads)
    size = sphere.zeros

    raw_holds = size * (g.k - 1) ** R < g.n ** 2 * (R + 1) ** 2
    epsilon = R / math.log(g.n, g.k - 1) - 1
    theorem_bound = theorem_holds = None
    if epsilon > 0:
        log_bound = (1 - epsilon) * math.log(g.n) + 2 * math.log(1 + R)
        theorem_bound = math.exp(log_bound)
        theorem_holds = size == 0 or math.log(size) <= log_bound + 1e-12

    logger.info("M(%d, %d): %d вершин из %d, сырое неравенство: %s", x, R, size, g.n, raw_holds)
    return UnreachableReport(
        n=g.n,
        k=g.k,
        root=x,
        radius=R,
        unreachable=size,
        exact_length_unreachable=walks.zeros,
        raw_holds=raw_holds,
        epsilon=epsilon,
        theorem_bound=theorem_bound,
        theorem_holds=theorem_holds,
    )


@dataclass(frozen=True)
class VarianceReport:
    radius: int
    value: Fraction          # Σ_y (s_y − Σs/n)²
    tree_centered: Fraction  # Σ_y (s_y − k(k−1)^{R−1}/n)²
    bound: int               # (R+1)²(k−1)^R

    @property
    def holds(self) -> bool:
        return self.value <= self.bound

    def as_dict(self) -> dict:
        return {
            "R": self.radius,
            "variance": float(self.value),
            "variance_exact": str(self.value),
            "variance_tree_centered": float(self.tree_centered),
            "bound": self.bound,
            "holds": self.holds,
        }


def _sum_of_squares(values: np.ndarray) -> int:
    peak = int(np.abs(values).max(initial=0)) if values.dtype != object else None
    if peak is not None and peak * peak * values.size < _INT64_SAFE:
        return int(values @ values)
    return sum(int(v) * int(v) for v in values)


def sphere_variance(g: CayleyGraph, x: int, R: int, threads: int | None = None) -> VarianceReport:
    """
    Дисперсия строки S(R)(x, ·) без тривиальной компоненты, точно, в дробях.

    Вычитается проекция на константу Σs/n, так что значение совпадает
    с Σ_{j≠0} f(λ_j)²·φ_j(x)² и ограничено (R+1)²(k−1)^R на недвудольном
    графе Рамануджана. Масса строки Σs = Σ_i |N_{R−2i}| при R ≥ 2 больше
    k(k−1)^{R−1}; дисперсия относительно k(k−1)^{R−1}/n возвращается
    отдельно как tree_centered.
    """
    if R < 1:
        raise ValueError(f"дисперсия определена для R ≥ 1, получено {R}")
    _require_branching(g)
    if is_bipartite(g)[0]:
        raise UnsupportedGraphError("оценка дисперсии не применима к двудольному графу (собственное значение −k)")

    sphere = chebyshev_sphere_vector(g, x, R, threads)
    squares, mass = _sum_of_squares(sphere.values), sphere.total
    T = g.k * (g.k - 1) ** (R - 1)
    report = VarianceReport(
        radius=R,
        value=squares - Fraction(mass * mass, g.n),
        tree_centered=squares + Fraction(T * T - 2 * T * mass, g.n),
        bound=(R + 1) ** 2 * (g.k - 1) ** R,
    )
    logger.info("Var(%d, R=%d) = %.6g, граница %d, выполнено: %s", x, R, float(report.value), report.bound, report.holds)
    return report
