"""
Прогоны, воспроизводящие таблицы: уровни X^{5,29}, диаметры X_{5,q},
диаметры случайных графов Кэли Z^q.

Каждая строка считается независимо: ошибка построения одной строки
логируется и не останавливает остальные. Результаты выгружаются в CSV
(заголовок, запятая, LF) и в JSON-записи ExperimentRecord.
"""

import csv
import io
import json
import logging
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import config
from cayley import admissible_moduli, build_lps, build_random_cayley
from metrics import bfs_levels, diameter, essential_radius, tree_profile

logger = logging.getLogger(__name__)

TABLE2_UPPER = 229
TABLE3_MODULI = (29, 41, 61, 89, 101, 109, 149, 181, 229)
TABLE3_SEEDS = tuple(range(8))
RATIO_BASE = 5


# ══════════════════════════════════════════════════════════════════════════════
# 1. Запись эксперимента
# ══════════════════════════════════════════════════════════════════════════════

@dataclass
class ExperimentRecord:
    command: str
    parameters: dict[str, Any]
    result: dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0
    version: str = config.VERSION
    checksum: str | None = None
    error: str | None = None

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "parameters": self.parameters,
            "result": self.result,
            "wall_time": round(self.wall_time, 6),
            "version": self.version,
            "checksum": self.checksum,
        }
        if self.error is not None:
            payload["error"] = self.error
        return json.dumps(payload, ensure_ascii=False, default=str)


def timed(command: str, parameters: dict[str, Any], fn: Callable[[], dict[str, Any]]) -> ExperimentRecord:
    """Выполняет fn и заворачивает результат (или ошибку) в ExperimentRecord."""
    started = time.perf_counter()
    record = ExperimentRecord(command=command, parameters=parameters)
    try:
        record.result = fn()
    except Exception as e:
        logger.warning("%s %s: %s", command, parameters, e)
        record.error = f"{type(e).__name__}: {e}"
    record.wall_time = time.perf_counter() - started
    return record


def truncate2(x: float) -> str:
    return f"{math.floor(x * 100 + 1e-9) / 100:.2f}"


def truncated_ratio(diam: int, n: int, base: int = RATIO_BASE) -> str:
    """diam / log_base(n), усечённое до двух знаков, как в опубликованных таблицах."""
    return truncate2(diam / math.log(n, base))


def to_csv(header: list[str], rows: Iterable[list[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# ══════════════════════════════════════════════════════════════════════════════
# 2. Уровни BFS
# ══════════════════════════════════════════════════════════════════════════════

TABLE1_HEADER = ["r", "vertices", "tree"]


def table1(p: int = 5, q: int = 29, root: int = 0) -> ExperimentRecord:
    """Число вершин на каждом расстоянии от корня рядом с размером сферы дерева."""
    def run() -> dict[str, Any]:
        g = build_lps(p, q)
        profile = bfs_levels(g, root)
        return {
            "n": g.n,
            "counts": list(profile.counts),
            "tree": tree_profile(g.k, profile.eccentricity),
            "eccentricity": profile.eccentricity,
            "essential_radius": essential_radius(profile),
        }

    return timed("table1", {"p": p, "q": q, "root": root}, run)


def table1_csv(record: ExperimentRecord) -> str:
    res = record.result
    return to_csv(TABLE1_HEADER, ([r, c, t] for r, (c, t) in enumerate(zip(res["counts"], res["tree"]))))


# ══════════════════════════════════════════════════════════════════════════════
# 3. Диаметры X_{p,q}
# ══════════════════════════════════════════════════════════════════════════════

TABLE2_HEADER = ["q", "n", "diameter", "ratio"]


def table2_row(p: int, q: int) -> ExperimentRecord:
    def run() -> dict[str, Any]:
        g = build_lps(p, q)
        diam = diameter(g)
        return {
            "q": q,
            "n": g.n,
            "diameter": diam,
            "ratio": truncated_ratio(diam, g.n),
            "ratio_raw": diam / math.log(g.n, RATIO_BASE),
            "ratio_conjecture": diam / (4 / 3 * math.log(g.n, p)),
        }

    return timed("table2", {"p": p, "q": q}, run)


def table2(qs: Iterable[int] | None = None, p: int = 5) -> list[ExperimentRecord]:
    qs = list(qs) if qs is not None else admissible_moduli(p, TABLE2_UPPER)
    records = []
    for q in qs:
        record = table2_row(p, q)
        if record.error is None:
            logger.info("X_{%d,%d}: n=%d, diam=%d", p, q, record.result["n"], record.result["diameter"])
        records.append(record)
    return records


def table2_csv(records: Iterable[ExperimentRecord]) -> str:
    return to_csv(TABLE2_HEADER, (
        [r.result[c] for c in TABLE2_HEADER] for r in records if r.error is None
    ))


# ══════════════════════════════════════════════════════════════════════════════
# 4. Диаметры случайных графов Кэли
# ══════════════════════════════════════════════════════════════════════════════

TABLE3_HEADER = ["q", "n", "diameters", "mean_ratio"]


def multiset_label(values: Iterable[int]) -> str:
    """[8, 8, 9] → "8x2 9x1"."""
    counts = Counter(values)
    return " ".join(f"{v}x{c}" for v, c in sorted(counts.items()))


def table3_row(q: int, seeds: Iterable[int] = TABLE3_SEEDS) -> ExperimentRecord:
    seeds = list(seeds)

    def run() -> dict[str, Any]:
        diameters, n = [], 0
        for seed in seeds:
            g = build_random_cayley(q, seed)
            n = g.n
            diameters.append(diameter(g))
        ratios = [d / math.log(n, RATIO_BASE) for d in diameters]
        mean = sum(ratios) / len(ratios)
        return {
            "q": q,
            "n": n,
            "seeds": seeds,
            "diameter_list": diameters,
            "diameters": multiset_label(diameters),
            "mean_ratio": truncate2(mean),
            "mean_ratio_raw": mean,
        }

    return timed("table3", {"q": q, "seeds": seeds}, run)


def table3(qs: Iterable[int] = TABLE3_MODULI, seeds: Iterable[int] = TABLE3_SEEDS) -> list[ExperimentRecord]:
    seeds = list(seeds)
    records = []
    for q in qs:
        record = table3_row(q, seeds)
        if record.error is None:
            logger.info("Z^%d: диаметры %s", q, record.result["diameters"])
        records.append(record)
    return records


def table3_csv(records: Iterable[ExperimentRecord]) -> str:
    return to_csv(TABLE3_HEADER, (
        [r.result[c] for c in TABLE3_HEADER] for r in records if r.error is None
    ))
