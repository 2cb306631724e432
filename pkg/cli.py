"""
Командная строка: построение графов, таблицы, проверки теорем.

Логи идут в stderr, на stdout — только машиночитаемый вывод: строка
build, CSV таблиц или по одному JSON-объекту на запуск.

Коды выхода: 0 — проверка прошла, 2 — проверка не прошла, 1 — ошибка.
"""

import argparse
import logging
import os
import sys
import time
from typing import Any, Callable

import config
from bounds import verify_thm1
from cayley import CayleyGraph, build_lps, build_random_cayley, graph_checksum, load, save
from errors import UnsupportedGraphError
from experiments import (
    TABLE3_MODULI,
    TABLE3_SEEDS,
    ExperimentRecord,
    table1,
    table1_csv,
    table2,
    table2_csv,
    table3,
    table3_csv,
)
from metrics import (
    bfs_levels,
    distance,
    essential_radius,
    girth,
    girth_lower_bound,
    tree_profile,
)
from pgl import Kind, canonical, identity
from spectral import extreme_nontrivial_eigenvalue, sphere_variance, unreachable_count

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


# ──────────────────────────────────────────────
# Разбор аргументов-матриц
# ──────────────────────────────────────────────

def parse_vertex(text: str, g: CayleyGraph) -> int:
    """
    Вершина по строке: "I", "W", "Iprime:q", "a,b,c,d" или индекс.

    Элементы матрицы приводятся по модулю и канонизируются.
    """
    text = text.strip()
    if text.isdigit():
        idx = int(text)
        if idx >= g.n:
            raise ValueError(f"индекс {idx} вне [0, {g.n})")
        return idx
    if not g.generators:
        raise ValueError("у графа нет образующих — вершины задаются только индексом")

    m, kind = g.generators[0].modulus, g.kind
    if text == "I":
        return g.index_of(identity(m, kind))
    if text == "W":
        return g.index_of(canonical((0, 1, m - 1, 0), m, kind))
    if text.startswith("Iprime:"):
        q = int(text.split(":", 1)[1])
        return g.index_of(canonical((1, q % m, 0, 1), m, kind))

    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"ожидалось 'a,b,c,d', 'I', 'W' или 'Iprime:q', получено {text!r}")
    return g.index_of(canonical([int(x) % m for x in parts], m, kind))


# ──────────────────────────────────────────────
# Команды
# ──────────────────────────────────────────────

def _default_path(args) -> str:
    name = f"X{args.p}_{args.m}.lpsg" if args.lps else f"Z{args.q}_s{args.seed}.lpsg"
    return os.path.join(config.DATA_DIR, name)


def cmd_build(args) -> int:
    if args.lps:
        if args.m is None:
            raise ValueError("для --lps нужен -m")
        g = build_lps(args.p, args.m)
    else:
        if args.q is None:
            raise ValueError("для --random нужен -q")
        g = build_random_cayley(args.q, args.seed)

    path = args.out or _default_path(args)
    checksum = save(g, path)
    bipartite = "true" if g.kind is Kind.PGL else "false"
    print(f"n={g.n} k={g.k} kind={g.kind.value} bipartite={bipartite} checksum={checksum}")
    return EXIT_OK


def _emit_table(records: list[ExperimentRecord], render: Callable[[list[ExperimentRecord]], str], args) -> int:
    if args.json:
        for r in records:
            print(r.to_json())
    else:
        text = render(records)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            logger.info("CSV записан в %s", args.out)
        else:
            sys.stdout.write(text)
    return EXIT_ERROR if any(r.error for r in records) else EXIT_OK


def cmd_table1(args) -> int:
    return _emit_table([table1(args.p, args.q, args.root)], lambda rs: table1_csv(rs[0]), args)


def cmd_table2(args) -> int:
    return _emit_table(table2(args.q or None, args.p), table2_csv, args)


def cmd_table3(args) -> int:
    return _emit_table(table3(args.q or TABLE3_MODULI, args.seeds or TABLE3_SEEDS), table3_csv, args)


def _check_witness(g: CayleyGraph, args) -> tuple[dict[str, Any], bool]:
    report = verify_thm1(g, q=args.q, oracle_depth=args.oracle_depth)
    return report.as_dict(), report.holds


def _check_spectrum(g: CayleyGraph, args) -> tuple[dict[str, Any], bool]:
    summary = extreme_nontrivial_eigenvalue(g, tol=args.tol, seed=args.seed, threads=args.threads)
    return summary.as_dict(), summary.ramanujan


def _check_thm2(g: CayleyGraph, args) -> tuple[dict[str, Any], bool]:
    report = unreachable_count(g, args.x, args.R, threads=args.threads)
    result = report.as_dict()
    passed = report.holds
    result["variance"] = None
    if args.R >= 1:
        try:
            var = sphere_variance(g, args.x, args.R, threads=args.threads)
        except UnsupportedGraphError as e:
            result["variance"] = {"skipped": str(e)}
        else:
            result["variance"] = var.as_dict()
            passed = passed and var.holds
    return result, passed


def _check_girth(g: CayleyGraph, args) -> tuple[dict[str, Any], bool]:
    value = girth(g)
    result: dict[str, Any] = {"girth": value if value != float("inf") else None}
    passed = True
    if g.is_lps:
        bound = girth_lower_bound(g.n, g.provenance.p)
        result["lower_bound"] = bound
        passed = value >= bound
    return result, passed


def _check_levels(g: CayleyGraph, args) -> tuple[dict[str, Any], bool]:
    profile = bfs_levels(g, args.root)
    tree = tree_profile(g.k, profile.eccentricity)
    result = profile.as_dict() | {
        "tree": tree,
        "essential_radius": essential_radius(profile),
    }
    passed = profile.total == g.n and all(c <= t for c, t in zip(profile.counts, tree))
    return result, passed


def _check_distance(g: CayleyGraph, args) -> tuple[dict[str, Any], bool]:
    u, v = parse_vertex(args.u, g), parse_vertex(args.v, g)
    return {"u": u, "v": v, "distance": distance(g, u, v)}, True


_GRAPH_CHECKS = {
    "witness": _check_witness,
    "spectrum": _check_spectrum,
    "thm2": _check_thm2,
    "girth": _check_girth,
    "levels": _check_levels,
    "distance": _check_distance,
}


def cmd_graph_check(args) -> int:
    """Загружает граф, выполняет проверку и печатает одну JSON-запись."""
    started = time.perf_counter()
    params = {k: v for k, v in vars(args).items() if k not in ("func", "command", "log_level")}
    record = ExperimentRecord(command=args.command, parameters=params)
    g = load(args.graph)
    record.checksum = graph_checksum(g)
    record.result, passed = _GRAPH_CHECKS[args.command](g, args)
    record.result["passed"] = passed
    record.wall_time = time.perf_counter() - started
    print(record.to_json())
    return EXIT_OK if passed else EXIT_FAILED


# ──────────────────────────────────────────────
# Парсер
# ──────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rama", description="Графы Рамануджана LPS и случайные графы Кэли")
    parser.add_argument("--threads", type=int, default=None, help="число потоков (по умолчанию RAMA_THREADS)")
    parser.add_argument("--log-level", default=config.LOG_LEVEL)
    parser.add_argument("--version", action="version", version=config.VERSION)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="построить граф и записать в файл")
    family = p.add_mutually_exclusive_group(required=True)
    family.add_argument("--lps", action="store_true")
    family.add_argument("--random", action="store_true")
    p.add_argument("-p", type=int, default=5)
    p.add_argument("-m", type=int)
    p.add_argument("-q", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    for name, func, help_text in (
        ("table1", cmd_table1, "уровни BFS X^{p,q}"),
        ("table2", cmd_table2, "диаметры X_{p,q}"),
        ("table3", cmd_table3, "диаметры случайных графов Кэли"),
    ):
        t = sub.add_parser(name, help=help_text)
        t.add_argument("-p", type=int, default=5)
        t.add_argument("--out", help="файл CSV (по умолчанию stdout)")
        t.add_argument("--json", action="store_true", help="JSON-записи вместо CSV")
        t.set_defaults(func=func)
        if name == "table1":
            t.add_argument("-q", type=int, default=29)
            t.add_argument("--root", type=int, default=0)
        else:
            t.add_argument("-q", type=int, nargs="*")
        if name == "table3":
            t.add_argument("--seeds", type=int, nargs="*")

    def graph_command(name: str, help_text: str) -> argparse.ArgumentParser:
        c = sub.add_parser(name, help=help_text)
        c.add_argument("graph", help="файл .lpsg")
        c.set_defaults(func=cmd_graph_check)
        return c

    c = graph_command("witness", "расстояния до свидетелей W, I′ и порог диаметра")
    c.add_argument("-q", type=int, default=None)
    c.add_argument("--oracle-depth", type=int, default=0)

    c = graph_command("spectrum", "крайнее нетривиальное собственное значение")
    c.add_argument("--tol", type=float, default=1e-8)
    c.add_argument("--seed", type=int, default=0)

    c = graph_command("thm2", "множество недостижимых вершин и дисперсия сферы")
    c.add_argument("--x", type=int, default=0)
    c.add_argument("--R", type=int, required=True)

    graph_command("girth", "обхват")

    c = graph_command("levels", "уровни BFS")
    c.add_argument("--root", type=int, default=0)

    c = graph_command("distance", "расстояние между двумя вершинами")
    c.add_argument("u", help="'I', 'W', 'Iprime:q', 'a,b,c,d' или индекс")
    c.add_argument("v")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.threads is not None:
        args.threads = config.resolve_threads(args.threads)

    try:
        return args.func(args)
    except Exception as e:
        logger.exception("Команда %s завершилась ошибкой", args.command)
        params = {k: v for k, v in vars(args).items() if k not in ("func", "command", "log_level")}
        print(ExperimentRecord(command=args.command, parameters=params, error=f"{type(e).__name__}: {e}").to_json())
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
