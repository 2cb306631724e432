"""
Графы Кэли: LPS-графы X_{p,m} и случайные графы Z^q над PSL₂(Z/qZ).

Граф неизменяем: n вершин, k слотов смежности на вершину (по одному на
образующую, в фиксированном порядке), строка v — это v·s₁, …, v·s_k.

Бинарный формат (.lpsg), все числа little-endian:

    смещение  размер      поле
    0         4           магия b"LPSG"
    4         2  u16      версия формата (1)
    6         1  u8       вид группы: 0 = PSL, 1 = PGL, 255 = нет
    7         1  u8       семейство: 0 = LPS, 1 = random, 255 = нет
    8         8  u64      p
    16        8  u64      m
    24        8  u64      q
    32        8  u64      seed
    40        8  u64      n
    48        2  u16      k
    50        2  u16      число образующих g
    52        16·g u32    образующие, (a, b, c, d) каждая
    …         4·n·k u32   смежность, строка за строкой
    конец−8   8  u64      контрольная сумма: BLAKE2b (8 байт) всего, что выше

Случайные образующие берутся из numpy PCG64 с явным 64-битным seed;
энтропия ОС не используется никогда.
"""

import hashlib
import logging
import os
import struct
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

import config
from errors import (
    ChecksumMismatch,
    ConstructionUnsupported,
    GraphFormatError,
    IncompleteOrbitError,
    ResourceLimitError,
)
from ntheory import enumerate_generator_solutions, is_prime, legendre, sqrt_mod
from pgl import (
    GroupSpec,
    Kind,
    ProjMatrix,
    VertexTable,
    canonical,
    enumerate_group,
    identity,
    inverse,
    lift_generator,
    multiply_keys,
)

logger = logging.getLogger(__name__)

MAGIC = b"LPSG"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<4sHBBQQQQQHH")
_CHECKSUM = struct.Struct("<Q")
_NONE = 255


class Family(str, Enum):
    LPS = "lps"
    RANDOM = "random"


@dataclass(frozen=True)
class Provenance:
    family: Family
    p: int = 0
    m: int = 0
    q: int = 0
    seed: int = 0

    def describe(self) -> dict:
        if self.family is Family.LPS:
            return {"family": self.family.value, "p": self.p, "m": self.m}
        return {"family": self.family.value, "q": self.q, "seed": self.seed}


@dataclass(frozen=True, eq=False)
class CayleyGraph:
    n: int
    k: int
    adjacency: np.ndarray                    # плоский uint32, длина n·k
    generators: tuple[ProjMatrix, ...] = ()
    provenance: Provenance | None = None
    kind: Kind | None = None
    _table: VertexTable | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.adjacency.shape != (self.n * self.k,):
            raise ValueError(f"ожидалась смежность длины {self.n * self.k}, получено {self.adjacency.shape}")

    @property
    def rows(self) -> np.ndarray:
        """Смежность как матрица n×k (представление, без копии)."""
        return self.adjacency.reshape(self.n, self.k)

    def row(self, v: int) -> np.ndarray:
        return self.adjacency[v * self.k:(v + 1) * self.k]

    @property
    def is_lps(self) -> bool:
        return self.provenance is not None and self.provenance.family is Family.LPS

    @property
    def vertex_table(self) -> VertexTable:
        """Таблица вершин; после load восстанавливается замыканием орбиты."""
        if self._table is None:
            if not self.generators:
                raise ValueError("у графа нет образующих — вершины не являются матрицами")
            spec = GroupSpec.of(self.generators[0].modulus, self.generators[0].kind)
            object.__setattr__(self, "_table", enumerate_group(spec, self.generators))
        return self._table

    def index_of(self, g: ProjMatrix) -> int:
        return self.vertex_table.index(g)

    def vertex(self, idx: int) -> ProjMatrix:
        return self.vertex_table.lookup(idx)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CayleyGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.k == other.k
            and self.kind == other.kind
            and self.provenance == other.provenance
            and self.generators == other.generators
            and np.array_equal(self.adjacency, other.adjacency)
        )

    __hash__ = None


# ──────────────────────────────────────────────
# Построение
# ──────────────────────────────────────────────

def _adjacency(table: VertexTable, generators: tuple[ProjMatrix, ...]) -> np.ndarray:
    rows = np.empty((len(table), len(generators)), dtype=np.uint32)
    for j, g in enumerate(generators):
        rows[:, j] = table.indices(multiply_keys(table.keys, g)).astype(np.uint32)
    return rows.ravel()


def _assemble(generators: tuple[ProjMatrix, ...], table: VertexTable, provenance: Provenance) -> CayleyGraph:
    return CayleyGraph(
        n=len(table),
        k=len(generators),
        adjacency=_adjacency(table, generators),
        generators=generators,
        provenance=provenance,
        kind=generators[0].kind,
        _table=table,
    )


def lps_kind(p: int, m: int) -> Kind:
    """PSL, если p — квадрат по m; PGL, если m простое и p — не квадрат."""
    if m < 5 or m % 2 == 0:
        raise ConstructionUnsupported(f"m must be odd and >= 5, got {m}")
    if m % p == 0:
        raise ConstructionUnsupported(f"p={p} divides m={m}")
    if sqrt_mod(-1, m) is None:
        raise ConstructionUnsupported(f"-1 not a quadratic residue mod {m}")
    if sqrt_mod(p, m) is not None:
        return Kind.PSL
    if is_prime(m):
        return Kind.PGL
    raise ConstructionUnsupported(f"{p} not a quadratic residue mod composite {m}")


def build_lps(p: int, m: int) -> CayleyGraph:
    """(p+1)-регулярный граф X_{p,m}: недвудольный над PSL или двудольный над PGL."""
    solutions = enumerate_generator_solutions(p)
    kind = lps_kind(p, m)
    generators = tuple(lift_generator(s, m) for s in solutions)

    if len(set(generators)) != len(generators):
        raise ConstructionUnsupported(f"lifted generators of X_{p},{m} are not distinct")
    if {inverse(g) for g in generators} != set(generators):
        raise ArithmeticError(f"образующие X_{p},{m} не замкнуты относительно обращения")

    spec = GroupSpec.of(m, kind)
    logger.info("Строю X_{%d,%d}: %s₂, %d вершин, степень %d", p, m, kind.value, spec.order, len(generators))
    table = enumerate_group(spec, generators)
    return _assemble(generators, table, Provenance(Family.LPS, p=p, m=m))


def _sample_sl2(rng: np.random.Generator, q: int) -> ProjMatrix:
    """Равномерный элемент PSL₂(Z/qZ): случайная обратимая матрица, первая строка делится на det."""
    while True:
        a, b, c, d = (int(x) for x in rng.integers(0, q, size=4))
        det = (a * d - b * c) % q
        if det:
            inv = pow(det, -1, q)
            return canonical((a * inv, b * inv, c, d), q, Kind.PSL)


def build_random_cayley(q: int, seed: int) -> CayleyGraph:
    """
    6-регулярный граф Z^q на PSL₂(Z/qZ) с образующими s₁^±, s₂^±, s₃^±.

    Тройки пересэмплируются из того же потока, пока шесть элементов не станут
    различными неединичными и не породят всю группу.
    """
    if q < 5 or not is_prime(q):
        raise ValueError(f"q должно быть нечётным простым ≥ 5, получено {q}")
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"seed должен помещаться в 64 бита без знака, получено {seed}")

    rng = np.random.Generator(np.random.PCG64(seed))
    spec = GroupSpec.of(q, Kind.PSL)
    one = identity(q, Kind.PSL)

    for attempt in range(1, config.RANDOM_RETRIES + 1):
        picks = [_sample_sl2(rng, q) for _ in range(3)]
        generators = tuple(x for s in picks for x in (s, inverse(s)))
        if len(set(generators)) != 6 or one in generators:
            continue
        try:
            table = enumerate_group(spec, generators)
        except IncompleteOrbitError:
            logger.debug("Попытка %d: образующие не порождают группу", attempt)
            continue
        logger.info("Z^%d (seed=%d): образующие найдены с попытки %d", q, seed, attempt)
        return _assemble(generators, table, Provenance(Family.RANDOM, q=q, m=q, seed=seed))

    raise ResourceLimitError(
        f"за {config.RANDOM_RETRIES} попыток не найдено порождающей тройки для q={q}, seed={seed}"
    )


def admissible_moduli(p: int, upper: int) -> list[int]:
    """Простые q ≤ upper, q ≠ p, по которым −1 и p — квадраты (недвудольный случай X_{p,q})."""
    return [
        q for q in range(3, upper + 1, 2)
        if q != p and is_prime(q) and legendre(-1, q) == 1 and legendre(p, q) == 1
    ]


# ──────────────────────────────────────────────
# Сериализация
# ──────────────────────────────────────────────

_KIND_CODES = {Kind.PSL: 0, Kind.PGL: 1}
_FAMILY_CODES = {Family.LPS: 0, Family.RANDOM: 1}


def _digest(payload: bytes) -> bytes:
    return hashlib.blake2b(payload, digest_size=8).digest()


def serialize(graph: CayleyGraph) -> bytes:
    prov = graph.provenance
    header = _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        _KIND_CODES.get(graph.kind, _NONE),
        _FAMILY_CODES[prov.family] if prov else _NONE,
        prov.p if prov else 0,
        prov.m if prov else 0,
        prov.q if prov else 0,
        prov.seed if prov else 0,
        graph.n,
        graph.k,
        len(graph.generators),
    )
    gens = np.array([g.entries for g in graph.generators], dtype="<u4").reshape(-1)
    payload = header + gens.tobytes() + graph.adjacency.astype("<u4", copy=False).tobytes()
    return payload + _digest(payload)


def graph_checksum(graph: CayleyGraph) -> str:
    return serialize(graph)[-_CHECKSUM.size:].hex()


def deserialize(blob: bytes) -> CayleyGraph:
    if len(blob) < _HEADER.size + _CHECKSUM.size:
        raise ChecksumMismatch(f"файл слишком короткий ({len(blob)} байт) — обрезан?")
    payload, stored = blob[:-_CHECKSUM.size], blob[-_CHECKSUM.size:]
    if _digest(payload) != stored:
        raise ChecksumMismatch("контрольная сумма не совпадает — файл повреждён или обрезан")

    magic, version, kind_code, family_code, p, m, q, seed, n, k, gcount = _HEADER.unpack_from(payload)
    if magic != MAGIC:
        raise GraphFormatError(f"неверная сигнатура {magic!r}")
    if version != FORMAT_VERSION:
        raise GraphFormatError(f"версия формата {version}, поддерживается {FORMAT_VERSION}")

    expected = _HEADER.size + 16 * gcount + 4 * n * k
    if len(payload) != expected:
        raise GraphFormatError(f"размер данных {len(payload)} байт, ожидалось {expected}")

    kind = next((kd for kd, code in _KIND_CODES.items() if code == kind_code), None)
    family = next((f for f, code in _FAMILY_CODES.items() if code == family_code), None)
    provenance = Provenance(family, p=p, m=m, q=q, seed=seed) if family else None

    offset = _HEADER.size
    gens = np.frombuffer(payload, dtype="<u4", count=4 * gcount, offset=offset).reshape(gcount, 4)
    modulus = m if family is Family.LPS else q
    generators = tuple(
        ProjMatrix(*(int(x) for x in row), modulus=modulus, kind=kind) for row in gens
    )
    offset += 16 * gcount
    adjacency = np.frombuffer(payload, dtype="<u4", count=n * k, offset=offset).astype(np.uint32)
    return CayleyGraph(n=n, k=k, adjacency=adjacency, generators=generators, provenance=provenance, kind=kind)


def save(graph: CayleyGraph, path: str) -> str:
    """Пишет граф атомарно (через временный файл) и возвращает контрольную сумму."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    blob = serialize(graph)
    tmp_path = path + ".tmp"
    try:
        with open(tmp_path, "wb") as f:
            f.write(blob)
        os.replace(tmp_path, path)
    except OSError as error:
        logger.error("Не удалось записать граф в %s: %s", path, error)
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    logger.info("Граф записан в %s (%d байт)", path, len(blob))
    return blob[-_CHECKSUM.size:].hex()


def load(path: str) -> CayleyGraph:
    with open(path, "rb") as f:
        blob = f.read()
    graph = deserialize(blob)
    logger.info("Граф загружен из %s: n=%d k=%d", path, graph.n, graph.k)
    return graph
