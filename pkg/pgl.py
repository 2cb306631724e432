"""
Проективные группы PSL₂(Z/mZ) и PGL₂(Z/qZ).

Элемент хранится каноническим представителем своего проективного класса:
  PSL — из {M, −M} берётся лексикографически меньший по (a, b, c, d);
  PGL — матрица делится на первый ненулевой элемент (модуль простой).
Для векторных операций матрица кодируется числом
  key = ((a·m + b)·m + c)·m + d,
порядок ключей совпадает с лексикографическим порядком четвёрок.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

import config
from errors import ConstructionUnsupported, IncompleteOrbitError, ResourceLimitError
from ntheory import QuaternionSolution, factorize, is_prime, sqrt_mod

logger = logging.getLogger(__name__)

# Ключ должен помещаться в int64: m⁴ < 2⁶³
MAX_MODULUS = 55_000

# Сколько строк уровня умножаем за раз при замыкании орбиты
_CHUNK = 1 << 20


class Kind(str, Enum):
    PSL = "PSL"
    PGL = "PGL"


# ──────────────────────────────────────────────
# Скалярный уровень: ProjMatrix
# ──────────────────────────────────────────────

@dataclass(frozen=True, order=True)
class ProjMatrix:
    a: int
    b: int
    c: int
    d: int
    modulus: int
    kind: Kind

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def key(self) -> int:
        m = self.modulus
        return ((self.a * m + self.b) * m + self.c) * m + self.d

    @property
    def is_identity(self) -> bool:
        return self.entries == (1, 0, 0, 1) or (self.modulus == 1)

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.modulus

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


def _check_modulus(m: int, kind: Kind) -> None:
    if m < 1 or m % 2 == 0:
        raise ValueError(f"модуль должен быть нечётным и ≥ 1, получено {m}")
    if m > MAX_MODULUS:
        raise ValueError(f"модуль {m} больше допустимого {MAX_MODULUS}")
    if kind is Kind.PGL and not is_prime(m):
        raise ValueError(f"PGL₂ поддерживается только по простому модулю, получено {m}")


def canonical(raw: Sequence, modulus: int, kind: Kind) -> ProjMatrix:
    """Канонический представитель класса матрицы raw (2×2 или плоская четвёрка)."""
    kind = Kind(kind)
    _check_modulus(modulus, kind)
    a, b, c, d = (int(x) % modulus for x in np.asarray(raw, dtype=object).reshape(4))
    det = (a * d - b * c) % modulus
    if math.gcd(det, modulus) != 1:
        raise ValueError(f"матрица {(a, b, c, d)} необратима по модулю {modulus}")

    if kind is Kind.PSL:
        if det != 1 % modulus:
            raise ValueError(f"det = {det} ≠ 1 (mod {modulus}), матрица не из SL₂")
        neg = tuple((-x) % modulus for x in (a, b, c, d))
        a, b, c, d = min((a, b, c, d), neg)
    else:
        lead = next(x for x in (a, b, c, d) if x)
        inv = pow(lead, -1, modulus)
        a, b, c, d = (x * inv % modulus for x in (a, b, c, d))
    return ProjMatrix(a, b, c, d, modulus, kind)


def identity(modulus: int, kind: Kind) -> ProjMatrix:
    return canonical((1, 0, 0, 1), modulus, kind)


def mul(x: ProjMatrix, y: ProjMatrix) -> ProjMatrix:
    if x.modulus != y.modulus or x.kind is not y.kind:
        raise ValueError(
            f"нельзя перемножить элементы разных групп: {x.kind.value}(mod {x.modulus}) "
            f"и {y.kind.value}(mod {y.modulus})"
        )
    m = x.modulus
    return canonical(
        (
            (x.a * y.a + x.b * y.c) % m,
            (x.a * y.b + x.b * y.d) % m,
            (x.c * y.a + x.d * y.c) % m,
            (x.c * y.b + x.d * y.d) % m,
        ),
        m,
        x.kind,
    )


def inverse(g: ProjMatrix) -> ProjMatrix:
    # Присоединённая матрица: для PSL det = 1, для PGL скаляр не важен
    return canonical((g.d, -g.b, -g.c, g.a), g.modulus, g.kind)


# ──────────────────────────────────────────────
# Порядок группы
# ──────────────────────────────────────────────

def group_order(m: int, kind: Kind) -> int:
    """|PSL₂(Z/mZ)| = m³·∏(1 − q⁻²)/2 для нечётного m; |PGL₂(Z/qZ)| = q³ − q."""
    kind = Kind(kind)
    if m < 1 or m % 2 == 0:
        raise ValueError(f"порядок считается для нечётного m ≥ 1, получено {m}")
    if m == 1:
        return 1
    if kind is Kind.PGL:
        if not is_prime(m):
            raise ValueError(f"PGL₂ поддерживается только по простому модулю, получено {m}")
        return m ** 3 - m
    numerator, denominator = m ** 3, 2
    for q in factorize(m):
        numerator *= q * q - 1
        denominator *= q * q
    return numerator // denominator


@dataclass(frozen=True)
class GroupSpec:
    modulus: int
    kind: Kind
    order: int

    @classmethod
    def of(cls, modulus: int, kind: Kind) -> "GroupSpec":
        return cls(modulus, Kind(kind), group_order(modulus, kind))

    @property
    def closed_form_order(self) -> int | None:
        """(m³ − m)/2 — формула для простого m; для составного не применяется."""
        if self.kind is Kind.PSL and is_prime(self.modulus):
            return (self.modulus ** 3 - self.modulus) // 2
        return None


# ──────────────────────────────────────────────
# Вложение кватернионов
# ──────────────────────────────────────────────

def lift_generator(s: QuaternionSolution, m: int) -> ProjMatrix:
    """
    α = (1/√p)·[[x0 + i·x1, x2 + i·x3], [−x2 + i·x3, x0 − i·x1]] по модулю m.

    Если p — квадрат по m, получаем элемент PSL₂ с det = 1. Если m простое и
    p не квадрат, множитель 1/√p опускается и элемент лежит в PGL₂.
    """
    i = sqrt_mod(-1, m)
    if i is None:
        raise ConstructionUnsupported(f"-1 not a quadratic residue mod {m}")
    i = i.value
    raw = [
        s.x0 + i * s.x1,
        s.x2 + i * s.x3,
        -s.x2 + i * s.x3,
        s.x0 - i * s.x1,
    ]

    root = sqrt_mod(s.p, m)
    if root is not None:
        scale = pow(root.value, -1, m)
        return canonical([x * scale for x in raw], m, Kind.PSL)
    if is_prime(m):
        return canonical(raw, m, Kind.PGL)
    raise ConstructionUnsupported(f"{s.p} not a quadratic residue mod composite {m}")


# ──────────────────────────────────────────────
# Векторный уровень: массивы ключей
# ──────────────────────────────────────────────

def encode(entries: np.ndarray, m: int) -> np.ndarray:
    e = entries.astype(np.int64, copy=False)
    return ((e[:, 0] * m + e[:, 1]) * m + e[:, 2]) * m + e[:, 3]


def decode(keys: np.ndarray, m: int) -> np.ndarray:
    keys = np.asarray(keys, dtype=np.int64)
    out = np.empty((keys.size, 4), dtype=np.int64)
    rest = keys.copy()
    for col in (3, 2, 1, 0):
        out[:, col] = rest % m
        rest //= m
    return out


def _inverse_table(q: int) -> np.ndarray:
    table = np.zeros(q, dtype=np.int64)
    for x in range(1, q):
        table[x] = pow(x, -1, q)
    return table


def canonical_keys(entries: np.ndarray, m: int, kind: Kind, inv_table: np.ndarray | None = None) -> np.ndarray:
    """Векторный canonical: строки (a, b, c, d) по модулю m → ключи представителей."""
    if kind is Kind.PSL:
        return np.minimum(encode(entries, m), encode((-entries) % m, m))
    if inv_table is None:
        inv_table = _inverse_table(m)
    lead_col = np.argmax(entries != 0, axis=1)
    lead = entries[np.arange(entries.shape[0]), lead_col]
    return encode(entries * inv_table[lead][:, None] % m, m)


def multiply_keys(keys: np.ndarray, g: ProjMatrix, inv_table: np.ndarray | None = None) -> np.ndarray:
    """Ключи канонических форм x·g для всех x из keys."""
    m = g.modulus
    e = decode(keys, m)
    prod = np.empty_like(e)
    prod[:, 0] = (e[:, 0] * g.a + e[:, 1] * g.c) % m
    prod[:, 1] = (e[:, 0] * g.b + e[:, 1] * g.d) % m
    prod[:, 2] = (e[:, 2] * g.a + e[:, 3] * g.c) % m
    prod[:, 3] = (e[:, 2] * g.b + e[:, 3] * g.d) % m
    return canonical_keys(prod, m, g.kind, inv_table)


class VertexTable:
    """
    Биекция между элементами группы и индексами 0..n−1 (индекс 0 — единица).

    Индексы раздаются в порядке обхода в ширину: уровень за уровнем, внутри
    уровня по возрастанию ключа.
    """

    def __init__(self, keys: np.ndarray, modulus: int, kind: Kind):
        self.keys = np.asarray(keys, dtype=np.int64)
        self.modulus = modulus
        self.kind = Kind(kind)
        self._order = np.argsort(self.keys, kind="stable")
        self._sorted = self.keys[self._order]

    def __len__(self) -> int:
        return int(self.keys.size)

    def indices(self, keys: np.ndarray) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        pos = np.searchsorted(self._sorted, keys)
        pos_clipped = np.minimum(pos, self._sorted.size - 1)
        if not np.array_equal(self._sorted[pos_clipped], keys):
            raise KeyError("элемент отсутствует в таблице вершин")
        return self._order[pos_clipped]

    def index(self, g: ProjMatrix) -> int:
        if g.modulus != self.modulus or g.kind is not self.kind:
            raise ValueError(f"{g} не из группы {self.kind.value}(mod {self.modulus})")
        return int(self.indices(np.array([g.key]))[0])

    def lookup(self, idx: int) -> ProjMatrix:
        if not 0 <= idx < len(self):
            raise IndexError(f"вершина {idx} вне [0, {len(self)})")
        a, b, c, d = (int(x) for x in decode(self.keys[idx:idx + 1], self.modulus)[0])
        return ProjMatrix(a, b, c, d, self.modulus, self.kind)


def _close_orbit(generators: Sequence[ProjMatrix], spec: GroupSpec) -> np.ndarray:
    """
    Обход в ширину по группе от единицы.

    Соседи уровня r лежат на уровнях r−1, r, r+1 (набор образующих
    симметричен), поэтому новые элементы сверяются только с двумя
    последними уровнями.
    """
    m, kind = spec.modulus, spec.kind
    inv_table = _inverse_table(m) if kind is Kind.PGL else None

    current = np.array([identity(m, kind).key], dtype=np.int64)
    previous = np.empty(0, dtype=np.int64)
    levels = [current]
    total = 1
    while current.size:
        parts = []
        for start in range(0, current.size, _CHUNK):
            chunk = current[start:start + _CHUNK]
            for g in generators:
                parts.append(np.unique(multiply_keys(chunk, g, inv_table)))
        candidates = np.unique(np.concatenate(parts))
        fresh = candidates[
            ~np.isin(candidates, current, assume_unique=True)
            & ~np.isin(candidates, previous, assume_unique=True)
        ]
        previous, current = current, fresh
        if fresh.size:
            levels.append(fresh)
            total += fresh.size
            logger.debug("Уровень %d: %d новых элементов", len(levels) - 1, fresh.size)
        if total > spec.order:
            break
    return np.concatenate(levels)


def enumerate_group(spec: GroupSpec, generators: Sequence[ProjMatrix]) -> VertexTable:
    """Таблица вершин: замыкание орбиты единицы; заодно доказывает связность."""
    if spec.order > config.MAX_GROUP_ORDER:
        raise ResourceLimitError(
            f"порядок группы {spec.order} превышает бюджет {config.MAX_GROUP_ORDER}"
        )
    for g in generators:
        if g.modulus != spec.modulus or g.kind is not spec.kind:
            raise ValueError(f"образующая {g} не из группы {spec.kind.value}(mod {spec.modulus})")

    keys = _close_orbit(generators, spec)
    if keys.size != spec.order:
        raise IncompleteOrbitError(int(keys.size), spec.order)
    logger.info("Группа %s₂(Z/%dZ): %d элементов перечислено", spec.kind.value, spec.modulus, keys.size)
    return VertexTable(keys, spec.modulus, spec.kind)
