"""
Модульная арифметика и перебор представлений суммой четырёх квадратов.

Всё здесь — чистые функции без состояния: символ Лежандра, квадратный корень
по составному нечётному модулю (Тонелли–Шэнкс → подъём Гензеля → КТО),
решения x0²+x1²+x2²+x3² = p с нужной чётностью и перебор решений
a²+b²+c²+d² = N с заданными сравнениями (оракул для оценок диаметра).
"""

import math
from dataclasses import dataclass, field
from enum import Enum


# ──────────────────────────────────────────────
# Типы
# ──────────────────────────────────────────────

@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"модуль должен быть ≥ 1, получено {self.modulus}")
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"вычет {self.value} вне [0, {self.modulus})")


@dataclass(frozen=True, order=True)
class QuaternionSolution:
    """Решение x0²+x1²+x2²+x3² = p, x0 > 0 нечётно, x1, x2, x3 чётны."""

    x0: int
    x1: int
    x2: int
    x3: int
    p: int

    def __post_init__(self):
        if self.x0 ** 2 + self.x1 ** 2 + self.x2 ** 2 + self.x3 ** 2 != self.p:
            raise ValueError(f"{self.as_tuple()} не является решением нормы {self.p}")
        if self.x0 <= 0 or self.x0 % 2 == 0:
            raise ValueError(f"x0 должно быть положительным и нечётным: {self.as_tuple()}")
        if any(x % 2 for x in (self.x1, self.x2, self.x3)):
            raise ValueError(f"x1, x2, x3 должны быть чётными: {self.as_tuple()}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.x0, self.x1, self.x2, self.x3)

    def conjugate(self) -> "QuaternionSolution":
        return QuaternionSolution(self.x0, -self.x1, -self.x2, -self.x3, self.p)


class Parity(str, Enum):
    ANY  = "any"
    ODD  = "odd"
    EVEN = "even"


class Sign(str, Enum):
    ANY         = "any"
    POSITIVE    = "positive"
    NONNEGATIVE = "nonnegative"


@dataclass(frozen=True)
class CoordinateConstraint:
    """x ≡ residue (mod modulus), плюс требования к чётности и знаку."""

    modulus: int = 1
    residue: int = 0
    parity: Parity = Parity.ANY
    sign: Sign = Sign.ANY

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"модуль сравнения должен быть ≥ 1, получено {self.modulus}")

    def accepts(self, x: int) -> bool:
        if (x - self.residue) % self.modulus:
            return False
        if self.parity is Parity.ODD and x % 2 == 0:
            return False
        if self.parity is Parity.EVEN and x % 2:
            return False
        if self.sign is Sign.POSITIVE and x <= 0:
            return False
        if self.sign is Sign.NONNEGATIVE and x < 0:
            return False
        return True

    def candidates(self, limit: int) -> list[int]:
        """Все допустимые x с |x| ≤ limit, по возрастанию |x|."""
        values = [x for x in range(-limit, limit + 1) if self.accepts(x)]
        return sorted(values, key=lambda x: (abs(x), x))


@dataclass(frozen=True)
class CongruencePattern:
    """Ограничения на (a, b, c, d); nonzero_tail — хотя бы одно из b, c, d ≠ 0."""

    a: CoordinateConstraint = field(default_factory=CoordinateConstraint)
    b: CoordinateConstraint = field(default_factory=CoordinateConstraint)
    c: CoordinateConstraint = field(default_factory=CoordinateConstraint)
    d: CoordinateConstraint = field(default_factory=CoordinateConstraint)
    nonzero_tail: bool = False


def generator_pattern() -> CongruencePattern:
    """x0 > 0 нечётно, x1, x2, x3 чётны."""
    even = CoordinateConstraint(parity=Parity.EVEN)
    return CongruencePattern(
        a=CoordinateConstraint(parity=Parity.ODD, sign=Sign.POSITIVE),
        b=even, c=even, d=even,
    )


# ──────────────────────────────────────────────
# Простые числа и разложение (пробное деление)
# ──────────────────────────────────────────────

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for f in range(3, math.isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


def factorize(m: int) -> dict[int, int]:
    """{простое: показатель}; для m=1 — пустой словарь."""
    if m < 1:
        raise ValueError(f"раскладываются только m ≥ 1, получено {m}")
    factors: dict[int, int] = {}
    f = 2
    while f * f <= m:
        while m % f == 0:
            factors[f] = factors.get(f, 0) + 1
            m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        factors[m] = factors.get(m, 0) + 1
    return factors


# ──────────────────────────────────────────────
# Квадратичные вычеты
# ──────────────────────────────────────────────

def legendre(a: int, q: int) -> int:
    if q < 3 or not is_prime(q):
        raise ValueError(f"символ Лежандра определён для нечётного простого, получено {q}")
    ls = pow(a % q, (q - 1) // 2, q)
    return -1 if ls == q - 1 else ls


def _sqrt_prime(a: int, p: int) -> int | None:
    """Корень из a по простому p (a взаимно просто с p), меньший из двух."""
    a %= p
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)

    # p - 1 = q · 2^s, q нечётно
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1

    c = pow(z, q, p)
    r = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        # наименьшее i с t^(2^i) = 1
        i, t2 = 1, t * t % p
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return min(r, p - r)


def _sqrt_prime_power(a: int, p: int, e: int) -> int | None:
    pe = p ** e
    a %= pe
    if a == 0:
        return 0

    v = 0
    while a % p == 0:
        a //= p
        v += 1
    if v % 2:
        return None

    r = _sqrt_prime(a, p)
    if r is None:
        return None

    # Подъём Гензеля: шаг Ньютона удваивает точность
    target = p ** (e - v)
    mod = p
    while mod < target:
        mod = min(mod * mod, target)
        r = (r - (r * r - a) * pow(2 * r, -1, mod)) % mod

    root = p ** (v // 2) * r % pe
    return min(root, pe - root)


def sqrt_mod(a: int, m: int) -> Residue | None:
    """
    Некоторый корень r² ≡ a (mod m) для нечётного m или None.

    Детерминирован: по каждой степени простого берётся меньший из корней,
    затем корни склеиваются по КТО.
    """
    if m < 1 or m % 2 == 0:
        raise ValueError(f"модуль должен быть нечётным и ≥ 1, получено {m}")
    if m == 1:
        return Residue(0, 1)

    x, modulus = 0, 1
    for p, e in sorted(factorize(m).items()):
        pe = p ** e
        r = _sqrt_prime_power(a, p, e)
        if r is None:
            return None
        # x ≡ прежнее (mod modulus), x ≡ r (mod pe)
        x = x + modulus * ((r - x) * pow(modulus, -1, pe) % pe)
        modulus *= pe
    return Residue(x % m, m)


# ──────────────────────────────────────────────
# Суммы четырёх квадратов
# ──────────────────────────────────────────────

def four_squares_with_pattern(
    N: int,
    pattern: CongruencePattern,
    limit: int | None = None,
) -> list[tuple[int, int, int, int]]:
    """
    Все (a, b, c, d) с a²+b²+c²+d² = N, удовлетворяющие pattern.

    Пустой список — доказательство отсутствия решений для данного N.
    b, c, d перебираются по допустимым классам, a находится извлечением корня.
    """
    if N < 1:
        raise ValueError(f"N должно быть ≥ 1, получено {N}")
    bound = math.isqrt(N)
    if limit is not None:
        bound = min(bound, limit)

    cb = pattern.b.candidates(bound)
    cc = pattern.c.candidates(bound)
    cd = pattern.d.candidates(bound)

    found: list[tuple[int, int, int, int]] = []
    for b in cb:
        rb = N - b * b
        if rb < 0:
            break
        for c in cc:
            rc = rb - c * c
            if rc < 0:
                break
            for d in cd:
                ra = rc - d * d
                if ra < 0:
                    break
                if pattern.nonzero_tail and b == 0 and c == 0 and d == 0:
                    continue
                a = math.isqrt(ra)
                if a * a != ra or a > bound:
                    continue
                for sa in ({a, -a} if a else {0}):
                    if pattern.a.accepts(sa):
                        found.append((sa, b, c, d))
    return sorted(found)


def enumerate_generator_solutions(p: int) -> list[QuaternionSolution]:
    """
    Ровно p+1 решений x0²+x1²+x2²+x3² = p с x0 > 0 нечётным и чётными x1..x3.

    Порядок фиксирован (по кортежу координат) — от него зависит порядок
    образующих и строк смежности.
    """
    if not is_prime(p) or p % 4 != 1:
        raise ValueError(f"p должно быть простым ≡ 1 (mod 4), получено {p}")

    solutions = [
        QuaternionSolution(*xs, p=p)
        for xs in four_squares_with_pattern(p, generator_pattern())
    ]
    if len(solutions) != p + 1:
        raise ArithmeticError(f"найдено {len(solutions)} решений нормы {p}, ожидалось {p + 1}")
    return solutions
