"""Точное ядро разреженных многочленов Лорана над ℤ.

Poly хранит термы в каноническом виде: кортеж пар (коэффициент, моном),
строго по убыванию в graded-lex порядке (сначала полная степень, затем
лексикографически по порядку переменных кольца). Коэффициенты: int Python,
так что переполнения нет. Все значения неизменяемы.
"""

from __future__ import annotations

import operator
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial, prod

from .errors import IntegralityError, RingMismatchError, UnknownVariableError

Monomial = tuple[int, ...]


def grlex_key(exps: Monomial) -> tuple[int, Monomial]:
    return (sum(exps), exps)


@dataclass(frozen=True)
class RingSpec:
    variables: tuple[str, ...]
    laurent: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "laurent", frozenset(self.laurent))
        if not self.variables:
            raise ValueError("кольцо без переменных")
        if any(not name for name in self.variables):
            raise ValueError("пустое имя переменной")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"повторяющиеся переменные: {self.variables}")
        extra = self.laurent - set(self.variables)
        if extra:
            raise UnknownVariableError(f"laurent-флаг у неизвестных переменных: {sorted(extra)}")

    @classmethod
    def of(cls, names: str, laurent: str = "") -> RingSpec:
        return cls(tuple(names.split()), frozenset(laurent.split()))

    @property
    def arity(self) -> int:
        return len(self.variables)

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.variables)}

    @cached_property
    def _laurent_mask(self) -> tuple[bool, ...]:
        return tuple(name in self.laurent for name in self.variables)

    def index(self, var: str) -> int:
        try:
            return self._positions[var]
        except KeyError:
            raise UnknownVariableError(f"переменной {var!r} нет в кольце {self.variables}") from None

    def allows(self, exps: Monomial) -> bool:
        return all(e >= 0 or flag for e, flag in zip(exps, self._laurent_mask, strict=True))

    def union(self, other: RingSpec) -> RingSpec:
        if self.variables != other.variables:
            raise RingMismatchError(f"кольца {self.variables} и {other.variables} не совпадают")
        if other.laurent <= self.laurent:
            return self
        return RingSpec(self.variables, self.laurent | other.laurent)

    def zero(self) -> Poly:
        return Poly(self, ())

    def const(self, c: int) -> Poly:
        if c == 0:
            return self.zero()
        return Poly(self, ((c, (0,) * self.arity),))

    def one(self) -> Poly:
        return self.const(1)

    def monomial(self, exps: Mapping[str, int] | Monomial, coeff: int = 1) -> Poly:
        if isinstance(exps, Mapping):
            vector = [0] * self.arity
            for name, e in exps.items():
                vector[self.index(name)] = e
            exps = tuple(vector)
        return Poly.from_dict(self, {tuple(exps): coeff})

    def gen(self, var: str) -> Poly:
        return self.monomial({var: 1})

    def gens(self) -> list[Poly]:
        return [self.gen(name) for name in self.variables]

    def __str__(self) -> str:
        from .poly_format import format_ring

        return format_ring(self)


@dataclass(frozen=True, eq=False)
class Poly:
    ring: RingSpec
    terms: tuple[tuple[int, Monomial], ...]

    @classmethod
    def from_dict(cls, ring: RingSpec, coeffs: Mapping[Monomial, int]) -> Poly:
        items = [(c, e) for e, c in coeffs.items() if c]
        items.sort(key=lambda item: grlex_key(item[1]), reverse=True)
        for _, e in items:
            if not ring.allows(e):
                raise IntegralityError(f"моном {e} недопустим в кольце {ring}")
        return cls(ring, tuple(items))

    @cached_property
    def as_dict(self) -> dict[Monomial, int]:
        return {e: c for c, e in self.terms}

    # --- сравнение и служебное ---

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring.variables == other.ring.variables and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring.variables, self.terms))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        from .poly_format import format_poly

        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({self})"

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Mapping[str, int] | Monomial) -> int:
        if isinstance(exps, Mapping):
            vector = [0] * self.ring.arity
            for name, e in exps.items():
                vector[self.ring.index(name)] = e
            exps = tuple(vector)
        return self.as_dict.get(tuple(exps), 0)

    def leading_term(self) -> tuple[int, Monomial]:
        return self.terms[0]

    def degree(self, variables: Iterable[str] | None = None) -> int:
        """Полная степень (по подмножеству переменных, если задано); у нуля −1."""
        if not self.terms:
            return -1
        if variables is None:
            return max(sum(e) for _, e in self.terms)
        idx = [self.ring.index(v) for v in variables]
        return max(sum(e[i] for i in idx) for _, e in self.terms)

    def max_exponent(self, var: str) -> int:
        i = self.ring.index(var)
        return max((e[i] for _, e in self.terms), default=0)

    def min_exponent(self, var: str) -> int:
        i = self.ring.index(var)
        return min((e[i] for _, e in self.terms), default=0)

    def involves(self, var: str) -> bool:
        i = self.ring.index(var)
        return any(e[i] for _, e in self.terms)

    def with_ring(self, ring: RingSpec) -> Poly:
        """Та же запись в кольце с теми же переменными и другими laurent-флагами."""
        if ring.variables != self.ring.variables:
            raise RingMismatchError(f"кольца {self.ring.variables} и {ring.variables} не совпадают")
        if ring == self.ring:
            return self
        for _, e in self.terms:
            if not ring.allows(e):
                raise IntegralityError(f"моном {e} недопустим в кольце {ring}")
        return Poly(ring, self.terms)

    # --- арифметика ---

    def _coerce(self, other) -> Poly | None:
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return None

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        ring = self.ring.union(other.ring)
        if not other.terms:
            return self.with_ring(ring)
        acc = dict(self.as_dict)
        for c, e in other.terms:
            acc[e] = acc.get(e, 0) + c
        return Poly.from_dict(ring, acc)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.ring, tuple((-c, e) for c, e in self.terms))

    def __sub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> Poly:
        if isinstance(other, int):
            if other == 0:
                return self.ring.zero()
            return Poly(self.ring, tuple((c * other, e) for c, e in self.terms))
        if not isinstance(other, Poly):
            return NotImplemented
        ring = self.ring.union(other.ring)
        acc: dict[Monomial, int] = {}
        add = operator.add
        for c1, e1 in self.terms:
            for c2, e2 in other.terms:
                key = tuple(map(add, e1, e2))
                acc[key] = acc.get(key, 0) + c1 * c2
        return Poly.from_dict(ring, acc)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Poly:
        if exponent < 0:
            return inverse_unit(self) ** (-exponent)
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result


def _check_same_variables(p: Poly, q: Poly) -> None:
    if p.ring.variables != q.ring.variables:
        raise RingMismatchError(f"кольца {p.ring.variables} и {q.ring.variables} не совпадают")


def is_unit_monomial(p: Poly) -> bool:
    if len(p.terms) != 1:
        return False
    c, e = p.terms[0]
    if c not in (1, -1):
        return False
    return all(not x or name in p.ring.laurent for x, name in zip(e, p.ring.variables, strict=True))


def inverse_unit(p: Poly) -> Poly:
    """Обратный к моному ±x^e; всё остальное необратимо."""
    if len(p.terms) != 1 or p.terms[0][0] not in (1, -1):
        raise IntegralityError(f"{p} не является обратимым мономом")
    c, e = p.terms[0]
    return Poly.from_dict(p.ring, {tuple(-x for x in e): c})


def _images_of(m) -> tuple[Sequence[Poly], RingSpec | None]:
    images = getattr(m, "images", None)
    if images is not None:
        return images, getattr(m, "target", None)
    return list(m), None


def substitute(p: Poly, m, target: RingSpec | None = None) -> Poly:
    """Образ p при гомоморфизме колец, заданном образами переменных.

    m: PolyMap (берутся m.images и m.target) или просто последовательность
    образов в порядке переменных кольца p.
    """
    images, map_target = _images_of(m)
    if len(images) != p.ring.arity:
        raise UnknownVariableError(
            f"образов {len(images)}, а переменных в кольце {p.ring.arity}: {p.ring.variables}"
        )
    ring = target or map_target
    if ring is None:
        ring = images[0].ring
        for img in images[1:]:
            ring = ring.union(img.ring)
    images = [img.with_ring(ring.union(img.ring)) for img in images]

    powers: list[dict[int, Poly]] = [{} for _ in images]

    def power(i: int, e: int) -> Poly:
        cache = powers[i]
        if e not in cache:
            if e == 1:
                cache[e] = images[i]
            elif e == -1:
                cache[e] = inverse_unit(images[i])
            else:
                step = 1 if e > 0 else -1
                cache[e] = power(i, e - step) * power(i, step)
        return cache[e]

    acc: dict[Monomial, int] = {}
    for c, e in p.terms:
        term = ring.const(c)
        for i, x in enumerate(e):
            if x:
                term = term * power(i, x)
        for tc, te in term.terms:
            acc[te] = acc.get(te, 0) + tc
    full = ring
    for img in images:
        full = full.union(img.ring)
    result = Poly.from_dict(full, acc)
    return result.with_ring(ring)


def partial_derivative(p: Poly, var: str) -> Poly:
    i = p.ring.index(var)
    acc: dict[Monomial, int] = {}
    for c, e in p.terms:
        if e[i]:
            key = e[:i] + (e[i] - 1,) + e[i + 1 :]
            acc[key] = acc.get(key, 0) + c * e[i]
    return Poly.from_dict(p.ring, acc)


def divided_derivative(p: Poly, var: str, j: int) -> Poly:
    """(1/j!)·∂^j p/∂var^j, коэффициенты остаются целыми (биномиальные)."""
    i = p.ring.index(var)
    if j == 0:
        return p
    acc: dict[Monomial, int] = {}
    for c, e in p.terms:
        falling = prod(e[i] - r for r in range(j))
        if falling:
            key = e[:i] + (e[i] - j,) + e[i + 1 :]
            acc[key] = acc.get(key, 0) + c * (falling // factorial(j))
    return Poly.from_dict(p.ring, acc)


def jacobian2(f: Poly, g: Poly, var1: str, var2: str) -> Poly:
    return partial_derivative(f, var1) * partial_derivative(g, var2) - partial_derivative(
        f, var2
    ) * partial_derivative(g, var1)


def _content_exponents(p: Poly) -> Monomial:
    return tuple(min(col) for col in zip(*(e for _, e in p.terms), strict=True))


def _shift(p: Poly, shift: Monomial, ring: RingSpec) -> Poly:
    add = operator.add
    return Poly.from_dict(ring, {tuple(map(add, e, shift)): c for c, e in p.terms})


def exact_div(p: Poly, q: Poly) -> Poly | None:
    """Точное частное p/q или None, если q не делит p.

    Сначала выносится общий мономиальный множитель, затем обычное деление
    на один делитель по старшему терму: при одном делителе остаток нулевой
    тогда и только тогда, когда q | p.
    """
    if q.is_zero:
        raise ZeroDivisionError("деление на нулевой многочлен")
    _check_same_variables(p, q)
    ring = p.ring.union(q.ring)
    if p.is_zero:
        return ring.zero()

    cp, cq = _content_exponents(p), _content_exponents(q)
    work = RingSpec(ring.variables, frozenset(ring.variables))
    num = _shift(p, tuple(-x for x in cp), work).as_dict.copy()
    den = _shift(q, tuple(-x for x in cq), work)
    lc, le = den.leading_term()

    quotient: dict[Monomial, int] = {}
    while num:
        e = max(num, key=grlex_key)
        c = num[e]
        diff = tuple(a - b for a, b in zip(e, le, strict=True))
        if any(x < 0 for x in diff) or c % lc:
            return None
        k = c // lc
        quotient[diff] = k
        for dc, de in den.terms:
            key = tuple(a + b for a, b in zip(diff, de, strict=True))
            val = num.get(key, 0) - k * dc
            if val:
                num[key] = val
            else:
                num.pop(key, None)

    offset = tuple(a - b for a, b in zip(cp, cq, strict=True))
    try:
        return _shift(Poly.from_dict(work, quotient), offset, ring)
    except IntegralityError:
        return None


def _generator_indices(p: Poly, gens: Sequence[tuple[str, int]]) -> list[tuple[int, int]]:
    resolved = []
    for var, exp in gens:
        i = p.ring.index(var)
        if any(e[i] < 0 for _, e in p.terms):
            raise IntegralityError(f"отрицательная степень {var} в {p}")
        resolved.append((i, exp))
    return resolved


def reduce_mod_monomials(p: Poly, gens: Sequence[tuple[str, int]]) -> Poly:
    """Нормальная форма по идеалу (var1^e1, var2^e2, ...): выбрасываем делящиеся термы."""
    resolved = _generator_indices(p, gens)
    kept = tuple((c, e) for c, e in p.terms if not any(e[i] >= exp for i, exp in resolved))
    return Poly(p.ring, kept)


def monomial_ideal_member(p: Poly, gens: Sequence[tuple[str, int]]) -> bool:
    return reduce_mod_monomials(p, gens).is_zero


def coeff_in(p: Poly, pattern: Mapping[str, int]) -> Poly:
    """Коэффициент при x^i v^j ...: термы с ровно такими степенями, эти степени обнулены."""
    fixed = [(p.ring.index(var), exp) for var, exp in pattern.items()]
    acc: dict[Monomial, int] = {}
    for c, e in p.terms:
        if all(e[i] == exp for i, exp in fixed):
            key = list(e)
            for i, _ in fixed:
                key[i] = 0
            acc[tuple(key)] = acc.get(tuple(key), 0) + c
    return Poly.from_dict(p.ring, acc)


def eval_at(p: Poly, assignment: Mapping[str, int | Fraction]) -> Fraction:
    missing = [v for v in p.ring.variables if v not in assignment]
    if missing:
        raise UnknownVariableError(f"нет значений для {missing}")
    values = [Fraction(assignment[v]) for v in p.ring.variables]
    total = Fraction(0)
    for c, e in p.terms:
        term = Fraction(c)
        for name, value, x in zip(p.ring.variables, values, e, strict=True):
            if x < 0 and value == 0:
                raise ZeroDivisionError(f"{name} = 0 при отрицательной степени")
            if x:
                term *= value**x
        total += term
    return total


def relabel(p: Poly, ring: RingSpec) -> Poly:
    """Позиционное переименование переменных: та же арность, другое кольцо."""
    if ring.arity != p.ring.arity:
        raise RingMismatchError(f"арность {p.ring.arity} против {ring.arity}")
    for _, e in p.terms:
        if not ring.allows(e):
            raise IntegralityError(f"моном {e} недопустим в кольце {ring}")
    return Poly(ring, p.terms)
