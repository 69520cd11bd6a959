"""Алгебра полиномиальных отображений: элементарные ходы, цепочки, композиция.

Отображение задаётся образами переменных источника (многочлены в кольце
назначения). Цепочка хранит ходы в порядке применения: flatten([m1, m2])
= compose(m2, m1), то есть значения сначала проходят через m1.

PolyMap может нести программу: функцию, вычисляющую образы по значениям
переменных в факторизованной форме. Она задаёт то же отображение, что и
раскрытые образы, и позволяет композициям вида α_n∘α_n⁻¹ не раскрывать
огромные промежуточные многочлены.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

from .errors import (
    IntegralityError,
    InvalidParameterError,
    ParseError,
    RingMismatchError,
    VerificationError,
)
from .exactpoly import Poly, RingSpec, inverse_unit, relabel, substitute
from .poly_format import parse_document, parse_poly
from .rings import AMBIENT, AMBIENT_X, NAGATA_RING
from .templating import render

logger = logging.getLogger(__name__)

Program = Callable[[Sequence[Poly]], Sequence[Poly]]

PROVENANCE_ALPHA_RE = re.compile(r"^alpha n=(?P<n>\d+) (?P<side>forward|inverse)$")


@dataclass(frozen=True)
class PolyMap:
    source: RingSpec
    target: RingSpec
    images: tuple[Poly, ...]
    program: Program | None = field(default=None, compare=False, repr=False)
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        images = tuple(self.images)
        if len(images) != self.source.arity:
            raise RingMismatchError(
                f"образов {len(images)}, а переменных источника {self.source.arity}"
            )
        object.__setattr__(self, "images", tuple(img.with_ring(self.target) for img in images))

    @classmethod
    def identity(cls, ring: RingSpec) -> PolyMap:
        return cls(ring, ring, tuple(ring.gens()), program=list)

    def image(self, var: str) -> Poly:
        return self.images[self.source.index(var)]

    def apply(self, values: Sequence[Poly]) -> list[Poly]:
        """Образы, в которые вместо переменных назначения подставлены values."""
        if len(values) != self.target.arity:
            raise RingMismatchError(
                f"значений {len(values)}, а переменных назначения {self.target.arity}"
            )
        if self.program is not None:
            return list(self.program(values))
        return [substitute(img, values) for img in self.images]


def compose(f: PolyMap, g: PolyMap) -> PolyMap:
    """f∘g: образы f, в которые подставлены образы g."""
    if f.target.variables != g.source.variables:
        raise RingMismatchError(
            f"назначение {f.target.variables} не совпадает с источником {g.source.variables}"
        )
    target = g.target
    if target.variables == f.target.variables:
        target = target.union(f.target)
    values = [img.with_ring(target) for img in g.images]
    images = f.apply(values)

    program = None
    if f.program is not None or g.program is not None:

        def program(vals: Sequence[Poly]) -> list[Poly]:
            return f.apply(g.apply(vals))

    return PolyMap(f.source, target, tuple(images), program=program)


def is_identity(m: PolyMap) -> bool:
    if m.source.variables != m.target.variables:
        return False
    return all(img == m.target.gen(var) for var, img in zip(m.source.variables, m.images))


def is_integral(m: PolyMap, subring: RingSpec) -> bool:
    if subring.variables != m.target.variables:
        return False
    return all(subring.allows(e) for img in m.images for _, e in img.terms)


def restrict(m: PolyMap, subring: RingSpec) -> PolyMap:
    if not is_integral(m, subring):
        raise IntegralityError(f"отображение не целое над {subring}")
    return PolyMap(m.source, subring, m.images, program=m.program, provenance=m.provenance)


def relabel_map(m: PolyMap, ring: RingSpec) -> PolyMap:
    """Позиционный перенос эндоморфизма в кольцо той же арности; программа сохраняется."""
    return PolyMap(
        ring, ring, tuple(relabel(img, ring) for img in m.images), program=m.program
    )


# --- элементарные ходы ---


def _lift(values: Sequence[Poly], ring: RingSpec) -> list[Poly]:
    return [
        v.with_ring(v.ring.union(ring)) if v.ring.variables == ring.variables else v
        for v in values
    ]


@dataclass(frozen=True)
class Triangular:
    """var ↦ var + addend, где addend не зависит от var."""

    var: str
    addend: Poly

    def validate(self, ring: RingSpec) -> None:
        ring.index(self.var)
        if self.addend.ring.variables != ring.variables:
            raise RingMismatchError(f"слагаемое хода живёт в {self.addend.ring.variables}")
        if self.addend.involves(self.var):
            raise InvalidParameterError(f"треугольный ход по {self.var} зависит от {self.var}")
        if self.var in ring.laurent:
            raise InvalidParameterError(f"треугольный ход по обратимой переменной {self.var}")

    def apply(self, ring: RingSpec, values: Sequence[Poly]) -> list[Poly]:
        out = list(values)
        i = ring.index(self.var)
        out[i] = values[i] + substitute(self.addend, values)
        return out

    def inverse(self) -> Triangular:
        return Triangular(self.var, -self.addend)


@dataclass(frozen=True)
class Scale:
    """var ↦ unit·var, unit: обратимый моном без var."""

    var: str
    unit: Poly

    def validate(self, ring: RingSpec) -> None:
        ring.index(self.var)
        if self.unit.ring.variables != ring.variables:
            raise RingMismatchError(f"множитель хода живёт в {self.unit.ring.variables}")
        if len(self.unit) != 1 or self.unit.terms[0][0] not in (1, -1):
            raise InvalidParameterError(f"{self.unit} не является мономом ±1")
        _, exps = self.unit.terms[0]
        for name, e in zip(ring.variables, exps, strict=True):
            if e and (name == self.var or name not in ring.laurent):
                raise InvalidParameterError(f"{self.unit} необратим в {ring}")

    def apply(self, ring: RingSpec, values: Sequence[Poly]) -> list[Poly]:
        out = list(values)
        i = ring.index(self.var)
        out[i] = substitute(self.unit, values) * values[i]
        return out

    def inverse(self) -> Scale:
        return Scale(self.var, inverse_unit(self.unit))


@dataclass(frozen=True)
class Permute:
    """Перестановка образов: каждая пара (a, b) означает a ↦ b."""

    pairs: tuple[tuple[str, str], ...]

    @classmethod
    def swap(cls, a: str, b: str) -> Permute:
        return cls(((a, b), (b, a)))

    def validate(self, ring: RingSpec) -> None:
        sources = [a for a, _ in self.pairs]
        targets = [b for _, b in self.pairs]
        for name in sources + targets:
            ring.index(name)
        if sorted(sources) != sorted(targets) or len(set(sources)) != len(sources):
            raise InvalidParameterError(f"{self.pairs} не перестановка")
        for a, b in self.pairs:
            if (a in ring.laurent) != (b in ring.laurent):
                raise InvalidParameterError(f"{a} и {b} различаются обратимостью в {ring}")

    def apply(self, ring: RingSpec, values: Sequence[Poly]) -> list[Poly]:
        out = list(values)
        for a, b in self.pairs:
            out[ring.index(a)] = values[ring.index(b)]
        return out

    def inverse(self) -> Permute:
        return Permute(tuple((b, a) for a, b in self.pairs))


@dataclass(frozen=True)
class Explicit:
    """Отображение вместе с обратным; обе композиции проверяются при создании."""

    forward: PolyMap
    backward: PolyMap

    def __post_init__(self):
        for name, composite in (
            ("forward∘backward", compose(self.forward, self.backward)),
            ("backward∘forward", compose(self.backward, self.forward)),
        ):
            if not is_identity(composite):
                raise VerificationError(f"{name} не тождественно", residual=_residual(composite))

    def validate(self, ring: RingSpec) -> None:
        if self.forward.source.variables != ring.variables:
            raise RingMismatchError(f"явный ход над {self.forward.source.variables}")

    def apply(self, ring: RingSpec, values: Sequence[Poly]) -> list[Poly]:
        return self.forward.apply(values)

    def inverse(self) -> Explicit:
        return Explicit(self.backward, self.forward)


ElementaryMove = Triangular | Scale | Permute | Explicit


@dataclass(frozen=True)
class Chain:
    ring: RingSpec
    moves: tuple[ElementaryMove, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))
        for move in self.moves:
            move.validate(self.ring)

    def __add__(self, other: Chain) -> Chain:
        if other.ring != self.ring:
            raise RingMismatchError(f"цепочки над {self.ring} и {other.ring}")
        name = "+".join(n for n in (self.name, other.name) if n)
        return Chain(self.ring, self.moves + other.moves, name)

    def run(self, values: Sequence[Poly]) -> list[Poly]:
        values = _lift(values, self.ring)
        for move in self.moves:
            values = move.apply(self.ring, values)
        return values


def flatten(chain: Chain) -> PolyMap:
    images = chain.run(chain.ring.gens())
    return PolyMap(chain.ring, chain.ring, tuple(images), program=chain.run, provenance=chain.name)


def invert_chain(chain: Chain) -> Chain:
    name = f"{chain.name}^-1" if chain.name else ""
    return Chain(chain.ring, tuple(m.inverse() for m in reversed(chain.moves)), name)


def _residual(m: PolyMap) -> Poly | None:
    for var, img in zip(m.source.variables, m.images):
        diff = img - m.target.gen(var)
        if diff:
            return diff
    return None


# --- автоморфизм Нагаты и его разложение ---


def _nagata_program(ring: RingSpec, sign: int) -> Program:
    iy, iz, iu = ring.index("y"), ring.index("z"), ring.index("u")

    def program(values: Sequence[Poly]) -> list[Poly]:
        y, z, u = values[iy], values[iz], values[iu]
        w = z * z + y * u
        out = list(values)
        out[iz] = z + sign * (y * w)
        out[iu] = u - sign * 2 * (z * w) - y * w * w
        return out

    return program


def nagata_map(ring: RingSpec = NAGATA_RING, inverse: bool = False) -> PolyMap:
    """(y,z,u) ↦ (y, z + yw, u − 2zw − yw²), w = z² + yu; прочие переменные на месте."""
    program = _nagata_program(ring, -1 if inverse else 1)
    images = program(ring.gens())
    name = "nagata^-1" if inverse else "nagata"
    return PolyMap(ring, ring, tuple(images), program=program, provenance=name)


def nagata_chain(ring: RingSpec = NAGATA_RING) -> Chain:
    return Chain(ring, (Explicit(nagata_map(ring), nagata_map(ring, inverse=True)),), "nagata")


def mu_map() -> PolyMap:
    """μ: (y, z₁, u₁) ↦ (y, yz₁, yu₁), бирациональная модификация, не автоморфизм."""
    y, z, u = NAGATA_RING.gens()
    return PolyMap(NAGATA_RING, NAGATA_RING, (y, y * z, y * u), provenance="mu")


def footnote_delta_chain() -> Chain:
    """δ = δ₃∘δ₂∘δ₁ в порядке применения: w₁ = u₁ + z₁², t₁ = z₁ + y²w₁, η₁ = w₁ − t₁²."""
    y, z, u = NAGATA_RING.gens()
    return Chain(
        NAGATA_RING,
        (Triangular("u", z * z), Triangular("z", y * y * u), Triangular("u", -(z * z))),
        "delta",
    )


def verify_footnote_decomposition(delta: Chain | None = None) -> bool:
    """α∘μ = μ∘δ как равенство полиномиальных отображений (без μ⁻¹)."""
    delta = delta or footnote_delta_chain()
    mu = mu_map()
    lhs = compose(nagata_map(), mu)
    rhs = compose(mu, flatten(delta))
    ok = lhs.images == rhs.images
    logger.debug("footnote decomposition: %s", ok)
    return ok


# --- β, γ_n и α_n ---


def _x_power(k: int) -> Poly:
    return AMBIENT_X.monomial({"x": k})


def g_chain() -> Chain:
    """g: (y,z,u) ↦ (x⁻²y, xz, x⁴u)."""
    return Chain(
        AMBIENT_X,
        (Scale("y", _x_power(-2)), Scale("z", _x_power(1)), Scale("u", _x_power(4))),
        "g",
    )


def h_chain() -> Chain:
    """h: (y,z,u) ↦ (x²y, z, x⁻²u)."""
    return Chain(AMBIENT_X, (Scale("y", _x_power(2)), Scale("u", _x_power(-2))), "h")


def beta_chain() -> Chain:
    """β = h∘α∘g: (y,z,u) ↦ (y, t, η) над L₀."""
    return g_chain() + nagata_chain(AMBIENT_X) + h_chain()


def gamma_chain(n: int) -> Chain:
    """γ_n: y ↦ y + xⁿz."""
    z = AMBIENT_X.gen("z")
    return Chain(AMBIENT_X, (Triangular("y", _x_power(n) * z),), f"gamma{n}")


def alpha_n_chain(n: int) -> Chain:
    """Цепочка α_n над L₀[y,z,u]: карта γ_n∘β, ξ₀ = η/x³, τ₀⁻¹, перестановка (z,u)."""
    if n < 3:
        raise InvalidParameterError(f"α_n определён при n ≥ 3, получено n = {n}")
    from .bundle import tau0_inverse_map, tau0_map

    tau0 = relabel_map(tau0_map(), AMBIENT_X)
    tau0_inv = relabel_map(tau0_inverse_map(), AMBIENT_X)
    tail = Chain(
        AMBIENT_X,
        (Scale("u", _x_power(-3)), Explicit(tau0_inv, tau0), Permute.swap("z", "u")),
        "tau0^-1",
    )
    return Chain(AMBIENT_X, (beta_chain() + gamma_chain(n) + tail).moves, f"alpha{n}")


class AlphaPair(NamedTuple):
    forward: PolyMap
    inverse: PolyMap


@lru_cache(maxsize=None)
def build_alpha_n(n: int) -> AlphaPair:
    """α_n = (x, v_n, ζ^(n), θ^(n)) и его обратный над ℤ[x,y,z,u], обе композиции проверены."""
    if n < 3:
        raise InvalidParameterError(f"θ^(n) требует n ≥ 3, получено n = {n}")
    from .gallery import Gallery

    chain = alpha_n_chain(n)
    flat = flatten(chain)
    expected = Gallery().alpha_images(n)
    for var, got, want in zip(AMBIENT.variables, flat.images, expected):
        if got != want:
            raise VerificationError(f"цепочка α_{n} расходится с формулой на {var}", got - want)

    forward = PolyMap(
        AMBIENT, AMBIENT, tuple(expected), program=chain.run, provenance=f"alpha n={n} forward"
    )
    inverse_flat = flatten(invert_chain(chain))
    if not is_integral(inverse_flat, AMBIENT):
        raise VerificationError(f"α_{n}⁻¹ не продолжается на ℤ[x,y,z,u]")
    inverse = PolyMap(
        AMBIENT,
        AMBIENT,
        inverse_flat.images,
        program=inverse_flat.program,
        provenance=f"alpha n={n} inverse",
    )

    for name, composite in (
        ("α∘α⁻¹", compose(forward, inverse)),
        ("α⁻¹∘α", compose(inverse, forward)),
    ):
        if not is_identity(composite):
            raise VerificationError(f"{name} при n = {n} не тождественно", _residual(composite))
    logger.info(
        "α_%d построен: размеры обратного %s", n, [len(img) for img in inverse.images]
    )
    return AlphaPair(forward, inverse)


class PsiCharts(NamedTuple):
    theta_tau1: Poly
    theta_tau0: Poly
    zeta_tau1: Poly
    zeta_tau0: Poly

    @property
    def agree(self) -> bool:
        return self.theta_tau1 == self.theta_tau0 and self.zeta_tau1 == self.zeta_tau0


def psi_chart_forms(n: int) -> PsiCharts:
    """Обе картовые записи тривиализации: (τ₁⁽²⁾)⁻¹∘φ₁ и τ₀⁻¹∘φ₀.

    На U₁ знаменатели v_n² сокращаются точным делением; на U₀ координаты
    получаются прогоном цепочки α_n.
    """
    from .exactpoly import exact_div
    from .gallery import Gallery

    gal = Gallery()
    zeta, v, t, x = gal.zeta(n), gal.v(n), gal.t, gal.x
    theta_tau1 = exact_div(t + x * zeta - v * zeta * zeta, v * v)
    if theta_tau1 is None:
        raise VerificationError(f"v_{n}² не делит t + xζ − vζ²")
    images = flatten(alpha_n_chain(n)).images
    return PsiCharts(theta_tau1, images[3], zeta, images[2])


# --- текстовая форма ---


def format_map(m: PolyMap, provenance: Sequence[str] | None = None) -> str:
    if provenance is None:
        provenance = [m.provenance] if m.provenance else []
    return render(
        "polymap.map.j2",
        ring=m.target,
        provenance=list(provenance),
        lines=list(zip(m.source.variables, m.images)),
    )


def parse_map(text: str) -> PolyMap:
    doc = parse_document(text)
    names = []
    images = []
    for key, sep, value, line_no, col in doc.entries:
        if sep != "->":
            raise ParseError("в файле отображения ожидается 'имя -> многочлен'", line_no, col)
        names.append(key)
        images.append(parse_poly(value, doc.ring, line_no, col))
    try:
        source = RingSpec(tuple(names))
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None
    m = PolyMap(source, doc.ring, tuple(images))
    for line in doc.provenance:
        found = PROVENANCE_ALPHA_RE.match(line)
        if found:
            return _attach_alpha_program(m, int(found.group("n")), found.group("side"))
    return m


def _attach_alpha_program(m: PolyMap, n: int, side: str) -> PolyMap:
    """Файл с происхождением α_n: образы сверяются с перестроенной цепочкой."""
    pair = build_alpha_n(n)
    rebuilt = pair.forward if side == "forward" else pair.inverse
    if m.source.variables != rebuilt.source.variables or m.images != rebuilt.images:
        raise VerificationError(f"файл помечен как α_{n} ({side}), но образы не совпадают")
    return PolyMap(m.source, m.target, m.images, program=rebuilt.program, provenance=rebuilt.provenance)
