"""Функции перехода, сертификаты тривиальности и проверки вокруг них.

Сертификат (a, b0, b1) над R[t,ξ] задаёт τ0 = (a, b0/x^k) над K0 и
τ1 = (a, b1/v^l) над K1; функция перехода (t,ξ) ↦ (t, ξ + q(t)/(x^k v^l))
раскладывается как τ1∘τ0⁻¹ ровно тогда, когда x^k·b1 − v^l·b0 = q(a)
и якобианы обоих τ равны 1.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .endomap import Chain, PolyMap, Scale, Triangular, compose, flatten, is_identity, is_integral
from .errors import (
    CertificateError,
    IntegralityError,
    InvalidParameterError,
    ParseError,
    VerificationError,
)
from .exactpoly import (
    Poly,
    RingSpec,
    coeff_in,
    divided_derivative,
    exact_div,
    jacobian2,
    monomial_ideal_member,
    partial_derivative,
    reduce_mod_monomials,
    substitute,
)
from .gallery import b1_symbol, fiber_symbols, transition_polynomial
from .poly_format import parse_document
from .rings import FIBER, FIBER_K0, FIBER_K1, FIBER_M
from .templating import render
from .utils.sampling import random_poly

logger = logging.getLogger(__name__)

# Кольцо M = ℤ[x^±, v^±] для элементов SL₂.
PLANE_M = RingSpec.of("x v", laurent="x v")


def exponents_for(n: int) -> tuple[int, int]:
    if n < 1:
        raise InvalidParameterError(f"нужен n ≥ 1, получено {n}")
    return (3, 3) if n == 1 else (3, 2)


def _xv(ring: RingSpec, i: int, j: int) -> Poly:
    return ring.monomial({"x": i, "v": j})


@dataclass(frozen=True)
class TransitionFunction:
    """(t,ξ) ↦ (t, ξ + q(t)/(x^k v^l)), q ∈ ℤ[x,v][t]."""

    q: Poly
    k: int
    l: int  # noqa: E741
    n: int | None = None
    m: int | None = None

    def value_at(self, a: Poly) -> Poly:
        """q(a): t заменяется на a, x и v на одноимённые переменные кольца a."""
        ring = a.ring
        return substitute(self.q, [ring.gen("x"), ring.gen("v"), a], target=ring)

    def derivative_at(self, a: Poly) -> Poly:
        ring = a.ring
        return substitute(partial_derivative(self.q, "t"), [ring.gen("x"), ring.gen("v"), a], target=ring)

    def as_map(self) -> PolyMap:
        x, v, t, xi = FIBER_M.gens()
        shift = self.value_at(t) * _xv(FIBER_M, -self.k, -self.l)
        return PolyMap(FIBER_M, FIBER_M, (x, v, t, xi + shift), provenance=self.label())

    def inverse_map(self) -> PolyMap:
        x, v, t, xi = FIBER_M.gens()
        shift = self.value_at(t) * _xv(FIBER_M, -self.k, -self.l)
        return PolyMap(FIBER_M, FIBER_M, (x, v, t, xi - shift))

    def label(self) -> str:
        parts = [f"n={self.n}"] if self.n is not None else []
        if self.m is not None:
            parts.append(f"m={self.m}")
        return "phi10 " + " ".join(parts) if parts else "phi10"


def transition_function(n: int) -> TransitionFunction:
    k, l = exponents_for(n)  # noqa: E741
    return TransitionFunction(transition_polynomial(n), k, l, n=n)


def approximation(tf: TransitionFunction, m: int) -> TransitionFunction:
    """Усечение q до степени m по t; требует r0 = 0."""
    top = tf.q.max_exponent("t")
    if not 1 <= m <= top:
        raise InvalidParameterError(f"порядок приближения m должен быть в 1..{top}, получено {m}")
    r0 = coeff_in(tf.q, {"t": 0})
    if not r0.is_zero:
        raise InvalidParameterError(f"свободный член r0 = {r0} ненулевой")
    i = tf.q.ring.index("t")
    truncated = Poly(tf.q.ring, tuple((c, e) for c, e in tf.q.terms if e[i] <= m))
    return TransitionFunction(truncated, tf.k, tf.l, n=tf.n, m=m)


def linear_part_exponents(tf: TransitionFunction) -> tuple[int, int]:
    """(α, β) = (k − k', l − l') при r1 = −x^k' v^l'."""
    r1 = coeff_in(tf.q, {"t": 1})
    if len(r1) != 1 or r1.terms[0][0] != -1:
        raise InvalidParameterError(f"r1 = {r1} не вида −x^k' v^l'")
    k1, l1 = r1.terms[0][1][0], r1.terms[0][1][1]
    alpha, beta = tf.k - k1, tf.l - l1
    if alpha < 0 or beta < 0:
        raise InvalidParameterError(f"отрицательные α, β = {alpha}, {beta}")
    return alpha, beta


# --- сертификаты ---


@dataclass(frozen=True)
class Certificate:
    a: Poly
    b0: Poly
    b1: Poly
    k: int
    l: int  # noqa: E741

    @property
    def ring(self) -> RingSpec:
        return self.a.ring


def sol_certificate(n: int = 2) -> Certificate:
    """a = ã, b0 = x²t − vδ² + 2xδξ, b1 = ξ (n ≥ 2) или vξ (n = 1)."""
    k, l = exponents_for(n)  # noqa: E741
    symbols = fiber_symbols()
    return Certificate(symbols["a_tilde"], symbols["b0"], b1_symbol(n), k, l)


def cocycle_residual(cert: Certificate, tf: TransitionFunction) -> Poly:
    if (cert.k, cert.l) != (tf.k, tf.l):
        raise CertificateError(f"показатели сертификата {(cert.k, cert.l)} и функции {(tf.k, tf.l)}")
    ring = cert.ring
    lhs = _xv(ring, cert.k, 0) * cert.b1 - _xv(ring, 0, cert.l) * cert.b0
    return lhs - tf.value_at(cert.a)


def verify_cocycle(cert: Certificate, tf: TransitionFunction) -> bool:
    return cocycle_residual(cert, tf).is_zero


def cert_d(cert: Certificate) -> Poly:
    """d = jac(a,b0)/x^k = jac(a,b1)/v^l ∈ R."""
    ring = cert.ring
    ja0 = jacobian2(cert.a, cert.b0, "t", "xi")
    ja1 = jacobian2(cert.a, cert.b1, "t", "xi")
    d0 = exact_div(ja0, _xv(ring, cert.k, 0))
    if d0 is None:
        raise CertificateError(f"x^{cert.k} не делит jac(a,b0) = {ja0}")
    d1 = exact_div(ja1, _xv(ring, 0, cert.l))
    if d1 is None:
        raise CertificateError(f"v^{cert.l} не делит jac(a,b1) = {ja1}")
    if d0 != d1:
        raise CertificateError(f"частные не совпадают: {d0} против {d1}")
    if d0.involves("t") or d0.involves("xi"):
        raise CertificateError(f"d = {d0} не лежит в R")
    return d0


def _as_transition(p) -> TransitionFunction:
    if isinstance(p, TransitionFunction):
        return p
    return TransitionFunction(p, 0, 0)


def verify_prim(cert: Certificate, p) -> bool:
    """jac(b0,b1) = −d·p′(a); при d = 1 это jac(b0,b1) = −p′(a)."""
    tf = _as_transition(p)
    d = cert_d(cert)
    jb = jacobian2(cert.b0, cert.b1, "t", "xi")
    derivative = tf.derivative_at(cert.a)
    return jb == -d * derivative


def jacobian_relations(cert: Certificate) -> tuple[bool, bool]:
    ring = cert.ring
    return (
        jacobian2(cert.a, cert.b0, "t", "xi") == _xv(ring, cert.k, 0),
        jacobian2(cert.a, cert.b1, "t", "xi") == _xv(ring, 0, cert.l),
    )


def shift_certificate(cert: Certificate, c: Poly) -> Certificate:
    ring = cert.ring
    return Certificate(
        cert.a,
        cert.b0 + _xv(ring, cert.k, 0) * c,
        cert.b1 + _xv(ring, 0, cert.l) * c,
        cert.k,
        cert.l,
    )


def taylor_increment(p, a: Poly, increment: Poly) -> Poly:
    """Σ_{j≥1} p^(j)(a)/j! · A^j, то же, что p(a + A) − p(a)."""
    tf = _as_transition(p)
    ring = a.ring
    total = ring.zero()
    power = ring.one()
    for j in range(1, tf.q.max_exponent("t") + 1):
        power = power * increment
        coeff = substitute(divided_derivative(tf.q, "t", j), [ring.gen("x"), ring.gen("v"), a], target=ring)
        total = total + coeff * power
    return total


def route_cocycle(value: Poly, k: int, l: int) -> tuple[Poly, Poly]:  # noqa: E741
    """Разбиение value = x^k·b1 − v^l·b0 по мономам; общие термы уходят в b1."""
    ring = value.ring
    ix, iv = ring.index("x"), ring.index("v")
    to_b1: dict = {}
    to_b0: dict = {}
    for c, e in value.terms:
        if e[ix] >= k:
            key = e[:ix] + (e[ix] - k,) + e[ix + 1 :]
            to_b1[key] = c
        elif e[iv] >= l:
            key = e[:iv] + (e[iv] - l,) + e[iv + 1 :]
            to_b0[key] = -c
        else:
            raise CertificateError(f"терм {c}·{e} не лежит в (x^{k}, v^{l})")
    return Poly.from_dict(ring, to_b0), Poly.from_dict(ring, to_b1)


# --- лемма 5 ---


class Lemma5Result(NamedTuple):
    holds: bool
    a00: Poly
    a10: Poly
    a01: Poly


def lemma5_conditions(a: Poly) -> Lemma5Result:
    if a.min_exponent("x") < 0 or a.min_exponent("v") < 0:
        raise IntegralityError(f"отрицательные степени x или v в {a}")
    a00 = coeff_in(a, {"x": 0, "v": 0})
    a10 = coeff_in(a, {"x": 1, "v": 0})
    a01 = coeff_in(a, {"x": 0, "v": 1})
    return Lemma5Result(a00.is_zero and a01 == a10 * a10, a00, a10, a01)


def lemma5_membership(n: int, a: Poly) -> bool:
    tf = transition_function(n)
    return monomial_ideal_member(tf.value_at(a), [("x", tf.k), ("v", tf.l)])


class Lemma5Residues(NamedTuple):
    first: Poly
    second: Poly


def lemma5_residues(n: int, a: Poly) -> Lemma5Residues:
    """Остатки p_n(a) по (x, v²) и (x³, v²); при n = 1 по (x², v²) и (x³, v³)."""
    value = transition_function(n).value_at(a)
    if n == 1:
        return Lemma5Residues(
            reduce_mod_monomials(value, [("x", 2), ("v", 2)]),
            reduce_mod_monomials(value, [("x", 3), ("v", 3)]),
        )
    return Lemma5Residues(
        reduce_mod_monomials(value, [("x", 1), ("v", 2)]),
        reduce_mod_monomials(value, [("x", 3), ("v", 2)]),
    )


def random_lemma5_input(rng: random.Random, max_deg: int = 2, max_coeff: int = 2) -> Poly:
    """Случайный a с a00 = 0 и a01 = a10²."""
    s_vars = ("t", "xi")
    a10 = random_poly(rng, FIBER, s_vars, max_deg, max_coeff)
    rest = random_poly(rng, FIBER, s_vars, max_deg, max_coeff)
    x, v = FIBER.gen("x"), FIBER.gen("v")
    higher = rng.choice([x * x, x * v, v * v]) if rng.random() < 0.5 else FIBER.zero()
    return x * a10 + v * a10 * a10 + higher * rest


def remark3_nonmembership(n: int) -> bool:
    tf = transition_function(n)
    return not monomial_ideal_member(tf.q, [("x", tf.k), ("v", tf.l)])


# --- SL₂ над M ---


@dataclass(frozen=True)
class SL2LaurentMatrix:
    a11: Poly
    a12: Poly
    a21: Poly
    a22: Poly

    @classmethod
    def of(cls, rows) -> SL2LaurentMatrix:
        (a11, a12), (a21, a22) = rows
        return cls(a11, a12, a21, a22)

    def det(self) -> Poly:
        return self.a11 * self.a22 - self.a12 * self.a21

    def __matmul__(self, other: SL2LaurentMatrix) -> SL2LaurentMatrix:
        return SL2LaurentMatrix(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def entries(self) -> tuple[Poly, Poly, Poly, Poly]:
        return (self.a11, self.a12, self.a21, self.a22)

    def is_sl2(self) -> bool:
        return self.det() == 1

    def min_exponent(self, var: str) -> int:
        return min(p.min_exponent(var) for p in self.entries() if not p.is_zero)


class SL2Factorization(NamedTuple):
    g: SL2LaurentMatrix
    tau0: SL2LaurentMatrix
    tau1: SL2LaurentMatrix
    lambda_case: bool

    @property
    def verified(self) -> bool:
        return (
            self.g.is_sl2()
            and self.tau0.is_sl2()
            and self.tau1.is_sl2()
            and self.g @ self.tau0 == self.tau1
            and self.tau0.min_exponent("v") >= 0
            and self.tau1.min_exponent("x") >= 0
        )


def linear_transition_matrix(alpha: int, beta: int) -> SL2LaurentMatrix:
    one, zero = PLANE_M.one(), PLANE_M.zero()
    return SL2LaurentMatrix(one, zero, -_xv(PLANE_M, -alpha, -beta), one)


def sl2_factor(alpha: int, beta: int) -> SL2Factorization:
    """τ0⁽¹⁾ ∈ SL₂(K0), τ1⁽¹⁾ ∈ SL₂(K1) с g·τ0⁽¹⁾ = τ1⁽¹⁾."""
    if alpha < 0 or beta < 0:
        raise InvalidParameterError("α и β должны быть неотрицательны")
    zero = PLANE_M.zero()
    tau0 = SL2LaurentMatrix(_xv(PLANE_M, 0, beta), -_xv(PLANE_M, alpha, 0), _xv(PLANE_M, -alpha, 0), zero)
    tau1 = SL2LaurentMatrix(_xv(PLANE_M, 0, beta), -_xv(PLANE_M, alpha, 0), zero, _xv(PLANE_M, 0, -beta))
    return SL2Factorization(linear_transition_matrix(alpha, beta), tau0, tau1, (alpha, beta) == (1, 2))


def _to_plane(p: Poly) -> Poly:
    ring = p.ring
    ix, iv = ring.index("x"), ring.index("v")
    return Poly.from_dict(PLANE_M, {(e[ix], e[iv]): c for c, e in p.terms})


def linear_part(m: PolyMap) -> SL2LaurentMatrix:
    """Матрица (t,ξ)-линейной части плоского отображения над кольцом слоя."""
    rows = []
    for var in ("t", "xi"):
        image = m.image(var)
        rows.append(
            (
                _to_plane(coeff_in(image, {"t": 1, "xi": 0})),
                _to_plane(coeff_in(image, {"t": 0, "xi": 1})),
            )
        )
    return SL2LaurentMatrix.of(rows)


# --- тривиализация λ⁽²⁾ ---


def tau_maps(cert: Certificate) -> tuple[PolyMap, PolyMap]:
    """τ0 = (a, b0/x^k) над K0 и τ1 = (a, b1/v^l) над K1."""
    x0, v0, _, _ = FIBER_K0.gens()
    x1, v1, _, _ = FIBER_K1.gens()
    tau0 = PolyMap(
        FIBER_K0,
        FIBER_K0,
        (x0, v0, cert.a.with_ring(FIBER_K0), cert.b0.with_ring(FIBER_K0) * _xv(FIBER_K0, -cert.k, 0)),
        provenance="tau0",
    )
    tau1 = PolyMap(
        FIBER_K1,
        FIBER_K1,
        (x1, v1, cert.a.with_ring(FIBER_K1), cert.b1.with_ring(FIBER_K1) * _xv(FIBER_K1, 0, -cert.l)),
        provenance="tau1",
    )
    return tau0, tau1


def _tau0_program(values):
    x, v, t, xi = values
    xinv = x**-1
    delta = v * t + xi * xi
    a = v * delta - x * xi
    b = xinv * t - xinv**3 * v * delta * delta + 2 * xinv**2 * delta * xi
    return [x, v, a, b]


def tau0_map() -> PolyMap:
    """τ0⁽²⁾: (t,ξ) ↦ (vδ − xξ, t/x − vδ²/x³ + 2δξ/x²), δ = vt + ξ²."""
    tau0, _ = tau_maps(sol_certificate())
    return PolyMap(FIBER_K0, FIBER_K0, tau0.images, program=_tau0_program, provenance="tau0")


def tau1_map() -> PolyMap:
    _, tau1 = tau_maps(sol_certificate())
    return tau1


def tau1_inverse_map() -> PolyMap:
    """(t,ξ) ↦ (t/v² + xξ − v³ξ², v²ξ)."""
    x, v, t, xi = FIBER_K1.gens()
    vinv = v**-1
    images = (x, v, vinv * vinv * t + x * xi - v**3 * xi * xi, v * v * xi)
    return PolyMap(FIBER_K1, FIBER_K1, images, provenance="tau1^-1")


def tau0_inverse_map() -> PolyMap:
    """(t,ξ) ↦ (xξ − v³ξ² + 2vtξ/x − 2v²t²ξ/x³ + 2t³/x⁴ − vt⁴/x⁶, v²ξ − t/x + vt²/x³)."""
    x, v, t, xi = FIBER_K0.gens()

    def xp(k: int) -> Poly:
        return _xv(FIBER_K0, k, 0)

    first = (
        x * xi
        - v**3 * xi * xi
        + 2 * xp(-1) * v * t * xi
        - 2 * xp(-3) * v * v * t * t * xi
        + 2 * xp(-4) * t**3
        - xp(-6) * v * t**4
    )
    second = v * v * xi - xp(-1) * t + xp(-3) * v * t * t
    return PolyMap(FIBER_K0, FIBER_K0, (x, v, first, second), provenance="tau0^-1")


class Lambda2Trivialization(NamedTuple):
    tau0: PolyMap
    tau1: PolyMap
    tau1_inverse: PolyMap
    tau0_inverse: PolyMap


def _require(ok: bool, message: str, residual: Poly | None = None) -> None:
    if not ok:
        raise VerificationError(message, residual)


def _first_difference(m: PolyMap, expected: PolyMap) -> Poly | None:
    for got, want in zip(m.images, expected.images):
        if got != want:
            return got - want
    return None


@lru_cache(maxsize=None)
def build_lambda2_trivialization() -> Lambda2Trivialization:
    tau0, tau1 = tau0_map(), tau1_map()
    tau1_inv, tau0_inv = tau1_inverse_map(), tau0_inverse_map()

    for name, f, g in (
        ("τ1∘τ1⁻¹", tau1, tau1_inv),
        ("τ1⁻¹∘τ1", tau1_inv, tau1),
        ("τ0∘τ0⁻¹", tau0, tau0_inv),
        ("τ0⁻¹∘τ0", tau0_inv, tau0),
    ):
        composite = compose(f, g)
        _require(is_identity(composite), f"{name} не тождественно", _first_difference(composite, _identity_like(composite)))

    phi = approximation(transition_function(3), 2).as_map()
    glued = compose(tau1, tau0_inv)
    _require(glued.images == phi.images, "φ10⁽²⁾ ≠ τ1∘τ0⁻¹", _first_difference(glued, phi))

    for name, m in (("τ0", tau0), ("τ1", tau1)):
        jac = jacobian2(m.image("t"), m.image("xi"), "t", "xi")
        _require(jac == 1, f"jac({name}) ≠ 1", jac - 1)

    linear = sl2_factor(*linear_part_exponents(transition_function(3)))
    _require(linear_part(tau0) == linear.tau0, "линейная часть τ0 не совпадает с τ0⁽¹⁾")
    _require(linear_part(tau1) == linear.tau1, "линейная часть τ1 не совпадает с τ1⁽¹⁾")
    logger.info("λ⁽²⁾ trivialization verified")
    return Lambda2Trivialization(tau0, tau1, tau1_inv, tau0_inv)


def _identity_like(m: PolyMap) -> PolyMap:
    return PolyMap(m.source, m.target, tuple(m.target.gens()))


def tau0_tame_chain() -> Chain:
    """τ0⁽²⁾ = (φ10⁽²⁾)⁻¹∘τ1⁽²⁾ как цепочка над M."""
    x, v, t, xi = FIBER_M.gens()
    q = approximation(transition_function(3), 2)
    correction = -q.value_at(t) * _xv(FIBER_M, -q.k, -q.l)
    return Chain(
        FIBER_M,
        (
            Scale("t", v * v),
            Triangular("t", v * xi * xi - x * xi),
            Scale("xi", _xv(FIBER_M, 0, -2)),
            Triangular("xi", correction),
        ),
        "tau0-tame",
    )


def verify_tau0_tame() -> bool:
    flat = flatten(tau0_tame_chain())
    return is_integral(flat, FIBER_K0) and flat.images == tau0_map().images


# --- текстовая форма сертификата ---


def format_certificate(cert: Certificate, provenance: list[str] | None = None) -> str:
    return render("certificate.cert.j2", cert=cert, provenance=provenance or [])


def parse_certificate(text: str) -> tuple[Certificate, list[str]]:
    doc = parse_document(text)
    if doc.ring.variables != FIBER.variables:
        raise ParseError(f"сертификат ожидается над кольцом {FIBER.variables}", 1, 1)
    for key, sep, _value, line_no, col in doc.entries:
        if sep != "=" or key not in ("k", "l", "a", "b0", "b1"):
            raise ParseError(f"неожиданная строка {key!r}", line_no, col)
    cert = Certificate(
        doc.poly("a").with_ring(FIBER),
        doc.poly("b0").with_ring(FIBER),
        doc.poly("b1").with_ring(FIBER),
        doc.integer("k"),
        doc.integer("l"),
    )
    return cert, doc.provenance
