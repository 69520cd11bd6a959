"""Именованные многочлены и набор тождеств, проверяемых точно.

Все построения: методы Gallery над произвольными значениями x, y, z, u,
поэтому одна и та же формула даёт и многочлен в ℤ[x,y,z,u], и его
специализацию (x = 0, y = c), и образ при подстановке.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

from rapidfuzz import fuzz, process

from . import config
from .endomap import Chain, Permute, Scale, Triangular, compose, flatten, invert_chain, is_identity
from .errors import InvalidParameterError, UnknownSymbolError
from .exactpoly import Poly, eval_at, exact_div, substitute
from .rings import AMBIENT, FIBER, FIBER_CONSTANT, TRANSITION
from .utils.sampling import random_point

logger = logging.getLogger(__name__)

SUGGESTION_CUTOFF = 70


class Gallery:
    def __init__(
        self,
        values: Sequence[Poly] | None = None,
        overrides: Mapping[str, Poly] | None = None,
    ):
        self.x, self.y, self.z, self.u = values if values is not None else AMBIENT.gens()
        self.overrides = dict(overrides or {})

    def _pick(self, name: str, built):
        return self.overrides.get(name, built)

    def _x(self, k: int) -> Poly:
        return self.x**k

    @cached_property
    def w(self) -> Poly:
        return self._pick("w", self.z * self.z + self.y * self.u)

    @cached_property
    def t(self) -> Poly:
        return self._pick("t", self.x * self.z + self.y * self.w)

    @cached_property
    def s(self) -> Poly:
        return self._pick("s", -(2 * self.x * self.z + self.y * self.w) * self.w)

    @cached_property
    def eta(self) -> Poly:
        return self._pick("eta", self.s + self.x * self.x * self.u)

    @cached_property
    def t0(self) -> Poly:
        return self._pick("t0", self.z + self.y * self.w)

    @cached_property
    def eta0(self) -> Poly:
        return self._pick("eta0", self.u - 2 * self.z * self.w - self.y * self.w * self.w)

    def v(self, n: int) -> Poly:
        return self._pick("v", self.y + self._x(n) * self.t)

    def zeta_prime(self, n: int) -> Poly:
        x, z, u, s, t, v = self.x, self.z, self.u, self.s, self.t, self.v(n)
        if n == 1:
            built = x * (v * u + z * z) + s * t
        elif n == 2:
            built = z * z + v * u + s * t
        else:
            built = z * z + v * u + self._x(n - 2) * s * t
        return self._pick("zeta_prime", built)

    def zeta_second(self, n: int = 1) -> Poly:
        _require_case(n, 1, "zeta_second")
        x, z, u, s, t, v = self.x, self.z, self.u, self.s, self.t, self.v(1)
        return self._pick("zeta_second", v * (v * u + z * z) + x * z * z * t + s * t * t)

    def zeta_third(self, n: int = 1) -> Poly:
        _require_case(n, 1, "zeta_third")
        x, z, u, s, t, w, v = self.x, self.z, self.u, self.s, self.t, self.w, self.v(1)
        built = -x * z + x * t * w + x * t * v * u + x * z * z * t + s * t * t
        return self._pick("zeta_third", built)

    def zeta(self, n: int) -> Poly:
        _require_n(n)
        x, z, u, s, t, w, v = self.x, self.z, self.u, self.s, self.t, self.w, self.v(n)
        if n == 1:
            built = -v * z + v * t * (v * u + z * z + w) + t * t * (x * z * z + s * t)
        elif n == 2:
            built = -z + x * t * (v * u + z * z + s * t + w)
        else:
            built = -z + self._x(n - 3) * t * (v * self.eta + x * x * w)
        return self._pick("zeta", built)

    def theta(self, n: int) -> Poly:
        if n < 3:
            raise InvalidParameterError(f"θ^(n) содержит x^(n−3) и требует n ≥ 3, получено {n}")
        x, z, u, t, w = self.x, self.z, self.u, self.t, self.w
        inner = x * w * w + self.eta * (self.zeta(n) - z + self._x(n - 1) * t * w)
        return self._pick("theta", u - self._x(n - 3) * t * inner)

    def p_ambient(self, n: int) -> Poly:
        """p_n(t) с v ↦ v_n и t ↦ t(x,y,z,u)."""
        return substitute(transition_polynomial(n), [self.x, self.v(n), self.t])

    def alpha_images(self, n: int) -> list[Poly]:
        return [self.x, self.v(n), self.zeta(n), self.theta(n)]


def _require_n(n: int | None) -> int:
    if n is None or n < 1:
        raise InvalidParameterError(f"нужен n ≥ 1, получено {n}")
    return n


def _require_case(n: int, expected: int, symbol: str) -> None:
    if n != expected:
        raise InvalidParameterError(f"{symbol} определён только при n = {expected}")


def transition_polynomial(n: int) -> Poly:
    """p_n ∈ ℤ[x,v][t]."""
    _require_n(n)
    x, v, t = TRANSITION.gens()
    if n == 1:
        return x**2 * t**4 + x * v * t**3 + v**2 * t**2 - x**2 * v * t
    if n == 2:
        return x**2 * t**3 + v * t**2 - x**2 * t
    return v * t**2 - x**2 * t


def fiber_symbols() -> dict[str, Poly]:
    x, v, t, xi = FIBER.gens()
    delta = v * t + xi * xi
    return {
        "delta_chart": delta,
        "a_tilde": v * delta - x * xi,
        "b0": x * x * t - v * delta * delta + 2 * x * delta * xi,
    }


def b1_symbol(n: int) -> Poly:
    _require_n(n)
    x, v, t, xi = FIBER.gens()
    return v * xi if n == 1 else xi


# символ -> (нужен ли n, построитель)
_AMBIENT_BUILDERS = {
    "w": (False, lambda g, n: g.w),
    "t": (False, lambda g, n: g.t),
    "s": (False, lambda g, n: g.s),
    "eta": (False, lambda g, n: g.eta),
    "t0": (False, lambda g, n: g.t0),
    "eta0": (False, lambda g, n: g.eta0),
    "v": (True, lambda g, n: g.v(n)),
    "zeta": (True, lambda g, n: g.zeta(n)),
    "theta": (True, lambda g, n: g.theta(n)),
    "zeta_prime": (True, lambda g, n: g.zeta_prime(n)),
    "zeta_second": (False, lambda g, n: g.zeta_second(1 if n is None else n)),
    "zeta_third": (False, lambda g, n: g.zeta_third(1 if n is None else n)),
}

SYMBOLS = tuple(_AMBIENT_BUILDERS) + ("p", "delta_chart", "a_tilde", "b0", "b1")


def make(symbol: str, n: int | None = None) -> Poly:
    if symbol == "p":
        return transition_polynomial(_require_n(n))
    if symbol in ("delta_chart", "a_tilde", "b0"):
        return fiber_symbols()[symbol]
    if symbol == "b1":
        return b1_symbol(_require_n(n))
    if symbol not in _AMBIENT_BUILDERS:
        match = process.extractOne(symbol, SYMBOLS, scorer=fuzz.WRatio)
        suggestion = match[0] if match and match[1] >= SUGGESTION_CUTOFF else None
        raise UnknownSymbolError(symbol, suggestion)
    needs_n, build = _AMBIENT_BUILDERS[symbol]
    if needs_n:
        _require_n(n)
    return build(Gallery(), n)


# --- набор тождеств ---


@dataclass(frozen=True)
class NamedIdentity:
    id: str
    lhs: Poly
    rhs: Poly
    anchor: str

    @property
    def residual(self) -> Poly:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.residual.is_zero


@dataclass(frozen=True)
class IdentityResult:
    id: str
    passed: bool
    anchor: str
    residual: Poly | None


def build_identities(gallery: Gallery | None = None) -> list[NamedIdentity]:
    gal = gallery or Gallery()
    x, y, z, u = gal.x, gal.y, gal.z, gal.u
    w, t, s, eta = gal.w, gal.t, gal.s, gal.eta
    out = [NamedIdentity("I-REL1", y * s + t * t, x * x * z * z, "ys+t^2=x^2z^2")]

    for n in range(1, 6):
        v = gal.v(n)
        out.append(
            NamedIdentity(
                f"I-REL2(n={n})",
                v * eta + t * t,
                x * x * (z * z + v * u) + x**n * s * t,
                "v_n\\eta+t^2=x^2(z^2+v_nu)+x^nst",
            )
        )

    v1 = gal.v(1)
    zp, zpp, zppp, zeta1 = gal.zeta_prime(1), gal.zeta_second(), gal.zeta_third(), gal.zeta(1)
    p1 = gal.p_ambient(1)
    out += [
        NamedIdentity("I-Z1a", x * zp, v1 * eta + t * t, "\\frac{v_1\\eta+t^2}{x}"),
        NamedIdentity("I-Z1b", x * zpp, v1 * zp + t**3, "\\frac{v_1\\zeta'+t^3}{x}"),
        NamedIdentity("I-Z1c", zppp, zpp - t, "\\zeta''':=\\zeta''-t"),
        NamedIdentity("I-Z1d", x * zeta1, v1 * zppp + t**4, "\\frac{v_1\\zeta'''+t^4}{x}"),
        NamedIdentity("I-Z1d'", x**3 * zeta1, v1**3 * eta + p1, "x^3\\zeta^{(1)}=v_1^3\\eta+p_1"),
        NamedIdentity(
            "I-Z1e",
            zeta1,
            -v1 * z + v1 * t * (v1 * u + z * z + w) + t * t * (x * z * z + s * t),
            "-v_1z+v_1t(v_1u+z^2+w)+t^2(xz^2+st)",
        ),
    ]

    v2 = gal.v(2)
    zp2, zeta2 = gal.zeta_prime(2), gal.zeta(2)
    out += [
        NamedIdentity("I-Z2a", x * x * zp2, v2 * eta + t * t, "z^2+uv_2+st"),
        NamedIdentity("I-Z2b", x * zeta2, v2 * zp2 + t**3 - t, "\\frac{v_2\\zeta'+t^3-t}{x}"),
        NamedIdentity(
            "I-Z2c", x**3 * zeta2, v2 * v2 * eta + gal.p_ambient(2), "x^3\\zeta^{(2)}=v_2^2\\eta+p_2"
        ),
    ]

    for n in range(3, 6):
        v, zpn, zetan = gal.v(n), gal.zeta_prime(n), gal.zeta(n)
        out += [
            NamedIdentity(f"I-ZNa(n={n})", x * x * zpn, v * eta + t * t, "z^2+v_nu+x^{n-2}st"),
            NamedIdentity(f"I-ZNb(n={n})", x * zetan, v * zpn - t, "\\frac{v_n\\zeta'-t}{x}"),
            NamedIdentity(
                f"I-ZNc(n={n})",
                x**3 * zetan,
                v * v * eta + gal.p_ambient(n),
                "x^3\\zeta^{(n)}=v_n^2\\eta+p_n",
            ),
        ]

    for n in range(1, 6):
        # правая часть собрана прямо из образующих, мимо t и w
        expanded = x**n * y * y * u + y + x ** (n + 1) * z + x**n * y * z * z
        out.append(
            NamedIdentity(f"I-VEN(n={n})", gal.v(n), expanded, "x^ny^2u+y+x^{n+1}z+x^nyz^2")
        )

    for n in range(3, 6):
        v, zetan = gal.v(n), gal.zeta(n)
        out.append(
            NamedIdentity(
                f"I-THETA(n={n})",
                v * v * gal.theta(n),
                t + x * zetan - v * zetan * zetan,
                "u-x^{n-3}t\\left(xw^2+",
            )
        )

    out += fiber_identities(gal)
    return out


def fiber_identities(gallery: Gallery | None = None) -> list[NamedIdentity]:
    """I-FIB1: специализация x = 0, y = c (c обратима), знаменатели c⁻¹ сняты."""
    gal = gallery or Gallery()
    c, z, u = FIBER_CONSTANT.gens()
    zero = FIBER_CONSTANT.zero()
    special = [zero, c, z, u]
    w = substitute(gal.w, special)
    t = substitute(gal.t, special)
    eta = substitute(gal.eta, special)
    zeta1 = substitute(gal.zeta(1), special)
    return [
        NamedIdentity("I-FIB1(w)", c * w, t, "w=c_2^{-1}t=c_2u+z^2"),
        NamedIdentity("I-FIB1(eta)", c * eta, -t * t, "\\eta=s=-c_2^{-1}t^2"),
        NamedIdentity(
            "I-FIB1(zeta)", c * zeta1, -c * c * z + 2 * c * t * t - t**5, "-c_2z+2t^2-c_2^{-1}t^5"
        ),
    ]


def cross_construction_identities(gallery: Gallery | None = None) -> list[NamedIdentity]:
    """ζ^(n) как точное частное (v_n^e·η + p_n)/x³ совпадает с явной формулой."""
    gal = gallery or Gallery()
    out = []
    for n in range(1, 6):
        power = 3 if n == 1 else 2
        numerator = gal.v(n) ** power * gal.eta + gal.p_ambient(n)
        quotient = exact_div(numerator, gal.x**3)
        if quotient is None:
            quotient = numerator.ring.zero()
        out.append(
            NamedIdentity(f"I-ZETA-CROSS(n={n})", quotient, gal.zeta(n), "\\zeta^{(n)}=(v_n\\eta+p_n)/x^3")
        )
    return out


def smoke_check(identity: NamedIdentity, points: int, rng: random.Random) -> bool:
    """Повторная проверка в случайных целых точках через eval_at."""
    ring = identity.lhs.ring.union(identity.rhs.ring)
    for _ in range(points):
        point = random_point(ring, rng)
        if eval_at(identity.lhs, point) != eval_at(identity.rhs, point):
            return False
    return True


def identity_suite(
    gallery: Gallery | None = None,
    points: int = config.SMOKE_POINTS,
    seed: int = config.SEED,
) -> list[IdentityResult]:
    rng = random.Random(seed)
    identities = build_identities(gallery) + cross_construction_identities(gallery)
    results = []
    for identity in identities:
        exact = identity.holds
        passed = exact and smoke_check(identity, points, rng)
        results.append(
            IdentityResult(identity.id, passed, identity.anchor, None if exact else identity.residual)
        )
    failed = [r.id for r in results if not r.passed]
    logger.info("identity suite: %d entries, failed %s", len(results), failed or "none")
    return results


# --- координаты слоя при n = 1 ---


def fiber_frame_chain() -> Chain:
    """(z,u) ↦ (t, ζ^(1)) при x = 0, y = c над ℤ[c^±]."""
    c, z, u = FIBER_CONSTANT.gens()
    one = FIBER_CONSTANT.one()
    return Chain(
        FIBER_CONSTANT,
        (
            Scale("u", c * c * one),
            Triangular("u", c * z * z),
            Scale("z", -c),
            Triangular("z", 2 * u * u - c**-1 * u**5),
            Permute.swap("z", "u"),
        ),
        "fiber-frame",
    )


def fiber_frame_check(n: int = 1) -> bool:
    _require_case(n, 1, "fiber_frame_check")
    c, z, u = FIBER_CONSTANT.gens()
    gal = Gallery([FIBER_CONSTANT.zero(), c, z, u])
    chain = fiber_frame_chain()
    flat = flatten(chain)
    if flat.image("z") != gal.t or flat.image("u") != gal.zeta(1):
        logger.warning("fiber frame: chain images differ from specialized (t, zeta1)")
        return False
    inverse = flatten(invert_chain(chain))
    return is_identity(compose(flat, inverse)) and is_identity(compose(inverse, flat))
