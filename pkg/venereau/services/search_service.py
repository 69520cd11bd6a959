"""Ограниченный перебор сертификатов (a, b0, b1) для функции перехода λ_n.

Линейная часть a закреплена как v^β·t − x^α·ξ: любое разложение с якобианом 1
можно привести к линейным частям τ0⁽¹⁾, τ1⁽¹⁾. Перебираются коэффициенты при
мономах степени ≥ 2 по (t, ξ), кроме x⁰v⁰ и x⁰v¹: a00 = 0 и a01 = a10²
выводятся, а не перебираются.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

from sympy import Integer, Matrix, Rational

from .. import config
from ..bundle import (
    Certificate,
    TransitionFunction,
    approximation,
    cert_d,
    format_certificate,
    lemma5_conditions,
    linear_part_exponents,
    route_cocycle,
    shift_certificate,
    transition_function,
    verify_cocycle,
)
from ..errors import CertificateError, SearchBoundsError
from ..exactpoly import Monomial, Poly, coeff_in, jacobian2
from ..rings import FIBER
from ..utils.sampling import monomials_up_to

logger = logging.getLogger(__name__)


@dataclass
class SearchResult:
    certificates: list[Certificate] = field(default_factory=list)
    exhausted: bool = True
    examined: int = 0
    estimate: int = 0
    pinned: Poly | None = None


def _free_monomials(max_deg: int) -> list[Monomial]:
    out = []
    for e in monomials_up_to(FIBER, FIBER.variables, max_deg):
        x, v, t, xi = e
        if t + xi < 2 or (x, v) in ((0, 0), (0, 1)):
            continue
        out.append(e)
    return out


def _linear_part(tf: TransitionFunction) -> Poly:
    alpha, beta = linear_part_exponents(tf)
    return FIBER.monomial({"v": beta, "t": 1}) - FIBER.monomial({"x": alpha, "xi": 1})


def _within_bounds(a: Poly, max_deg: int, max_coeff: int) -> bool:
    return a.degree() <= max_deg and all(abs(c) <= max_coeff for c, _ in a.terms)


def candidate_polys(tf: TransitionFunction, max_deg: int, max_coeff: int):
    """Кандидаты a в каноническом порядке перебора."""
    linear = _linear_part(tf)
    if linear.degree() > max_deg:
        return
    free = _free_monomials(max_deg)
    v = FIBER.gen("v")
    for coeffs in product(range(-max_coeff, max_coeff + 1), repeat=len(free)):
        head = linear + Poly.from_dict(FIBER, dict(zip(free, coeffs, strict=True)))
        a10 = coeff_in(head, {"x": 1, "v": 0})
        a = head + v * a10 * a10
        if _within_bounds(a, max_deg, max_coeff):
            yield a


def solve_shift(a: Poly, d: Poly, shift_deg: int) -> Poly | None:
    """Целое c степени ≤ shift_deg с jac(a, c) = 1 − d, или None.

    Линейная система над ℚ по коэффициентам c в мономиальном базисе;
    свободные параметры полагаются нулём.
    """
    basis = monomials_up_to(FIBER, FIBER.variables, shift_deg)
    columns = [jacobian2(a, FIBER.monomial(e), "t", "xi") for e in basis]
    target = FIBER.one() - d
    rows = sorted({e for col in columns for _, e in col.terms} | {e for _, e in target.terms})
    if not rows:
        return FIBER.zero()
    matrix = Matrix(
        [[Integer(col.as_dict.get(r, 0)) for col in columns] for r in rows]
    )
    rhs = Matrix([Integer(target.as_dict.get(r, 0)) for r in rows])
    try:
        solution, params = matrix.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    solution = solution.subs({p: 0 for p in params})
    coeffs = {}
    for e, value in zip(basis, solution, strict=True):
        value = Rational(value)
        if value.q != 1:
            return None
        if value:
            coeffs[e] = int(value.p)
    return Poly.from_dict(FIBER, coeffs)


def examine_candidate(a: Poly, tf: TransitionFunction, shift_deg: int) -> Certificate | None:
    if not lemma5_conditions(a).holds:
        return None
    value = tf.value_at(a)
    if value.is_zero:
        return None
    try:
        b0, b1 = route_cocycle(value, tf.k, tf.l)
        cert = Certificate(a, b0, b1, tf.k, tf.l)
        d = cert_d(cert)
    except CertificateError as exc:
        logger.debug("кандидат %s отброшен: %s", a, exc)
        return None
    if d != 1:
        c = solve_shift(a, d, shift_deg)
        if c is None:
            return None
        cert = shift_certificate(cert, c)
        try:
            d = cert_d(cert)
        except CertificateError:
            return None
    if d == 1 and verify_cocycle(cert, tf):
        return cert
    return None


def _examine_chunk(args) -> list[Certificate]:
    candidates, tf, shift_deg = args
    found = []
    for a in candidates:
        cert = examine_candidate(a, tf, shift_deg)
        if cert is not None:
            found.append(cert)
    return found


def search_certificate(
    n: int,
    max_deg: int,
    max_coeff: int,
    shift_deg: int,
    m: int | None = None,
    workers: int = config.WORKERS,
    cap: int = config.SEARCH_CAP,
) -> SearchResult:
    tf = transition_function(n)
    if m is not None:
        tf = approximation(tf, m)

    estimate = (2 * max_coeff + 1) ** len(_free_monomials(max_deg))
    if estimate > cap:
        raise SearchBoundsError(f"оценка перебора {estimate} превышает предел {cap}")

    candidates = list(candidate_polys(tf, max_deg, max_coeff))
    logger.info("search n=%s: %d кандидатов из оценки %d", n, len(candidates), estimate)

    if workers > 1 and len(candidates) > 1:
        chunks = [candidates[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_examine_chunk, [(chunk, tf, shift_deg) for chunk in chunks])
            found = [cert for part in parts for cert in part]
    else:
        found = _examine_chunk((candidates, tf, shift_deg))

    found.sort(key=format_certificate)
    return SearchResult(
        found,
        exhausted=not found,
        examined=len(candidates),
        estimate=estimate,
        pinned=_linear_part(tf),
    )
