"""Сверка точной арифметики с sympy на случайных многочленах."""

import random

import pytest
import sympy

from venereau.exactpoly import Poly, exact_div, partial_derivative, substitute
from venereau.rings import AMBIENT
from venereau.utils.sampling import random_poly

SYMBOLS = sympy.symbols(AMBIENT.variables)


def to_expr(p: Poly) -> sympy.Expr:
    expr = sympy.Integer(0)
    for exps, coeff in p.as_dict.items():
        term = sympy.Integer(coeff)
        for sym, e in zip(SYMBOLS, exps, strict=True):
            term *= sym**e
        expr += term
    return expr


def same(p: Poly, expr: sympy.Expr) -> bool:
    return sympy.expand(to_expr(p) - expr) == 0


def sample(seed: int, max_deg: int = 3) -> list[Poly]:
    rng = random.Random(seed)
    return [random_poly(rng, AMBIENT, AMBIENT.variables, max_deg, 5) for _ in range(3)]


@pytest.mark.parametrize("seed", range(5))
def test_ring_operations_match_sympy(seed):
    p, q, r = sample(seed)
    assert same(p * q + r, sympy.expand(to_expr(p) * to_expr(q) + to_expr(r)))
    assert same(p**3, sympy.expand(to_expr(p) ** 3))


@pytest.mark.parametrize("seed", range(5))
def test_exact_div_matches_sympy_division(seed):
    p, q, r = sample(seed)
    if q.is_zero:
        q = q + 1
    quotient, remainder = sympy.div(sympy.expand(to_expr(p * q)), to_expr(q), *SYMBOLS)
    assert remainder == 0
    assert same(exact_div(p * q, q), quotient)

    # делитель с двумя и более членами не делит моном
    if len(q) > 1:
        shifted = p * q + AMBIENT.gen("x") ** 7
        _, rem = sympy.div(sympy.expand(to_expr(shifted)), to_expr(q), *SYMBOLS)
        assert rem != 0
        assert exact_div(shifted, q) is None


@pytest.mark.parametrize("seed", range(5))
def test_substitute_matches_sympy(seed):
    p, q, r = sample(seed, max_deg=2)
    images = [q, r, p + 1, AMBIENT.gen("x")]
    expected = to_expr(p).subs(
        dict(zip(SYMBOLS, [to_expr(img) for img in images], strict=True)), simultaneous=True
    )
    assert same(substitute(p, images), sympy.expand(expected))


@pytest.mark.parametrize("seed", range(3))
def test_partial_derivative_matches_sympy(seed):
    p, _, _ = sample(seed)
    for var, sym in zip(AMBIENT.variables, SYMBOLS, strict=True):
        assert same(partial_derivative(p, var), sympy.diff(to_expr(p), sym))
