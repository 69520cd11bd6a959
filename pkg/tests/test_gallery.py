import random

import pytest

from venereau.errors import InvalidParameterError, UnknownSymbolError
from venereau.exactpoly import exact_div, substitute
from venereau.gallery import (
    Gallery,
    build_identities,
    cross_construction_identities,
    fiber_frame_chain,
    fiber_frame_check,
    fiber_identities,
    identity_suite,
    make,
    smoke_check,
    transition_polynomial,
)
from venereau.rings import AMBIENT


def test_w_t_s_eta_definitions(gallery):
    x, y, z, u = AMBIENT.gens()
    assert gallery.w == z * z + y * u
    assert gallery.t == x * z + y * z * z + y * y * u
    assert gallery.eta == gallery.s + x * x * u


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_venereau_polynomial_expansion(n, gallery):
    x, y, z, u = AMBIENT.gens()
    assert gallery.v(n) == y + x**n * (x * z + y * (y * u + z * z))


def test_v1_is_the_classical_venereau_polynomial(gallery):
    x, y, z, u = AMBIENT.gens()
    assert gallery.v(1) == y + x * x * z + x * y * y * u + x * y * z * z


def test_zeta_is_divisible_closed_form(gallery):
    x = gallery.x
    for n in (1, 2, 3):
        power = 3 if n == 1 else 2
        numerator = gallery.v(n) ** power * gallery.eta + gallery.p_ambient(n)
        assert exact_div(numerator, x**3) == gallery.zeta(n)


def test_zeta_and_theta_sizes(gallery):
    assert len(gallery.zeta(3)) == 29
    assert len(gallery.theta(3)) == 91


def test_theta_requires_n_at_least_three(gallery):
    with pytest.raises(InvalidParameterError):
        gallery.theta(2)


def test_zeta_second_only_for_n_equal_one(gallery):
    with pytest.raises(InvalidParameterError):
        gallery.zeta_second(2)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_p_ambient_substitutes_v_and_t(n, gallery):
    expected = substitute(transition_polynomial(n), [gallery.x, gallery.v(n), gallery.t])
    assert gallery.p_ambient(n) == expected


def test_identity_suite_passes_with_zero_residual():
    results = identity_suite(points=2, seed=0)
    assert results
    assert all(r.passed for r in results), [r.id for r in results if not r.passed]
    assert all(r.residual is None for r in results)


def test_identity_suite_order_is_fixed():
    ids = [r.id for r in identity_suite(points=0)]
    assert ids[0] == "I-REL1"
    assert ids[1:6] == [f"I-REL2(n={n})" for n in range(1, 6)]
    assert ids[-1] == "I-ZETA-CROSS(n=5)"
    assert len(ids) == len(set(ids))


def test_identity_ids_cover_expected_families():
    ids = {i.id for i in build_identities()}
    for expected in ("I-Z1a", "I-Z1d'", "I-Z2c", "I-ZNc(n=4)", "I-VEN(n=5)", "I-THETA(n=3)"):
        assert expected in ids
    assert {i.id for i in fiber_identities()} == {"I-FIB1(w)", "I-FIB1(eta)", "I-FIB1(zeta)"}
    assert len(cross_construction_identities()) == 5


def test_tampered_constant_fails_with_named_residual(gallery):
    tampered = Gallery(overrides={"s": gallery.s + 1})
    results = {r.id: r for r in identity_suite(tampered, points=0)}
    rel1 = results["I-REL1"]
    assert not rel1.passed
    assert rel1.residual == tampered.y
    assert results["I-VEN(n=3)"].passed


def test_smoke_check_detects_pointwise_difference(gallery):
    identity = build_identities()[0]
    assert smoke_check(identity, 5, random.Random(1))
    broken = type(identity)(identity.id, identity.lhs + 1, identity.rhs, identity.anchor)
    assert not smoke_check(broken, 1, random.Random(1))


def test_make_builds_named_symbols(gallery):
    assert make("w") == gallery.w
    assert make("zeta", 3) == gallery.zeta(3)
    assert make("p", 3) == transition_polynomial(3)


def test_make_requires_n_for_parametric_symbols():
    with pytest.raises(InvalidParameterError):
        make("theta")


def test_make_suggests_closest_symbol():
    with pytest.raises(UnknownSymbolError) as exc:
        make("thetta", 3)
    assert exc.value.suggestion == "theta"
    assert "theta" in str(exc.value)


def test_make_unknown_symbol_without_close_match():
    with pytest.raises(UnknownSymbolError) as exc:
        make("qqqqqqqqqq")
    assert exc.value.suggestion is None


def test_fiber_frame_chain_gives_t_and_zeta1():
    assert len(fiber_frame_chain().moves) == 5
    assert fiber_frame_check(1)


def test_fiber_frame_check_only_for_n_one():
    with pytest.raises(InvalidParameterError):
        fiber_frame_check(2)
