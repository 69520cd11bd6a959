import random

import pytest

from venereau.endomap import (
    Chain,
    Explicit,
    Permute,
    PolyMap,
    Scale,
    Triangular,
    alpha_n_chain,
    beta_chain,
    build_alpha_n,
    compose,
    flatten,
    footnote_delta_chain,
    format_map,
    invert_chain,
    is_identity,
    is_integral,
    nagata_chain,
    nagata_map,
    parse_map,
    psi_chart_forms,
    restrict,
    verify_footnote_decomposition,
)
from venereau.errors import (
    IntegralityError,
    InvalidParameterError,
    ParseError,
    RingMismatchError,
    VerificationError,
)
from venereau.exactpoly import RingSpec, substitute
from venereau.rings import AMBIENT, AMBIENT_X, NAGATA_RING
from venereau.utils.sampling import random_poly

XY = RingSpec.of("x y")
XY_LAURENT = RingSpec.of("x y", laurent="x")
XYZ_LAURENT = RingSpec.of("x y z", laurent="x")


def make_map(ring, *images):
    return PolyMap(ring, ring, tuple(images))


def test_polymap_checks_arity():
    x, _ = XY.gens()
    with pytest.raises(RingMismatchError):
        PolyMap(XY, XY, (x,))


def test_compose_substitutes_second_into_first():
    x, y = XY.gens()
    f = make_map(XY, x, y + x * x)
    g = make_map(XY, x + 1, y)
    fg = compose(f, g)
    assert fg.images == (x + 1, y + (x + 1) * (x + 1))


def test_compose_requires_matching_rings():
    x, y = XY.gens()
    with pytest.raises(RingMismatchError):
        compose(make_map(XY, x, y), PolyMap.identity(AMBIENT))


@pytest.mark.parametrize("seed", range(4))
def test_compose_is_associative(seed):
    rng = random.Random(seed)
    f, g, h = (
        make_map(XY, *(random_poly(rng, XY, XY.variables, 2, 3) for _ in XY.variables))
        for _ in range(3)
    )
    assert compose(compose(f, g), h).images == compose(f, compose(g, h)).images


def test_identity_map():
    assert is_identity(PolyMap.identity(AMBIENT))
    x, y = XY.gens()
    assert not is_identity(make_map(XY, y, x))


def test_triangular_move_rejects_self_dependence():
    x, y = XY.gens()
    with pytest.raises(InvalidParameterError):
        Chain(XY, (Triangular("y", y * x),))


def test_scale_move_needs_invertible_monomial():
    x, y = XY.gens()
    with pytest.raises(InvalidParameterError):
        Chain(XY, (Scale("y", x),))
    with pytest.raises(InvalidParameterError):
        Chain(XY, (Scale("y", 2 * XY.one()),))
    Chain(XY_LAURENT, (Scale("y", XY_LAURENT.gen("x") ** -1),))


def test_permute_must_be_a_permutation():
    with pytest.raises(InvalidParameterError):
        Chain(XY, (Permute((("x", "y"),)),))


def test_triangular_move_on_inverted_variable_is_rejected():
    _, y = XY_LAURENT.gens()
    with pytest.raises(InvalidParameterError):
        Chain(XY_LAURENT, (Triangular("x", y**3),))


def test_permute_must_keep_inverted_variables_apart():
    with pytest.raises(InvalidParameterError):
        Chain(XY_LAURENT, (Permute.swap("x", "y"),))
    Chain(XYZ_LAURENT, (Permute.swap("y", "z"),))


def test_chain_applies_moves_in_order():
    x, y = XY.gens()
    chain = Chain(XY, (Triangular("y", x * x), Permute.swap("x", "y")))
    assert flatten(chain).images == (y + x * x, x)


def test_inverted_chain_composes_to_identity():
    x, y, z = XYZ_LAURENT.gens()
    chain = Chain(
        XYZ_LAURENT,
        (Scale("y", -(x**2)), Triangular("z", y**3 + x**-1), Permute.swap("y", "z")),
    )
    forward = flatten(chain)
    backward = flatten(invert_chain(chain))
    assert is_identity(compose(forward, backward))
    assert is_identity(compose(backward, forward))


def test_explicit_move_checks_inverse():
    x, y = XY.gens()
    forward = make_map(XY, x, y + x)
    with pytest.raises(VerificationError):
        Explicit(forward, forward)
    Explicit(forward, make_map(XY, x, y - x))


def test_nagata_preserves_w():
    y, z, u = NAGATA_RING.gens()
    w = z * z + y * u
    assert substitute(w, nagata_map().images) == w


def test_nagata_inverse_composes_to_identity():
    forward, backward = nagata_map(), nagata_map(inverse=True)
    assert is_identity(compose(forward, backward))
    assert is_identity(compose(backward, forward))


def test_nagata_chain_flattens_to_nagata_map():
    chain = nagata_chain()
    assert flatten(chain).images == nagata_map().images
    assert is_identity(compose(flatten(chain), flatten(invert_chain(chain))))


def test_apply_program_agrees_with_substitution():
    y, z, u = NAGATA_RING.gens()
    values = [y + 1, z * u, u - y]
    m = nagata_map()
    plain = PolyMap(m.source, m.target, m.images)
    assert m.apply(values) == plain.apply(values)


def test_apply_checks_value_count():
    with pytest.raises(RingMismatchError):
        nagata_map().apply(NAGATA_RING.gens()[:2])


def test_footnote_decomposition_holds():
    assert verify_footnote_decomposition()


def test_footnote_decomposition_detects_wrong_delta():
    wrong = Chain(NAGATA_RING, footnote_delta_chain().moves[:2])
    assert not verify_footnote_decomposition(wrong)


def test_beta_is_y_t_eta(gallery):
    images = flatten(beta_chain()).images
    assert images == (gallery.x, gallery.y, gallery.t, gallery.eta)


def test_beta_inverse_needs_inverted_x():
    inverse = flatten(invert_chain(beta_chain()))
    assert is_integral(inverse, AMBIENT_X)
    assert not is_integral(inverse, AMBIENT)
    with pytest.raises(IntegralityError):
        restrict(inverse, AMBIENT)


def test_alpha_chain_requires_n_at_least_three():
    with pytest.raises(InvalidParameterError):
        alpha_n_chain(2)
    with pytest.raises(InvalidParameterError):
        build_alpha_n(1)


def test_alpha3_images_and_inverse(gallery):
    pair = build_alpha_n(3)
    assert pair.forward.images == tuple(gallery.alpha_images(3))
    assert pair.forward.image("y") == gallery.v(3)
    assert [len(img) for img in pair.forward.images[:3]] == [1, 4, 29]
    assert len(pair.forward.image("u")) == 91
    assert is_integral(pair.inverse, AMBIENT)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_alpha_n_is_an_automorphism(n):
    pair = build_alpha_n(n)
    assert is_identity(compose(pair.forward, pair.inverse))
    assert is_identity(compose(pair.inverse, pair.forward))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_psi_chart_forms_agree(n, gallery):
    charts = psi_chart_forms(n)
    assert charts.agree
    assert charts.theta_tau0 == gallery.theta(n)


def test_format_map_lists_images_after_header():
    text = format_map(build_alpha_n(3).forward)
    lines = text.splitlines()
    assert lines[0] == "ring: x y z u; laurent:"
    assert lines[1] == "# provenance: alpha n=3 forward"
    assert lines[2] == "x -> x"
    assert lines[3].startswith("y -> ")


def test_parse_map_round_trip():
    x, y = XY.gens()
    m = make_map(XY, x, y + 3 * x**2)
    parsed = parse_map(format_map(m))
    assert parsed.images == m.images
    assert parsed.source.variables == ("x", "y")


def test_parse_map_attaches_alpha_program():
    pair = build_alpha_n(3)
    forward = parse_map(format_map(pair.forward))
    inverse = parse_map(format_map(pair.inverse))
    assert forward.program is not None
    assert is_identity(compose(forward, inverse))


def test_parse_map_rejects_tampered_alpha_file():
    text = format_map(build_alpha_n(3).forward).replace("x -> x", "x -> x + 1")
    with pytest.raises(VerificationError):
        parse_map(text)


def test_parse_map_requires_arrows():
    with pytest.raises(ParseError):
        parse_map("ring: x y; laurent:\nx = y\n")
