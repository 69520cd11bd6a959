import pytest

from venereau.errors import ParseError
from venereau.exactpoly import RingSpec
from venereau.gallery import transition_polynomial
from venereau.poly_format import (
    format_poly,
    format_ring,
    parse_document,
    parse_entry_line,
    parse_poly,
    parse_ring,
)
from venereau.rings import AMBIENT, AMBIENT_X, FIBER, TRANSITION


def test_format_s_in_canonical_order(gallery):
    assert format_poly(gallery.s) == "-y^3*u^2 - 2*y^2*z^2*u - y*z^4 - 2*x*y*z*u - 2*x*z^3"


def test_format_p1_in_canonical_order():
    assert format_poly(transition_polynomial(1)) == "x^2*t^4 + x*v*t^3 - x^2*v*t + v^2*t^2"


@pytest.mark.parametrize(
    "text",
    ["0", "1", "-1", "x", "-x + 1", "2*x*y - 3", "4*x + x^-2*y", "-y^3*u^2 - 2*x*z^3"],
)
def test_canonical_text_is_a_fixed_point(text):
    assert format_poly(parse_poly(text, AMBIENT_X)) == text


def test_parse_collects_like_terms():
    x, y, _, _ = AMBIENT.gens()
    assert parse_poly("x*y + 2*y*x - x", AMBIENT) == 3 * x * y - x


def test_parse_round_trips_gallery_polynomials(gallery):
    for p in (gallery.zeta(1), gallery.zeta(3), gallery.theta(3), gallery.eta):
        assert parse_poly(format_poly(p), AMBIENT) == p


def test_format_ring_header():
    assert format_ring(AMBIENT) == "ring: x y z u; laurent:"
    assert format_ring(AMBIENT_X) == "ring: x y z u; laurent: x"
    assert parse_ring("ring: x v t xi; laurent: x v") == RingSpec.of("x v t xi", laurent="x v")


def test_parse_ring_requires_header():
    with pytest.raises(ParseError) as exc:
        parse_ring("x -> y", line_no=3)
    assert exc.value.line == 3


def test_parse_error_reports_column_of_bad_character():
    with pytest.raises(ParseError) as exc:
        parse_poly("x + $", AMBIENT, line_no=2)
    assert (exc.value.line, exc.value.column) == (2, 5)


def test_parse_error_on_unknown_variable():
    with pytest.raises(ParseError) as exc:
        parse_poly("x + w", AMBIENT)
    assert exc.value.column == 5
    assert "'w'" in str(exc.value)


def test_parse_error_on_negative_power_outside_laurent():
    with pytest.raises(ParseError):
        parse_poly("x^-1", AMBIENT)


def test_parse_error_on_dangling_operator():
    with pytest.raises(ParseError):
        parse_poly("x +", AMBIENT)


def test_parse_entry_line_returns_none_on_garbage():
    assert parse_entry_line("это не строка отображения") is None
    assert parse_entry_line("v -> y + x") == ("v", "->", "y + x", 5)


def test_parse_document_keeps_provenance_and_skips_comments():
    text = "\n".join(
        [
            "# комментарий до заголовка",
            "ring: x v t; laurent:",
            "# provenance: phi10 n=3",
            "# обычный комментарий",
            "q = v*t^2 - x^2*t",
        ]
    )
    doc = parse_document(text)
    assert doc.ring == TRANSITION
    assert doc.provenance == ["phi10 n=3"]
    x, v, t = TRANSITION.gens()
    assert doc.poly("q") == v * t * t - x * x * t


def test_parse_document_reports_line_of_bad_entry():
    text = "ring: x v t xi; laurent:\nk = 3\nгде-то ошибка\n"
    with pytest.raises(ParseError) as exc:
        parse_document(text)
    assert exc.value.line == 3


def test_document_integer_rejects_non_integer():
    doc = parse_document("ring: x v t xi; laurent:\nk = три\n")
    with pytest.raises(ParseError):
        doc.integer("k")
    assert FIBER.variables == doc.ring.variables


def test_empty_document_fails():
    with pytest.raises(ParseError):
        parse_document("# только комментарий\n")
