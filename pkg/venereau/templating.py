import json
import os

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from .poly_format import format_poly, format_ring

BASE_DIR = os.path.dirname(os.path.abspath(__file__))
templates = Environment(
    loader=FileSystemLoader(os.path.join(BASE_DIR, "templates")),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
    autoescape=False,
)


def canonical(value) -> str:
    """Многочлен в канонической записи; None даёт пустую строку (нет остатка)."""
    if value is None:
        return ""
    return format_poly(value)


def ring_header(value) -> str:
    return format_ring(value)


def tojson_filter(value) -> str:
    return json.dumps(value, ensure_ascii=False, indent=2)


def status_label(passed: bool) -> str:
    return "PASS" if passed else "FAIL"


templates.filters["canonical"] = canonical
templates.filters["ring_header"] = ring_header
templates.filters["tojson"] = tojson_filter
templates.filters["status"] = status_label


def render(name: str, **context) -> str:
    return templates.get_template(name).render(**context)
