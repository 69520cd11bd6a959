"""Каноническая текстовая форма многочленов, колец и документов.

Документ (файл отображения или сертификата): строка-заголовок кольца,
комментарии `#`, затем строки `ключ -> многочлен` или `ключ = значение`.
Парсеры строк возвращают None на нераспознанной строке;
ParseError поднимается только с координатами ошибки.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError
from .exactpoly import Monomial, Poly, RingSpec

HEADER_RE = re.compile(r"^\s*ring:\s*(?P<vars>[^;]*?)\s*;\s*laurent:\s*(?P<laurent>.*?)\s*$")
ENTRY_RE = re.compile(r"^\s*(?P<key>[A-Za-z_][A-Za-z0-9_]*)\s*(?P<sep>->|=)\s*(?P<value>.*?)\s*$")
PROVENANCE_RE = re.compile(r"^\s*#\s*provenance:\s*(?P<text>.*?)\s*$")

TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^]))")


def format_ring(ring: RingSpec) -> str:
    laurent = " ".join(v for v in ring.variables if v in ring.laurent)
    header = f"ring: {' '.join(ring.variables)}; laurent:"
    return f"{header} {laurent}" if laurent else header


def _format_monomial(ring: RingSpec, exps: Monomial) -> str:
    factors = []
    for name, e in zip(ring.variables, exps, strict=True):
        if e == 1:
            factors.append(name)
        elif e:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def format_poly(p: Poly) -> str:
    if p.is_zero:
        return "0"
    parts: list[str] = []
    for i, (c, e) in enumerate(p.terms):
        mono = _format_monomial(p.ring, e)
        magnitude = abs(c)
        if not mono:
            body = str(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{magnitude}*{mono}"
        if i == 0:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(parts)


def parse_ring(line: str, line_no: int = 1) -> RingSpec:
    m = HEADER_RE.match(line)
    if not m:
        raise ParseError("ожидался заголовок 'ring: ...; laurent: ...'", line_no, 1)
    names = m.group("vars").split()
    laurent = m.group("laurent").split()
    if not names:
        raise ParseError("в кольце нет переменных", line_no, 7)
    try:
        return RingSpec(tuple(names), frozenset(laurent))
    except (ValueError, KeyError) as exc:
        raise ParseError(str(exc), line_no, 1) from None


def _tokenize(text: str, line_no: int, col_offset: int) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        m = TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"неожиданный символ {text[bad]!r}", line_no, col_offset + bad + 1)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), col_offset + start + 1))
        pos = m.end()
    return tokens


def parse_poly(text: str, ring: RingSpec, line_no: int = 1, col_offset: int = 0) -> Poly:
    """Разбор многочлена: термы `коэф*x^e*y` через ` + ` / ` - `, ведущий минус допустим."""
    tokens = _tokenize(text, line_no, col_offset)
    if not tokens:
        raise ParseError("пустой многочлен", line_no, col_offset + 1)

    pos = 0
    acc: dict[Monomial, int] = {}

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def expect(kind: str, value: str | None = None):
        nonlocal pos
        tok = peek()
        if tok is None:
            end = col_offset + len(text.rstrip()) + 1
            raise ParseError("неожиданный конец строки", line_no, end)
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise ParseError(f"неожиданный токен {tok[1]!r}", line_no, tok[2])
        pos += 1
        return tok

    def parse_factor(exps: list[int]):
        nonlocal pos
        _, name, col = expect("name")
        if name not in ring.variables:
            raise ParseError(f"переменной {name!r} нет в кольце", line_no, col)
        e = 1
        tok = peek()
        if tok and tok[1] == "^":
            pos += 1
            sign = 1
            tok = peek()
            if tok and tok[1] == "-":
                pos += 1
                sign = -1
            e = sign * int(expect("int")[1])
        exps[ring.index(name)] += e

    sign = 1
    tok = peek()
    if tok and tok[1] == "-":
        sign = -1
        pos += 1

    while True:
        exps = [0] * ring.arity
        coeff = 1
        tok = peek()
        if tok and tok[0] == "int":
            coeff = int(tok[1])
            pos += 1
            tok = peek()
            if tok and tok[1] == "*":
                pos += 1
                parse_factor(exps)
        else:
            parse_factor(exps)
        while (tok := peek()) and tok[1] == "*":
            pos += 1
            parse_factor(exps)
        key = tuple(exps)
        if not ring.allows(key):
            raise ParseError(f"отрицательная степень не разрешена кольцом {ring}", line_no, 1)
        acc[key] = acc.get(key, 0) + sign * coeff

        tok = peek()
        if tok is None:
            break
        if tok[1] not in "+-":
            raise ParseError(f"неожиданный токен {tok[1]!r}", line_no, tok[2])
        sign = 1 if tok[1] == "+" else -1
        pos += 1

    return Poly.from_dict(ring, acc)


def parse_entry_line(line: str):
    """`ключ -> значение` / `ключ = значение` или None."""
    m = ENTRY_RE.match(line)
    if not m:
        return None
    return m.group("key"), m.group("sep"), m.group("value"), m.start("value")


@dataclass
class Document:
    ring: RingSpec
    entries: list[tuple[str, str, str, int, int]] = field(default_factory=list)
    provenance: list[str] = field(default_factory=list)

    def value(self, key: str) -> tuple[str, int, int] | None:
        for name, _, value, line_no, col in self.entries:
            if name == key:
                return value, line_no, col
        return None

    def poly(self, key: str) -> Poly:
        found = self.value(key)
        if found is None:
            raise ParseError(f"нет строки {key!r}", len(self.entries) + 1, 1)
        value, line_no, col = found
        return parse_poly(value, self.ring, line_no, col)

    def integer(self, key: str) -> int:
        found = self.value(key)
        if found is None:
            raise ParseError(f"нет строки {key!r}", len(self.entries) + 1, 1)
        value, line_no, col = found
        if not re.fullmatch(r"-?\d+", value):
            raise ParseError(f"ожидалось целое, получено {value!r}", line_no, col + 1)
        return int(value)


def parse_document(text: str) -> Document:
    ring = None
    doc = None
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        prov = PROVENANCE_RE.match(line)
        if line.lstrip().startswith("#"):
            if prov and doc is not None:
                doc.provenance.append(prov.group("text"))
            continue
        if ring is None:
            ring = parse_ring(line, line_no)
            doc = Document(ring)
            continue
        entry = parse_entry_line(line)
        if entry is None:
            raise ParseError("ожидалась строка 'имя -> многочлен' или 'имя = значение'", line_no, 1)
        key, sep, value, col = entry
        doc.entries.append((key, sep, value, line_no, col))
    if doc is None:
        raise ParseError("пустой документ: нет заголовка кольца", 1, 1)
    return doc
