"""Expression parser, complex file format, certificate serialization.

Grammar for polynomial entries (whitespace insignificant)::

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := coeff | var ('^' sint)? | '(' expr ')'
    coeff  := int ('/' int)?
    sint   := '-'? int

The optional leading '-' is an extension over the declared grammar so that
canonical output (which may start with a negative term) re-parses; printing
and parsing are mutually inverse on canonical forms.

Complex files are line oriented::

    # comment
    complex <name>
    field Q            (or: field Fp <p>)
    vars x1 x2
    degrees <lo>..<hi>
    rank <k> <r>       (one line per degree)
    d <k> { row ; row ; ... }   rows comma-separated, k maps degree k -> k-1

Contraction certificates use the same header plus ``direction`` and ``s <k>``
matrix blocks whose entries may carry a denominator factor list::

    entry := expr ['/' '[' expr (';' expr)* ']']
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .fields import Field, PrimeField, QQ
from .matrices import Matrix
from .rings import (
    Direction,
    LaurentPoly,
    LaurentRing,
    Localized,
    LocalizedRing,
    make_localized,
    poly_str,
)
from .complexes import BasedComplex, validate
from .novikov import Contraction

__all__ = [
    "ParseError",
    "ComplexFormatError",
    "parse_poly",
    "format_poly",
    "parse_entry",
    "format_entry",
    "dumps_complex",
    "loads_complex",
    "save_complex",
    "load_complex",
    "dumps_contraction",
    "loads_contraction",
    "load_contraction",
    "ContractionFile",
]

MAX_EXPONENT = 10**6

format_poly = poly_str


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class ComplexFormatError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            break
        if m.group(1) is not None:
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if not ch.strip():
                pos = m.end()
                continue
            if ch not in "+-*/^()[];,":
                raise ParseError(f"unexpected character {ch!r}", m.start(3))
            out.append((ch, ch, m.start(3)))
        pos = m.end()
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str, ring: LaurentRing):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self, ahead: int = 0):
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        if tok[0] != "end":
            self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse_expr(self) -> LaurentPoly:
        sign = 1
        if self.peek()[0] == "-":
            self.next()
            sign = -1
        out = self.parse_term()
        if sign < 0:
            out = -out
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            t = self.parse_term()
            out = out + t if op == "+" else out - t
        return out

    def parse_term(self) -> LaurentPoly:
        out = self.parse_factor()
        while self.peek()[0] == "*":
            self.next()
            out = out * self.parse_factor()
        return out

    def parse_factor(self) -> LaurentPoly:
        kind, val, pos = self.peek()
        if kind == "int":
            self.next()
            num = int(val)
            if self.peek()[0] == "/" and self.peek(1)[0] == "int":
                self.next()
                dkind, dval, dpos = self.next()
                den = int(dval)
                if den == 0:
                    raise ParseError("zero denominator in coefficient", dpos)
                return self.ring.from_scalar(self.ring.field.of(Fraction(num, den)))
            return self.ring.from_scalar(num)
        if kind == "name":
            self.next()
            try:
                j = self.ring.var_index(val)
            except KeyError:
                raise ParseError(f"unknown variable {val!r}", pos) from None
            exp = 1
            if self.peek()[0] == "^":
                self.next()
                neg = False
                if self.peek()[0] == "-":
                    self.next()
                    neg = True
                etok = self.expect("int")
                exp = -int(etok[1]) if neg else int(etok[1])
                if abs(exp) > MAX_EXPONENT:
                    raise ParseError("exponent overflow", etok[2])
            e = [0] * self.ring.nvars
            e[j - 1] = exp
            return self.ring.monomial(tuple(e))
        if kind == "(":
            self.next()
            out = self.parse_expr()
            self.expect(")")
            return out
        raise ParseError(f"unexpected token {val!r}", pos)

    def parse_entry(self) -> Localized:
        num = self.parse_expr()
        if self.peek()[0] != "/":
            return Localized(num, ())
        self.next()
        self.expect("[")
        factors = [self.parse_expr()]
        while self.peek()[0] == ";":
            self.next()
            factors.append(self.parse_expr())
        self.expect("]")
        return make_localized(num, tuple(factors))

    def finish(self):
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2])


def parse_poly(text: str, ring: LaurentRing) -> LaurentPoly:
    p = _Parser(text, ring)
    out = p.parse_expr()
    p.finish()
    return out


def parse_entry(text: str, ring: LaurentRing) -> Localized:
    p = _Parser(text, ring)
    out = p.parse_entry()
    p.finish()
    return out


def format_entry(e: Localized) -> str:
    if not e.den:
        return poly_str(e.num)
    return f"{poly_str(e.num)} / [{'; '.join(poly_str(f) for f in e.den)}]"


# ---------------------------------------------------------------------------
# complex files


def _field_header(field: Field) -> str:
    if field == QQ:
        return "field Q"
    if isinstance(field, PrimeField):
        return f"field Fp {field.p}"
    raise ComplexFormatError(f"field {field.name} has no file representation")


def _parse_field(parts, lineno) -> Field:
    if parts == ["Q"]:
        return QQ
    if len(parts) == 2 and parts[0] == "Fp":
        try:
            return PrimeField(int(parts[1]))
        except ValueError as exc:
            raise ComplexFormatError(f"line {lineno}: {exc}") from None
    raise ComplexFormatError(f"line {lineno}: malformed field declaration")


def _matrix_text(m: Matrix, fmt) -> str:
    if m.nrows == 0 or m.ncols == 0:
        return "{}"
    rows = [", ".join(fmt(e) for e in row) for row in m.rows]
    return "{ " + " ; ".join(rows) + " }"


def dumps_complex(C: BasedComplex, name: str = "C") -> str:
    lines = [f"complex {name}", _field_header(C.ring.field)]
    lines.append("vars" + ("" if C.ring.nvars == 0 else " " + " ".join(C.ring.names)))
    lines.append(f"degrees {C.lo}..{C.hi}")
    for k in C.degrees():
        lines.append(f"rank {k} {C.rank(k)}")
    for k in range(C.lo + 1, C.hi + 1):
        m = C.diff(k)
        if not m.is_zero():
            lines.append(f"d {k} {_matrix_text(m, poly_str)}")
    return "\n".join(lines) + "\n"


@dataclass
class _Seen:
    name: str = "C"
    field: Field | None = None
    names: tuple | None = None
    lo: int | None = None
    hi: int | None = None
    ranks: dict = None
    blocks: dict = None


def _read_lines(text: str):
    """Logical lines: comments stripped, '{...}' blocks joined across lines."""
    physical = text.split("\n")
    logical = []
    buffer = ""
    depth = 0
    for lineno, raw in enumerate(physical, start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip() and depth == 0:
            continue
        buffer = (buffer + " " + line.strip()) if buffer else line.strip()
        depth = buffer.count("{") - buffer.count("}")
        if depth < 0:
            raise ComplexFormatError(f"line {lineno}: unbalanced braces")
        if depth == 0 and buffer:
            logical.append((lineno, buffer))
            buffer = ""
    if depth != 0:
        raise ComplexFormatError("unterminated matrix block")
    return logical


def _parse_matrix_block(block: str, lineno: int, nrows: int, ncols: int, ring,
                        entry_parser) -> Matrix:
    block = block.strip()
    if not (block.startswith("{") and block.endswith("}")):
        raise ComplexFormatError(f"line {lineno}: expected a matrix block")
    inner = block[1:-1].strip()
    if not inner:
        if nrows and ncols:
            raise ComplexFormatError(
                f"line {lineno}: empty block for a {nrows}x{ncols} matrix"
            )
        return Matrix.zeros(ring, nrows, ncols)
    rows = [r for r in inner.split(";")]
    if len(rows) != nrows:
        raise ComplexFormatError(
            f"line {lineno}: {len(rows)} rows given, {nrows} expected"
        )
    out = []
    for r in rows:
        entries = r.split(",")
        if len(entries) != ncols:
            raise ComplexFormatError(
                f"line {lineno}: {len(entries)} entries in a row, {ncols} expected"
            )
        try:
            out.append([entry_parser(e) for e in entries])
        except ParseError as exc:
            raise ComplexFormatError(f"line {lineno}: {exc}") from None
    return Matrix(ring, out, nrows, ncols)


def _parse_header(logical, kind: str):
    seen = _Seen(ranks={}, blocks={})
    for lineno, line in logical:
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == kind:
            seen.name = rest or seen.name
        elif head == "field":
            seen.field = _parse_field(rest.split(), lineno)
        elif head == "vars":
            seen.names = tuple(rest.split())
        elif head == "degrees":
            m = re.fullmatch(r"(-?\d+)\s*\.\.\s*(-?\d+)", rest)
            if not m:
                raise ComplexFormatError(f"line {lineno}: malformed degree range")
            seen.lo, seen.hi = int(m.group(1)), int(m.group(2))
        elif head == "rank":
            parts = rest.split()
            if len(parts) != 2:
                raise ComplexFormatError(f"line {lineno}: malformed rank line")
            seen.ranks[int(parts[0])] = int(parts[1])
        else:
            seen.blocks.setdefault(head, []).append((lineno, rest))
    if seen.field is None or seen.names is None or seen.lo is None:
        raise ComplexFormatError("missing field, vars or degrees header")
    if seen.lo > seen.hi:
        raise ComplexFormatError("empty degree range")
    return seen


def loads_complex(text: str, *, check: bool = True):
    """Parse a complex file; returns (name, BasedComplex).

    With ``check`` the d^2 = 0 axiom is enforced on load and a violation is
    rejected with its first nonzero composite entry.
    """
    seen = _parse_header(_read_lines(text), "complex")
    ring = LaurentRing(seen.field, len(seen.names), seen.names)
    ranks = [seen.ranks.get(k, 0) for k in range(seen.lo, seen.hi + 1)]
    diffs = {}
    for lineno, rest in seen.blocks.get("d", []):
        ktext, _, block = rest.partition(" ")
        try:
            k = int(ktext)
        except ValueError:
            raise ComplexFormatError(f"line {lineno}: malformed differential header") from None
        if not (seen.lo < k <= seen.hi):
            raise ComplexFormatError(f"line {lineno}: d {k} outside the degree range")
        nrows = seen.ranks.get(k - 1, 0)
        ncols = seen.ranks.get(k, 0)
        diffs[k] = _parse_matrix_block(
            block, lineno, nrows, ncols, ring, lambda t: parse_poly(t, ring)
        )
    unknown = set(seen.blocks) - {"d"}
    if unknown:
        raise ComplexFormatError(f"unknown directive(s): {', '.join(sorted(unknown))}")
    C = BasedComplex(ring, seen.lo, ranks, diffs)
    if check:
        rep = validate(C)
        if not rep:
            raise ComplexFormatError("d^2 != 0: " + rep.message())
    return seen.name, C


def load_complex(path, *, check: bool = True):
    with open(path, "r", encoding="utf-8") as fh:
        return loads_complex(fh.read(), check=check)


def save_complex(C: BasedComplex, path, name: str = "C"):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_complex(C, name))


# ---------------------------------------------------------------------------
# contraction certificates


@dataclass(frozen=True)
class ContractionFile:
    name: str
    ring: LaurentRing
    direction: Direction
    ranks: dict
    contraction: Contraction


def dumps_contraction(C: BasedComplex, cert: Contraction, name: str = "s") -> str:
    d = cert.direction
    lines = [f"contraction {name}", _field_header(C.ring.field)]
    lines.append("vars" + ("" if C.ring.nvars == 0 else " " + " ".join(C.ring.names)))
    lines.append(f"degrees {C.lo}..{C.hi}")
    for k in C.degrees():
        lines.append(f"rank {k} {C.rank(k)}")
    sgn = "+" if d.sign > 0 else "-"
    dir_line = f"direction {d.index} {sgn}"
    if d.ordering is not None:
        dir_line += " order " + ",".join(str(v) for v in d.ordering)
    lines.append(dir_line)
    for k in sorted(cert.maps):
        m = cert.maps[k]
        if m.nrows and m.ncols and not m.is_zero():
            lines.append(f"s {k} {_matrix_text(m, format_entry)}")
    return "\n".join(lines) + "\n"


def loads_contraction(text: str) -> ContractionFile:
    seen = _parse_header(_read_lines(text), "contraction")
    ring = LaurentRing(seen.field, len(seen.names), seen.names)
    dir_lines = seen.blocks.pop("direction", [])
    if len(dir_lines) != 1:
        raise ComplexFormatError("exactly one direction line required")
    lineno, rest = dir_lines[0]
    parts = rest.split()
    if len(parts) not in (2, 4) or parts[1] not in "+-":
        raise ComplexFormatError(f"line {lineno}: malformed direction line")
    ordering = None
    if len(parts) == 4:
        if parts[2] != "order":
            raise ComplexFormatError(f"line {lineno}: malformed direction line")
        ordering = tuple(int(v) for v in parts[3].split(","))
    direction = Direction(int(parts[0]), 1 if parts[1] == "+" else -1, ordering)
    direction.check(ring.nvars)
    lring = LocalizedRing(ring, direction)
    maps = {}
    for lineno, rest in seen.blocks.get("s", []):
        ktext, _, block = rest.partition(" ")
        k = int(ktext)
        nrows = seen.ranks.get(k + 1, 0)
        ncols = seen.ranks.get(k, 0)
        maps[k] = _parse_matrix_block(
            block, lineno, nrows, ncols, lring, lambda t: parse_entry(t, ring)
        )
    unknown = set(seen.blocks) - {"s"}
    if unknown:
        raise ComplexFormatError(f"unknown directive(s): {', '.join(sorted(unknown))}")
    return ContractionFile(seen.name, ring, direction, dict(seen.ranks),
                           Contraction(direction, maps))


def load_contraction(path) -> ContractionFile:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_contraction(fh.read())
