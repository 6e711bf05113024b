"""Sparse multivariate Laurent polynomials, Novikov directions and localization.

A ``LaurentRing`` fixes an exact coefficient field and a list of invertible
variables x1..xn.  Polynomials are stored as exponent-vector -> scalar maps
with no zero coefficients, so equality is plain dictionary equality.

A ``Direction`` selects one Novikov ring
``R_{j-1}((x_j^{sign}))[x_{j+1}^{\\pm1}, ..., x_n^{\\pm1}]`` by a position in a
variable ordering and a sign.  ``is_direction_unit`` decides invertibility of
a Laurent polynomial there; ``Localized`` values are exact fractions whose
denominators are products of such units, which is all the Novikov-ring
arithmetic the decision procedures ever need.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import Field, pdivmod, pgcd, pdeg

__all__ = [
    "LaurentRing",
    "LaurentPoly",
    "Direction",
    "is_direction_unit",
    "Localized",
    "LocalizedRing",
    "LocalizationError",
    "ExactDivisionError",
    "TruncatedSeries",
    "novikov_expand",
    "poly_str",
]


class ExactDivisionError(ArithmeticError):
    """Raised when an exact polynomial division is not in fact exact."""


class LocalizationError(ArithmeticError):
    """Raised when inverting an element that is not a direction-unit."""


def _default_names(nvars: int) -> tuple:
    return tuple(f"x{i}" for i in range(1, nvars + 1))


class LaurentRing:
    """The Laurent polynomial ring field[x1^+-1, ..., xn^+-1]."""

    __slots__ = ("field", "nvars", "names", "zero", "one")

    def __init__(self, field: Field, nvars: int, names=None):
        if nvars < 0:
            raise ValueError("variable count must be nonnegative")
        self.field = field
        self.nvars = nvars
        self.names = tuple(names) if names is not None else _default_names(nvars)
        if len(self.names) != nvars:
            raise ValueError("variable name count mismatch")
        self.zero = LaurentPoly(self, {})
        self.one = LaurentPoly(self, {(0,) * nvars: field.one})

    def var(self, j: int) -> LaurentPoly:
        """The variable x_j (1-based)."""
        if not 1 <= j <= self.nvars:
            raise ValueError(f"variable index {j} out of range 1..{self.nvars}")
        e = [0] * self.nvars
        e[j - 1] = 1
        return LaurentPoly(self, {tuple(e): self.field.one})

    def monomial(self, exps, coeff=None) -> LaurentPoly:
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent vector length mismatch")
        c = self.field.one if coeff is None else self.field.of(coeff)
        return LaurentPoly(self, {exps: c} if c else {})

    def from_scalar(self, c) -> LaurentPoly:
        c = self.field.of(c)
        return LaurentPoly(self, {(0,) * self.nvars: c} if c else {})

    def of(self, value) -> LaurentPoly:
        if isinstance(value, LaurentPoly):
            if value.ring != self:
                raise ValueError("polynomial from a different ring")
            return value
        return self.from_scalar(value)

    def extended(self, name=None) -> "LaurentRing":
        """Ring with one fresh variable appended (used by the mapping torus)."""
        new = name if name is not None else f"x{self.nvars + 1}"
        return LaurentRing(self.field, self.nvars + 1, self.names + (new,))

    def var_index(self, name: str) -> int:
        try:
            return self.names.index(name) + 1
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def __eq__(self, other):
        return (
            isinstance(other, LaurentRing)
            and other.field == self.field
            and other.names == self.names
        )

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return f"LaurentRing({self.field!r}, vars={','.join(self.names) or '-'})"


class LaurentPoly:
    """Sparse Laurent polynomial; immutable, canonical (no zero coefficients)."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: LaurentRing, coeffs: dict):
        self.ring = ring
        self.coeffs = coeffs

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_term(self) -> bool:
        return len(self.coeffs) == 1

    def is_scalar(self) -> bool:
        return not self.coeffs or set(self.coeffs) == {(0,) * self.ring.nvars}

    def scalar_value(self):
        if not self.coeffs:
            return self.ring.field.zero
        [(e, c)] = self.coeffs.items()
        if any(e):
            raise ValueError("not a scalar")
        return c

    def support(self):
        return self.coeffs.keys()

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs and self.ring == other.ring

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            raise TypeError(f"expected LaurentPoly, got {other!r}")
        if other.ring != self.ring:
            raise ValueError("variable-count / ring mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            acc = out.get(e)
            s = c if acc is None else acc + c
            if s:
                out[e] = s
            elif acc is not None:
                del out[e]
        return LaurentPoly(self.ring, out)

    def __sub__(self, other):
        other = self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            acc = out.get(e)
            s = -c if acc is None else acc - c
            if s:
                out[e] = s
            elif acc is not None:
                del out[e]
        return LaurentPoly(self.ring, out)

    def __neg__(self):
        return LaurentPoly(self.ring, {e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        other = self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                c = c1 * c2
                acc = out.get(e)
                s = c if acc is None else acc + c
                if s:
                    out[e] = s
                elif acc is not None:
                    del out[e]
        return LaurentPoly(self.ring, out)

    def scale(self, c) -> "LaurentPoly":
        c = self.ring.field.of(c)
        if not c:
            return self.ring.zero
        return LaurentPoly(self.ring, {e: c * v for e, v in self.coeffs.items()})

    def __pow__(self, n: int):
        if n < 0:
            return self.term_inverse() ** (-n)
        out = self.ring.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def term_inverse(self) -> "LaurentPoly":
        """Inverse of a single-term polynomial (the units of the Laurent ring)."""
        if len(self.coeffs) != 1:
            raise LocalizationError("only single-term polynomials are units of the Laurent ring")
        [(e, c)] = self.coeffs.items()
        return LaurentPoly(self.ring, {tuple(-x for x in e): self.ring.field.one / c})

    # -- structure ----------------------------------------------------------

    def degree(self, j: int) -> int:
        """Top exponent of x_j; raises on the zero polynomial."""
        if not self.coeffs:
            raise ValueError("zero polynomial has no degree")
        return max(e[j - 1] for e in self.coeffs)

    def valuation(self, j: int) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no valuation")
        return min(e[j - 1] for e in self.coeffs)

    def slices(self, j: int) -> dict:
        """Split as sum_k c_k * x_j^k; the c_k carry exponent 0 in slot j.

        Reassembling ``sum(c_k * x_j^k)`` reproduces the input exactly.
        """
        i = j - 1
        out: dict = {}
        for e, c in self.coeffs.items():
            k = e[i]
            e0 = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[e0] = c
        return {k: LaurentPoly(self.ring, d) for k, d in out.items()}

    def shift(self, exps) -> "LaurentPoly":
        """Multiply by the monomial x^exps."""
        exps = tuple(exps)
        return LaurentPoly(
            self.ring,
            {tuple(x + y for x, y in zip(e, exps)): c for e, c in self.coeffs.items()},
        )

    def monomial_content(self) -> tuple:
        """Componentwise minimum of the support exponents."""
        if not self.coeffs:
            raise ValueError("zero polynomial has no content")
        its = iter(self.coeffs)
        m = list(next(its))
        for e in its:
            for i, x in enumerate(e):
                if x < m[i]:
                    m[i] = x
        return tuple(m)

    def content_unit(self) -> "LaurentPoly":
        """The scalar-times-monomial content: lex-least term after the monomial shift."""
        m = self.monomial_content()
        e0 = min(self.coeffs)
        c = self.coeffs[e0]
        return LaurentPoly(self.ring, {m: c})

    def divexact(self, g: "LaurentPoly") -> "LaurentPoly":
        """Exact division in the Laurent ring; raises ExactDivisionError otherwise."""
        g = self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return self.ring.zero
        if g.is_term():
            return self * g.term_inverse()
        # Shift both to honest polynomials; quotient exponents stay nonnegative
        # because per-variable valuations are additive over a domain.
        mf = self.monomial_content()
        mg = g.monomial_content()
        r = dict(self.shift(tuple(-x for x in mf)).coeffs)
        gg = g.shift(tuple(-x for x in mg)).coeffs
        eg = max(gg)
        cg = gg[eg]
        q: dict = {}
        while r:
            er = max(r)
            et = tuple(x - y for x, y in zip(er, eg))
            if any(x < 0 for x in et):
                raise ExactDivisionError("division is not exact")
            ct = r[er] / cg
            q[et] = ct
            for e, c in gg.items():
                key = tuple(x + y for x, y in zip(e, et))
                acc = r.get(key)
                s = -(ct * c) if acc is None else acc - ct * c
                if s:
                    r[key] = s
                elif acc is not None:
                    del r[key]
        shift = tuple(x - y for x, y in zip(mf, mg))
        return LaurentPoly(self.ring, q).shift(shift)

    def divides(self, other: "LaurentPoly") -> bool:
        try:
            other.divexact(self)
            return True
        except ExactDivisionError:
            return False

    # -- one-variable dense interface ----------------------------------------

    def to_dense1(self):
        """(valuation, coefficient tuple) for a one-variable polynomial."""
        if self.ring.nvars != 1:
            raise ValueError("dense form requires exactly one variable")
        if not self.coeffs:
            return 0, ()
        v = min(e[0] for e in self.coeffs)
        top = max(e[0] for e in self.coeffs)
        z = self.ring.field.zero
        out = [z] * (top - v + 1)
        for e, c in self.coeffs.items():
            out[e[0] - v] = c
        return v, tuple(out)

    def sort_key(self):
        f = self.ring.field
        return tuple(sorted((e, f.key(c)) for e, c in self.coeffs.items()))

    def __str__(self):
        return poly_str(self)

    def __repr__(self):
        return f"<{poly_str(self)}>"


def from_dense1(ring: LaurentRing, coeffs, shift: int = 0) -> LaurentPoly:
    if ring.nvars != 1:
        raise ValueError("dense form requires exactly one variable")
    return LaurentPoly(ring, {(i + shift,): c for i, c in enumerate(coeffs) if c})


def poly_str(f: LaurentPoly) -> str:
    """Canonical rendering: terms in ascending lex order on exponent vectors.

    The output re-parses to the same polynomial under the io grammar.
    """
    if not f.coeffs:
        return "0"
    field = f.ring.field
    names = f.ring.names
    parts = []
    for e in sorted(f.coeffs):
        c = f.coeffs[e]
        mono = "*".join(
            nm if x == 1 else f"{nm}^{x}" for nm, x in zip(names, e) if x != 0
        )
        cs = field.format(c)
        neg = cs.startswith("-")
        body = cs[1:] if neg else cs
        if mono:
            text = mono if body == "1" else f"{body}*{mono}"
        else:
            text = body
        if not parts:
            parts.append(f"-{text}" if neg else text)
        else:
            parts.append(f"- {text}" if neg else f"+ {text}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Novikov directions


@dataclass(frozen=True)
class Direction:
    """Position ``index`` (1-based) in a variable ordering, plus a sign.

    Selects the ring A_j = R_{j-1}((x_j^{sign}))[x_{j+1}^{\\pm}, ..., x_n^{\\pm}]
    where x_1..x_n run through ``ordering`` (identity when None): the variables
    before ``index`` are inner coefficients, the one at ``index`` is the series
    variable, the rest stay Laurent.
    """

    index: int
    sign: int
    ordering: tuple | None = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.index < 1:
            raise ValueError("direction index must be >= 1")
        if self.ordering is not None:
            object.__setattr__(self, "ordering", tuple(self.ordering))

    def check(self, nvars: int):
        if self.index > nvars:
            raise ValueError(f"direction index {self.index} exceeds {nvars} variables")
        if self.ordering is not None and sorted(self.ordering) != list(range(1, nvars + 1)):
            raise ValueError("ordering is not a permutation of the variables")

    def order(self, nvars: int) -> tuple:
        return self.ordering if self.ordering is not None else tuple(range(1, nvars + 1))

    def series_var(self, nvars: int) -> int:
        return self.order(nvars)[self.index - 1]

    def inner_vars(self, nvars: int) -> tuple:
        return self.order(nvars)[: self.index - 1]

    def outer_vars(self, nvars: int) -> tuple:
        return self.order(nvars)[self.index:]

    def describe(self, ring: LaurentRing) -> str:
        sv = ring.names[self.series_var(ring.nvars) - 1]
        sgn = "+" if self.sign > 0 else "-"
        if self.ordering is not None and self.ordering != tuple(range(1, ring.nvars + 1)):
            return f"var={sv} sign={sgn} order={','.join(str(v) for v in self.ordering)}"
        return f"var={sv} sign={sgn}"


def is_direction_unit(f: LaurentPoly, d: Direction) -> bool:
    """Is f invertible in R_{j-1}((x_j^{sign}))[outer^{\\pm}]?

    Criterion: f != 0, a single monomial in the outer variables, and the
    extreme x_j-coefficient (lowest for +, highest for -) is a single term.
    """
    n = f.ring.nvars
    d.check(n)
    if not f.coeffs:
        return False
    sv = d.series_var(n) - 1
    outer = [v - 1 for v in d.outer_vars(n)]
    if outer:
        seen = None
        for e in f.coeffs:
            o = tuple(e[i] for i in outer)
            if seen is None:
                seen = o
            elif o != seen:
                return False
    ks = [e[sv] for e in f.coeffs]
    k0 = min(ks) if d.sign > 0 else max(ks)
    return sum(1 for e in f.coeffs if e[sv] == k0) == 1


# ---------------------------------------------------------------------------
# exact localization at direction-units


class Localized:
    """Exact fraction num / prod(den); den is a tuple of direction-units.

    Denominators are kept factored (products of pivots blow up when
    expanded); in the one-variable case fractions are gcd-reduced instead,
    which keeps certificate entries small.  Use ``make_localized`` or ring
    coercion to construct canonical values.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: tuple = ()):
        self.num = num
        self.den = den

    @property
    def ring(self):
        return self.num.ring

    def is_zero(self):
        return not self.num.coeffs

    def __bool__(self):
        return bool(self.num.coeffs)

    def den_poly(self) -> LaurentPoly:
        out = self.num.ring.one
        for f in self.den:
            out = out * f
        return out

    def __add__(self, other):
        if not isinstance(other, Localized):
            return NotImplemented
        common, sa, sb = _split_common(self.den, other.den)
        num = self.num * _product(self.ring, sb) + other.num * _product(self.ring, sa)
        return make_localized(num, common + sa + sb)

    def __sub__(self, other):
        if not isinstance(other, Localized):
            return NotImplemented
        common, sa, sb = _split_common(self.den, other.den)
        num = self.num * _product(self.ring, sb) - other.num * _product(self.ring, sa)
        return make_localized(num, common + sa + sb)

    def __neg__(self):
        return Localized(-self.num, self.den)

    def __mul__(self, other):
        if not isinstance(other, Localized):
            return NotImplemented
        num = self.num * other.num
        return make_localized(num, self.den + other.den)

    def __eq__(self, other):
        if not isinstance(other, Localized):
            return NotImplemented
        if self.num.ring != other.num.ring:
            return False
        _, sa, sb = _split_common(self.den, other.den)
        return self.num * _product(self.ring, sb) == other.num * _product(self.ring, sa)

    def __hash__(self):
        raise TypeError("Localized values are not hashable")

    def inverse(self, d: Direction) -> "Localized":
        """Invert; the numerator must be a direction-unit for d."""
        if not is_direction_unit(self.num, d):
            raise LocalizationError(f"{self.num} is not a unit for {d}")
        return make_localized(self.den_poly(), (self.num,))

    def __str__(self):
        if not self.den:
            return poly_str(self.num)
        return f"{poly_str(self.num)} / [{'; '.join(poly_str(f) for f in self.den)}]"

    def __repr__(self):
        return f"<{self}>"


def _product(ring: LaurentRing, factors) -> LaurentPoly:
    out = ring.one
    for f in factors:
        out = out * f
    return out


def _split_common(da: tuple, db: tuple):
    """Multiset intersection of two factor lists (by polynomial equality)."""
    rb = list(db)
    common = []
    sa = []
    for f in da:
        for i, g in enumerate(rb):
            if f == g:
                common.append(f)
                del rb[i]
                break
        else:
            sa.append(f)
    return tuple(common), tuple(sa), tuple(rb)


def make_localized(num: LaurentPoly, den=()) -> Localized:
    """Canonicalize: strip unit content from factors, cancel trivial matches."""
    ring = num.ring
    if not num.coeffs:
        return Localized(ring.zero, ())
    factors = []
    for f in den:
        if f.is_zero():
            raise ZeroDivisionError("zero denominator factor")
        u = f.content_unit()
        num = num * u.term_inverse()
        g = f * u.term_inverse() if not f.is_term() else ring.one
        if g == ring.one:
            continue
        # exact-match cancellation against the numerator (cheap, common case)
        if num == g:
            num = ring.one
            continue
        if num == -g:
            num = -ring.one
            continue
        factors.append(g)
    if ring.nvars == 1 and factors:
        field = ring.field
        dv, dden = _product(ring, factors).to_dense1()
        nv, dnum = num.to_dense1()
        g = pgcd(field, dnum, dden)
        if pdeg(g) > 0:
            dnum = pdivmod(field, dnum, g)[0]
            dden = pdivmod(field, dden, g)[0]
        lead = dden[-1]
        if lead != field.one:
            dnum = tuple(c / lead for c in dnum)
            dden = tuple(c / lead for c in dden)
        num = from_dense1(ring, dnum, shift=nv - dv)
        if pdeg(dden) == 0:
            return Localized(num, ())
        return Localized(num, (from_dense1(ring, dden),))
    factors.sort(key=LaurentPoly.sort_key)
    return Localized(num, tuple(factors))


class LocalizedRing:
    """Entry context for matrices over the localization at one direction."""

    __slots__ = ("base", "direction", "zero", "one")

    def __init__(self, base: LaurentRing, direction: Direction):
        direction.check(base.nvars)
        self.base = base
        self.direction = direction
        self.zero = Localized(base.zero, ())
        self.one = Localized(base.one, ())

    @property
    def field(self):
        return self.base.field

    @property
    def nvars(self):
        return self.base.nvars

    def of(self, value) -> Localized:
        if isinstance(value, Localized):
            if value.num.ring != self.base:
                raise ValueError("value from a different ring")
            return value
        if isinstance(value, LaurentPoly):
            return Localized(self.base.of(value), ())
        return Localized(self.base.from_scalar(value), ())

    def __eq__(self, other):
        return (
            isinstance(other, LocalizedRing)
            and other.base == self.base
            and other.direction == self.direction
        )

    def __hash__(self):
        return hash((self.base, self.direction))

    def __repr__(self):
        return f"LocalizedRing({self.base!r}, {self.direction})"


# ---------------------------------------------------------------------------
# truncated Novikov series (display / diagnostics only)


@dataclass(frozen=True)
class TruncatedSeries:
    """Slices of a Novikov series through x_j-order N; never used in decisions."""

    ring: LaurentRing
    direction: Direction
    order: int
    slices: tuple  # sorted tuple of (degree, LaurentPoly without the series variable)
    truncated: bool = True

    def slice_dict(self) -> dict:
        return dict(self.slices)

    def as_poly(self) -> LaurentPoly:
        j = self.direction.series_var(self.ring.nvars)
        out = self.ring.zero
        for k, c in self.slices:
            out = out + c.shift(tuple(k if i == j - 1 else 0 for i in range(self.ring.nvars)))
        return out

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if other.direction != self.direction:
            raise ValueError("series in different directions")
        order = min(self.order, other.order)
        j = self.direction.series_var(self.ring.nvars)
        prod = self.as_poly() * other.as_poly()
        return _truncate(prod, self.direction, order)

    def __str__(self):
        j = self.direction.series_var(self.ring.nvars)
        name = self.ring.names[j - 1]
        parts = []
        for k, c in self.slices:
            mono = "1" if k == 0 else (name if k == 1 else f"{name}^{k}")
            parts.append(f"({poly_str(c)})*{mono}")
        tail = f"O({name}^{self.order + 1})" if self.direction.sign > 0 else f"O({name}^{-self.order - 1})"
        return " + ".join(parts + [tail]) if parts else tail


def _truncate(f: LaurentPoly, d: Direction, order: int) -> TruncatedSeries:
    j = d.series_var(f.ring.nvars)
    keep = {}
    for k, c in f.slices(j).items():
        if (d.sign > 0 and k <= order) or (d.sign < 0 and k >= -order):
            keep[k] = c
    items = tuple(sorted(keep.items(), key=lambda kv: kv[0] * d.sign))
    return TruncatedSeries(f.ring, d, order, items)


def novikov_expand(a: Localized, d: Direction, order: int) -> TruncatedSeries:
    """Expand num/prod(den) as a Laurent series in the direction's variable.

    For sign + the result lists slices from the valuation up to ``order``;
    for sign - down to ``-order``.  Multiplying the series back against the
    denominator recovers the numerator through the common valid order.
    """
    ring = a.ring
    d.check(ring.nvars)
    if order < 0:
        raise ValueError("order must be nonnegative")
    j = d.series_var(ring.nvars)
    result = a.num
    for f in a.den:
        result = _series_divide(result, f, d, j, order)
    return _truncate(result, d, order)


def _series_divide(f: LaurentPoly, g: LaurentPoly, d: Direction, j: int, order: int) -> LaurentPoly:
    """f * g^{-1} as a polynomial carrying all slices through the order bound."""
    if not is_direction_unit(g, d):
        raise LocalizationError(f"{g} is not a unit for {d}")
    ring = f.ring
    sl = g.slices(j)
    k0 = min(sl) if d.sign > 0 else max(sl)
    lead = sl[k0]  # single term by the unit criterion
    xk0 = ring.monomial(tuple(k0 if i == j - 1 else 0 for i in range(ring.nvars)))
    t = (lead * xk0).term_inverse()
    h = g * t - ring.one  # sign +: valuation >= 1; sign -: top degree <= -1
    if f.is_zero() or h.is_zero():
        return f * t
    # f/g = f * t * sum (-h)^i; each h power pushes slices past the truncation
    # bound, so dropping out-of-range slices makes the loop terminate.
    vt = t.valuation(j)  # single term
    acc = f
    powh = _drop_far_slices(f, d, j, order, vt)
    while powh.coeffs:
        powh = _drop_far_slices(powh * -h, d, j, order, vt)
        acc = acc + powh
    return _drop_far_slices(acc * t, d, j, order, 0)


def _drop_far_slices(f: LaurentPoly, d: Direction, j: int, order: int, shift: int) -> LaurentPoly:
    """Drop slices that cannot contribute within the truncation order."""
    bound = order - shift if d.sign > 0 else -(order) - shift
    out = {}
    for e, c in f.coeffs.items():
        k = e[j - 1]
        if (d.sign > 0 and k <= bound) or (d.sign < 0 and k >= bound):
            out[e] = c
    return LaurentPoly(f.ring, out)
