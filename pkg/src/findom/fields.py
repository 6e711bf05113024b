"""Exact coefficient fields: rationals, prime fields, univariate rational functions.

Scalars are immutable canonical values carrying the usual operators; the
field objects only construct, format and order them.  All arithmetic in the
package is exact -- there is no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "Field",
    "QQ",
    "PrimeField",
    "FpElement",
    "RationalFunction",
    "RationalFunctionField",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Interface shared by the coefficient fields."""

    name: str
    zero: object
    one: object

    def of(self, value):
        """Coerce an int, Fraction or scalar of this field into a scalar."""
        raise NotImplementedError

    def format(self, c) -> str:
        raise NotImplementedError

    def rand(self, rng, nonzero: bool = False):
        """Deterministic small random scalar, for test generators."""
        raise NotImplementedError

    def key(self, c):
        """Total-order key, used only for canonical sorting in output."""
        raise NotImplementedError


class RationalField(Field):
    name = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def of(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} into Q")

    def format(self, c) -> str:
        return str(c)

    def rand(self, rng, nonzero: bool = False):
        while True:
            c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            if c or not nonzero:
                return c

    def key(self, c):
        return (c.numerator, c.denominator)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class FpElement:
    """Residue in F_p, canonical value in 0..p-1."""

    __slots__ = ("val", "p")

    def __init__(self, val: int, p: int):
        self.val = val % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElement):
            return other.val
        if isinstance(other, int):
            return other % self.p
        return None

    def __add__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FpElement(self.val + v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FpElement(self.val - v, self.p)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FpElement(v - self.val, self.p)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FpElement(self.val * v, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        if v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElement(self.val * pow(v, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        if self.val == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElement(v * pow(self.val, self.p - 2, self.p), self.p)

    def __pow__(self, n: int):
        if n >= 0:
            return FpElement(pow(self.val, n, self.p), self.p)
        if self.val == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return FpElement(pow(self.val, -n * (self.p - 2) % (self.p - 1), self.p), self.p)

    def __neg__(self):
        return FpElement(-self.val, self.p)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.val == other.val
        if isinstance(other, int):
            return self.val == other % self.p
        return NotImplemented

    def __bool__(self):
        return self.val != 0

    def __hash__(self):
        return hash((self.val, self.p))

    def __repr__(self):
        return str(self.val)


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"Fp {p}"
        self.zero = FpElement(0, p)
        self.one = FpElement(1, p)

    def of(self, value):
        if isinstance(value, FpElement):
            if value.p != self.p:
                raise TypeError("wrong characteristic")
            return value
        if isinstance(value, int):
            return FpElement(value, self.p)
        if isinstance(value, Fraction):
            return FpElement(value.numerator, self.p) / FpElement(value.denominator, self.p)
        raise TypeError(f"cannot coerce {value!r} into F_{self.p}")

    def format(self, c) -> str:
        return str(c.val)

    def rand(self, rng, nonzero: bool = False):
        lo = 1 if nonzero else 0
        return FpElement(rng.randrange(lo, self.p), self.p)

    def key(self, c):
        return (c.val,)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


# ---------------------------------------------------------------------------
# dense univariate polynomial helpers (tuples of scalars, index = degree)

def ptrim(cs) -> tuple:
    cs = list(cs)
    while cs and not cs[-1]:
        cs.pop()
    return tuple(cs)


def pdeg(a) -> int:
    return len(a) - 1


def padd(field, a, b):
    z = field.zero
    n = max(len(a), len(b))
    return ptrim([(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n)])


def pneg(a):
    return tuple(-c for c in a)


def psub(field, a, b):
    return padd(field, a, pneg(b))


def pmul(field, a, b):
    if not a or not b:
        return ()
    z = field.zero
    out = [z] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return ptrim(out)


def pdivmod(field, a, b):
    """Polynomial division a = q*b + r with deg r < deg b; b must be nonzero."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [field.zero] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(r) >= len(b) and ptrim(r):
        r = list(ptrim(r))
        if len(r) < len(b):
            break
        c = r[-1] / lead
        d = len(r) - len(b)
        q[d] = c
        for i, bi in enumerate(b):
            r[d + i] = r[d + i] - c * bi
    return ptrim(q), ptrim(r)


def pmonic(field, a):
    if not a:
        return a
    lead = a[-1]
    return tuple(c / lead for c in a)


def pgcd(field, a, b):
    """Monic gcd under the Euclidean algorithm."""
    while b:
        a, b = b, pdivmod(field, a, b)[1]
    return pmonic(field, a)


def pstr(field, a, var: str) -> str:
    if not a:
        return "0"
    parts = []
    for d in range(len(a) - 1, -1, -1):
        c = a[d]
        if not c:
            continue
        cs = field.format(c)
        if d == 0:
            parts.append(cs)
        elif d == 1:
            parts.append(f"{cs}*{var}" if cs != "1" else var)
        else:
            parts.append(f"{cs}*{var}^{d}" if cs != "1" else f"{var}^{d}")
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# univariate rational functions F(z)


class RationalFunction:
    """Canonical fraction of dense univariate polynomials: den monic, gcd 1."""

    __slots__ = ("num", "den", "field")

    def __init__(self, num, den, field, _canonical=False):
        if _canonical:
            self.num, self.den, self.field = num, den, field
            return
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den, self.field = (), (field.one,), field
            return
        g = pgcd(field, num, den)
        if pdeg(g) > 0:
            num = pdivmod(field, num, g)[0]
            den = pdivmod(field, den, g)[0]
        lead = den[-1]
        if lead != field.one:
            num = tuple(c / lead for c in num)
            den = tuple(c / lead for c in den)
        self.num, self.den, self.field = num, den, field

    def _rf(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, int):
            f = self.field
            return RationalFunction((f.of(other),) if other else (), (f.one,), f, _canonical=True)
        return None

    def __add__(self, other):
        o = self._rf(other)
        if o is None:
            return NotImplemented
        f = self.field
        num = padd(f, pmul(f, self.num, o.den), pmul(f, o.num, self.den))
        return RationalFunction(num, pmul(f, self.den, o.den), f)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._rf(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._rf(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._rf(other)
        if o is None:
            return NotImplemented
        f = self.field
        return RationalFunction(pmul(f, self.num, o.num), pmul(f, self.den, o.den), f)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._rf(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        f = self.field
        return RationalFunction(pmul(f, self.num, o.den), pmul(f, self.den, o.num), f)

    def __rtruediv__(self, other):
        o = self._rf(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        f = self.field
        base = self if n >= 0 else RationalFunction(self.den, self.num, f)
        out = RationalFunction((f.one,), (f.one,), f, _canonical=True)
        for _ in range(abs(n)):
            out = out * base
        return out

    def __neg__(self):
        return RationalFunction(pneg(self.num), self.den, self.field, _canonical=True)

    def __eq__(self, other):
        o = self._rf(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __bool__(self):
        return bool(self.num)

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"({pstr(self.field, self.num, 'z')})/({pstr(self.field, self.den, 'z')})"


class RationalFunctionField(Field):
    """The field F(z) of univariate rational functions over an exact field F."""

    def __init__(self, base: Field, var: str = "z"):
        self.base = base
        self.var = var
        self.name = f"{base.name}({var})"
        self.zero = RationalFunction((), (base.one,), base, _canonical=True)
        self.one = RationalFunction((base.one,), (base.one,), base, _canonical=True)

    @property
    def gen(self):
        return RationalFunction((self.base.zero, self.base.one), (self.base.one,), self.base, _canonical=True)

    def of(self, value):
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, (int, Fraction)):
            c = self.base.of(value)
            return RationalFunction((c,) if c else (), (self.base.one,), self.base, _canonical=True)
        return self.of_base(value)

    def of_base(self, c):
        c = self.base.of(c)
        return RationalFunction((c,) if c else (), (self.base.one,), self.base, _canonical=True)

    def format(self, c) -> str:
        num = pstr(self.base, c.num, self.var)
        if c.den == (self.base.one,):
            return f"({num})"
        return f"({num})/({pstr(self.base, c.den, self.var)})"

    def rand(self, rng, nonzero: bool = False):
        while True:
            num = ptrim([self.base.rand(rng) for _ in range(rng.randint(1, 2))])
            if num or not nonzero:
                break
        den = ()
        while not den:
            den = ptrim([self.base.rand(rng) for _ in range(rng.randint(1, 2))])
        return RationalFunction(num, den, self.base)

    def key(self, c):
        return (
            tuple(self.base.key(x) for x in c.num),
            tuple(self.base.key(x) for x in c.den),
        )

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunctionField)
            and other.base == self.base
            and other.var == self.var
        )

    def __hash__(self):
        return hash(("ratfunc", self.base, self.var))

    def __repr__(self):
        return f"RationalFunctionField({self.base!r}, {self.var!r})"
