"""Bounded based chain complexes, chain maps, homotopies, twofold complexes.

Conventions, fixed once and enforced everywhere:

* differentials act on coordinate columns: ``d_k`` has shape
  ``rank(k-1) x rank(k)``, columns indexed by the degree-k basis;
* the k-th suspension shifts degrees by k and multiplies every
  differential by (-1)^k;
* a twofold complex has commuting differentials; totalization inserts the
  sign (-1)^p on the vertical differential and orders the summands of
  ``Tot_n = sum over p+q=n`` by decreasing p.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrices import Matrix
from .rings import LaurentPoly, LaurentRing

__all__ = [
    "BasedComplex",
    "ChainMap",
    "ChainHomotopy",
    "TwofoldComplex",
    "ValidationReport",
    "validate",
    "suspend",
    "totalize",
    "direct_sum",
    "is_chain_map",
    "is_homotopy",
    "base_change",
    "permute_basis",
    "identity_map",
    "zero_map",
    "poly_map",
]


class BasedComplex:
    """Bounded complex of based free modules given by differential matrices."""

    __slots__ = ("ring", "lo", "hi", "_ranks", "_diffs")

    def __init__(self, ring, lo: int, ranks, diffs: dict):
        self.ring = ring
        self.lo = lo
        self.hi = lo + len(ranks) - 1 if ranks else lo - 1
        self._ranks = {lo + i: r for i, r in enumerate(ranks)}
        self._diffs = {}
        for k, m in diffs.items():
            if not (self.lo < k <= self.hi):
                raise ValueError(f"differential d_{k} outside degree range")
            if m.nrows != self.rank(k - 1) or m.ncols != self.rank(k):
                raise ValueError(
                    f"d_{k} has shape {m.nrows}x{m.ncols}, expected "
                    f"{self.rank(k - 1)}x{self.rank(k)}"
                )
            self._diffs[k] = m

    @classmethod
    def zero(cls, ring) -> "BasedComplex":
        return cls(ring, 0, [], {})

    @classmethod
    def single(cls, ring, degree: int = 0, rank: int = 1) -> "BasedComplex":
        return cls(ring, degree, [rank], {})

    def rank(self, k: int) -> int:
        return self._ranks.get(k, 0)

    def diff(self, k: int) -> Matrix:
        m = self._diffs.get(k)
        if m is None:
            m = Matrix.zeros(self.ring, self.rank(k - 1), self.rank(k))
        return m

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def total_rank(self) -> int:
        return sum(self._ranks.values())

    def is_zero(self) -> bool:
        return self.total_rank() == 0

    def ranks(self) -> dict:
        return dict(self._ranks)

    def __eq__(self, other):
        if not isinstance(other, BasedComplex):
            return NotImplemented
        if self.ring != other.ring:
            return False
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        for k in range(lo, hi + 1):
            if self.rank(k) != other.rank(k):
                return False
            if self.diff(k) != other.diff(k):
                return False
        return True

    def __hash__(self):
        raise TypeError("complexes are not hashable")

    def __repr__(self):
        rks = ",".join(str(self.rank(k)) for k in self.degrees())
        return f"<BasedComplex degrees {self.lo}..{self.hi} ranks ({rks})>"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    degree: int | None = None
    row: int | None = None
    col: int | None = None
    entry: object = None

    def __bool__(self):
        return self.ok

    def message(self) -> str:
        if self.ok:
            return "ok"
        return (
            f"d_{self.degree} o d_{self.degree + 1} has nonzero entry "
            f"({self.row},{self.col}) = {self.entry}"
        )


def validate(C: BasedComplex) -> ValidationReport:
    """Check d o d = 0 in every degree; violations are data, not errors."""
    for k in range(C.lo + 1, C.hi):
        comp = C.diff(k) @ C.diff(k + 1)
        hit = comp.first_nonzero()
        if hit is not None:
            i, j, e = hit
            return ValidationReport(False, k, i, j, e)
    return ValidationReport(True)


def suspend(C: BasedComplex, k: int) -> BasedComplex:
    """C[k] with C[k]_l = C_{l-k} and differentials scaled by (-1)^k."""
    ranks = [C.rank(d) for d in C.degrees()]
    diffs = {}
    for d in range(C.lo + 1, C.hi + 1):
        m = C.diff(d)
        diffs[d + k] = -m if k % 2 else m
    return BasedComplex(C.ring, C.lo + k, ranks, diffs)


def direct_sum(C: BasedComplex, D: BasedComplex) -> BasedComplex:
    if C.ring != D.ring:
        raise ValueError("direct sum over different rings")
    if C.is_zero():
        return D
    if D.is_zero():
        return C
    lo = min(C.lo, D.lo)
    hi = max(C.hi, D.hi)
    ranks = [C.rank(k) + D.rank(k) for k in range(lo, hi + 1)]
    diffs = {}
    for k in range(lo + 1, hi + 1):
        a, b = C.diff(k), D.diff(k)
        diffs[k] = Matrix.block(
            C.ring,
            [
                [a, Matrix.zeros(C.ring, a.nrows, b.ncols)],
                [Matrix.zeros(C.ring, b.nrows, a.ncols), b],
            ],
        )
    return BasedComplex(C.ring, lo, ranks, diffs)


def permute_basis(C: BasedComplex, perms: dict) -> BasedComplex:
    """Relabel the basis in selected degrees; perms[k] sends new index -> old."""
    diffs = {}
    for k in range(C.lo + 1, C.hi + 1):
        m = C.diff(k)
        rows = perms.get(k - 1, list(range(m.nrows)))
        cols = perms.get(k, list(range(m.ncols)))
        diffs[k] = m.submatrix(rows, cols)
    return BasedComplex(C.ring, C.lo, [C.rank(k) for k in C.degrees()], diffs)


class ChainMap:
    """Degree-0 map of complexes; f_k has shape target.rank(k) x source.rank(k)."""

    __slots__ = ("source", "target", "_maps")

    def __init__(self, source: BasedComplex, target: BasedComplex, maps: dict):
        if source.ring != target.ring:
            raise ValueError("chain map between different rings")
        self.source = source
        self.target = target
        self._maps = {}
        for k, m in maps.items():
            if m.nrows != target.rank(k) or m.ncols != source.rank(k):
                raise ValueError(
                    f"f_{k} has shape {m.nrows}x{m.ncols}, expected "
                    f"{target.rank(k)}x{source.rank(k)}"
                )
            if m.nrows and m.ncols:
                self._maps[k] = m

    def map(self, k: int) -> Matrix:
        m = self._maps.get(k)
        if m is None:
            m = Matrix.zeros(self.source.ring, self.target.rank(k), self.source.rank(k))
        return m

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition shape mismatch")
        lo = min(self.source.lo, other.source.lo)
        hi = max(self.source.hi, other.source.hi)
        return ChainMap(
            other.source,
            self.target,
            {k: self.map(k) @ other.map(k) for k in range(lo, hi + 1)},
        )

    def __add__(self, other: "ChainMap") -> "ChainMap":
        lo = min(self.source.lo, other.source.lo)
        hi = max(self.source.hi, other.source.hi)
        return ChainMap(
            self.source,
            self.target,
            {k: self.map(k) + other.map(k) for k in range(lo, hi + 1)},
        )

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        lo = min(self.source.lo, other.source.lo)
        hi = max(self.source.hi, other.source.hi)
        return ChainMap(
            self.source,
            self.target,
            {k: self.map(k) - other.map(k) for k in range(lo, hi + 1)},
        )

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        lo = min(self.source.lo, other.source.lo)
        hi = max(self.source.hi, other.source.hi)
        return (
            self.source == other.source
            and self.target == other.target
            and all(self.map(k) == other.map(k) for k in range(lo, hi + 1))
        )

    def __hash__(self):
        raise TypeError("chain maps are not hashable")

    def __repr__(self):
        return f"<ChainMap {self.source!r} -> {self.target!r}>"


def identity_map(C: BasedComplex) -> ChainMap:
    return ChainMap(C, C, {k: Matrix.identity(C.ring, C.rank(k)) for k in C.degrees()})


def zero_map(C: BasedComplex, D: BasedComplex) -> ChainMap:
    return ChainMap(C, D, {})


def poly_map(C: BasedComplex, a) -> ChainMap:
    """Multiplication by a ring element, as a chain self-map."""
    a = C.ring.of(a)
    return ChainMap(
        C, C, {k: Matrix.identity(C.ring, C.rank(k)).scale(a) for k in C.degrees()}
    )


def is_chain_map(f: ChainMap) -> bool:
    """Exact commutation f d = d f in every degree."""
    lo = min(f.source.lo, f.target.lo)
    hi = max(f.source.hi, f.target.hi)
    for k in range(lo + 1, hi + 1):
        if f.map(k - 1) @ f.source.diff(k) != f.target.diff(k) @ f.map(k):
            return False
    return True


class ChainHomotopy:
    """Degree +1 map A with dA + Ad = h - g for chain maps h, g: C -> D."""

    __slots__ = ("h", "g", "_maps")

    def __init__(self, h: ChainMap, g: ChainMap, maps: dict):
        if h.source != g.source or h.target != g.target:
            raise ValueError("homotopy between maps with different ends")
        self.h = h
        self.g = g
        self._maps = {}
        for k, m in maps.items():
            if m.nrows != h.target.rank(k + 1) or m.ncols != h.source.rank(k):
                raise ValueError(f"A_{k} has wrong shape")
            if m.nrows and m.ncols:
                self._maps[k] = m

    def map(self, k: int) -> Matrix:
        m = self._maps.get(k)
        if m is None:
            m = Matrix.zeros(
                self.h.source.ring, self.h.target.rank(k + 1), self.h.source.rank(k)
            )
        return m

    def verify(self) -> bool:
        C, D = self.h.source, self.h.target
        lo = min(C.lo, D.lo) - 1
        hi = max(C.hi, D.hi) + 1
        for k in range(lo, hi + 1):
            lhs = D.diff(k + 1) @ self.map(k) + self.map(k - 1) @ C.diff(k)
            if lhs != self.h.map(k) - self.g.map(k):
                return False
        return True


def is_homotopy(A, h: ChainMap, g: ChainMap) -> bool:
    """Does dA + Ad = h - g hold exactly?  A may be a dict of matrices."""
    if not isinstance(A, ChainHomotopy):
        A = ChainHomotopy(h, g, A)
    elif A.h is not h or A.g is not g:
        A = ChainHomotopy(h, g, dict(A._maps))
    return A.verify()


class TwofoldComplex:
    """Commuting grid of based modules with horizontal and vertical differentials."""

    __slots__ = ("ring", "_ranks", "_dh", "_dv")

    def __init__(self, ring, ranks: dict, dh: dict, dv: dict):
        self.ring = ring
        self._ranks = {pq: r for pq, r in ranks.items() if r}
        self._dh = {}
        self._dv = {}
        for (p, q), m in dh.items():
            if m.nrows != self.rank(p - 1, q) or m.ncols != self.rank(p, q):
                raise ValueError(f"dh at ({p},{q}) has wrong shape")
            if m.nrows and m.ncols:
                self._dh[(p, q)] = m
        for (p, q), m in dv.items():
            if m.nrows != self.rank(p, q - 1) or m.ncols != self.rank(p, q):
                raise ValueError(f"dv at ({p},{q}) has wrong shape")
            if m.nrows and m.ncols:
                self._dv[(p, q)] = m

    def rank(self, p: int, q: int) -> int:
        return self._ranks.get((p, q), 0)

    def dh(self, p: int, q: int) -> Matrix:
        m = self._dh.get((p, q))
        if m is None:
            m = Matrix.zeros(self.ring, self.rank(p - 1, q), self.rank(p, q))
        return m

    def dv(self, p: int, q: int) -> Matrix:
        m = self._dv.get((p, q))
        if m is None:
            m = Matrix.zeros(self.ring, self.rank(p, q - 1), self.rank(p, q))
        return m

    def cells(self):
        return sorted(self._ranks.keys())

    def validate(self) -> bool:
        """dh^2 = 0, dv^2 = 0 and dh dv = dv dh, exactly."""
        for p, q in self.cells():
            if not (self.dh(p - 1, q) @ self.dh(p, q)).is_zero():
                return False
            if not (self.dv(p, q - 1) @ self.dv(p, q)).is_zero():
                return False
            if self.dh(p, q - 1) @ self.dv(p, q) != self.dv(p - 1, q) @ self.dh(p, q):
                return False
        return True


def totalize(D: TwofoldComplex) -> BasedComplex:
    """Total complex: Tot_n = sum of D_{p,q} over p+q=n, summands by decreasing p.

    The differential takes dh unchanged and (-1)^p dv on the column p blocks.
    """
    cells = D.cells()
    if not cells:
        return BasedComplex.zero(D.ring)
    degs = [p + q for p, q in cells]
    lo, hi = min(degs), max(degs)

    def layer(n):
        return sorted(
            [(p, q) for (p, q) in cells if p + q == n], key=lambda pq: -pq[0]
        )

    ranks = []
    offsets = {}
    for n in range(lo, hi + 1):
        off = 0
        for p, q in layer(n):
            offsets[(p, q)] = off
            off += D.rank(p, q)
        ranks.append(off)

    diffs = {}
    for n in range(lo + 1, hi + 1):
        m = Matrix.zeros(D.ring, ranks[n - 1 - lo], ranks[n - lo])
        for p, q in layer(n):
            co = offsets[(p, q)]
            h = D.dh(p, q)
            if (p - 1, q) in offsets and h.nrows:
                ro = offsets[(p - 1, q)]
                for i in range(h.nrows):
                    for j in range(h.ncols):
                        m.rows[ro + i][co + j] = h.rows[i][j]
            v = D.dv(p, q)
            if (p, q - 1) in offsets and v.nrows:
                ro = offsets[(p, q - 1)]
                neg = p % 2 == 1
                for i in range(v.nrows):
                    for j in range(v.ncols):
                        e = v.rows[i][j]
                        m.rows[ro + i][co + j] = -e if neg else e
        diffs[n] = m
    return BasedComplex(D.ring, lo, ranks, diffs)


def base_change(C: BasedComplex, target: LaurentRing, images, scalar_map=None) -> BasedComplex:
    """Entrywise substitution x_i -> images[i-1]; images must be units (single terms).

    ``scalar_map`` embeds coefficients when the target field differs.
    """
    images = list(images)
    if len(images) != C.ring.nvars:
        raise ValueError("one image per variable required")
    for im in images:
        if im.ring != target:
            raise ValueError("image lies in the wrong ring")
        if not im.is_term():
            raise ValueError(f"substitution image {im} is not a unit (single term)")
    if scalar_map is None:
        if C.ring.field != target.field:
            raise ValueError("scalar_map required when changing the coefficient field")
        scalar_map = lambda c: c

    cache = {}

    def convert(f: LaurentPoly) -> LaurentPoly:
        out = target.zero
        for e, c in f.coeffs.items():
            term = target.from_scalar(scalar_map(c))
            for i, x in enumerate(e):
                if x:
                    term = term * (images[i] ** x) if x > 0 else term * (
                        images[i].term_inverse() ** (-x)
                    )
            out = out + term
        return out

    diffs = {
        k: C.diff(k).map_entries(convert, target) for k in range(C.lo + 1, C.hi + 1)
    }
    return BasedComplex(target, C.lo, [C.rank(k) for k in C.degrees()], diffs)
