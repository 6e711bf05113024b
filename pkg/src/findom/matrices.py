"""Dense matrices over a ring-like entry context.

Entries are any values supporting +, -, * and bool (LaurentPoly, Localized,
or field scalars wrapped as 0-variable polynomials).  The ``ring`` only
supplies ``zero``/``one``/``of``.  Matrices are treated as immutable; all
operations return fresh objects.  Differentials act on coordinate columns
throughout the package.
"""

from __future__ import annotations

__all__ = ["Matrix"]


class Matrix:
    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring, rows, nrows=None, ncols=None):
        self.ring = ring
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows) if nrows is None else nrows
        self.ncols = (len(self.rows[0]) if self.rows else 0) if ncols is None else ncols
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix rows")
        if len(self.rows) != self.nrows:
            raise ValueError("row count mismatch")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, ring, nrows: int, ncols: int) -> "Matrix":
        z = ring.zero
        return cls(ring, [[z] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, ring, n: int) -> "Matrix":
        z, o = ring.zero, ring.one
        return cls(ring, [[o if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_rows(cls, ring, rows) -> "Matrix":
        return cls(ring, [[ring.of(e) for e in r] for r in rows])

    @classmethod
    def diagonal(cls, ring, entries) -> "Matrix":
        n = len(entries)
        m = cls.zeros(ring, n, n)
        for i, e in enumerate(entries):
            m.rows[i][i] = e
        return m

    # -- access ---------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def with_entry(self, i: int, j: int, value) -> "Matrix":
        rows = [list(r) for r in self.rows]
        rows[i][j] = value
        return Matrix(self.ring, rows, self.nrows, self.ncols)

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def row(self, i: int) -> list:
        return list(self.rows[i])

    def submatrix(self, rows, cols) -> "Matrix":
        return Matrix(
            self.ring,
            [[self.rows[i][j] for j in cols] for i in rows],
            len(rows),
            len(cols),
        )

    # -- algebra ---------------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        self._shape_match(other)
        return Matrix(
            self.ring,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            self.nrows,
            self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._shape_match(other)
        return Matrix(
            self.ring,
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            self.nrows,
            self.ncols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix(self.ring, [[-a for a in r] for r in self.rows], self.nrows, self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if other.nrows != self.ncols:
            raise ValueError(
                f"dimension mismatch: ({self.nrows}x{self.ncols}) @ ({other.nrows}x{other.ncols})"
            )
        z = self.ring.zero
        out = []
        ocols = other.ncols
        for ra in self.rows:
            row = [z] * ocols
            for k, a in enumerate(ra):
                if not a:
                    continue
                rb = other.rows[k]
                for j in range(ocols):
                    b = rb[j]
                    if b:
                        row[j] = row[j] + a * b
            out.append(row)
        return Matrix(self.ring, out, self.nrows, ocols)

    def scale(self, c) -> "Matrix":
        return Matrix(self.ring, [[c * a for a in r] for r in self.rows], self.nrows, self.ncols)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.ring,
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.ncols,
            self.nrows,
        )

    def map_entries(self, fn, ring=None) -> "Matrix":
        return Matrix(
            ring if ring is not None else self.ring,
            [[fn(a) for a in r] for r in self.rows],
            self.nrows,
            self.ncols,
        )

    def kron(self, other: "Matrix") -> "Matrix":
        out = []
        for ra in self.rows:
            for rb in other.rows:
                out.append([a * b for a in ra for b in rb])
        return Matrix(self.ring, out, self.nrows * other.nrows, self.ncols * other.ncols)

    # -- predicates -------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(not a for r in self.rows for a in r)

    def first_nonzero(self):
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if a:
                    return i, j, a
        return None

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.nrows == other.nrows
            and self.ncols == other.ncols
            and all(a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))
        )

    def __hash__(self):
        raise TypeError("matrices are not hashable")

    # -- block assembly -----------------------------------------------------------

    @classmethod
    def block(cls, ring, grid) -> "Matrix":
        """Assemble from a grid of matrices (rows of blocks with matching shapes)."""
        rows = []
        for brow in grid:
            if not brow:
                continue
            height = brow[0].nrows
            for b in brow:
                if b.nrows != height:
                    raise ValueError("block heights differ within a row")
            for i in range(height):
                rows.append([a for b in brow for a in b.rows[i]])
        ncols = sum(b.ncols for b in grid[0]) if grid and grid[0] else 0
        return cls(ring, rows, len(rows), ncols)

    def __repr__(self):
        if self.nrows == 0 or self.ncols == 0:
            return f"<Matrix {self.nrows}x{self.ncols}>"
        body = "; ".join(", ".join(str(a) for a in r) for r in self.rows)
        return f"<Matrix {self.nrows}x{self.ncols} {{ {body} }}>"

    def _shape_match(self, other: "Matrix"):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError(
                f"dimension mismatch: {self.nrows}x{self.ncols} vs {other.nrows}x{other.ncols}"
            )
