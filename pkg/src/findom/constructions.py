"""Cones, totalization identities, Gamma, algebraic mapping tori, stabilization.

The cone convention is forced by the totalization rule (source column p=1
carries -d_v):  Cone(f)_k = C_{k-1} (+) B_k with d(c, b) = (-dc, f(c) + db),
source summand listed first.  Everything here is tested against bit-exact
identities, not just up to quasi-isomorphism, wherever the underlying
statements are equalities of complexes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrices import Matrix
from .rings import LaurentPoly, LaurentRing
from .complexes import (
    BasedComplex,
    ChainHomotopy,
    ChainMap,
    direct_sum,
    identity_map,
    is_chain_map,
    poly_map,
    suspend,
)
from .homology import (
    QuasiIso,
    cone_complex,
    is_quasi_iso,
    rank_fraction_field,
    snf,
)

__all__ = [
    "cone",
    "NotInjectiveError",
    "CokernelNotFreeError",
    "ConeCokerReport",
    "cone_vs_coker",
    "DoubleConeReport",
    "double_cone",
    "gamma",
    "gamma_diagonal",
    "mapping_torus",
    "torus_map",
    "torus_multiplication",
    "torus_self_homotopy",
    "torus_homotopy_iso",
    "MatherReport",
    "mather",
    "AttachResult",
    "attach_elementary",
    "FiniteTensor",
    "ses_epsilon",
    "ses_shear",
    "ses_preimage",
    "SesReport",
    "ses_elements",
]


def cone(f: ChainMap) -> BasedComplex:
    """Mapping cone of f; the totalization of the two-column grid of f."""
    return cone_complex(f)


# ---------------------------------------------------------------------------
# cone versus cokernel (for split injections)


class NotInjectiveError(ValueError):
    pass


class CokernelNotFreeError(ValueError):
    """The image admits no complement spanned by unit pivots."""


def _split_pivots(M: Matrix):
    """Row-reduce M to unit columns using only single-term pivots.

    Returns (T, T_inv, pivot_rows) with T @ M having exactly one 1 in each
    column, sitting in the pivot rows; raises CokernelNotFreeError when no
    term pivot is available for some column.
    """
    ring = M.ring
    m, n = M.nrows, M.ncols
    work = [list(r) for r in M.rows]
    U = Matrix.identity(ring, m)
    Ui = Matrix.identity(ring, m)

    def row_add(i, k, q):
        wk, wi = work[k], work[i]
        for j in range(n):
            if wk[j]:
                wi[j] = wi[j] + q * wk[j]
        for r in U.rows:
            if r[i]:
                r[k] = r[k] - q * r[i]
        qk, qi = Ui.rows[k], Ui.rows[i]
        for j in range(m):
            if qk[j]:
                qi[j] = qi[j] + q * qk[j]

    def scale_row(i, u):
        inv = u.term_inverse()
        work[i] = [u * e for e in work[i]]
        for r in U.rows:
            r[i] = r[i] * inv
        Ui.rows[i] = [u * e for e in Ui.rows[i]]

    pivot_rows = []
    done_cols = set()
    free_rows = set(range(m))
    while len(done_cols) < n:
        found = None
        for i in sorted(free_rows):
            for j in range(n):
                if j in done_cols:
                    continue
                e = work[i][j]
                if e and e.is_term():
                    found = (i, j)
                    break
            if found:
                break
        if found is None:
            raise CokernelNotFreeError(
                "image has no unit-pivot complement; cokernel not representable as free"
            )
        i, j = found
        scale_row(i, work[i][j].term_inverse())
        for i2 in range(m):
            if i2 != i and work[i2][j]:
                row_add(i2, i, -work[i2][j])
        for j2 in range(n):
            if j2 != j and work[i][j2]:
                q = -work[i][j2]
                for i2 in range(m):
                    if work[i2][j]:
                        work[i2][j2] = work[i2][j2] + q * work[i2][j]
        pivot_rows.append(i)
        done_cols.add(j)
        free_rows.discard(i)
    return Ui, U, pivot_rows


@dataclass(frozen=True)
class ConeCokerReport:
    cokernel: BasedComplex
    projection: ChainMap  # Cone(f) -> coker(f)
    verdict: QuasiIso


def cone_vs_coker(f: ChainMap) -> ConeCokerReport:
    """Certify that the natural map Cone(f) -> coker(f) is a quasi-isomorphism.

    Requires f injective in every degree (full column rank over the fraction
    field, cross-checked by the exact kernel for at most one variable) and a
    degreewise free cokernel, detected by a single-term pivot complement.
    """
    C, B = f.source, f.target
    ring = C.ring
    lo, hi = min(C.lo, B.lo), max(C.hi, B.hi)
    for k in range(lo, hi + 1):
        mk = f.map(k)
        if rank_fraction_field(mk) != C.rank(k):
            raise NotInjectiveError(f"f is not injective in degree {k}")
        if ring.nvars == 1 and snf(mk).rank != C.rank(k):
            raise NotInjectiveError(f"f is not injective in degree {k}")

    T = {}
    Tinv = {}
    nonpivot = {}
    for k in range(lo, hi + 1):
        t, tinv, pivots = _split_pivots(f.map(k))
        T[k], Tinv[k] = t, tinv
        nonpivot[k] = [i for i in range(B.rank(k)) if i not in set(pivots)]

    ranks = [len(nonpivot[k]) for k in range(lo, hi + 1)]
    diffs = {}
    for k in range(lo + 1, hi + 1):
        conj = T[k - 1] @ B.diff(k) @ Tinv[k]
        diffs[k] = conj.submatrix(nonpivot[k - 1], nonpivot[k])
    coker = BasedComplex(ring, lo, ranks, diffs)

    proj_from_B = {
        k: T[k].submatrix(nonpivot[k], range(B.rank(k))) for k in range(lo, hi + 1)
    }
    K = cone(f)
    cone_proj = {}
    for k in range(K.lo, K.hi + 1):
        zero_part = Matrix.zeros(ring, len(nonpivot.get(k, [])), C.rank(k - 1))
        pk = proj_from_B.get(k)
        if pk is None:
            pk = Matrix.zeros(ring, 0, B.rank(k))
        cone_proj[k] = Matrix.block(ring, [[zero_part, pk]])
    projection = ChainMap(K, coker, cone_proj)
    if not is_chain_map(projection):
        raise AssertionError("cone -> coker projection failed the chain-map identity")
    return ConeCokerReport(coker, projection, is_quasi_iso(projection))


# ---------------------------------------------------------------------------
# double cone equality (totalization of a three-column grid)


@dataclass(frozen=True)
class DoubleConeReport:
    iterated: BasedComplex  # Cone(C[1] -> Cone(g))
    total: BasedComplex     # Tot of the three-column grid
    equal: bool


def double_cone(f: ChainMap, g: ChainMap) -> DoubleConeReport:
    """Compare Cone(C[1] -> Cone(g)) with Tot(D) for g o f = 0; bit-exact."""
    comp = g.compose(f)
    lo = min(f.source.lo, g.target.lo)
    hi = max(f.source.hi, g.target.hi)
    for k in range(lo, hi + 1):
        if not comp.map(k).is_zero():
            raise ValueError("g o f != 0")
    C, B, A = f.source, f.target, g.target

    from .complexes import TwofoldComplex, totalize

    ranks = {}
    dh = {}
    dv = {}
    for col, X in ((2, C), (1, B), (0, A)):
        for k in X.degrees():
            ranks[(col, k)] = X.rank(k)
        for k in range(X.lo + 1, X.hi + 1):
            dv[(col, k)] = X.diff(k)
    for k in range(lo, hi + 1):
        if C.rank(k) and B.rank(k):
            dh[(2, k)] = f.map(k)
        if B.rank(k) and A.rank(k):
            dh[(1, k)] = g.map(k)
    total = totalize(TwofoldComplex(C.ring, ranks, dh, dv))

    coneg = cone(g)
    c1 = suspend(C, 1)
    mu_maps = {}
    for k in c1.degrees():
        top = f.map(k - 1)
        bottom = Matrix.zeros(C.ring, A.rank(k), C.rank(k - 1))
        mu_maps[k] = Matrix.block(C.ring, [[top], [bottom]])
    mu = ChainMap(c1, coneg, mu_maps)
    if not is_chain_map(mu):
        raise AssertionError("induced inclusion C[1] -> Cone(g) is not a chain map")
    iterated = cone(mu)
    return DoubleConeReport(iterated, total, iterated == total)


# ---------------------------------------------------------------------------
# Gamma


def gamma(g_minus: ChainMap, g_plus: ChainMap) -> BasedComplex:
    """Gamma of (Z- -> Z <- Z+):  Cone(Z+ (+) Z- --(g+ - g-)--> Z)[-1]."""
    if g_minus.target != g_plus.target:
        raise ValueError("the two maps must share their target")
    Z = g_plus.target
    ZP, ZM = g_plus.source, g_minus.source
    S = direct_sum(ZP, ZM)
    lo = min(S.lo, Z.lo)
    hi = max(S.hi, Z.hi)
    maps = {}
    for k in range(lo, hi + 1):
        maps[k] = Matrix.block(
            Z.ring, [[g_plus.map(k), -g_minus.map(k)]]
        )
    phi = ChainMap(S, Z, maps)
    return suspend(cone(phi), -1)


def gamma_diagonal(C: BasedComplex):
    """Gamma(C -> C <- C) along identities, with both comparison chain maps.

    Returns (G, into, onto): into: C -> G is c |-> (c, c, 0), onto: G -> C the
    projection on the first summand; onto o into = id.
    """
    ident = identity_map(C)
    G = gamma(ident, ident)
    ring = C.ring
    into_maps = {}
    onto_maps = {}
    for k in G.degrees():
        m = C.rank(k)
        m1 = C.rank(k + 1)
        eye = Matrix.identity(ring, m)
        into_maps[k] = Matrix.block(ring, [[eye], [eye], [Matrix.zeros(ring, m1, m)]])
        onto_maps[k] = Matrix.block(
            ring, [[eye, Matrix.zeros(ring, m, m), Matrix.zeros(ring, m, m1)]]
        )
    into = ChainMap(C, G, into_maps)
    onto = ChainMap(G, C, onto_maps)
    if not (is_chain_map(into) and is_chain_map(onto)):
        raise AssertionError("Gamma comparison maps failed the chain-map identity")
    return G, into, onto


# ---------------------------------------------------------------------------
# algebraic mapping torus


def _extend_poly(f: LaurentPoly, ext: LaurentRing) -> LaurentPoly:
    return LaurentPoly(ext, {e + (0,): c for e, c in f.coeffs.items()})


def _extend_complex(C: BasedComplex, ext: LaurentRing) -> BasedComplex:
    diffs = {
        k: C.diff(k).map_entries(lambda p: _extend_poly(p, ext), ext)
        for k in range(C.lo + 1, C.hi + 1)
    }
    return BasedComplex(ext, C.lo, [C.rank(k) for k in C.degrees()], diffs)


def _extend_map(h: ChainMap, Ce: BasedComplex, De: BasedComplex) -> ChainMap:
    ext = Ce.ring
    return ChainMap(
        Ce,
        De,
        {
            k: h.map(k).map_entries(lambda p: _extend_poly(p, ext), ext)
            for k in range(min(h.source.lo, h.target.lo), max(h.source.hi, h.target.hi) + 1)
        },
    )


def mapping_torus(h: ChainMap) -> BasedComplex:
    """T(h) = Cone(h - x : C[x^{\\pm}] -> C[x^{\\pm}]) over one fresh variable.

    The fresh variable is always appended as x_{n+1}; ranks satisfy
    T(h)_k = C_{k-1} (+) C_k.
    """
    if h.source != h.target:
        raise ValueError("mapping torus requires a chain self-map")
    C = h.source
    ext = C.ring.extended()
    Ce = _extend_complex(C, ext)
    he = _extend_map(h, Ce, Ce)
    shear = he - poly_map(Ce, ext.var(ext.nvars))
    return cone(shear)


def torus_multiplication(C: BasedComplex) -> "tuple[BasedComplex, ChainMap]":
    """The extended complex C[x^{\\pm}] and multiplication by the fresh variable."""
    ext = C.ring.extended()
    Ce = _extend_complex(C, ext)
    return Ce, poly_map(Ce, ext.var(ext.nvars))


def torus_map(f: ChainMap, g: ChainMap, alpha: ChainMap) -> ChainMap:
    """The induced map T(f) -> T(g) of a commuting square alpha f = g alpha."""
    if f.source != f.target or g.source != g.target:
        raise ValueError("torus functoriality needs self-maps")
    if alpha.source != f.source or alpha.target != g.source:
        raise ValueError("alpha does not connect the two self-maps")
    if alpha.compose(f) != g.compose(alpha):
        raise ValueError("square does not commute")
    C, D = f.source, g.source
    ext = C.ring.extended()
    Tf = mapping_torus(f)
    Tg = mapping_torus(g)
    Ce = _extend_complex(C, ext)
    De = _extend_complex(D, ext)
    ae = _extend_map(alpha, Ce, De)
    maps = {}
    for k in range(Tf.lo, Tf.hi + 1):
        blocks = [
            [ae.map(k - 1), Matrix.zeros(ext, D.rank(k - 1), C.rank(k))],
            [Matrix.zeros(ext, D.rank(k), C.rank(k - 1)), ae.map(k)],
        ]
        maps[k] = Matrix.block(ext, blocks)
    out = ChainMap(Tf, Tg, maps)
    if not is_chain_map(out):
        raise AssertionError("induced torus map failed the chain-map identity")
    return out


def torus_self_homotopy(h: ChainMap) -> ChainHomotopy:
    """The homotopy (pr2, 0) between h_* and multiplication by x on T(h)."""
    if h.source != h.target:
        raise ValueError("mapping torus requires a chain self-map")
    C = h.source
    ext = C.ring.extended()
    T = mapping_torus(h)
    h_star = torus_map(h, h, h)
    x_map = poly_map(T, ext.var(ext.nvars))
    maps = {}
    for k in range(T.lo, T.hi + 1):
        # T(h)_k = C_{k-1} (+) C_k  ->  T(h)_{k+1} = C_k (+) C_{k+1}
        m = Matrix.zeros(ext, T.rank(k + 1), T.rank(k))
        for i in range(C.rank(k)):
            m.rows[i][C.rank(k - 1) + i] = ext.one
        maps[k] = m
    return ChainHomotopy(h_star, x_map, maps)


def torus_homotopy_iso(A: ChainHomotopy):
    """From a homotopy A: h ~ g, the isomorphism T(h) -> T(g) and its inverse."""
    if not A.verify():
        raise ValueError("A is not a chain homotopy between its two maps")
    h, g = A.h, A.g
    if h.source != h.target:
        raise ValueError("mapping torus requires chain self-maps")
    C = h.source
    ext = C.ring.extended()
    Th = mapping_torus(h)
    Tg = mapping_torus(g)
    Ce = _extend_complex(C, ext)

    def block_iso(sgn):
        maps = {}
        for k in range(Th.lo, Th.hi + 1):
            a = A.map(k - 1).map_entries(lambda p: _extend_poly(p, ext), ext)
            if sgn < 0:
                a = -a
            blocks = [
                [Matrix.identity(ext, C.rank(k - 1)), Matrix.zeros(ext, C.rank(k - 1), C.rank(k))],
                [a, Matrix.identity(ext, C.rank(k))],
            ]
            maps[k] = Matrix.block(ext, blocks)
        return maps

    iso = ChainMap(Th, Tg, block_iso(+1))
    inv = ChainMap(Tg, Th, block_iso(-1))
    if not (is_chain_map(iso) and is_chain_map(inv)):
        raise AssertionError("torus homotopy isomorphism failed the chain-map identity")
    if inv.compose(iso) != identity_map(Th) or iso.compose(inv) != identity_map(Tg):
        raise AssertionError("torus homotopy isomorphism is not invertible")
    return iso, inv


@dataclass(frozen=True)
class MatherReport:
    f_star: ChainMap  # T(gf) -> T(fg)
    g_star: ChainMap  # T(fg) -> T(gf)
    composition_ok: bool


def mather(f: ChainMap, g: ChainMap) -> MatherReport:
    """Mather's trick: the two induced maps between T(gf) and T(fg).

    Asserts g_* o f_* = (gf)_* bit-exactly; quasi-isomorphism of either map
    can then be certified through the homology engines on demand.
    """
    gf = g.compose(f)
    fg = f.compose(g)
    f_star = torus_map(gf, fg, f)
    g_star = torus_map(fg, gf, g)
    gf_star = torus_map(gf, gf, gf)
    composition_ok = g_star.compose(f_star) == gf_star
    return MatherReport(f_star, g_star, composition_ok)


# ---------------------------------------------------------------------------
# elementary stabilization


@dataclass(frozen=True)
class AttachResult:
    complex: BasedComplex
    include: ChainMap   # C -> stabilized
    project: ChainMap   # stabilized -> C
    homotopy: ChainHomotopy  # id ~ include o project on the stabilized complex


def attach_elementary(C: BasedComplex, degree: int, rank: int) -> AttachResult:
    """Attach the contractible two-step complex (id: rank -> rank) in degrees
    (degree+1, degree); homotopy equivalent to C via the projection."""
    ring = C.ring
    if rank == 0:
        ident = identity_map(C)
        zero_h = ChainHomotopy(ident, ident, {})
        return AttachResult(C, ident, ident, zero_h)
    E = BasedComplex(ring, degree, [rank, rank], {degree + 1: Matrix.identity(ring, rank)})
    C2 = direct_sum(C, E)
    incl = {}
    proj = {}
    for k in C2.degrees():
        m, e = C.rank(k), E.rank(k)
        incl[k] = Matrix.block(ring, [[Matrix.identity(ring, m)], [Matrix.zeros(ring, e, m)]])
        proj[k] = Matrix.block(ring, [[Matrix.identity(ring, m), Matrix.zeros(ring, m, e)]])
    include = ChainMap(C, C2, incl)
    project = ChainMap(C2, C, proj)
    A = Matrix.zeros(ring, C2.rank(degree + 1), C2.rank(degree))
    for i in range(rank):
        A.rows[C.rank(degree + 1) + i][C.rank(degree) + i] = ring.one
    homotopy = ChainHomotopy(identity_map(C2), include.compose(project), {degree: A})
    return AttachResult(C2, include, project, homotopy)


# ---------------------------------------------------------------------------
# element-level operations for 0 -> M(x)R_1 -> M(x)R_1 -> M -> 0


@dataclass(frozen=True)
class FiniteTensor:
    """Finitely supported sum of m_k (x) x^k with m_k in M = R^rank, R = F[x^{\\pm}]."""

    ring: LaurentRing
    rank: int
    terms: tuple  # sorted tuple of (k, vector tuple)

    @classmethod
    def make(cls, ring: LaurentRing, rank: int, terms: dict) -> "FiniteTensor":
        if ring.nvars != 1:
            raise ValueError("tensors are taken over the one-variable ring")
        clean = {}
        for k, vec in terms.items():
            vec = tuple(vec)
            if len(vec) != rank:
                raise ValueError("vector length mismatch")
            if any(v for v in vec):
                clean[k] = vec
        return cls(ring, rank, tuple(sorted(clean.items())))

    def term_dict(self) -> dict:
        return {k: v for k, v in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "FiniteTensor") -> "FiniteTensor":
        out = {k: list(v) for k, v in self.terms}
        for k, vec in other.terms:
            if k in out:
                out[k] = [a + b for a, b in zip(out[k], vec)]
            else:
                out[k] = list(vec)
        return FiniteTensor.make(self.ring, self.rank, out)

    def __sub__(self, other: "FiniteTensor") -> "FiniteTensor":
        return self + other.negate()

    def negate(self) -> "FiniteTensor":
        return FiniteTensor(
            self.ring, self.rank, tuple((k, tuple(-v for v in vec)) for k, vec in self.terms)
        )


def ses_epsilon(t: FiniteTensor) -> tuple:
    """epsilon(m (x) p) = m p: multiply each vector into the module."""
    out = [t.ring.zero] * t.rank
    for k, vec in t.terms:
        xk = t.ring.monomial((k,))
        for i, v in enumerate(vec):
            out[i] = out[i] + v * xk
    return tuple(out)


def ses_shear(t: FiniteTensor) -> FiniteTensor:
    """(x (x) 1 - 1 (x) x) applied to a finite tensor."""
    x = t.ring.var(1)
    out: dict = {}
    for k, vec in t.terms:
        a = out.setdefault(k, [t.ring.zero] * t.rank)
        for i, v in enumerate(vec):
            a[i] = a[i] + v * x
        b = out.setdefault(k + 1, [t.ring.zero] * t.rank)
        for i, v in enumerate(vec):
            b[i] = b[i] - v
    return FiniteTensor.make(t.ring, t.rank, out)


def ses_preimage(t: FiniteTensor) -> FiniteTensor:
    """Explicit preimage under x(x)1 - 1(x)x of a kernel element of epsilon.

    Uses the summand-wise formula: for b_k = m (x) x^k - m x^k (x) 1 the
    preimage is -(m x^{k-1} (x) 1 + ... + m (x) x^{k-1}) for k > 0 and the
    mirrored positive sum for k < 0.
    """
    eps = ses_epsilon(t)
    if any(eps):
        raise ValueError("tensor is not in the kernel of epsilon")
    ring = t.ring
    out: dict = {}

    def add(k, vec):
        a = out.setdefault(k, [ring.zero] * t.rank)
        for i, v in enumerate(vec):
            a[i] = a[i] + v

    for k, vec in t.terms:
        if k == 0:
            continue
        if k > 0:
            for i in range(k):
                xpow = ring.monomial((k - 1 - i,))
                add(i, tuple(-(v * xpow) for v in vec))
        else:
            kk = -k
            for i in range(kk):
                xpow = ring.monomial((-kk + i,))
                add(-1 - i, tuple(v * xpow for v in vec))
    return FiniteTensor.make(ring, t.rank, out)


@dataclass(frozen=True)
class SesReport:
    eps: tuple
    in_kernel: bool
    preimage: FiniteTensor | None
    preimage_verified: bool | None


def ses_elements(t: FiniteTensor) -> SesReport:
    """Kernel/image diagnostics for a finite tensor in the standard sequence."""
    eps = ses_epsilon(t)
    in_kernel = not any(eps)
    if not in_kernel:
        return SesReport(eps, False, None, None)
    pre = ses_preimage(t)
    ok = ses_shear(pre) == t
    return SesReport(eps, True, pre, ok)
