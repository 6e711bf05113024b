"""Built-in examples and seeded random instance generators with ground truth.

``example_square(n)`` is the Koszul-style iterated mapping cone on the
multiplication maps 1 - x_1, 1 - x_1 x_2, ..., 1 - x_1 ... x_n; for n = 2
this totalizes the square with horizontal map 1 - x_1 x_2 and vertical map
1 - x_1 (ranks 1, 2, 1), and for n = 1 it is the classical two-term
one-variable example.

``random_known`` builds a direct sum of contractible two-term pieces and
zero-differential pieces and then twists it by elementary automorphisms,
so homology and finite-domination status are known without computation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .fields import Field, QQ
from .matrices import Matrix
from .rings import LaurentPoly, LaurentRing
from .complexes import (
    BasedComplex,
    ChainMap,
    TwofoldComplex,
    direct_sum,
    poly_map,
    suspend,
)
from .constructions import cone
from .homology import cone_complex

__all__ = [
    "example_square",
    "Profile",
    "GroundTruth",
    "random_known",
    "random_poly",
    "random_graded_map",
    "random_self_map",
    "random_null_map",
    "tensor_twofold",
    "twofold_column",
    "twofold_horizontal",
    "random_three_column",
    "random_split_ses",
    "ses_cone_comparison",
]


def example_square(n: int, field: Field = QQ) -> BasedComplex:
    """Iterated cone on multiplication by 1 - x_1 x_2 ... x_k, k = 1..n."""
    if n < 1:
        raise ValueError("the example needs at least one variable")
    ring = LaurentRing(field, n)
    C = BasedComplex.single(ring, 0, 1)
    for k in range(1, n + 1):
        a_k = ring.one - ring.monomial(tuple(1 if i < k else 0 for i in range(n)))
        C = cone(poly_map(C, a_k))
    return C


@dataclass(frozen=True)
class Profile:
    """Shape of a random instance; all randomness is seeded."""

    nvars: int = 1
    lo: int = 0
    hi: int = 3
    max_rank: int = 2
    density: float = 0.7
    twists: int = 10
    zeros: tuple = ()  # ((degree, rank), ...) zero-differential summands
    max_terms: int = 2
    exp_range: int = 2

    @classmethod
    def parse(cls, text: str) -> "Profile":
        """Parse 'key=value' pairs separated by commas; zeros as '1@0+2@1'."""
        kwargs = {}
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            key, _, val = part.partition("=")
            key = key.strip()
            val = val.strip()
            if key == "zeros":
                zs = []
                for chunk in val.split("+"):
                    if not chunk:
                        continue
                    r, _, d = chunk.partition("@")
                    zs.append((int(d), int(r)))
                kwargs["zeros"] = tuple(zs)
            elif key == "density":
                kwargs[key] = float(val)
            elif key in ("nvars", "lo", "hi", "max_rank", "twists", "max_terms", "exp_range"):
                kwargs[key] = int(val)
            else:
                raise ValueError(f"unknown profile key {key!r}")
        return cls(**kwargs)


@dataclass(frozen=True)
class GroundTruth:
    free_ranks: dict  # degree -> free homology rank over the Laurent ring
    contractible: bool


def random_poly(ring: LaurentRing, rng, max_terms: int = 2, exp_range: int = 2,
                nonzero: bool = True) -> LaurentPoly:
    while True:
        f = ring.zero
        for _ in range(rng.randint(1, max_terms)):
            exps = tuple(rng.randint(-exp_range, exp_range) for _ in range(ring.nvars))
            f = f + ring.monomial(exps, ring.field.rand(rng, nonzero=True))
        if f or not nonzero:
            return f


def random_known(seed: int, profile: Profile, field: Field = QQ):
    """A twisted sum of elementary and zero-differential pieces, plus its truth."""
    rng = random.Random(seed)
    ring = LaurentRing(field, profile.nvars)
    C = BasedComplex.zero(ring)
    for deg in range(profile.lo, profile.hi):
        r = sum(1 for _ in range(profile.max_rank) if rng.random() < profile.density)
        if r:
            piece = BasedComplex(ring, deg, [r, r], {deg + 1: Matrix.identity(ring, r)})
            C = direct_sum(C, piece)
    free_ranks = {}
    for deg, r in profile.zeros:
        if r:
            C = direct_sum(C, BasedComplex(ring, deg, [r], {}))
            free_ranks[deg] = free_ranks.get(deg, 0) + r
    truth = GroundTruth(free_ranks, contractible=not free_ranks)
    if C.is_zero():
        return C, truth

    ranks = {k: C.rank(k) for k in C.degrees()}
    diffs = {k: [list(r) for r in C.diff(k).rows] for k in range(C.lo, C.hi + 2)}
    degrees_with_room = [k for k in C.degrees() if ranks[k] >= 2]
    for _ in range(profile.twists):
        if not degrees_with_room:
            break
        k = rng.choice(degrees_with_room)
        i, j = rng.sample(range(ranks[k]), 2)
        lam = random_poly(ring, rng, profile.max_terms, profile.exp_range)
        # basis change e_i := e_i + lam * e_j in degree k:
        # columns of d_k:   col_i += lam * col_j
        # rows of d_{k+1}:  row_j -= lam * row_i
        for row in diffs[k]:
            if row[j]:
                row[i] = row[i] + lam * row[j]
        up = diffs[k + 1]
        if up:
            ri, rj = up[i], up[j]
            for col in range(len(rj)):
                if ri[col]:
                    rj[col] = rj[col] - lam * ri[col]
    final_diffs = {
        k: Matrix(ring, diffs[k], ranks.get(k - 1, 0), ranks.get(k, 0))
        for k in range(C.lo + 1, C.hi + 1)
    }
    twisted = BasedComplex(ring, C.lo, [ranks[k] for k in C.degrees()], final_diffs)
    return twisted, truth


# ---------------------------------------------------------------------------
# random maps


def random_graded_map(C: BasedComplex, D: BasedComplex, degree: int, rng,
                      density: float = 0.6, max_terms: int = 1,
                      exp_range: int = 1) -> dict:
    """Random degree-shift matrices C_k -> D_{k+degree}, as a plain dict."""
    ring = C.ring
    out = {}
    for k in C.degrees():
        m = Matrix.zeros(ring, D.rank(k + degree), C.rank(k))
        for i in range(m.nrows):
            for j in range(m.ncols):
                if rng.random() < density:
                    m.rows[i][j] = random_poly(ring, rng, max_terms, exp_range)
        out[k] = m
    return out


def random_self_map(C: BasedComplex, rng, scalar_pool=(0, 1, -1, 2)) -> ChainMap:
    """c * id + d a + a d for a random degree +1 graded map a: always a chain map."""
    ring = C.ring
    c = ring.from_scalar(rng.choice(scalar_pool))
    if ring.nvars >= 1 and rng.random() < 0.5:
        c = c + random_poly(ring, rng, 1, 1, nonzero=False)
    alpha = random_graded_map(C, C, 1, rng)
    maps = {}
    for k in C.degrees():
        m = Matrix.identity(ring, C.rank(k)).scale(c)
        a_k = alpha.get(k)
        if a_k is not None:
            m = m + C.diff(k + 1) @ a_k
        a_prev = alpha.get(k - 1)
        if a_prev is not None:
            m = m + a_prev @ C.diff(k)
        maps[k] = m
    return ChainMap(C, C, maps)


def random_null_map(C: BasedComplex, D: BasedComplex, rng) -> ChainMap:
    """d beta + beta d for random beta: a (null-homotopic) chain map C -> D."""
    beta = random_graded_map(C, D, 1, rng)
    maps = {}
    for k in range(min(C.lo, D.lo), max(C.hi, D.hi) + 1):
        m = Matrix.zeros(C.ring, D.rank(k), C.rank(k))
        b_k = beta.get(k)
        if b_k is not None:
            m = m + D.diff(k + 1) @ b_k
        b_prev = beta.get(k - 1)
        if b_prev is not None:
            m = m + b_prev @ C.diff(k)
        maps[k] = m
    return ChainMap(C, D, maps)


# ---------------------------------------------------------------------------
# twofold grids


def tensor_twofold(P: BasedComplex, Q: BasedComplex) -> TwofoldComplex:
    """D_{p,q} = P_p (x) Q_q with dh = dP (x) 1 and dv = 1 (x) dQ (commuting)."""
    if P.ring != Q.ring:
        raise ValueError("tensor of complexes over different rings")
    ring = P.ring
    ranks = {}
    dh = {}
    dv = {}
    for p in P.degrees():
        for q in Q.degrees():
            ranks[(p, q)] = P.rank(p) * Q.rank(q)
    for p in P.degrees():
        for q in Q.degrees():
            if P.rank(p) and Q.rank(q):
                if P.rank(p - 1):
                    dh[(p, q)] = P.diff(p).kron(Matrix.identity(ring, Q.rank(q)))
                if Q.rank(q - 1):
                    dv[(p, q)] = Matrix.identity(ring, P.rank(p)).kron(Q.diff(q))
    return TwofoldComplex(ring, ranks, dh, dv)


def twofold_column(D: TwofoldComplex, p: int) -> BasedComplex:
    """Column p of the grid as a complex in the q direction."""
    qs = sorted(q for (pp, q) in D.cells() if pp == p)
    if not qs:
        return BasedComplex.zero(D.ring)
    lo, hi = qs[0], qs[-1]
    ranks = [D.rank(p, q) for q in range(lo, hi + 1)]
    diffs = {q: D.dv(p, q) for q in range(lo + 1, hi + 1)}
    return BasedComplex(D.ring, lo, ranks, diffs)


def twofold_horizontal(D: TwofoldComplex, p: int) -> ChainMap:
    """The horizontal differential column p -> column p-1 as a chain map."""
    src = twofold_column(D, p)
    tgt = twofold_column(D, p - 1)
    lo = min(src.lo, tgt.lo)
    hi = max(src.hi, tgt.hi)
    maps = {q: D.dh(p, q) for q in range(lo, hi + 1)}
    return ChainMap(src, tgt, maps)


def random_three_column(seed: int, field: Field = QQ, nvars: int = 1):
    """Maps f: C -> B, g: B -> A with gf = 0, from a Koszul x random tensor grid."""
    rng = random.Random(seed)
    ring = LaurentRing(field, nvars)
    p = random_poly(ring, rng, 2, 1)
    q = random_poly(ring, rng, 2, 1)
    # horizontal Koszul shape on (p, q): ranks (1, 2, 1), d1 d2 = 0
    P = BasedComplex(
        ring,
        0,
        [1, 2, 1],
        {
            1: Matrix(ring, [[-q, p]], 1, 2),
            2: Matrix(ring, [[p], [q]], 2, 1),
        },
    )
    Q, _ = random_known(seed + 1, Profile(nvars=nvars, lo=0, hi=2, max_rank=1,
                                          density=0.8, twists=4), field)
    if Q.is_zero():
        Q = BasedComplex.single(ring, 0, 1)
    D = tensor_twofold(P, Q)
    f = twofold_horizontal(D, 2)
    g = twofold_horizontal(D, 1)
    return f, g


def random_split_ses(seed: int, field: Field = QQ, nvars: int = 1):
    """A degreewise-split short exact sequence 0 -> C -> B -> A -> 0.

    The middle differential is [[dC, phi], [0, dA]] with phi = dC psi - psi dA
    for a random degree-0 graded map psi, so d^2 = 0 holds by construction.
    """
    rng = random.Random(seed)
    C, _ = random_known(seed * 3 + 1, Profile(nvars=nvars, lo=0, hi=2, max_rank=1,
                                              density=0.9, twists=3), field)
    A, _ = random_known(seed * 3 + 2, Profile(nvars=nvars, lo=0, hi=2, max_rank=1,
                                              density=0.9, twists=3), field)
    ring = C.ring
    if C.is_zero():
        C = BasedComplex.single(ring, 0, 1)
    if A.is_zero():
        A = BasedComplex.single(ring, 1, 1)
    psi = random_graded_map(A, C, 0, rng)
    lo = min(C.lo, A.lo)
    hi = max(C.hi, A.hi)

    def psi_at(k):
        m = psi.get(k)
        if m is None:
            m = Matrix.zeros(ring, C.rank(k), A.rank(k))
        return m

    ranks = [C.rank(k) + A.rank(k) for k in range(lo, hi + 1)]
    diffs = {}
    for k in range(lo + 1, hi + 1):
        phi = C.diff(k) @ psi_at(k) - psi_at(k - 1) @ A.diff(k)
        diffs[k] = Matrix.block(
            ring,
            [
                [C.diff(k), phi],
                [Matrix.zeros(ring, A.rank(k - 1), C.rank(k)), A.diff(k)],
            ],
        )
    B = BasedComplex(ring, lo, ranks, diffs)
    incl = ChainMap(
        C,
        B,
        {
            k: Matrix.block(
                ring,
                [[Matrix.identity(ring, C.rank(k))], [Matrix.zeros(ring, A.rank(k), C.rank(k))]],
            )
            for k in range(lo, hi + 1)
        },
    )
    proj = ChainMap(
        B,
        A,
        {
            k: Matrix.block(
                ring,
                [[Matrix.zeros(ring, A.rank(k), C.rank(k)), Matrix.identity(ring, A.rank(k))]],
            )
            for k in range(lo, hi + 1)
        },
    )
    return C, B, A, incl, proj


def ses_cone_comparison(incl: ChainMap, proj: ChainMap) -> ChainMap:
    """The comparison map C -> Cone(proj)[-1], c |-> (incl(c), 0)."""
    C = incl.source
    ring = C.ring
    K = suspend(cone_complex(proj), -1)
    maps = {}
    for k in C.degrees():
        top = incl.map(k)
        bottom = Matrix.zeros(ring, proj.target.rank(k + 1), C.rank(k))
        maps[k] = Matrix.block(ring, [[top], [bottom]])
    return ChainMap(C, K, maps)
