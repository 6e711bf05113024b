"""Acyclicity decisions, certificates, and their soundness invariants."""

import random

import pytest

from findom.fields import QQ, PrimeField
from findom.matrices import Matrix
from findom.rings import Direction, LaurentRing, Localized, LocalizedRing
from findom.complexes import BasedComplex, permute_basis, validate
from findom.constructions import attach_elementary
from findom.corpus import Profile, example_square, random_known
from findom.io import dumps_contraction
from findom.novikov import (
    Verdict,
    acyclicity_decide,
    novikov_complex,
    verify_contraction,
)

F32003 = PrimeField(32003)


def stuck_complex():
    R = LaurentRing(QQ, 2)
    f = R.one - R.var(1) - R.var(2)
    return BasedComplex(R, 0, [1, 1], {1: Matrix(R, [[f]])})


# ---------------------------------------------------------------------------
# novikov_complex


def test_novikov_complex_keeps_entries():
    C = example_square(2)
    N = novikov_complex(C, Direction(1, 1))
    assert isinstance(N.ring, LocalizedRing)
    assert validate(N).ok
    e = N.diff(1)[0, 0]
    assert isinstance(e, Localized)
    assert e.num == C.diff(1)[0, 0] and e.den == ()


def test_novikov_complex_of_empty():
    R = LaurentRing(QQ, 1)
    N = novikov_complex(BasedComplex.zero(R), Direction(1, 1))
    assert N.is_zero()


def test_novikov_complex_after_attach():
    C = example_square(2)
    C2 = attach_elementary(C, 0, 1).complex
    N = novikov_complex(C2, Direction(2, 1))
    assert N.rank(1) == C.rank(1) + 1
    assert validate(N).ok


# ---------------------------------------------------------------------------
# acyclicity_decide: the four fixtures


def test_square_acyclic_in_all_four_directions():
    C = example_square(2)
    for j in (1, 2):
        for sgn in (1, -1):
            dec = acyclicity_decide(C, Direction(j, sgn))
            assert dec.verdict is Verdict.ACYCLIC
            assert verify_contraction(C, Direction(j, sgn), dec.contraction)


def test_zero_differential_refuted_with_witness():
    R = LaurentRing(QQ, 2)
    C = BasedComplex(R, 0, [1], {})
    for j in (1, 2):
        for sgn in (1, -1):
            dec = acyclicity_decide(C, Direction(j, sgn))
            assert dec.verdict is Verdict.NOT_ACYCLIC
            assert dec.witness.degree == 0 and dec.witness.homology_rank == 1
            assert dec.witness.recompute(C)


def test_stuck_complex_is_inconclusive_not_wrong():
    C = stuck_complex()
    dec = acyclicity_decide(C, Direction(1, 1))
    assert dec.verdict is Verdict.INCONCLUSIVE
    assert dec.stuck is not None
    assert [dec.stuck.rank(k) for k in dec.stuck.degrees()] == [1, 1]
    # (2,+) is stuck as well: the bottom x2-coefficient 1 - x1 is not a unit
    assert acyclicity_decide(C, Direction(2, 1)).verdict is Verdict.INCONCLUSIVE


def test_torus_of_zero_certificate():
    R = LaurentRing(QQ, 1)
    x = R.var(1)
    C = BasedComplex(R, 0, [1, 1], {1: Matrix(R, [[-x]])})
    dec = acyclicity_decide(C, Direction(1, 1))
    assert dec.verdict is Verdict.ACYCLIC
    assert dec.contraction.maps[0].rows[0][0] == Localized(-x.term_inverse(), ())


# ---------------------------------------------------------------------------
# verify_contraction


def test_emitted_certificates_verify():
    C = example_square(2)
    dec = acyclicity_decide(C, Direction(2, -1), verify=False)
    assert verify_contraction(C, Direction(2, -1), dec.contraction)


def test_zero_contraction_fails_on_nonzero_complex():
    C = example_square(2)
    assert not verify_contraction(C, Direction(1, 1), {})


def test_perturbed_certificate_fails():
    C = example_square(2)
    d = Direction(1, 1)
    dec = acyclicity_decide(C, d)
    maps = dict(dec.contraction.maps)
    k = min(maps)
    m = maps[k]
    bumped = m.with_entry(0, 0, m[0, 0] + Localized(C.ring.one, ()))
    maps[k] = bumped
    assert not verify_contraction(C, d, maps)


def test_contraction_shape_mismatch_raises():
    C = example_square(2)
    bad = {0: Matrix.zeros(LocalizedRing(C.ring, Direction(1, 1)), 5, 5)}
    with pytest.raises(ValueError):
        verify_contraction(C, Direction(1, 1), bad)


# ---------------------------------------------------------------------------
# invariants


def test_random_contractible_instances_certify():
    for seed in range(15):
        C, truth = random_known(
            seed, Profile(nvars=1, lo=0, hi=3, max_rank=2, twists=8), F32003
        )
        if C.is_zero():
            continue
        assert truth.contractible
        for sgn in (1, -1):
            dec = acyclicity_decide(C, Direction(1, sgn))
            assert dec.verdict is Verdict.ACYCLIC


def test_decisions_stable_under_attach_and_permutation():
    rng = random.Random(5)
    C = example_square(2)
    cases = [Direction(j, s) for j in (1, 2) for s in (1, -1)]
    base = {d: acyclicity_decide(C, d).verdict for d in cases}
    stabilized = attach_elementary(C, 1, 2).complex
    perms = {k: rng.sample(range(C.rank(k)), C.rank(k)) for k in C.degrees()}
    shuffled = permute_basis(C, perms)
    assert validate(shuffled).ok
    for d in cases:
        assert acyclicity_decide(stabilized, d).verdict == base[d]
        assert acyclicity_decide(shuffled, d).verdict == base[d]


def test_certificate_denominators_are_direction_units():
    from findom.rings import is_direction_unit

    C = example_square(2)
    for j in (1, 2):
        for sgn in (1, -1):
            d = Direction(j, sgn)
            dec = acyclicity_decide(C, d)
            for m in dec.contraction.maps.values():
                for row in m.rows:
                    for e in row:
                        assert all(is_direction_unit(f, d) for f in e.den)


def test_reduction_strictly_shrinks():
    C = example_square(2)
    dec = acyclicity_decide(C, Direction(1, 1))
    assert dec.pivots * 2 == C.total_rank()


def test_certificates_bit_reproducible():
    C = example_square(2)
    d = Direction(2, 1)
    a = acyclicity_decide(C, d)
    b = acyclicity_decide(C, d)
    assert dumps_contraction(C, a.contraction) == dumps_contraction(C, b.contraction)


def test_modular_prescreen_opt_in_matches_exact():
    C = example_square(2)  # over Q
    for j in (1, 2):
        d = Direction(j, 1)
        fast = acyclicity_decide(C, d, modular_prescreen_prime=32003)
        slow = acyclicity_decide(C, d)
        assert fast.verdict == slow.verdict
    Z = BasedComplex(LaurentRing(QQ, 2), 0, [1], {})
    dec = acyclicity_decide(Z, Direction(1, 1), modular_prescreen_prime=32003)
    assert dec.verdict is Verdict.NOT_ACYCLIC
    assert dec.witness.recompute(Z)
