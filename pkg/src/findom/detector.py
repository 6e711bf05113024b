"""Finite-domination decision procedures.

* ``ranicki_1var``: both Novikov directions over F[x^{\\pm}], cross-checked
  against the SNF homology engine (finitely dominated over F iff every
  H_k has finite F-dimension, i.e. free rank zero);
* ``findom_main``: the iterative multivariable criterion -- for a chosen
  variable ordering, all 2n directional acyclicity decisions must certify;
* ``findom_all_orders``: every ordering; one full certificate suffices for
  a positive answer, one rank refutation anywhere refutes all orderings;
* ``field_findom``: acyclicity of C (x) F(z_j) for each variable, with an
  exact engine for up to two variables and a unit-pivot engine beyond.

Verdict aggregation favors soundness: FinitelyDominated only with full
certificates, NotFinitelyDominated only with a recomputable rank witness,
Inconclusive otherwise.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

from .fields import RationalFunctionField
from .rings import Direction, LaurentRing
from .complexes import BasedComplex, base_change
from .homology import (
    HomologyReport,
    generic_ranks,
    homology_pid,
    term_pivot_collapses,
)
from .novikov import Verdict, acyclicity_decide

__all__ = [
    "FDVerdict",
    "FDReport",
    "AllOrdersReport",
    "FieldFDReport",
    "ranicki_1var",
    "findom_main",
    "findom_all_orders",
    "field_findom",
]


class FDVerdict(Enum):
    FINITELY_DOMINATED = "FinitelyDominated"
    NOT_FINITELY_DOMINATED = "NotFinitelyDominated"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


def _aggregate(decisions) -> FDVerdict:
    if any(d.verdict is Verdict.NOT_ACYCLIC for d in decisions):
        return FDVerdict.NOT_FINITELY_DOMINATED
    if decisions and all(d.verdict is Verdict.ACYCLIC for d in decisions):
        return FDVerdict.FINITELY_DOMINATED
    return FDVerdict.INCONCLUSIVE


@dataclass(frozen=True)
class FDReport:
    verdict: FDVerdict
    ordering: tuple
    decisions: tuple  # of Decision, in the order they were run
    homology: HomologyReport | None = None
    snf_finitely_dominated: bool | None = None
    oracle_agrees: bool | None = None
    notes: str = ""

    def conclusive(self) -> bool:
        return self.verdict is not FDVerdict.INCONCLUSIVE

    def describe(self, ring: LaurentRing | None = None) -> str:
        lines = [
            f"findom ordering={','.join(str(v) for v in self.ordering)} verdict={self.verdict}"
        ]
        for dec in self.decisions:
            lines.append("  " + dec.describe(ring))
        if self.snf_finitely_dominated is not None:
            oracle = "FinitelyDominated" if self.snf_finitely_dominated else "NotFinitelyDominated"
            lines.append(f"  snf-oracle: {oracle}")
            if self.oracle_agrees is not None:
                lines.append(f"  oracle-agreement: {'yes' if self.oracle_agrees else 'DEFECT'}")
        if self.notes:
            lines.append(f"  note: {self.notes}")
        return "\n".join(lines)


def ranicki_1var(
    C: BasedComplex,
    *,
    verify: bool = True,
    run_oracle: bool = True,
) -> FDReport:
    """One-variable criterion: acyclicity in both directions, SNF cross-check."""
    if C.ring.nvars != 1:
        raise ValueError("the one-variable criterion needs exactly one variable")
    gr = generic_ranks(C)
    decisions = tuple(
        acyclicity_decide(C, Direction(1, sgn), generic=gr, verify=verify)
        for sgn in (1, -1)
    )
    verdict = _aggregate(decisions)
    homology = snf_fd = agrees = None
    notes = ""
    if run_oracle:
        homology = homology_pid(C)
        snf_fd = homology.finitely_dominated()
        if verdict is not FDVerdict.INCONCLUSIVE:
            agrees = (verdict is FDVerdict.FINITELY_DOMINATED) == snf_fd
            if not agrees:
                notes = "DEFECT: Novikov verdict disagrees with the SNF homology oracle"
    return FDReport(verdict, (1,), decisions, homology, snf_fd, agrees, notes)


def directions_for(ordering: tuple) -> tuple:
    """The 2n directions of the iterative criterion, positions n down to 1."""
    n = len(ordering)
    identity = ordering == tuple(range(1, n + 1))
    out = []
    for j in range(n, 0, -1):
        for sgn in (1, -1):
            out.append(Direction(j, sgn, None if identity else ordering))
    return tuple(out)


def findom_main(
    C: BasedComplex,
    ordering=None,
    *,
    verify: bool = True,
    modular_prescreen_prime: int | None = None,
) -> FDReport:
    """Iterative criterion for one fixed renumbering of the variables."""
    n = C.ring.nvars
    if n == 0:
        return FDReport(FDVerdict.FINITELY_DOMINATED, (), (), notes="no variables")
    ordering = tuple(ordering) if ordering is not None else tuple(range(1, n + 1))
    if sorted(ordering) != list(range(1, n + 1)):
        raise ValueError(f"{ordering} is not a permutation of 1..{n}")
    gr = generic_ranks(C)
    decisions = []
    for d in directions_for(ordering):
        decisions.append(
            acyclicity_decide(
                C,
                d,
                generic=gr,
                verify=verify,
                modular_prescreen_prime=modular_prescreen_prime,
            )
        )
    return FDReport(_aggregate(decisions), ordering, tuple(decisions))


@dataclass(frozen=True)
class AllOrdersReport:
    verdict: FDVerdict
    reports: tuple  # of (ordering, FDReport)
    defect: bool = False

    def describe(self, ring=None) -> str:
        lines = [f"findom all-orders verdict={self.verdict}"]
        for ordering, rep in self.reports:
            lines.append(
                f"  ordering {','.join(str(v) for v in ordering)}: {rep.verdict}"
            )
        if self.defect:
            lines.append("  DEFECT: a refutation coexists with a full certificate")
        return "\n".join(lines)


def findom_all_orders(
    C: BasedComplex,
    *,
    max_vars: int = 4,
    verify: bool = True,
    threads: int | None = None,
) -> AllOrdersReport:
    """All n! orderings; any full certificate certifies, any refutation refutes."""
    n = C.ring.nvars
    if n > max_vars:
        raise ValueError(f"all-orders mode is bounded at {max_vars} variables")
    orderings = list(itertools.permutations(range(1, n + 1)))
    if threads is None:
        threads = int(os.environ.get("FINDOM_THREADS", "1") or "1")

    def run(ordering):
        return findom_main(C, ordering, verify=verify)

    if threads > 1 and len(orderings) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(run, orderings))
    else:
        reports = [run(o) for o in orderings]

    certified = any(r.verdict is FDVerdict.FINITELY_DOMINATED for r in reports)
    refuted = any(r.verdict is FDVerdict.NOT_FINITELY_DOMINATED for r in reports)
    if certified and not refuted:
        verdict = FDVerdict.FINITELY_DOMINATED
    elif refuted:
        verdict = FDVerdict.NOT_FINITELY_DOMINATED
    else:
        verdict = FDVerdict.INCONCLUSIVE
    return AllOrdersReport(
        verdict, tuple(zip(orderings, reports)), defect=certified and refuted
    )


@dataclass(frozen=True)
class FieldFDReport:
    verdict: FDVerdict
    per_variable: tuple  # of (variable index, True/False/None, engine)
    notes: str = ""

    def describe(self, ring=None) -> str:
        lines = [f"field-criterion verdict={self.verdict}"]
        for j, val, engine in self.per_variable:
            txt = "acyclic" if val else ("not-acyclic" if val is False else "inconclusive")
            name = ring.names[j - 1] if ring is not None else f"z{j}"
            lines.append(f"  C (x) F({name}): {txt} [{engine}]")
        return "\n".join(lines)


def _tensor_rational_functions(C: BasedComplex, j: int) -> BasedComplex:
    """C (x)_{F[z_j^{\\pm}]} F(z_j), a complex over F(z_j)[other variables]."""
    ring = C.ring
    rff = RationalFunctionField(ring.field, ring.names[j - 1])
    other_names = tuple(nm for i, nm in enumerate(ring.names) if i != j - 1)
    target = LaurentRing(rff, ring.nvars - 1, other_names)
    images = []
    pos = 0
    for i in range(1, ring.nvars + 1):
        if i == j:
            images.append(target.from_scalar(rff.gen))
        else:
            pos += 1
            images.append(target.var(pos))
    return base_change(C, target, images, rff.of_base)


def field_findom(C: BasedComplex) -> FieldFDReport:
    """Field criterion: C is F-finitely dominated iff C (x) F(z_j) is acyclic
    for every variable z_j."""
    n = C.ring.nvars
    per = []
    for j in range(1, n + 1):
        if n == 1:
            gr = generic_ranks(C)
            per.append((j, gr.exact_everywhere(), "exact ranks over F(z)"))
            continue
        Cj = _tensor_rational_functions(C, j)
        if n == 2:
            rep = homology_pid(Cj)
            per.append((j, rep.is_zero(), "SNF over F(z)[y^(+-)]"))
            continue
        gr = generic_ranks(Cj)
        if not gr.exact_everywhere():
            per.append((j, False, "generic rank prescreen"))
            continue
        if term_pivot_collapses(Cj):
            per.append((j, True, "unit-pivot reduction"))
        else:
            per.append((j, None, "unit-pivot reduction (stuck)"))
    if any(v is False for _, v, _ in per):
        verdict = FDVerdict.NOT_FINITELY_DOMINATED
    elif all(v is True for _, v, _ in per):
        verdict = FDVerdict.FINITELY_DOMINATED
    else:
        verdict = FDVerdict.INCONCLUSIVE
    return FieldFDReport(verdict, tuple(per))
