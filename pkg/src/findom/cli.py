"""Command-line front end.

Exit codes: 0 = success / affirmative verdict, 1 = negative verdict,
2 = inconclusive, 3 = input error.  All randomness is seeded and output
carries no timestamps, so reports are byte-stable across runs.
"""

from __future__ import annotations

import argparse
import sys

from .fields import PrimeField, QQ
from .rings import Direction
from .complexes import BasedComplex, poly_map, validate
from .constructions import cone, gamma, mapping_torus
from .corpus import Profile, example_square, random_known
from .detector import FDVerdict, field_findom, findom_all_orders, findom_main
from .homology import generic_ranks, homology_field, homology_pid
from .novikov import Verdict, acyclicity_decide, verify_contraction
from . import io as fio

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3


class InputError(Exception):
    pass


def _parse_field(text: str):
    if text == "Q":
        return QQ
    if text.startswith("Fp:"):
        try:
            return PrimeField(int(text[3:]))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    raise InputError(f"unknown field {text!r} (use Q or Fp:<p>)")


def _load(path) -> BasedComplex:
    try:
        _, C = fio.load_complex(path)
        return C
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except (fio.ComplexFormatError, fio.ParseError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(C: BasedComplex, name: str, out_path):
    text = fio.dumps_complex(C, name)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_poly_arg(text: str, ring):
    try:
        return fio.parse_poly(text, ring)
    except fio.ParseError as exc:
        raise InputError(f"bad polynomial {text!r}: {exc}") from None


def _fd_exit(verdict: FDVerdict) -> int:
    if verdict is FDVerdict.FINITELY_DOMINATED:
        return EXIT_OK
    if verdict is FDVerdict.NOT_FINITELY_DOMINATED:
        return EXIT_NEGATIVE
    return EXIT_INCONCLUSIVE


def _decision_exit(verdict: Verdict) -> int:
    if verdict is Verdict.ACYCLIC:
        return EXIT_OK
    if verdict is Verdict.NOT_ACYCLIC:
        return EXIT_NEGATIVE
    return EXIT_INCONCLUSIVE


def cmd_validate(args) -> int:
    C = _load_unchecked(args.file)
    rep = validate(C)
    if rep.ok:
        print("ok")
        return EXIT_OK
    print(rep.message())
    return EXIT_NEGATIVE


def _load_unchecked(path) -> BasedComplex:
    try:
        _, C = fio.load_complex(path, check=False)
        return C
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except (fio.ComplexFormatError, fio.ParseError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_homology(args) -> int:
    C = _load(args.file)
    if C.ring.nvars == 0:
        print(homology_field(C).describe())
    elif C.ring.nvars == 1:
        print(homology_pid(C).describe())
    else:
        gr = generic_ranks(C)
        print("homology engine=generic (partial: ranks over the fraction field)")
        for k in sorted(gr.homology):
            print(f"  H_{k}: generic rank {gr.homology[k]}")
    return EXIT_OK


def cmd_cone(args) -> int:
    C = _load(args.file)
    a = _parse_poly_arg(args.poly, C.ring)
    _emit(cone(poly_map(C, a)), "cone", args.output)
    return EXIT_OK


def cmd_torus(args) -> int:
    C = _load(args.file)
    a = _parse_poly_arg(args.poly, C.ring)
    _emit(mapping_torus(poly_map(C, a)), "torus", args.output)
    return EXIT_OK


def cmd_gamma(args) -> int:
    C = _load(args.file)
    gm = poly_map(C, _parse_poly_arg(args.gminus, C.ring))
    gp = poly_map(C, _parse_poly_arg(args.gplus, C.ring))
    _emit(gamma(gm, gp), "gamma", args.output)
    return EXIT_OK


def _parse_order(text, n):
    try:
        ordering = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"malformed ordering {text!r}") from None
    if sorted(ordering) != list(range(1, n + 1)):
        raise InputError(f"{text!r} is not a permutation of 1..{n}")
    return ordering


def cmd_novikov(args) -> int:
    C = _load(args.file)
    ordering = _parse_order(args.order, C.ring.nvars) if args.order else None
    if not 1 <= args.var <= C.ring.nvars:
        raise InputError(f"--var must be in 1..{C.ring.nvars}")
    d = Direction(args.var, 1 if args.sign == "+" else -1, ordering)
    dec = acyclicity_decide(C, d)
    print(dec.describe(C.ring))
    if dec.verdict is Verdict.ACYCLIC and args.cert_out:
        with open(args.cert_out, "w", encoding="utf-8") as fh:
            fh.write(fio.dumps_contraction(C, dec.contraction))
    return _decision_exit(dec.verdict)


def cmd_findom(args) -> int:
    C = _load(args.file)
    if args.all_orders:
        rep = findom_all_orders(C)
        print(rep.describe(C.ring))
        return _fd_exit(rep.verdict)
    ordering = _parse_order(args.order, C.ring.nvars) if args.order else None
    rep = findom_main(C, ordering)
    print(rep.describe(C.ring))
    return _fd_exit(rep.verdict)


def cmd_field_check(args) -> int:
    C = _load(args.file)
    rep = field_findom(C)
    print(rep.describe(C.ring))
    return _fd_exit(rep.verdict)


def cmd_example(args) -> int:
    field = _parse_field(args.field)
    if args.n < 1:
        raise InputError("--n must be at least 1")
    C = example_square(args.n, field)
    _emit(C, f"square{args.n}", args.output)
    return EXIT_OK


def cmd_random(args) -> int:
    field = _parse_field(args.field)
    try:
        profile = Profile.parse(args.profile) if args.profile else Profile()
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad profile: {exc}") from None
    C, truth = random_known(args.seed, profile, field)
    _emit(C, f"random{args.seed}", args.output)
    status = "contractible" if truth.contractible else f"free ranks {truth.free_ranks}"
    print(f"# ground truth: {status}", file=sys.stderr)
    return EXIT_OK


def cmd_verify_cert(args) -> int:
    C = _load(args.file)
    try:
        cf = fio.load_contraction(args.cert)
    except OSError as exc:
        raise InputError(f"cannot read {args.cert}: {exc}") from None
    except (fio.ComplexFormatError, fio.ParseError, ValueError) as exc:
        raise InputError(f"{args.cert}: {exc}") from None
    if cf.ring != C.ring:
        raise InputError("certificate ring does not match the complex")
    try:
        ok = verify_contraction(C, cf.direction, cf.contraction)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print("certificate valid" if ok else "certificate INVALID")
    return EXIT_OK if ok else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="findom",
        description="Finite domination of based chain complexes over Laurent rings "
        "via Novikov-ring acyclicity.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check d^2 = 0")
    p.add_argument("file")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("homology", help="homology report (exact for <= 1 variable)")
    p.add_argument("file")
    p.set_defaults(fn=cmd_homology)

    p = sub.add_parser("cone", help="mapping cone of multiplication by a polynomial")
    p.add_argument("file")
    p.add_argument("--poly", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_cone)

    p = sub.add_parser("torus", help="mapping torus of multiplication by a polynomial")
    p.add_argument("file")
    p.add_argument("--poly", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_torus)

    p = sub.add_parser("gamma", help="Gamma of (C -> C <- C) along multiplication maps")
    p.add_argument("file")
    p.add_argument("--gminus", default="1")
    p.add_argument("--gplus", default="1")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_gamma)

    p = sub.add_parser("novikov", help="acyclicity over one Novikov ring")
    p.add_argument("file")
    p.add_argument("--var", type=int, required=True, help="position in the ordering")
    p.add_argument("--sign", choices=["+", "-"], required=True)
    p.add_argument("--order", help="variable ordering, e.g. 2,1")
    p.add_argument("--cert-out", help="write the contraction certificate here")
    p.set_defaults(fn=cmd_novikov)

    p = sub.add_parser("findom", help="finite domination of the complex")
    p.add_argument("file")
    p.add_argument("--order", help="variable ordering, e.g. 2,1")
    p.add_argument("--all-orders", action="store_true")
    p.set_defaults(fn=cmd_findom)

    p = sub.add_parser("field-check", help="field criterion via C (x) F(z_j)")
    p.add_argument("file")
    p.set_defaults(fn=cmd_field_check)

    p = sub.add_parser("example", help="the built-in iterated-cone example")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--field", default="Q", help="Q or Fp:<p>")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_example)

    p = sub.add_parser("random", help="seeded random instance with known truth")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--profile", help="e.g. nvars=1,lo=0,hi=3,max_rank=2,twists=8,zeros=1@0")
    p.add_argument("--field", default="Q", help="Q or Fp:<p>")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_random)

    p = sub.add_parser("verify-cert", help="check a contraction certificate")
    p.add_argument("file")
    p.add_argument("--cert", required=True)
    p.set_defaults(fn=cmd_verify_cert)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
