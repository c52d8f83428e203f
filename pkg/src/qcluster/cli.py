"""Command-line front end.

Exit codes: 0 success or all checks passed, 1 a check failed or an expansion
left a residue, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Sequence

from .bases import FAMILIES, ExpansionError, Window, expand_in_basis
from .cluster import chebyshev, cluster_var, x_delta
from .expr import ExpressionError, evaluate
from .multiplication import ALL_CASES, Report, TheoremCase, theorem2_lhs, theorem2_rhs, realize, verify_theorem2
from .torus import TorusElement
from .triangular import Section4Window, lusztig_C, verify_section4
from .verify import (
    IdentityWindow,
    PositivityConfig,
    verify_bar_antiautomorphism,
    verify_identities,
    verify_positivity,
    verify_product_positivity,
    verify_unitriangular,
)

__all__ = ["main", "build_parser", "parse_range"]


class UsageError(Exception):
    pass


def parse_range(text: str) -> tuple[int, int]:
    """``lo..hi`` (inclusive) or a single integer."""
    m = re.fullmatch(r"\s*([+-]?\d+)\s*(?:\.\.\s*([+-]?\d+)\s*)?", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected lo..hi or an integer, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    # "--m -6..8" would otherwise read "-6..8" as an option
    out: list[str] = []
    for tok in argv:
        if out and re.fullmatch(r"-\d+\.\.[+-]?\d+", tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")
    framed = argparse.ArgumentParser(add_help=False)
    framed.add_argument("--frame", type=int, default=1, help="frame s: X_s -> X^(1,0), X_{s+1} -> X^(0,1) (default 1)")

    p = argparse.ArgumentParser(prog="qcluster", description="Exact computations in the quantum cluster algebra A_q(1,4).")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("expand", parents=[common, framed], help="Laurent expansion of X_m")
    s.add_argument("--m", type=int, required=True)

    sub.add_parser("delta", parents=[common, framed], help="Laurent expansion of X_delta")

    s = sub.add_parser("cheb", parents=[common, framed], help="F_n(X_delta) or S_n(X_delta)")
    s.add_argument("--kind", choices=("F", "S"), default="F", help="default F")
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser(
        "mul",
        parents=[common, framed],
        help="expand an expression, or a closed-form product with --case",
        description="Either an expression such as 'X[1]*X[5]' (tokens X[m], F[n], S[n], delta, ^k, *, +, -, "
        "q^(e/2); products associate left to right), or --case/--m/--n for a closed-form product "
        "checked against the direct product.",
    )
    s.add_argument("expression", nargs="?")
    s.add_argument("--case", choices=[c.value for c in ALL_CASES])
    s.add_argument("--m", type=int)
    s.add_argument("--n", type=int)

    s = sub.add_parser("verify", help="run a verification suite")
    vsub = s.add_subparsers(dest="suite", required=True, metavar="SUITE")
    v = vsub.add_parser("theorem2", parents=[common], help="closed-form products against direct products")
    v.add_argument("--m", type=parse_range, default=(-6, 8), help="m range lo..hi (default -6..8)")
    v.add_argument("--n", type=parse_range, default=(1, 8), help="n range lo..hi (default 1..8)")
    v.add_argument("--frames", type=_int_list, default=(1, 2), help="comma-separated frames (default 1,2)")
    v.add_argument("--cases", default=",".join(c.value for c in ALL_CASES), help="comma-separated cases (default all)")
    v.add_argument("--perturb", type=int, default=0, help="add this to one coefficient of each closed form (negative control)")

    v = vsub.add_parser("identities", parents=[common], help="exchange, commutation, shift, ladder, Chebyshev, fixtures")
    v.add_argument("--commute", type=parse_range, default=(-8, 10), help="q-commutation and bar range (default -8..10)")
    v.add_argument("--exchange", type=parse_range, default=(-7, 9), help="exchange relation range (default -7..9)")
    v.add_argument("--cheb-max", type=int, default=6, help="largest Chebyshev index in product checks (default 6)")
    v.add_argument("--frames", type=_int_list, default=(1, 2), help="comma-separated frames (default 1,2)")
    v.add_argument("--random", type=int, default=500, help="random products for the bar anti-automorphism (default 500)")
    v.add_argument("--perturb", type=int, default=0, help="add this to one coefficient of each right side (negative control)")

    v = vsub.add_parser("section4", parents=[common], help="triangular basis checks")
    v.add_argument("--box", type=int, default=4, help="|a|,|b| bound for index checks (default 4)")
    v.add_argument("--sn-max", type=int, default=6, help="largest n in C(-n,-2n) = S_n (default 6)")
    v.add_argument("--closed-form-max", type=int, default=8, help="largest n for the closed S_n formula (default 8)")
    v.add_argument("--lattice-n", type=parse_range, default=(-3, 5), help="n range of lattice points (default -3..5)")
    v.add_argument("--lattice-max", type=int, default=3, help="largest a1, a2 at lattice points (default 3)")

    v = vsub.add_parser("positivity", parents=[common], help="bar-invariance and positivity of basis labels")
    v.add_argument("--m", type=parse_range, default=(-10, 12), help="cluster monomial m range (default -10..12)")
    v.add_argument("--max-degree", type=int, default=8, help="a+b bound (default 8)")
    v.add_argument("--max-n", type=int, default=10, help="largest imaginary index (default 10)")
    v.add_argument("--frames", type=_int_list, default=(1, 2), help="comma-separated frames (default 1,2)")
    v.add_argument("--budget", type=int, default=100_000, help="direct-realization budget (default 100000)")
    v.add_argument("--products", action="store_true", help="also check positivity of products of small B labels")

    s = sub.add_parser("basis-expand", parents=[common, framed], help="expand an expression in a basis family")
    s.add_argument("expression")
    s.add_argument("--family", choices=FAMILIES, default="B", help="default B")
    s.add_argument("--m", type=parse_range, default=(-10, 12), help="window m range (default -10..12)")
    s.add_argument("--max-degree", type=int, default=8, help="window a+b bound (default 8)")
    s.add_argument("--max-n", type=int, default=10, help="window imaginary bound (default 10)")
    s.add_argument("--search", type=int, default=0,
                   help="find labels outside the window by denominator vector up to this distance from the frame "
                        "(default 0: window only)")

    s = sub.add_parser("triangular", parents=[common, framed], help="triangular basis element C_(a,b)")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    return p


# -- output ---------------------------------------------------------------------------


def _emit(args, text: str, payload) -> None:
    out = json.dumps(payload, indent=1, sort_keys=True) if args.json else text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        sys.stdout.write(out + "\n")


def _report_text(report: Report, title: str) -> str:
    lines = [f"{title}: {report.summary()}"]
    for e in report.failures():
        where = f"case={e.case} m={e.m} n={e.n} frame={e.frame}"
        if e.note:
            where += f" ({e.note})"
        first = e.first_difference()
        if first is not None:
            (a, b), c = first
            where += f": first difference {c.to_text()} at ({a},{b})"
        lines.append("FAIL " + where)
    return "\n".join(lines)


def _emit_report(args, report: Report, title: str) -> int:
    _emit(args, _report_text(report, title), {"summary": report.summary(), "ok": report.ok, "entries": report.to_json()})
    return 0 if report.ok else 1


def _emit_element(args, x: TorusElement) -> int:
    _emit(args, x.to_text(), x.to_json())
    return 0


# -- commands ---------------------------------------------------------------------------


def _cmd_mul(args) -> int:
    if args.case is not None:
        if args.expression is not None or args.m is None or args.n is None:
            raise UsageError("--case needs --m and --n and no expression")
        rhs = theorem2_rhs(args.case, args.m, args.n)
        lhs = theorem2_lhs(args.case, args.m, args.n, args.frame)
        ok = lhs == realize(rhs, args.frame)
        text = f"{rhs.to_text()}\nmatches direct product in frame {args.frame}: {'yes' if ok else 'NO'}"
        _emit(args, text, {"case": args.case, "m": args.m, "n": args.n, "rhs": rhs.to_json(),
                           "lhs": lhs.to_json(), "match": ok})
        return 0 if ok else 1
    if args.expression is None:
        raise UsageError("give an expression or --case/--m/--n")
    return _emit_element(args, evaluate(args.expression, args.frame))


def _cmd_verify(args) -> int:
    if args.suite == "theorem2":
        cases = [TheoremCase.parse(c.strip()) for c in args.cases.split(",") if c.strip()]
        report = verify_theorem2(range(args.m[0], args.m[1] + 1), range(args.n[0], args.n[1] + 1),
                                 args.frames, cases, perturbation=args.perturb)
        return _emit_report(args, report, "theorem2")
    if args.suite == "identities":
        w = IdentityWindow(commute=args.commute, exchange=args.exchange, shift=args.commute,
                           cheb_max=args.cheb_max, frames=args.frames)
        report = verify_identities(w, perturbation=args.perturb)
        report.extend(verify_bar_antiautomorphism(args.random))
        return _emit_report(args, report, "identities")
    if args.suite == "section4":
        w = Section4Window(box=args.box, sn_max=args.sn_max, closed_form_max=args.closed_form_max,
                           lattice_n=args.lattice_n, lattice_max=args.lattice_max)
        return _emit_report(args, verify_section4(w), "section4")
    window = Window(args.m[0], args.m[1], args.max_degree, args.max_n)
    report = verify_positivity(PositivityConfig(window=window, frames=args.frames, direct_budget=args.budget))
    report.extend(verify_unitriangular())
    if args.products:
        report.extend(verify_product_positivity())
    return _emit_report(args, report, "positivity")


def _cmd_basis_expand(args) -> int:
    x = evaluate(args.expression, args.frame)
    window = Window(args.m[0], args.m[1], args.max_degree, args.max_n)
    try:
        comb = expand_in_basis(x, args.family, args.frame, window, search=args.search)
    except ExpansionError as err:
        text = f"expansion incomplete: {err}\npartial: {err.partial.to_text()}\nresidue: {err.residue.to_text()}"
        _emit(args, text, {"error": str(err), "partial": err.partial.to_json(), "residue": err.residue.to_json()})
        return 1
    _emit(args, comb.to_text(), comb.to_json())
    return 0


def _cmd_triangular(args) -> int:
    c, exp = lusztig_C(args.a, args.b, args.frame)
    text = f"C({args.a},{args.b}) = {c.to_text()}\nE-expansion: {exp.to_text()}"
    _emit(args, text, {"a": args.a, "b": args.b, "frame": args.frame, "element": c.to_json(),
                       "e_expansion": exp.to_json()})
    return 0


def run(argv: Sequence[str] | None = None) -> int:
    argv = _attach_negative_values(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "expand":
            return _emit_element(args, cluster_var(args.m, args.frame))
        if args.command == "delta":
            return _emit_element(args, x_delta(args.frame))
        if args.command == "cheb":
            return _emit_element(args, chebyshev(args.kind, args.n, args.frame))
        if args.command == "mul":
            return _cmd_mul(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "basis-expand":
            return _cmd_basis_expand(args)
        if args.command == "triangular":
            return _cmd_triangular(args)
    except (UsageError, ExpressionError, ValueError) as err:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"qcluster: error: {err}\n")
        return 2
    raise AssertionError(f"unhandled command {args.command}")


def main() -> None:
    sys.exit(run())
