"""Command-line front end: spectrum, transform, verify, hypergeom.

Exit codes: 0 success, 1 parse/shape/usage errors, 2 irregular singularity,
3 irrational exponent.  JSON output is deterministic: fixed key order and
canonical "p/q" rational strings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import formulas, hodge, rescale
from .connection import (Connection, dual, direct_sum, tensor, tate_twist,
                         exponential_twist, wedge)
from .errors import (IrrHodgeError, IrrationalExponentError,
                     IrregularSingularityError, ParseError, ShapeError,
                     BadAlphaError)
from .fileio import (format_rational, parse_connection_file, parse_rational,
                     write_connection_file)

_CORPUS_DIR = os.path.join(os.path.dirname(__file__), "corpus")

ACCEPTANCE_ALPHAS = (
    (Fraction(0),),
    (Fraction(0), Fraction(0)),
    (Fraction(0), Fraction(1, 2)),
    (Fraction(0), Fraction(1, 3), Fraction(2, 3)),
    (Fraction(0), Fraction(0), Fraction(0), Fraction(0)),
    (Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(4, 5),
     Fraction(4, 5)),
)


def corpus_index() -> dict:
    with open(os.path.join(_CORPUS_DIR, "index.json"), encoding="utf-8") as fh:
        return json.load(fh)


def corpus_path(name: str) -> str:
    return os.path.join(_CORPUS_DIR, name)


def load_corpus(kind: str = "positive") -> list[tuple[str, Connection]]:
    index = corpus_index()
    out = []
    for name in index[kind]:
        out.append((name, parse_connection_file(corpus_path(name))))
    return out


def _spectrum_json(spec: hodge.Spectrum) -> list[dict]:
    return [{"jump": format_rational(j), "multiplicity": mult}
            for j, mult in spec.entries]


def cmd_spectrum(args) -> int:
    conn = parse_connection_file(args.file)
    # --max-sat wins; otherwise IRRHODGE_MAX_SAT is honored by the default
    # cap inside the pipeline
    ana = hodge.analyze(conn, args.max_sat)
    spec = ana.spectrum_raw()
    normalization = args.normalize or "raw"
    shown = spec if normalization == "raw" else spec.normalized_min0()
    table = ana.filtration_table()
    degree_bound = max((ana.sections(j).degree_bound
                        for j, _, _ in table.steps), default=0)
    report = {
        "spectrum": _spectrum_json(shown),
        "normalization": normalization,
    }
    if args.filtration:
        report["filtration"] = [
            {"beta": format_rational(j), "dimension": d,
             "basis": [[format_rational(c) for c in vec] for vec in basis]}
            for j, d, basis in table.steps]
    report["diagnostics"] = {
        "saturationSteps": ana.vf.saturation_steps,
        "degreeBound": degree_bound,
        "nilpotencyBound": ana.vf.nilpotency_bound,
    }
    if args.json:
        print(json.dumps(report, indent=1))
    else:
        label = conn.label or args.file
        print(f"spectrum of {label} ({normalization}):")
        for j, mult in shown.entries:
            print(f"  {format_rational(j)}  x{mult}")
        if args.filtration:
            for j, d, _ in table.steps:
                print(f"  F_{format_rational(j)} has dimension {d}")
    return 0


def cmd_transform(args) -> int:
    op = args.op
    inputs = [parse_connection_file(path) for path in args.files]
    if op in ("tensor", "sum"):
        if len(inputs) != 2:
            raise ParseError(f"{op} takes two input files")
        conn = tensor(*inputs) if op == "tensor" else direct_sum(*inputs)
    elif op == "dual":
        if len(inputs) != 1:
            raise ParseError("dual takes one input file")
        conn = dual(inputs[0])
    elif op == "wedge":
        if len(inputs) != 1 or args.r is None:
            raise ParseError("wedge takes one input file and --r")
        conn = wedge(inputs[0], args.r)
    elif op == "tate":
        if len(inputs) != 1 or args.ell is None:
            raise ParseError("tate takes one input file and --ell")
        conn = tate_twist(inputs[0], args.ell)
    elif op == "exp":
        if len(inputs) != 1 or args.c is None:
            raise ParseError("exp takes one input file and --c")
        conn = exponential_twist(inputs[0], parse_rational(args.c))
    else:
        raise ParseError(f"unknown transform {op!r}")
    write_connection_file(conn, args.out)
    return 0


def _check(name: str, passed: bool, details=()) -> dict:
    return {"name": name, "passed": bool(passed),
            "details": [str(d) for d in details]}


def _suite_hypergeom(alphas) -> list[dict]:
    checks = []
    for alpha in alphas:
        rep = formulas.verify_hypergeom(alpha)
        detail = {
            "computed": _spectrum_json(rep.computed),
            "formula": _spectrum_json(rep.formula),
        }
        if rep.matches:
            detail["sign"] = rep.sign
            detail["shift"] = format_rational(rep.shift)
        name = "hypergeom(" + ",".join(format_rational(a) for a in
                                       rep.alpha) + ")"
        checks.append({"name": name, "passed": rep.matches,
                       "details": [json.dumps(detail, sort_keys=True)]})
    return checks


def _suite_tensor(pairs=None) -> list[dict]:
    checks = []
    if pairs is None:
        corpus = [(n, c) for n, c in load_corpus() if c.rank <= 3]
        pairs = [(corpus[i], corpus[j])
                 for i in range(len(corpus))
                 for j in range(i, len(corpus))
                 if corpus[i][1].rank * corpus[j][1].rank <= 6]
    for (n1, c1), (n2, c2) in pairs:
        rep = hodge.check_tensor_formula(c1, c2)
        checks.append(_check(f"tensor[{n1} (x) {n2}]", rep.passed,
                             rep.details))
    return checks


def _suite_dual() -> list[dict]:
    checks = []
    for name, conn in load_corpus():
        rep = hodge.check_duality_formula(conn)
        checks.append(_check(f"dual[{name}]", rep.passed, rep.details))
    return checks


def _suite_rescale() -> list[dict]:
    checks = []
    for name, conn in load_corpus():
        ana = hodge.analyze(conn)
        oracle = rescale.grading_oracle_full(conn)
        direct = ana.spectrum_raw()
        checks.append(_check(f"rescale-oracle[{name}]",
                             oracle.entries == direct.entries))
        checks.append(_check(f"strictness[{name}]",
                             rescale.check_strictness(conn, ana.vf)))
        nil_ok = True
        nu = ana.vf.nilpotency_bound + 1
        lo, hi = ana.bounds()
        window = max(3, abs(int(hi)) + abs(int(lo)) + nu + 1)
        for alpha in ana.vf.jumps01:
            piece = rescale.rescaled_v_piece(conn, ana.vf, alpha, window)
            nil_ok = nil_ok and rescale.check_nilpotency(
                conn, ana.vf, piece, nu)
        checks.append(_check(f"nilpotency[{name}]", nil_ok))
        if conn.rank <= 3:
            checks.append(_check(f"rescale-dual[{name}]",
                                 rescale.rescaled_dual_check(conn, 3)))
    return checks


def _suite_wedge(r: int, n: int) -> list[dict]:
    checks = []
    base = hodge.Spectrum.from_jumps([Fraction(k) for k in range(n + 1)])
    wedge_spec = formulas.wedge_spectrum(base, r)
    grass = formulas.grassmannian_d(r, n)
    match = [(int(j), mult) for j, mult in wedge_spec.entries] == grass
    checks.append(_check(
        f"wedge-grassmannian[r={r},n={n}]", match,
        [f"wedge {wedge_spec.entries} vs d_p {grass}"]))
    filt = parse_connection_file(corpus_path("filtered_0123.json"))
    direct = hodge.spectrum(wedge(filt, 2))
    expected = formulas.wedge_spectrum(hodge.spectrum(filt), 2)
    checks.append(_check("wedge-direct[filtered_0123,r=2]",
                         direct.entries == expected.entries,
                         [f"direct {direct.entries}"]))
    return checks


def cmd_verify(args) -> int:
    suites = ([args.suite] if args.suite != "all"
              else ["tensor", "dual", "hypergeom", "rescale", "wedge"])
    checks: list[dict] = []
    for suite in suites:
        if suite == "hypergeom":
            alphas = ([tuple(parse_rational(a)
                             for a in args.alpha.split(","))]
                      if args.alpha else ACCEPTANCE_ALPHAS)
            checks.extend(_suite_hypergeom(alphas))
        elif suite == "tensor":
            if args.files:
                conns = [(os.path.basename(f), parse_connection_file(f))
                         for f in args.files]
                pairs = [(a, b) for a in conns for b in conns]
                checks.extend(_suite_tensor(pairs))
            else:
                checks.extend(_suite_tensor())
        elif suite == "dual":
            checks.extend(_suite_dual())
        elif suite == "rescale":
            checks.extend(_suite_rescale())
        elif suite == "wedge":
            checks.extend(_suite_wedge(args.r or 2, args.n or 3))
        else:
            raise ParseError(f"unknown suite {args.suite!r}")
    passed = all(c["passed"] for c in checks)
    report = {"suite": args.suite, "passed": passed, "checks": checks}
    if args.json:
        print(json.dumps(report, indent=1))
    else:
        for c in checks:
            mark = "pass" if c["passed"] else "FAIL"
            print(f"[{mark}] {c['name']}")
            if not c["passed"]:
                for d in c["details"]:
                    print(f"       {d}")
        print(f"{len(checks)} checks, "
              f"{sum(1 for c in checks if c['passed'])} passed")
    return 0 if passed else 4


def cmd_hypergeom(args) -> int:
    alpha = tuple(parse_rational(a) for a in args.alpha.split(","))
    rep = formulas.verify_hypergeom(alpha)
    if args.json:
        out = {
            "alpha": [format_rational(a) for a in rep.alpha],
            "computed": _spectrum_json(rep.computed),
            "formula": _spectrum_json(rep.formula),
            "matches": rep.matches,
        }
        if rep.matches:
            out["sign"] = rep.sign
            out["shift"] = format_rational(rep.shift)
        print(json.dumps(out, indent=1))
    else:
        print(rep.summary())
    return 0 if rep.matches else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irrhodge",
        description="Irregular Hodge filtrations and spectra at infinity "
                    "for h-connections with a pole of order two, in exact "
                    "rational arithmetic.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="spectrum of a connection file")
    sp.add_argument("file")
    sp.add_argument("--normalize", choices=["raw", "min0"], default=None)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--filtration", action="store_true")
    sp.add_argument("--max-sat", type=int, default=None)
    sp.set_defaults(func=cmd_spectrum)

    tr = sub.add_parser("transform", help="apply a functor, write the result")
    tr.add_argument("op", choices=["tensor", "dual", "wedge", "tate", "exp",
                                   "sum"])
    tr.add_argument("files", nargs="+")
    tr.add_argument("-o", "--out", required=True)
    tr.add_argument("--r", type=int, default=None)
    tr.add_argument("--ell", type=int, default=None)
    tr.add_argument("--c", default=None)
    tr.set_defaults(func=cmd_transform)

    ve = sub.add_parser("verify", help="run a verification suite")
    ve.add_argument("suite", choices=["tensor", "dual", "hypergeom",
                                      "rescale", "wedge", "all"])
    ve.add_argument("--alpha", default=None)
    ve.add_argument("--r", type=int, default=None)
    ve.add_argument("--n", type=int, default=None)
    ve.add_argument("--files", nargs="*", default=None)
    ve.add_argument("--json", action="store_true")
    ve.set_defaults(func=cmd_verify)

    hy = sub.add_parser("hypergeom", help="closed formula vs direct pipeline")
    hy.add_argument("--alpha", required=True)
    hy.add_argument("--json", action="store_true")
    hy.set_defaults(func=cmd_hypergeom)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IrregularSingularityError as exc:
        print(f"E_IRREGULAR: {exc}", file=sys.stderr)
        return 2
    except IrrationalExponentError as exc:
        print(f"E_IRRATIONAL_EXPONENT: {exc}", file=sys.stderr)
        return 3
    except (ParseError, ShapeError, BadAlphaError) as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    except IrrHodgeError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
