"""Command-line front end.

Exit codes: 0 pass, 1 an identity or conclusion failed, 2 usage or input
error, 3 vacuous theorem instance (a hypothesis failed).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import (
    Algebra,
    Involution,
    check_involutive_automorphism,
    format_combination,
    make_involution,
    strong_involution_data,
)
from .constructions import (
    ConstructionResult,
    c_algebra,
    catalog,
    cayley_dickson,
    cayley_dickson_underline,
    clifford_step,
    graded_twisting_map,
    tripling,
    tripling_base,
)
from .errors import AlgebraError, NotStrong
from .linalg import LinearMap, identity
from .properties import (
    is_alternative,
    is_associative,
    is_commutative,
    is_flexible,
    norm_form,
    power_associative_bounded,
)
from .report import CheckReport
from .rng import DEFAULT_SEED
from .scalars import QQ, parse_scalar
from .serialize import load_algebra, load_twisting, save_algebra
from .theorems import (
    verify_associativity_prop,
    verify_theorem_ext,
    verify_theorem_main,
    verify_tripling_suite,
)
from .twisting import flip_map

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_VACUOUS = 0, 1, 2, 3
DEFAULT_PROPS = "assoc,comm,alt,flex,power:5,norm"
STEP_OPS = ("cd", "cd-underline", "clifford", "tripling")


class UsageError(Exception):
    pass


# Resolving algebras ---------------------------------------------------------

def resolve_algebra(ref: str) -> ConstructionResult:
    """A file path, a catalog name, ``c:q`` for C(K,q) or ``tbase:q,r``."""
    if ref.endswith(".json") or Path(ref).is_file():
        if not Path(ref).is_file():
            raise UsageError(f"{ref}: no such file")
        A, maps = load_algebra(ref)
        inv = auto = None
        if "sigma" in maps:
            inv = make_involution(A, maps["sigma"])
        if "automorphism" in maps:
            auto = maps["automorphism"]
        return ConstructionResult(algebra=A, involution=inv, automorphism=auto)
    if ref.startswith("c:"):
        A = c_algebra(parse_scalar(ref[2:], QQ))
        conj = LinearMap([[1, 0], [0, -1]], QQ)
        return ConstructionResult(algebra=A, involution=Involution(A, conj, True), automorphism=conj)
    if ref.startswith("tbase:"):
        q, r = _field_params(ref[6:], 2, ref, QQ)
        A = tripling_base(q, r)
        conj = LinearMap([[1, 0, 0], [0, -1, 0], [0, 0, -1]], QQ)
        return ConstructionResult(algebra=A, involution=Involution(A, conj, True))
    return catalog(ref)


def _field_params(text: str, count: int, what: str, field) -> list:
    parts = [t for t in text.split(",") if t.strip()]
    if len(parts) != count:
        raise UsageError(f"{what}: expected {count} parameter(s)")
    return [parse_scalar(t, field) for t in parts]


def _need_involution(res: ConstructionResult, what: str) -> Involution:
    if res.involution is None:
        raise UsageError(f"{what} needs an involution on {res.algebra.name or 'the input'}")
    return res.involution


def _sigma(arg: str, res: ConstructionResult) -> Involution:
    A = res.algebra
    if arg == "conj":
        return _need_involution(res, "--sigma conj")
    if arg == "id":
        return make_involution(A, identity(A.dim, A.field))
    if not Path(arg).is_file():
        raise UsageError(f"{arg}: expected conj, id or an involution file")
    from .serialize import matrix_from_json, read_json

    doc = read_json(arg)
    rows = doc.get("sigma") if isinstance(doc, dict) else doc
    return make_involution(A, matrix_from_json(rows, A.field, (A.dim, A.dim), "sigma"))


def _twisting(arg: str, A: Algebra, B: Algebra, sB: Involution | None) -> LinearMap:
    if arg == "flip":
        return flip_map(A, B)
    if arg == "cd":
        if sB is None:
            raise UsageError("--R cd needs an involution on B")
        return graded_twisting_map(A, B, sB.map)
    if not Path(arg).is_file():
        raise UsageError(f"{arg}: expected cd, flip or a twisting-map file")
    return load_twisting(arg, A, B)


# Commands --------------------------------------------------------------------

def apply_step(res: ConstructionResult, step: str) -> ConstructionResult:
    op, sep, params = step.partition(":")
    if not sep or op not in STEP_OPS:
        raise UsageError(f"bad step {step!r}; expected one of {', '.join(o + ':...' for o in STEP_OPS)}")
    A, field = res.algebra, res.algebra.field
    if op == "cd":
        (q,) = _field_params(params, 1, step, field)
        return cayley_dickson(A, _need_involution(res, step), q)
    if op == "cd-underline":
        (q,) = _field_params(params, 1, step, field)
        return cayley_dickson_underline(A, _need_involution(res, step), q)
    if op == "clifford":
        (q,) = _field_params(params, 1, step, field)
        auto = res.automorphism
        # an involution of a commutative algebra is also an automorphism
        if auto is None and res.involution is not None and check_involutive_automorphism(A, res.involution.map).passed:
            auto = res.involution.map
        if auto is None:
            raise UsageError(f"{step} needs an involutive automorphism on the input")
        return clifford_step(A, auto, q)
    q, r = _field_params(params, 2, step, field)
    return tripling(A, _need_involution(res, step), q, r)


def cmd_build(args) -> int:
    res = resolve_algebra(args.base)
    for step in args.step or []:
        res = apply_step(res, step)
    name = " ".join([args.base] + (args.step or []))
    A = res.algebra.renamed(name)
    sigma = res.involution.map if res.involution is not None else None
    save_algebra(args.output, A, sigma, res.automorphism)
    print(f"wrote {args.output} (dim {A.dim})")
    return EXIT_PASS


def _norm_report(res: ConstructionResult) -> CheckReport | None:
    if res.involution is None:
        return None
    try:
        data = strong_involution_data(res.algebra, res.involution)
    except NotStrong as exc:
        return CheckReport.fail("norm", tuple(exc.witness), str(exc))
    nf = norm_form(res.algebra, data)
    rep = nf.report()
    return CheckReport("norm", rep.passed, rep.witness, rep.detail)


def run_checks(res: ConstructionResult, props: str, seed: int) -> list[CheckReport]:
    A = res.algebra
    out = []
    for prop in [p.strip() for p in props.split(",") if p.strip()]:
        name, _, arg = prop.partition(":")
        if name == "assoc":
            out.append(is_associative(A))
        elif name == "comm":
            out.append(is_commutative(A))
        elif name == "alt":
            out.append(is_alternative(A))
        elif name == "flex":
            out.append(is_flexible(A))
        elif name == "power":
            try:
                bound = int(arg or 5)
            except ValueError:
                raise UsageError(f"bad power bound {arg!r}") from None
            if bound < 3:
                raise UsageError("power bound must be at least 3")
            out.append(power_associative_bounded(A, bound, 50, seed))
        elif name == "norm":
            rep = _norm_report(res)
            if rep is not None:
                out.append(rep)
            else:
                print("norm: skipped (no involution sidecar)", file=sys.stderr)
        else:
            raise UsageError(f"unknown property {name!r}")
    return out


def cmd_check(args) -> int:
    res = resolve_algebra(args.file)
    reports = run_checks(res, args.props, args.seed)
    if args.format == "json":
        print(json.dumps({"algebra": res.algebra.name, "dim": res.algebra.dim,
                          "reports": [r.to_json() for r in reports]}, indent=2))
    else:
        for r in reports:
            print(r.summary())
    return EXIT_PASS if all(r.passed for r in reports) else EXIT_FAIL


def _matrix_lines(m: LinearMap, labels) -> list[str]:
    return [f"  {labels[j]} -> {format_combination(m.column(j), labels)}" for j in range(m.domain_dim)]


def cmd_verify(args) -> int:
    if args.theorem == "tripling":
        if args.B is None or args.q is None or args.r is None:
            raise UsageError("verify tripling needs --B, --q and --r")
        resB = resolve_algebra(args.B)
        sB = _sigma(args.sigmaB, resB)
        field = resB.algebra.field
        report = verify_tripling_suite(resB.algebra, sB, parse_scalar(args.q, field), parse_scalar(args.r, field),
                                       seed=args.seed)
        findings = [report.artifacts["alternative"]]
    else:
        if args.A is None or args.B is None:
            raise UsageError(f"verify {args.theorem} needs --A and --B")
        resA, resB = resolve_algebra(args.A), resolve_algebra(args.B)
        A, B = resA.algebra, resB.algebra
        sB = _sigma(args.sigmaB, resB) if (args.R == "cd" or args.theorem == "ext") else None
        R = _twisting(args.R, A, B, sB)
        findings = []
        if args.theorem == "main":
            report = verify_theorem_main(A, B, R)
        elif args.theorem == "assoc":
            report = verify_associativity_prop(A, B, R)
        else:
            sA = _sigma(args.sigmaA, resA)
            report = verify_theorem_ext(A, B, R, sA, sB)
    code = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "vacuous": EXIT_VACUOUS}[report.overall]
    if args.format == "json":
        doc = report.to_json()
        if findings:
            doc["findings"] = [f.to_json() for f in findings]
        if "sigma_bar" in report.artifacts:
            doc["sigma_bar"] = report.artifacts["sigma_bar"].to_json()
        print(json.dumps(doc, indent=2))
        return code
    for line in report.lines():
        print(line)
    for f in findings:
        print(f"  finding {f.summary()}" + (" [expected]" if not f.passed else ""))
    if "sigma_bar" in report.artifacts:
        prod = verify_labels(resA.algebra, resB.algebra)
        print("sigma_bar:")
        for line in _matrix_lines(report.artifacts["sigma_bar"], prod):
            print(line)
    return code


def verify_labels(A: Algebra, B: Algebra) -> list[str]:
    """Labels a·b for the product basis, or a⊗b when those would collide."""
    from .twisting import pair_label

    short = [pair_label(a, b) for a in A.labels for b in B.labels]
    if len(set(short)) == len(short):
        return short
    return [f"{a}⊗{b}" for a in A.labels for b in B.labels]


def table_lines(A: Algebra) -> list[str]:
    cells = [[format_combination(A.basis_product(i, j), A.labels) for j in range(A.dim)] for i in range(A.dim)]
    head = ["*"] + list(A.labels)
    rows = [[A.labels[i]] + cells[i] for i in range(A.dim)]
    widths = [max(len(r[c]) for r in [head] + rows) for c in range(A.dim + 1)]

    def fmt(row):
        return " | ".join(s.rjust(w) for s, w in zip(row, widths)).rstrip()

    sep = "-+-".join("-" * w for w in widths)
    return [fmt(head), sep] + [fmt(r) for r in rows]


def cmd_table(args) -> int:
    A = resolve_algebra(args.file).algebra
    for line in table_lines(A):
        print(line)
    return EXIT_PASS


# Parser ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="alttwist", description="Alternative twisted tensor products over exact fields.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="build an algebra from a base and construction steps")
    b.add_argument("--base", required=True, help="catalog name, c:q, tbase:q,r or algebra file")
    b.add_argument("--step", action="append", help="cd:q | cd-underline:q | clifford:q | tripling:q,r (repeatable)")
    b.add_argument("-o", "--output", required=True)
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="run identity checks on an algebra")
    c.add_argument("file")
    c.add_argument("--props", default=DEFAULT_PROPS)
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    c.set_defaults(func=cmd_check)

    v = sub.add_parser("verify", help="verify a theorem instance")
    v.add_argument("theorem", choices=("main", "ext", "tripling", "assoc"))
    v.add_argument("--A")
    v.add_argument("--B")
    v.add_argument("--R", default="cd", help="cd | flip | twisting-map file")
    v.add_argument("--sigmaA", default="conj", help="conj | id | involution file")
    v.add_argument("--sigmaB", default="conj", help="conj | id | involution file")
    v.add_argument("--q")
    v.add_argument("--r")
    v.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="print the multiplication table")
    t.add_argument("file")
    t.set_defaults(func=cmd_table)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, AlgebraError, OSError) as exc:
        print(f"alttwist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
