"""``semistab`` command line.

Exit codes: 0 analysis complete, 1 property falsified, 2 input error,
3 resource cap reached.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable, Optional, Sequence

from .diophantine import DEFAULT_CAP, hilbert_basis, state_cap
from .errors import (
    DimensionError,
    NotIntegralError,
    PreconditionError,
    ResourceLimitExceeded,
    TruncationTooSmall,
    UndecidedWithinBound,
)
from .exactlin import IntMatrix
from .homs import classify_chart, relative_presentation
from .monoid import AffineMonoid
from .problem import Problem, ProblemError, load_problem
from .report import (
    classification_to_json,
    dumps,
    element_to_json,
    factorization_to_json,
    ideal_to_json,
    make_report,
    monoid_to_json,
)
from .ringmodel.binomial import decompose_binomial, relative_binomial_ideal, semistable_ring_test
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FALSIFIED, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


# ---- analyses ------------------------------------------------------------------------------


def classify_results(problem: Problem) -> dict:
    f = problem.hom()
    char = problem.char
    out: dict = {"char": char}
    if problem.label:
        out["label"] = problem.label
    out["injective"] = f.is_injective()
    integ = f.is_integral()
    out["integral"] = integ.integral
    if integ.counterexample:
        out["integrality_counterexample"] = {k: element_to_json(v) for k, v in integ.counterexample.items()}
    order, ok = f.coker_torsion_invertible(char)
    out["cokernel_torsion"] = {"order": order, "invertible": ok}
    c = classify_chart(f, char)
    out["classification"] = classification_to_json(c, f)
    if integ.integral:
        out["ideal"] = ideal_to_json(relative_binomial_ideal(f, c.certificate))
    return out


def _monoid_summary(m: AffineMonoid) -> dict:
    gr = m.grothendieck_group()
    out = {
        "model": monoid_to_json(m),
        "group": {"rank": gr.free_rank, "torsion": list(gr.torsion)},
        "sharp": m.is_sharp(),
    }
    if out["sharp"]:
        out["irreducibles"] = [element_to_json(g) for g in m.irreducibles()]
        out["saturated"] = m.is_saturated()
    return out


def analyze_results(problem: Problem) -> dict:
    out = classify_results(problem)
    f = problem.hom()
    out["base"] = _monoid_summary(f.source)
    out["total"] = _monoid_summary(f.target)
    if out["integral"] and f.target.is_sharp():
        rp = relative_presentation(f)
        out["relative_presentation"] = {
            "extra_generators": [element_to_json(p) for p in f.p_gens],
            "relations": [
                {"lhs": {"base": list(a), "extra": list(i)}, "rhs": {"base": list(b), "extra": list(j)}}
                for (a, i), (b, j) in rp.relations
            ],
        }
        binomials = out.get("ideal", {}).get("binomials", [])
        out["factorizations"] = [factorization_to_json(decompose_binomial(i, j, problem.char)) for i, j in binomials]
    return out


def hilbert_results(rows: list[list[int]]) -> dict:
    if not rows or not all(isinstance(r, list) and r and all(isinstance(x, int) for x in r) for r in rows):
        raise InputError("matrix must be a nonempty list of nonempty integer rows")
    if len({len(r) for r in rows}) != 1:
        raise InputError("matrix rows have different lengths")
    hb = hilbert_basis(IntMatrix(rows))
    return {"matrix": rows, "basis": [list(v) for v in hb], "size": len(hb)}


def parse_vector(text: str) -> list[int]:
    text = text.strip()
    try:
        if text.startswith("["):
            v = json.loads(text)
        else:
            v = [int(x) for x in text.strip("()").split(",") if x.strip()]
    except (ValueError, json.JSONDecodeError):
        raise InputError(f"malformed vector {text!r}") from None
    if not isinstance(v, list) or not all(isinstance(x, int) for x in v):
        raise InputError(f"malformed vector {text!r}")
    return v


def decompose_results(i0: list[int], j0: list[int], char: int) -> dict:
    try:
        fz = decompose_binomial(i0, j0, char)
        node, pair = semistable_ring_test(i0, j0, char)
    except PreconditionError as exc:
        raise InputError(str(exc)) from None
    out = factorization_to_json(fz)
    out["node"] = {"is_node": node, "indices": list(pair) if pair else None}
    return out


# ---- argument handling -----------------------------------------------------------------------


def _char(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("characteristic must be 0 or a prime")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--cap", type=int, default=None, help=f"search-state cap (default {DEFAULT_CAP})")
    common.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identical output)")
    common.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="semistab", description="Exact analysis of monoid charts of semistable type.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("classify", "classify a chart"), ("analyze", "classify plus monoid and ideal details")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("file")
        p.add_argument("--char", type=_char, default=None, help="override the file's characteristic")
        p.add_argument("--truncation", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("hilbert", parents=[common], help="Hilbert basis of A x = 0")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("file", nargs="?", help='JSON file holding rows or {"matrix": rows}')
    src.add_argument("--matrix", help="inline JSON rows, e.g. '[[1,1,-2]]'")

    p = sub.add_parser("decompose", parents=[common], help="factor X^I0 - X^J0")
    p.add_argument("I0")
    p.add_argument("J0")
    p.add_argument("--char", type=_char, default=0)

    p = sub.add_parser("verify", parents=[common], help="run a property suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--truncation", type=int, default=None)
    return parser


def _load(args) -> Problem:
    overrides = {"char": args.char, "truncation": args.truncation, "seed": args.seed, "cap": args.cap}
    return load_problem(args.file, overrides)


def _run(args) -> tuple[dict, Optional[int], int]:
    """``(results, certified degree, exit code)``."""
    if args.command in ("classify", "analyze"):
        problem = _load(args)
        cap = problem.options.get("cap")
        fn: Callable[[Problem], dict] = classify_results if args.command == "classify" else analyze_results
        with state_cap(cap or DEFAULT_CAP):
            return fn(problem), None, EXIT_OK
    if args.command == "hilbert":
        if args.matrix is not None:
            text = args.matrix
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        rows = data.get("matrix") if isinstance(data, dict) else data
        return hilbert_results(rows), None, EXIT_OK
    if args.command == "decompose":
        return decompose_results(parse_vector(args.I0), parse_vector(args.J0), args.char), None, EXIT_OK
    if args.command == "verify":
        if args.trials < 0:
            raise InputError("--trials must be nonnegative")
        rep = run_suite(args.suite, args.trials, args.seed, args.truncation)
        return rep.to_dict(), None, EXIT_OK if rep.passed else EXIT_FALSIFIED
    raise InputError(f"unknown command {args.command}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    start = time.perf_counter()
    try:
        cap = args.cap if args.cap is not None else DEFAULT_CAP
        if cap < 1:
            raise InputError("--cap must be positive")
        with state_cap(cap):
            results, degree, code = _run(args)
    except ProblemError as exc:
        for line in exc.diagnostics:
            print(f"error: {line}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, DimensionError, NotIntegralError, PreconditionError, TruncationTooSmall, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ResourceLimitExceeded, UndecidedWithinBound) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_CAP
    timing = time.perf_counter() - start if args.timing else None
    text = dumps(make_report(args.command, results, degree, timing), args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
