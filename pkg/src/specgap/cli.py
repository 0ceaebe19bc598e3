"""Command-line interface.

Exit codes: 0 success, 2 input validation failure, 3 hypothesis violation
(always for a path whose preconditions fail, and for out-of-hypothesis
reports under ``--strict``), 4 falsification finding.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import __version__
from .corpus import (
    FAMILIES,
    emit_report,
    function_spec,
    generate,
    parse_input,
    serialize_input,
    spectrum_rows,
    to_function,
)
from .coverage import conjecture_probe, theorem1_report
from .differences import (
    find_unique_difference,
    lemma3_few_reps,
    lemma3_unique,
)
from .errors import ChainError, HypothesisError, InputError, NoUniqueDifference, SpectrumError
from .field import PrimeField, dft, gap_ratio
from .repeated import theorem2_report

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_FALSIFIED = 0, 2, 3, 4


def _common(parser: argparse.ArgumentParser, fmt: bool = True):
    parser.add_argument("--tol", type=float, default=1e-9, help="positivity/imaginary tolerance (default 1e-9)")
    if fmt:
        parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", default="-", help="output file (default stdout)")
    parser.add_argument("--strict", action="store_true", help="exit 3 on out-of-hypothesis input")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="specgap", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="spectrum and gap certificates")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int)
    _common(p)

    p = sub.add_parser("coverage", help="sumset coverage bound for f*f")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True)
    _common(p)

    p = sub.add_parser("unique-diff", help="unique / rare differences")
    p.add_argument("--input", required=True, help="the set B (or B1)")
    p.add_argument("--input2", help="optional second set B2 for B1 - B2")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--constructive", dest="mode", action="store_const", const="constructive")
    mode.add_argument("--exhaustive", dest="mode", action="store_const", const="exhaustive")
    p.add_argument("--seed", type=int, required=True)
    _common(p)

    p = sub.add_parser("repeated", help="positivity of the t-fold convolution")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _common(p)

    p = sub.add_parser("probe", help="empirical search beyond the proven k-range")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--strong-gap", type=float, default=0.25)
    _common(p)

    p = sub.add_parser("generate", help="write an input document for an example family")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE")
    _common(p, fmt=False)
    return parser


def _write(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _load_set(path: str):
    spec = parse_input(path)
    if spec.kind != "set":
        raise InputError(f"{path}: expected a set document, got kind {spec.kind!r}")
    return spec


def _analyze(args):
    f = to_function(parse_input(args.input))
    s = dft(f)
    ks = [args.k] if args.k is not None else [k for k in range(1, f.p) if s.lam(k) > 0]
    certs = [gap_ratio(s, k) for k in ks]
    meta = {"command": "analyze", "tol": args.tol}
    if args.format == "csv":
        gammas = {c.k: c.gamma for c in certs}
        report = {"spectrum": [dict(row, gamma=gammas.get(row["rank"])) for row in spectrum_rows(s)]}
    else:
        report = {"p": f.p, "theta": f.theta, "spectrum": spectrum_rows(s), "certificates": certs}
    return report, meta, False, False


def _coverage(args):
    f = to_function(parse_input(args.input))
    r = theorem1_report(f, args.k, tol=args.tol)
    meta = {"command": "coverage", "tol": args.tol}
    return r, meta, not r.in_hypothesis, bool(r.falsifications)


def _unique_diff(args):
    spec1 = _load_set(args.input)
    field_p = spec1.p
    meta = {"command": "unique-diff", "seed": args.seed, "tol": args.tol, "mode": args.mode}
    field = PrimeField(field_p)
    B1 = spec1.payload
    if args.input2 is None:
        try:
            u = find_unique_difference(B1, field, args.mode or "auto")
        except NoUniqueDifference:
            return {"found": False}, meta, False, False
        return {"found": True, "result": u}, meta, False, False

    spec2 = _load_set(args.input2)
    if spec2.p != field_p:
        raise InputError(f"B1 lives in F_{field_p} but B2 in F_{spec2.p}")
    B2 = spec2.payload
    lhs = 3 * len(B2) * math.log(len(B1)) if B1 else 0.0
    if lhs < math.log(field_p):
        try:
            u = lemma3_unique(B1, B2, field)
        except NoUniqueDifference:
            return {"found": False}, meta, False, False
        meta["lemma"] = "unique"
        return {"found": True, "result": u}, meta, False, False
    r = lemma3_few_reps(B1, B2, field, seed=args.seed)
    meta["lemma"] = "few_reps"
    return {"found": True, "result": r}, meta, False, r.bound_violation


def _repeated(args):
    f = to_function(parse_input(args.input))
    v = theorem2_report(f, args.k, args.t, seed=args.seed, tol=args.tol)
    meta = {"command": "repeated", "seed": args.seed, "tol": args.tol}
    return v, meta, not v.in_hypothesis, bool(v.falsifications)


def _probe(args):
    ks = range(args.k_min, args.k_max + 1)
    rows = conjecture_probe(args.p, ks, args.trials, args.seed, strong_gap=args.strong_gap, tol=args.tol)
    meta = {
        "command": "probe",
        "p": args.p,
        "seed": args.seed,
        "trials": args.trials,
        "strong_gap": args.strong_gap,
        "tol": args.tol,
        "families": ["indicator-random", "interval", "ap-union", "spectral"],
    }
    return rows, meta, False, False


def _generate(args):
    params = {}
    for item in args.param:
        name, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--param expects NAME=VALUE, got {item!r}")
        try:
            params[name] = float(value) if "." in value or "e" in value.lower() else int(value)
        except ValueError:
            raise InputError(f"--param {name}: cannot read {value!r} as a number") from None
    f = generate(args.family, args.p, params, seed=args.seed)
    return serialize_input(function_spec(f))


COMMANDS = {
    "analyze": _analyze,
    "coverage": _coverage,
    "unique-diff": _unique_diff,
    "repeated": _repeated,
    "probe": _probe,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            _write(_generate(args), args.out)
            return EXIT_OK
        report, meta, outside, falsified = COMMANDS[args.command](args)
        _write(emit_report(report, getattr(args, "format", "json"), meta), args.out)
    except (HypothesisError, ChainError) as exc:
        print(f"specgap: hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (InputError, SpectrumError) as exc:
        print(f"specgap: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if falsified:
        print("specgap: falsification finding recorded in report", file=sys.stderr)
        return EXIT_FALSIFIED
    if outside and args.strict:
        print("specgap: input lies outside the hypotheses of the bound (--strict)", file=sys.stderr)
        return EXIT_HYPOTHESIS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
