"""polyspec command line: eig, dist, check, campaign, gamma, gen.

Exit codes: 0 ok, 1 bound violated (hypotheses met), 2 parse/config error,
3 singular leading coefficient, 4 size mismatch, 5 hypothesis violation
under --strict.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import genlab
from .bounds import BOUNDS, gamma_bounds_check, run_check
from .campaign import CampaignConfig, resolve_threads, run_campaign, summary_json, write_report
from .errors import HypothesisViolation, NotMonic, SingularLeadingCoefficient, SizeMismatch, UnsupportedPNorm
from .io import (
    FormatError,
    as_poly,
    dump_json,
    instance_from_json,
    kind_of,
    load_json,
    value_from_json,
    value_to_json,
    vector_from_json,
)
from .linalg import as_pnorm
from .matching import matching_distance
from .matpoly import MatrixPolynomial, polynomial_spectrum

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_SINGULAR, EXIT_SIZE, EXIT_HYPOTHESIS = 0, 1, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, message, code=EXIT_PARSE):
        super().__init__(message)
        self.code = code


def fmt(x) -> str:
    return format(float(x), ".17g")


def fmt_complex(z) -> str:
    z = complex(z)
    return f"{fmt(z.real)}{'+' if z.imag >= 0 or math.isnan(z.imag) else '-'}{fmt(abs(z.imag))}i"


def _sorted_spectrum(values):
    return sorted(np.asarray(values).tolist(), key=lambda z: (abs(z), math.atan2(z.imag, z.real)))


def _load_poly(path) -> MatrixPolynomial:
    obj = load_json(path)
    if kind_of(obj) not in ("poly", "matrix"):
        raise FormatError(f"{path}: expected a polynomial or matrix")
    return as_poly(value_from_json(obj))


def _emit(args, payload: dict, text: str):
    print(json.dumps(payload, sort_keys=True) if args.json else text)


# ---------------------------------------------------------------- subcommands


def cmd_eig(args):
    spec = _sorted_spectrum(polynomial_spectrum(_load_poly(args.input)))
    _emit(args, {"eigenvalues": [[z.real, z.imag] for z in spec]}, ", ".join(fmt_complex(z) for z in spec))
    return EXIT_OK


def cmd_dist(args):
    s = polynomial_spectrum(_load_poly(args.file_a))
    t = polynomial_spectrum(_load_poly(args.file_b))
    method = {"bottleneck": "bottleneck", "frobenius": "sum-of-squares"}[args.method]
    res = matching_distance(s, t, method)
    text = f"distance {fmt(res.distance)}\npermutation {' '.join(map(str, res.permutation))}"
    _emit(args, res.to_dict(), text)
    return EXIT_OK


def _check_inputs(args):
    fn, kinds, extras = BOUNDS[args.bound_id]
    inputs, params = [], {}
    paths = list(args.inputs)
    if len(paths) == 1 and kind_of(load_json(paths[0])) == "instance":
        bound_id, inputs, params = instance_from_json(load_json(paths[0]))
        if bound_id != args.bound_id:
            raise FormatError(f"instance is for {bound_id!r}, not {args.bound_id!r}")
    else:
        if len(paths) != len(kinds):
            raise FormatError(f"{args.bound_id} takes {len(kinds)} input file(s), got {len(paths)}")
        for path, kind in zip(paths, kinds):
            value = value_from_json(load_json(path))
            if kind == "poly":
                value = as_poly(value)
            elif isinstance(value, MatrixPolynomial) or np.ndim(value) != 2:
                raise FormatError(f"{path}: {args.bound_id} expects a matrix here")
            inputs.append(value)
    if args.p is not None:
        params["p"] = as_pnorm(args.p)
    params.setdefault("p", 2.0)
    for key in ("N", "a", "b", "k"):
        if getattr(args, key) is not None:
            params[key] = getattr(args, key)
    if args.lam is not None:
        params["lambda"] = complex(args.lam.replace("i", "j").replace(" ", ""))
    if args.xy:
        pair = load_json(args.xy)
        params["x"], params["y"] = vector_from_json(pair["x"]), vector_from_json(pair["y"])
    if "x" in extras and "x" not in params:
        n = inputs[0].shape[0] if not isinstance(inputs[0], MatrixPolynomial) else inputs[0].n
        params["x"], params["y"] = genlab.gen_orthonormal_pair(n, args.seed or 0)
    missing = [e for e in extras if e not in params]
    if missing:
        raise FormatError(f"{args.bound_id} needs parameter(s): {', '.join('--' + m for m in missing)}")
    return inputs, params


def cmd_check(args):
    inputs, params = _check_inputs(args)
    report = run_check(args.bound_id, inputs, params, strict=args.strict)
    d = report.to_dict()
    if args.json:
        print(json.dumps(d, sort_keys=True))
    else:
        print(f"bound      {report.bound_id}")
        print(f"lhs        {fmt(report.lhs)}")
        print(f"rhs        {fmt(report.rhs)}")
        print(f"holds      {report.holds}")
        print(f"ratio      {'n/a' if report.slack_ratio is None else fmt(report.slack_ratio)}")
        print(f"hypotheses {'met' if report.hypotheses_met else 'NOT met: ' + '; '.join(report.failed_hypotheses)}")
        for k, v in d["constants"].items():
            print(f"  {k} = {fmt(v) if isinstance(v, float) else v}")
        for k, v in report.checks.items():
            print(f"  check {k}: {v}")
    return EXIT_VIOLATION if report.violation else EXIT_OK


def cmd_campaign(args):
    try:
        obj = load_json(args.config)
        if not isinstance(obj, dict):
            raise ValueError("config must be a JSON object")
        if args.out:
            obj["output_path"] = args.out
        if args.seed is not None:
            obj["seed"] = args.seed
        if args.strict:
            obj["strict_hypotheses"] = True
        obj["threads"] = resolve_threads(args.threads or obj.get("threads"))
        config = CampaignConfig.from_dict(obj)
    except (ValueError, TypeError) as exc:
        raise CliError(f"config error: {exc}") from None
    report = run_campaign(config)
    write_report(report, config)
    print(summary_json(report))
    return EXIT_VIOLATION if report["summary"]["violations"] > 0 else EXIT_OK


def cmd_gamma(args):
    if args.max_k < 1:
        raise CliError("--max-k must be >= 1")
    rows = []
    for k in range(1, args.max_k + 1):
        rep = gamma_bounds_check(k)
        rows.append({"k": k, "gamma": rep.lhs, "upper": rep.rhs, "margin": rep.rhs - rep.lhs, "holds": rep.holds})
    if args.json:
        print(json.dumps(rows))
    else:
        print("k\tgamma_k\tlog2(k)+0.038\tmargin")
        for r in rows:
            print(f"{r['k']}\t{fmt(r['gamma'])}\t{fmt(r['upper'])}\t{fmt(r['margin'])}")
    return EXIT_OK


def cmd_gen(args):
    seed = args.seed if args.seed is not None else int.from_bytes(os.urandom(8), "little")
    try:
        spec = genlab.GenSpec(
            args.family, args.n, args.m, seed=seed, scale=args.scale, a=args.a, b=args.b, radius_fraction=args.radius_fraction
        )
        center = _load_poly(args.center) if args.center else None
        value = genlab.generate(spec, center=center)
    except (ValueError, TypeError) as exc:
        raise CliError(str(exc)) from None
    if spec.family == "orthonormal-pair":
        obj = {"x": value_to_json(value[0]), "y": value_to_json(value[1])}
    else:
        obj = value_to_json(value)
    if args.out:
        dump_json(obj, args.out)
    else:
        print(json.dumps(obj))
    print(f"seed {seed}", file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--threads", type=int, default=None, help="worker processes (env POLYSPEC_THREADS)")
    common.add_argument("--strict", action="store_true", help="hypothesis failures are errors")

    parser = argparse.ArgumentParser(prog="polyspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eig", parents=[common], help="eigenvalues of a matrix polynomial")
    p.add_argument("input")
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("dist", parents=[common], help="matching distance between two spectra")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--method", choices=["bottleneck", "frobenius"], default="bottleneck")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("check", parents=[common], help="evaluate one inequality")
    p.add_argument("bound_id", choices=sorted(BOUNDS))
    p.add_argument("inputs", nargs="*", help="matrix/polynomial JSON files, or one instance file")
    p.add_argument("--p", default=None, help="norm index: 1, 2 or inf")
    p.add_argument("--N", type=float, default=None)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--lambda", dest="lam", default=None, help="complex point, e.g. 1.5+0.5i")
    p.add_argument("--xy", default=None, help="JSON file with orthonormal vectors {x, y}")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("campaign", parents=[common], help="randomized verification campaign")
    p.add_argument("config")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("gamma", parents=[common], help="Pokrzywa constants and the log2 bound")
    p.add_argument("--max-k", type=int, required=True)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("gen", parents=[common], help="write a random instance")
    p.add_argument("--family", choices=genlab.FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--radius-fraction", type=float, default=None)
    p.add_argument("--center", default=None, help="polynomial JSON for nonmonic-ball")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (FormatError, UnsupportedPNorm, NotMonic, ValueError) as exc:
        if isinstance(exc, SizeMismatch):
            print(f"error: size mismatch: {exc}", file=sys.stderr)
            return EXIT_SIZE
        if isinstance(exc, SingularLeadingCoefficient):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SINGULAR
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except HypothesisViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS


if __name__ == "__main__":
    sys.exit(main())
