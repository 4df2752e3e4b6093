"""Command-line front end.

Exit codes: 0 success, 1 I/O failure, 2 validation failure, 3 a failed
identity or audit.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog
from .cohomology import euler_report
from .cutoff import CutoffError, certify_bounds, derivative_mismatch
from .exterior import as_scalar
from .growth import COVERS, GrowthError, default_radii, get_cover, parabolicity_verdict, primitive_error
from .invariants import run_suite
from .lie_model import LieModel, ModelError, load_model_file
from .operators import OperatorSuite
from .symplectic import validate_symplectic

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_FAILED = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def parse_lambda(text: str) -> Fraction:
    try:
        lam = as_scalar(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise CliError(f"invalid --lambda {text!r}: expected p/q", EXIT_INVALID) from exc
    if lam <= 0:
        raise CliError(f"--lambda must be positive, got {lam}", EXIT_INVALID)
    return lam


def resolve_model(target: str) -> LieModel:
    """A catalog id or a path to a model file."""
    if target in catalog.ids():
        return catalog.get(target).model
    path = Path(target)
    if not path.exists():
        if "/" in target or "." in target:
            raise CliError(f"cannot read {target}: no such file", EXIT_IO)
        raise CliError(f"unknown catalog model {target!r}; known: {', '.join(catalog.ids())}", EXIT_INVALID)
    try:
        model = load_model_file(path)
    except OSError as exc:
        raise CliError(f"cannot read {target}: {exc.strerror or exc}", EXIT_IO) from exc
    except UnicodeDecodeError as exc:
        raise CliError(f"{target}: not UTF-8 text", EXIT_INVALID) from exc
    if model.omega is None:
        raise CliError(f"model {model.name!r} carries no symplectic form", EXIT_INVALID)
    return model


def build_suite(model: LieModel, lam: Fraction) -> OperatorSuite:
    try:
        return OperatorSuite(model, lam=lam)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from exc


def emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc.strerror or exc}", EXIT_IO) from exc


def _json(data) -> str:
    return json.dumps(data, indent=2) + "\n"


# -- commands --------------------------------------------------------------------


def cmd_analyze(args) -> int:
    model = resolve_model(args.target)
    verdict = validate_symplectic(model, model.omega)
    if not verdict.ok:
        raise CliError(f"model {model.name!r}: " + "; ".join(verdict.messages), EXIT_INVALID)
    report = euler_report(build_suite(model, args.lam))
    emit(report.to_json() if args.format == "json" else report.to_markdown(), args.out)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_verify(args) -> int:
    model = resolve_model(args.target)
    verdict = validate_symplectic(model, model.omega)
    if not verdict.ok:
        raise CliError(f"model {model.name!r}: " + "; ".join(verdict.messages), EXIT_INVALID)
    result = run_suite(build_suite(model, args.lam), basis_change=not args.skip_basis_change)
    emit(_json(result.as_dict()) if args.format == "json" else result.to_markdown(), args.out)
    return EXIT_OK if result.passed else EXIT_FAILED


def cmd_catalog(args) -> int:
    if args.action == "list":
        rows = [(e.id, e.model.dim, e.provenance) for e in catalog.entries()]
        if args.format == "json":
            text = _json([{"id": i, "dim": d, "note": p} for i, d, p in rows])
        else:
            text = "| id | dim | note |\n|---|---|---|\n" + "".join(f"| {i} | {d} | {p} |\n" for i, d, p in rows)
        emit(text, args.out)
        return EXIT_OK
    if args.action == "show":
        if not args.id:
            raise CliError("catalog show needs a model id", EXIT_INVALID)
        emit(catalog.get(args.id).model_text, args.out)
        return EXIT_OK
    written = catalog.write_fixtures(args.out)
    for path in written:
        print(path)
    return EXIT_OK


def cmd_growth(args) -> int:
    cover = get_cover(args.cover, n=args.n)
    if args.rmax <= 0 or args.radii < 4 or args.samples < 1:
        raise CliError("need --rmax > 0, --radii >= 4 and --samples >= 1", EXIT_INVALID)
    verdict = parabolicity_verdict(cover, default_radii(args.rmax, args.radii), args.samples, args.tol, args.ratio_tol)
    data = verdict.as_dict()
    data["primitive_max_rel_error"] = primitive_error(cover)
    if args.format == "json":
        emit(_json(data), args.out)
        return EXIT_OK
    lines = [
        f"# Growth of the primitive on {cover.name}",
        "",
        f"- verdict: {verdict.verdict}",
        f"- growth class: {verdict.growth.kind}, c = {verdict.growth.c:.6g}",
        f"- max relative error of d eta against omega: {data['primitive_max_rel_error']:.3g}",
    ]
    lines += [f"- note: {n}" for n in verdict.notes]
    lines += ["", "| R | sup norm of eta |", "|---|---|"]
    lines += [f"| {r:.6g} | {s:.12g} |" for r, s in zip(verdict.profile.radii, verdict.profile.sup_norm)]
    emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_cutoff(args) -> int:
    cert = certify_bounds(args.epsilon, args.grid)
    e1, e2 = derivative_mismatch(args.epsilon, args.grid)
    data = cert.as_dict()
    data["fd_rel_error"] = {"first": e1, "second": e2}
    if args.format == "json":
        emit(_json(data), args.out)
    else:
        lines = [f"# Cutoff family, epsilon = {args.epsilon}", "", "| quantity | value |", "|---|---|"]
        lines += [f"| {k} | {v} |" for k, v in cert.as_dict().items()]
        lines += [f"| fd error a' | {e1:.3g} |", f"| fd error a'' | {e2:.3g} |"]
        emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if cert.passed else EXIT_FAILED


def _global_flags(parser: argparse.ArgumentParser, defaults: bool) -> None:
    # accepted before or after the subcommand; only the top level sets defaults
    kw = (lambda v: {"default": v}) if defaults else (lambda v: {"default": argparse.SUPPRESS})
    parser.add_argument("--lambda", dest="lam", type=str, help="weight lambda > 0 as p/q (default 1)", **kw("1"))
    parser.add_argument("--format", choices=("json", "md"), **kw("json"))
    parser.add_argument("--out", help="output path (default stdout)", **kw(None))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, defaults=False)

    parser = argparse.ArgumentParser(prog="symplectic-hodge", description=__doc__.splitlines()[0])
    _global_flags(parser, defaults=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="cohomology report for a model")
    p.add_argument("target", help="catalog id or model file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", parents=[common], help="run the exact identity suite")
    p.add_argument("target", help="catalog id or model file")
    p.add_argument("--skip-basis-change", action="store_true", help="skip the coframe-change invariance check")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", parents=[common], help="list or show built-in models")
    p.add_argument("action", choices=("list", "show", "regenerate"))
    p.add_argument("id", nargs="?")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("growth", parents=[common], help="growth of a primitive on a model cover")
    p.add_argument("cover", choices=COVERS)
    p.add_argument("--rmax", type=float, default=100.0)
    p.add_argument("--samples", type=int, default=1024, help="points per distance sphere")
    p.add_argument("--radii", type=int, default=64, help="number of radii up to rmax")
    p.add_argument("--n", type=int, default=2, help="half-dimension for euclidean_2n")
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--ratio-tol", type=float, default=0.1)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("cutoff", parents=[common], help="certify the cutoff family's derivative bounds")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--grid", type=int, default=10_000)
    p.set_defaults(func=cmd_cutoff)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.lam = parse_lambda(args.lam)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ModelError, GrowthError, CutoffError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
