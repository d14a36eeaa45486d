"""Command-line interface: a thin client over the package handlers.

Subcommands: generate | match | regime | sweep | verify.  Structured I/O
is JSON (CSV for sweep tables); every failure prints a machine-parseable
error object on stderr and exits with the code listed in ``--help``.
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from . import __version__
from .errors import CgmatchError, InputError
from .experiments import emit_csv, run_sweep
from .handlers import handle_generate, handle_match, handle_regime, handle_verify
from .heatmap import AXIS_FIELDS, emit_heatmap
from .ioutil import atomic_write_text
from .schemas import (
    GenerateRequest,
    MatchRequest,
    RecordDoc,
    RegimeRequest,
    SampleDoc,
    SweepRequest,
    SweepResponse,
    VerifyRequest,
)

EXIT_CODES_HELP = """\
exit codes:
  0   success
  1   verification checks failed
  2   command-line usage error
  3   parameter outside its legal domain
  4   exhaustive mode over the instance-size guard
  5   estimator mode unavailable for this input
  6   malformed input data
  7   degenerate posterior ratio (zero edge probability)
  8   unmatched vertices with no features to match them
  9   invalid sweep/cell configuration
  10  output file could not be written
"""


def _emit(args: argparse.Namespace, text: str) -> None:
    if not getattr(args, "quiet", False):
        print(text)


def _write_json(path: str | None, payload: str, args: argparse.Namespace, what: str) -> None:
    if path is None or path == "-":
        print(payload)
    else:
        atomic_write_text(path, payload + "\n")
        _emit(args, f"wrote {what} to {path}")


def _load_json(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _cmd_generate(args: argparse.Namespace) -> int:
    request = GenerateRequest(
        n=args.n,
        d=args.d,
        rho=args.rho,
        seed=args.seed if args.seed is not None else 0,
        p11=args.p11,
        p10=args.p10,
        p01=args.p01,
        p00=args.p00,
        subsample_p=args.subsample_p,
        subsample_s=args.subsample_s,
        include_pi_star=not args.drop_pi_star,
    )
    doc = handle_generate(request)
    _write_json(args.out, doc.model_dump_json(indent=2), args, "sample")
    return 0


def _cmd_match(args: argparse.Namespace) -> int:
    sample = SampleDoc.model_validate(_load_json(args.infile))
    k: int | str = "auto" if args.k == "auto" else int(args.k)
    request = MatchRequest(sample=sample, k=k, mode=args.mode, brute_force_limit=args.limit)
    response = handle_match(request)
    _write_json(args.out, response.model_dump_json(indent=2), args, "matching")
    return 0


def _regime_table(response) -> str:
    verdict = {True: "yes", False: "no", None: "n/a"}
    info = "inf" if response.info_sum is None else format(response.info_sum, ".6g")
    rows = [
        ("combined information", info),
        ("log n", format(response.log_n, ".6g")),
        ("achievable (eps=%g)" % response.eps, verdict[response.achievable]),
        ("impossible (eps=%g)" % response.eps, verdict[response.impossible]),
        ("impossible (tightened)", verdict[response.corollary_impossible]),
        ("edge-noise sparsity ok", verdict[response.sparsity_ok]),
        ("positive correlation", verdict[response.positive_corr]),
    ]
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label.ljust(width)}  {value}" for label, value in rows)


def _cmd_regime(args: argparse.Namespace) -> int:
    request = RegimeRequest(
        n=args.n,
        d=args.d,
        rho=args.rho,
        eps=args.eps,
        np11=args.np11,
        p11=args.p11,
        p10=args.p10,
        p01=args.p01,
        p00=args.p00,
        subsample_p=args.subsample_p,
        subsample_s=args.subsample_s,
        sparsity_constant=args.sparsity_c,
        corollary_margin=args.margin,
        check_sparsity=not args.no_sparsity,
    )
    response = handle_regime(request)
    if not args.json and not args.quiet:
        print(_regime_table(response))
        print()
    print(response.model_dump_json(indent=2))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    raw = _load_json(args.config)
    if args.seed is not None:
        raw["seed"] = args.seed
    request = SweepRequest.model_validate(raw)
    include_timing = request.include_timing or args.timing
    cfg = request.to_config()
    records = run_sweep(cfg, workers=args.workers)
    emit_csv(records, args.out, include_timing=include_timing)
    _emit(args, f"wrote {len(records)} rows to {args.out}")
    if args.svg:
        emit_heatmap(records, args.svg, x_field=args.svg_x, y_field=args.svg_y)
        _emit(args, f"wrote heatmap to {args.svg}")
    if args.json:
        response = SweepResponse(
            records=[RecordDoc.from_record(r, include_timing) for r in records]
        )
        print(response.model_dump_json(indent=2))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    request = VerifyRequest(
        seed=args.seed if args.seed is not None else 0,
        posterior_instances=args.posterior_instances,
        mu_instances=args.mu_instances,
        mu_samples_per_instance=args.mu_samples,
    )
    response = handle_verify(request)
    if args.json:
        print(response.model_dump_json(indent=2))
    else:
        for check in response.checks:
            status = "PASS" if check.passed else "FAIL"
            extra = (
                f", max_abs_error={check.max_abs_error:.3g}"
                if check.max_abs_error is not None
                else ""
            )
            print(
                f"{check.name}: trials={check.trials}, "
                f"violations={check.violations}{extra} -> {status}"
            )
        total = len(response.checks)
        passed = sum(c.passed for c in response.checks)
        print(f"{passed}/{total} checks passed")
    return 0 if response.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cgmatch",
        description=(
            "Correlated graph matching with Gaussian node features: sample "
            "instances, match them, evaluate threshold conditions, and run "
            "Monte Carlo sweeps."
        ),
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (64-bit unsigned)")
    common.add_argument("--quiet", action="store_true", help="suppress progress messages")
    common.add_argument("--json", action="store_true", help="machine-readable output only")

    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", parents=[common], help="sample a graph pair to JSON")
    gen.add_argument("--n", type=int, required=True, help="number of vertices")
    gen.add_argument("--d", type=int, default=0, help="feature dimension (0 = no features)")
    gen.add_argument("--rho", type=float, default=0.0, help="feature correlation in [0,1]")
    gen.add_argument("--p11", type=float, default=None, help="P(edge in both graphs)")
    gen.add_argument("--p10", type=float, default=None, help="P(edge only in first)")
    gen.add_argument("--p01", type=float, default=None, help="P(edge only in second)")
    gen.add_argument("--p00", type=float, default=None, help="P(edge in neither)")
    gen.add_argument("--subsample-p", type=float, default=None,
                     help="parent edge probability (alternative to p11..p00)")
    gen.add_argument("--subsample-s", type=float, default=None, help="subsampling rate")
    gen.add_argument("--drop-pi-star", action="store_true",
                     help="omit the ground-truth permutation from the output")
    gen.add_argument("--out", default="-", help="output path ('-' = stdout)")
    gen.set_defaults(func=_cmd_generate)

    mat = sub.add_parser("match", parents=[common], help="match a stored graph pair")
    mat.add_argument("--in", dest="infile", required=True, help="sample JSON ('-' = stdin)")
    mat.add_argument("--k", default="auto", help="core threshold (integer or 'auto')")
    mat.add_argument("--mode", choices=["brute", "oracle"], default="oracle",
                     help="core stage: exhaustive search or truth-aided oracle")
    mat.add_argument("--limit", type=int, default=8, help="size guard for brute mode")
    mat.add_argument("--out", default="-", help="output path ('-' = stdout)")
    mat.set_defaults(func=_cmd_match)

    reg = sub.add_parser("regime", parents=[common],
                         help="evaluate threshold conditions for parameters")
    reg.add_argument("--n", type=int, required=True)
    reg.add_argument("--d", type=int, default=0)
    reg.add_argument("--rho", type=float, default=0.0)
    reg.add_argument("--eps", type=float, default=0.1, help="slack epsilon (> 0)")
    reg.add_argument("--np11", type=float, default=None, help="expected co-occurring degree n*p11")
    reg.add_argument("--p11", type=float, default=None)
    reg.add_argument("--p10", type=float, default=None)
    reg.add_argument("--p01", type=float, default=None)
    reg.add_argument("--p00", type=float, default=None)
    reg.add_argument("--subsample-p", type=float, default=None)
    reg.add_argument("--subsample-s", type=float, default=None)
    reg.add_argument("--sparsity-c", type=float, default=1.0,
                     help="explicit constant in the edge-noise condition")
    reg.add_argument("--margin", type=float, default=0.0,
                     help="slack margin in the tightened impossibility condition")
    reg.add_argument("--no-sparsity", action="store_true",
                     help="skip the edge-noise condition (needed when p11=0)")
    reg.set_defaults(func=_cmd_regime)

    swp = sub.add_parser("sweep", parents=[common], help="run a Monte Carlo sweep to CSV")
    swp.add_argument("--config", required=True, help="sweep config JSON (see README)")
    swp.add_argument("--out", required=True, help="output CSV path")
    swp.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    swp.add_argument("--timing", action="store_true",
                     help="populate wall_ms (breaks byte-identical re-runs)")
    swp.add_argument("--svg", default=None, help="also render a phase-diagram heatmap SVG")
    swp.add_argument("--svg-x", default="np11_over_logn", choices=AXIS_FIELDS,
                     help="heatmap x axis")
    swp.add_argument("--svg-y", default="feat_over_logn", choices=AXIS_FIELDS,
                     help="heatmap y axis")
    swp.set_defaults(func=_cmd_sweep)

    ver = sub.add_parser("verify", parents=[common],
                         help="run randomized self-check property suites")
    ver.add_argument("--posterior-instances", type=int, default=200)
    ver.add_argument("--mu-instances", type=int, default=50)
    ver.add_argument("--mu-samples", type=int, default=20)
    ver.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        wrapped = InputError(str(exc))
        _print_error(wrapped)
        return wrapped.exit_code
    except CgmatchError as exc:
        _print_error(exc)
        return exc.exit_code


def _print_error(exc: CgmatchError) -> None:
    body = {"error": {"code": exc.code, "message": str(exc), "exit_code": exc.exit_code}}
    print(json.dumps(body), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
