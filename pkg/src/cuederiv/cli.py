"""Command-line front end.

Subcommands run single evaluations (exact / asymptotic / Monte Carlo / zeta
side), cross-route comparisons, and zero-count sweeps, and emit reports as
JSON (canonical) or CSV (lossy projection).  Identical config and seed give
byte-identical JSON apart from the timestamp field.

Exit codes: 0 ok, 1 usage error, 2 capability limit, 3 comparison failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

from . import __version__
from .asymptotics import (
    RegimePoint,
    cue_limit,
    expected_log_integral,
    expected_zero_count,
    global_moment,
    joint_moment,
    meso_moment,
    micro_b,
    micro_b_bessel,
)
from .errors import CapabilityError
from .exact_moments import (
    cue_moment_integer,
    cue_moment_ks,
    cue_moment_radial,
    moment_exact,
    moment_structure,
)
from .rmt_mc import (
    default_thread_count,
    estimate_joint_moment,
    estimate_moment,
    mean_zero_counts,
)
from .zeta import (
    arithmetic_factor,
    conjecture_rhs,
    deriv_moment_series,
    divisor_table,
    lindelof_series,
    log_convolution_table,
    rmt_leading_coefficient,
)

USAGE_EXIT = 1
CAPABILITY_EXIT = 2
COMPARISON_EXIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit2(f"{self.prog}: error: {message}")


class SystemExit2(Exception):
    """Usage error carrying a message; mapped to exit code 1."""


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _regime_name(text: str) -> str:
    aliases = {
        "global": "global",
        "mesoscopic": "mesoscopic",
        "meso": "mesoscopic",
        "microscopic": "microscopic",
        "micro": "microscopic",
        "joint": "joint",
        "zero-density": "zero-density",
        "zeros": "zero-density",
    }
    key = text.strip().lower()
    if key not in aliases:
        raise argparse.ArgumentTypeError(f"unknown regime {text!r}")
    return aliases[key]


def _radii(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad radius list: {text!r}") from exc


def _number_payload(value):
    """JSON form of a result: floats as-is, Fractions as num/den strings."""
    if isinstance(value, Fraction):
        return {
            "num": str(value.numerator),
            "den": str(value.denominator),
            "approx": float(value),
        }
    return value


def _result(label: str, value, provenance: str, **extra):
    row = {"label": label, "value": _number_payload(value), "provenance": provenance}
    row.update(extra)
    return row


def _progress_printer(enabled: bool):
    if not enabled:
        return None

    def show(done, total):
        print(f"progress: {done}/{total} draws", file=sys.stderr)

    return show


def build_parser() -> _Parser:
    parser = _Parser(prog="cuederiv", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads for Monte Carlo (default: CUEDERIV_THREADS or 1)")
    common.add_argument("--progress", action="store_true",
                        help="print Monte Carlo progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("exact", help="finite-N moment formulas", parents=[common])
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--u", type=str, help="|z|^2 (rational like 1/2 in exact mode)")
    group.add_argument("--r", type=str, help="|z| (rational in exact mode)")
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p.add_argument(
        "--route",
        choices=("determinant", "structure", "both", "cue-circle", "cue-radial"),
        default="both",
    )

    p = sub.add_parser("asympt", help="large-N regime formulas", parents=[common])
    p.add_argument("--regime", required=True, type=_regime_name,
                   help="global | mesoscopic (meso) | microscopic (micro) | joint | zero-density")
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--N", type=float, default=None)
    p.add_argument("--z1", type=_complex, default=None)
    p.add_argument("--z2", type=_complex, default=None)
    p.add_argument("--of", choices=("derivative", "polynomial"), default="derivative",
                   help="moments of the derivative or of the polynomial itself")

    p = sub.add_parser("mc", help="Monte Carlo estimators", parents=[common])
    p.add_argument("--what", choices=("moment", "joint"), default="moment")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--z", type=_complex, default=None)
    p.add_argument("--z1", type=_complex, default=None)
    p.add_argument("--z2", type=_complex, default=None)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("zeta", help="Dirichlet series, Euler products, conjectured asymptotics", parents=[common])
    p.add_argument("--what", required=True,
                   choices=("divisor-table", "log-table", "deriv-series",
                            "lindelof-series", "arithmetic-factor", "conjecture"))
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--n-max", type=int, default=100000)
    p.add_argument("--p-max", type=int, default=100000)
    p.add_argument("--csv-out", type=str, default=None,
                   help="write the full table to this CSV file (table subcommands)")

    p = sub.add_parser("compare", help="run two routes on one point and compare", parents=[common])
    p.add_argument("--routes", required=True,
                   help="comma pair from exact,structure,closed-s1,mc,global")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-9,
                   help="relative tolerance for deterministic route pairs")
    p.add_argument("--se-multiplier", type=float, default=5.0,
                   help="allowed discrepancy in standard errors when MC is involved")

    p = sub.add_parser("zeros", help="Monte Carlo zero-count sweep with the limit overlay", parents=[common])
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--radii", type=_radii, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    return parser


def _run_exact(args, threads):
    if args.mode == "exact":
        u = _fraction(args.u) if args.u is not None else _fraction(args.r) ** 2
        r = _fraction(args.r) if args.r is not None else None
    else:
        u = float(Fraction(args.u)) if args.u is not None else float(Fraction(args.r)) ** 2
        r = float(Fraction(args.r)) if args.r is not None else math.sqrt(u)
    results = []
    if args.route in ("determinant", "both"):
        results.append(_result("moment", moment_exact(args.N, args.s, u),
                               "partition-determinant"))
    if args.route in ("structure", "both"):
        results.append(_result("moment", moment_structure(args.N, args.s, u),
                               "structure-expansion"))
    if args.route == "cue-circle":
        results.append(_result("cue_moment", cue_moment_integer(args.N, args.s),
                               "selberg-product-circle"))
        results.append(_result("cue_moment", cue_moment_ks(args.N, args.s),
                               "gamma-product-circle"))
    if args.route == "cue-radial":
        if r is None:
            r = math.sqrt(float(u)) if args.mode == "float" else None
        if r is None:
            raise SystemExit2("cue-radial needs --r (rational in exact mode)")
        results.append(_result("cue_moment", cue_moment_radial(args.N, args.s, r),
                               "block-determinant-ratio"))
    return results


def _run_asympt(args):
    regime = args.regime
    if regime == "zero-density":
        if args.r is None:
            raise SystemExit2("zero-density needs --r")
        return [
            _result("expected_zeros", expected_zero_count(args.r), "zero-density-limit"),
            _result("log_integral", expected_log_integral(args.r),
                    "integrated-zero-density"),
        ]
    if args.s is None:
        raise SystemExit2(f"{regime} needs --s")
    if regime == "joint":
        if args.h is None or args.z1 is None or args.z2 is None:
            raise SystemExit2("joint needs --h, --z1, --z2")
        return [_result("joint_moment", joint_moment(args.s, args.h, args.z1, args.z2),
                        "gaussian-joint-limit")]
    if args.of == "polynomial":
        point = RegimePoint(regime, r=args.r, alpha=args.alpha, c=args.c,
                            N=None if args.N is None else int(args.N))
        return [_result("cue_moment_limit", cue_limit(args.s, point),
                        "polynomial-moment-limit")]
    if regime == "global":
        if args.r is None:
            raise SystemExit2("global needs --r")
        return [_result("moment_limit", global_moment(args.s, args.r),
                        "hypergeometric-global-limit")]
    if regime == "mesoscopic":
        if args.alpha is None or args.N is None:
            raise SystemExit2("mesoscopic needs --alpha and --N")
        return [_result("moment_asymptotic", meso_moment(int(args.s), args.alpha, args.N),
                        "laguerre-mesoscopic")]
    # microscopic
    if args.c is None:
        raise SystemExit2("microscopic needs --c")
    s = int(args.s)
    coeff = micro_b(s, args.c)
    rows = [_result("coefficient", coeff, "exp-moment-determinant"),
            _result("coefficient", micro_b_bessel(s, args.c), "bessel-kernel-determinant")]
    if args.N is not None:
        rows.append(_result("moment_asymptotic", coeff * args.N ** (s * s + 2 * s),
                            "exp-moment-determinant"))
    return rows


def _run_mc(args, threads, progress):
    if args.what == "moment":
        if args.z is None:
            raise SystemExit2("mc moment needs --z")
        est = estimate_moment(args.N, args.s, args.z, args.samples, args.seed,
                              threads=threads, progress=progress)
    else:
        if args.h is None or args.z1 is None or args.z2 is None:
            raise SystemExit2("mc joint needs --h, --z1, --z2")
        est = estimate_joint_moment(args.N, args.s, args.h, args.z1, args.z2,
                                    args.samples, args.seed, threads=threads,
                                    progress=progress)
    extra = {
        "std_error": est.std_error,
        "samples": est.samples,
        "seed": est.seed,
        "generator": est.generator,
        "resampled": est.resampled,
    }
    if est.top_contribution_fraction is not None:
        extra["top_contribution_fraction"] = est.top_contribution_fraction
    return [_result("mc_mean", est.mean, "monte-carlo-haar", **extra)]


def _run_zeta(args):
    what = args.what
    if what in ("divisor-table", "log-table"):
        s = int(args.s)
        table = (divisor_table if what == "divisor-table" else log_convolution_table)(
            s, args.n_max
        )
        rows = [_result("table_head",
                        [float(table.values[n]) for n in range(1, min(args.n_max, 10) + 1)],
                        "dirichlet-sieve", n_max=args.n_max, table_label=table.label)]
        if args.csv_out:
            table.to_csv(args.csv_out)
            rows.append(_result("csv_path", args.csv_out, "dirichlet-sieve"))
        return rows
    if what in ("deriv-series", "lindelof-series"):
        if args.sigma is None:
            raise SystemExit2(f"{what} needs --sigma")
        fn = deriv_moment_series if what == "deriv-series" else lindelof_series
        res = fn(int(args.s), args.sigma, args.n_max)
        return [_result("series", res.value,
                        "log-convolution-series" if what == "deriv-series" else "divisor-series",
                        tail_bound=res.tail_bound, tail_estimate=res.tail_estimate,
                        n_max=res.n_max)]
    if what == "arithmetic-factor":
        res = arithmetic_factor(args.s, args.p_max)
        return [_result("arithmetic_factor", res.value, "euler-product",
                        tail_bound=res.tail_bound, p_max=res.n_max)]
    # conjecture
    if args.sigma is None:
        raise SystemExit2("conjecture needs --sigma")
    return [
        _result("conjectured_moment", conjecture_rhs(args.s, args.sigma, args.p_max),
                "conjectured-asymptotic"),
        _result("rmt_coefficient", rmt_leading_coefficient(args.s),
                "hypergeometric-circle-coefficient"),
    ]


def _compare_routes(args, threads, progress):
    names = [part.strip() for part in args.routes.split(",") if part.strip()]
    if len(names) != 2:
        raise SystemExit2("compare needs exactly two routes")
    u = args.r * args.r
    values = {}
    ses = {}
    for name in names:
        if name == "exact":
            if args.N is None:
                raise SystemExit2("route 'exact' needs --N")
            values[name] = float(moment_exact(args.N, int(args.s), u))
        elif name == "structure":
            if args.N is None:
                raise SystemExit2("route 'structure' needs --N")
            values[name] = float(moment_structure(args.N, int(args.s), u))
        elif name == "closed-s1":
            if args.N is None:
                raise SystemExit2("route 'closed-s1' needs --N")
            if int(args.s) != 1:
                raise SystemExit2("route 'closed-s1' is the s=1 squares sum")
            values[name] = float(sum(j * j * u ** (j - 1) for j in range(1, args.N + 1)))
        elif name == "mc":
            if args.N is None:
                raise SystemExit2("route 'mc' needs --N")
            est = estimate_moment(args.N, args.s, args.r, args.samples, args.seed,
                                  threads=threads, progress=progress)
            values[name] = est.mean
            ses[name] = est.std_error
        elif name == "global":
            values[name] = global_moment(args.s, args.r)
        else:
            raise SystemExit2(f"unknown route {name!r}")

    a, b = (values[name] for name in names)
    absolute = abs(a - b)
    relative = absolute / max(abs(a), abs(b), 1e-300)
    rows = [
        _result(names[0], values[names[0]], _route_provenance(names[0]),
                **({"std_error": ses[names[0]]} if names[0] in ses else {})),
        _result(names[1], values[names[1]], _route_provenance(names[1]),
                **({"std_error": ses[names[1]]} if names[1] in ses else {})),
    ]
    if ses:
        combined_se = math.sqrt(sum(se * se for se in ses.values()))
        normalized = absolute / combined_se if combined_se else math.inf
        passed = normalized <= args.se_multiplier
        rows.append(_result("discrepancy", absolute, "cross-route",
                            relative=relative, se_normalized=normalized,
                            criterion=f"<= {args.se_multiplier} SE", passed=passed))
    else:
        passed = relative <= args.tolerance
        rows.append(_result("discrepancy", absolute, "cross-route",
                            relative=relative,
                            criterion=f"relative <= {args.tolerance}", passed=passed))
    return rows, passed


def _route_provenance(name: str) -> str:
    return {
        "exact": "partition-determinant",
        "structure": "structure-expansion",
        "closed-s1": "squares-geometric-sum",
        "mc": "monte-carlo-haar",
        "global": "hypergeometric-global-limit",
    }[name]


def _run_zeros(args, threads, progress):
    estimates = mean_zero_counts(args.N, args.radii, args.samples, args.seed,
                                 threads=threads, progress=progress)
    rows = []
    for r, est in zip(args.radii, estimates):
        rows.append(_result("zero_count", est.mean, "monte-carlo-haar",
                            r=r, std_error=est.std_error, samples=est.samples,
                            seed=est.seed,
                            limit=expected_zero_count(r)))
    return rows


def _emit(report, fmt):
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
        return
    writer_rows = []
    for row in report["results"]:
        value = row["value"]
        if isinstance(value, dict):
            value = value["approx"]
        writer_rows.append((row["label"], value, row["provenance"]))
    print("label,value,provenance")
    for label, value, provenance in writer_rows:
        print(f"{label},{value!r},{provenance}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        threads = args.threads or default_thread_count()
        progress = _progress_printer(args.progress)
        passed = True
        if args.command == "exact":
            results = _run_exact(args, threads)
        elif args.command == "asympt":
            results = _run_asympt(args)
        elif args.command == "mc":
            results = _run_mc(args, threads, progress)
        elif args.command == "zeta":
            results = _run_zeta(args)
        elif args.command == "compare":
            results, passed = _compare_routes(args, threads, progress)
        else:
            results = _run_zeros(args, threads, progress)
    except SystemExit2 as exc:
        print(str(exc), file=sys.stderr)
        return USAGE_EXIT
    except CapabilityError as exc:
        print(f"capability limit: {exc}", file=sys.stderr)
        return CAPABILITY_EXIT
    except (ValueError, ZeroDivisionError, argparse.ArgumentTypeError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return USAGE_EXIT

    config = {key: _jsonable(value) for key, value in vars(args).items()}
    report = {
        "command": args.command,
        "config": config,
        "library_version": __version__,
        "results": results,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    _emit(report, args.format)
    return 0 if passed else COMPARISON_EXIT


def _jsonable(value):
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


if __name__ == "__main__":
    sys.exit(main())
