"""Command-line interface: every verification and computation as a
reproducible, scriptable run.

Subcommands emit CSV tables for sweeps and JSON for structured reports; JSON
reports embed the defaults table so a run is reproducible from its output.
Exit codes: 0 success, 1 verification FAIL, 2 config error, 3 numeric
failure, 4 hypothesis violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict

from .correlation import (
    CorrelationQuery,
    analytic_correlation,
    analytic_covariance,
    correlation_decay_check,
    covariance_coefficients,
    least_integer_above,
    variance_scaling_check,
    zonal_decay_bound,
)
from .defaults import DEFAULTS
from .errors import DecayHypothesisError, DegreeCapExceeded, NumericFailure
from .fields import monte_carlo_correlation, points_cos_angle
from .frames import build_grid, estimate_frame_bounds
from .kernels import (
    NeedletProfile,
    choose_lmax,
    kernel_eval,
    localization_check,
    make_kernel,
)
from .spectra import (
    load_spectrum_csv,
    load_spectrum_json,
    power_spectrum,
    spectrum_eval,
    verify_derivative_decay,
    verify_envelope,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_HYPOTHESIS = 4


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"bad numeric list {text!r}") from exc


def _grid_spec(text: str) -> list[float]:
    """Either 'start:stop:count' (inclusive linspace) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid spec {text!r} must be start:stop:count")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 2 or stop <= start:
            raise ValueError(f"bad grid spec {text!r}")
        step = (stop - start) / (count - 1)
        return [start + step * i for i in range(count)]
    return _floats(text)


def _int_pair(text: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"range {text!r} must be min:max")
    return int(parts[0]), int(parts[1])


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)


def _table(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json_doc(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _resolve_spectrum(args):
    if getattr(args, "spectrum", None):
        if args.spectrum.endswith(".csv"):
            if args.alpha is None:
                raise ValueError("tabulated CSV spectra need --alpha for the declared decay")
            return load_spectrum_csv(args.spectrum, args.alpha)
        return load_spectrum_json(args.spectrum)
    if args.alpha is None:
        raise ValueError("give either --alpha (power law) or --spectrum FILE")
    return power_spectrum(args.alpha)


def _profile(args) -> NeedletProfile:
    return NeedletProfile(args.r, args.f0)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_kernel(args) -> int:
    profile = _profile(args)
    theta_min = DEFAULTS["theta_min"]
    thetas = [max(th, theta_min) for th in _grid_spec(args.theta)]
    rows = []
    for t in _floats(args.t):
        spec = make_kernel(profile, t, args.eps_tail)
        for th in thetas:
            rows.append((t, th, kernel_eval(spec, math.cos(th))))
    _emit(_table(["t", "theta", "value"], rows), args.output)
    return EXIT_OK


def cmd_correlation(args) -> int:
    profile = _profile(args)
    spectrum = _resolve_spectrum(args)
    ts = _floats(args.t)
    if args.d is not None:
        cos_gammas = [math.cos(d) for d in _floats(args.d)]
    else:
        cos_gammas = _floats(args.cos_gamma)

    exponent = 4.0 * profile.r - spectrum.alpha + 2.0
    n_exp = least_integer_above(2.0 * profile.r - spectrum.alpha / 2.0 + 1.0)
    if args.fit and not 4 * profile.r + 2 > spectrum.alpha:
        raise DecayHypothesisError(
            f"decay fit needs 4r + 2 > alpha; got 4*{profile.r} + 2 <= {spectrum.alpha}")

    rows = []
    for t in ts:
        for cg in cos_gammas:
            q = CorrelationQuery(profile, spectrum, t, cg)
            cov = analytic_covariance(q, args.eps_tail)
            cor = analytic_correlation(q, args.eps_tail)
            d = q.geodesic_distance
            bound = abs(cor) * d ** (2 * n_exp) * t ** -exponent
            rows.append((t, cg, cov, cor, exponent, n_exp, bound))
    out = _table(["t", "cos_gamma", "covariance", "correlation",
                  "predicted_exponent", "N", "bound_constant"], rows)

    if args.fit:
        reports = []
        for cg in cos_gammas:
            if cg == 1.0:
                continue
            rep = correlation_decay_check(profile, spectrum, cg, ts, args.eps_tail)
            reports.append({"cos_gamma": cg, **asdict(rep)})
        out += "\n" + _json_doc({"defaults": DEFAULTS, "reports": reports})
    _emit(out, args.output)
    return EXIT_OK


def cmd_simulate(args) -> int:
    profile = _profile(args)
    spectrum = _resolve_spectrum(args)
    point_x = (math.pi / 2.0, 0.0)
    rows = []
    worst = 0.0
    for t in _floats(args.t):
        for d in _floats(args.d):
            point_y = (math.pi / 2.0, d)
            est, se = monte_carlo_correlation(profile, spectrum, t, point_x, point_y,
                                              args.replicas, args.seed, args.eps_tail)
            q = CorrelationQuery(profile, spectrum, t, points_cos_angle(point_x, point_y))
            true = analytic_correlation(q, args.eps_tail)
            z = 0.0 if se == 0.0 and est == true else (est - true) / se
            worst = max(worst, abs(z))
            rows.append((t, d, args.replicas, args.seed, est, se, true, z))
    _emit(_table(["t", "d", "replicas", "seed", "estimate", "stderr",
                  "analytic", "z"], rows), args.output)
    if worst > 5.0:
        print(f"FAIL: |z| = {worst:.2f} > 5; estimator and analytic value disagree "
              "beyond statistics", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    profile = _profile(args)
    spectrum = _resolve_spectrum(args)
    t_grid = _floats(args.t_grid)
    var_grid = _floats(args.variance_t_grid)
    window = _int_pair(args.window)

    mu = 4.0 * profile.r - spectrum.alpha
    sups = []
    n_exp = None
    for t in t_grid:
        lmax = choose_lmax(profile, t, args.eps_tail, squared=True)
        coeffs = covariance_coefficients(profile, spectrum, t, lmax)
        n_exp, sup = zonal_decay_bound(coeffs, mu)
        sups.append(sup)
    ratio = max(sups) / min(sups) if min(sups) > 0 else math.inf
    series_bound = {
        "mu": mu,
        "N": n_exp,
        "t_grid": t_grid,
        "sups": sups,
        "ratio": ratio,
        "passed": math.isfinite(ratio) and ratio <= DEFAULTS["stability_ratio"],
    }

    variance = variance_scaling_check(profile, spectrum, var_grid, args.eps_tail)
    localization = localization_check(profile, t_grid, args.loc_exponent, args.eps_tail)
    envelope = verify_envelope(spectrum, args.envelope_lmax)
    derivative = verify_derivative_decay(spectrum, args.k_max, window)

    checks = {
        "series_decay_bound": series_bound,
        "variance_scaling": asdict(variance),
        "localization": asdict(localization),
        "envelope": asdict(envelope),
        "derivative_decay": asdict(derivative),
    }
    passed = all(c["passed"] for c in checks.values())
    report = {
        "defaults": DEFAULTS,
        "config": {
            "r": profile.r,
            "f0": profile.f0,
            "spectrum_family": spectrum.family,
            "alpha": spectrum.alpha,
            "t_grid": t_grid,
            "variance_t_grid": var_grid,
            "loc_exponent": args.loc_exponent,
            "envelope_lmax": args.envelope_lmax,
            "window": list(window),
            "k_max": args.k_max,
        },
        "checks": checks,
        "passed": passed,
    }
    _emit(_json_doc(report), args.output)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_frame(args) -> int:
    profile = _profile(args)
    j_range = _int_pair(args.j_range)
    oversamples = _floats(args.oversample)
    rows = []
    any_ill = False
    for ov in oversamples:
        est = estimate_frame_bounds(profile, args.a, j_range, args.L, oversample=ov)
        any_ill = any_ill or est.ill_conditioned
        rows.append((args.a, ov, args.L, est.a_hat, est.b_hat, est.ratio,
                     est.ill_conditioned))
    _emit(_table(["a", "oversample", "L", "A_hat", "B_hat", "ratio",
                  "ill_conditioned"], rows), args.output)
    if args.export_grid:
        grid_rows = []
        for j in range(j_range[0], j_range[1] + 1):
            grid = build_grid(args.a, j, oversamples[0])
            for k in range(grid.n):
                grid_rows.append((j, k, grid.theta[k], grid.phi[k], grid.weights[k]))
        _emit(_table(["j", "k", "theta", "phi", "weight"], grid_rows), args.export_grid)
    if any_ill:
        print("FAIL: analysis matrix is ill-conditioned on the requested subspace",
              file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_profile_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--r", type=int, required=True, help="profile exponent r >= 1")
    p.add_argument("--f0", default="exponential",
                   help="profile family (exponential|gaussian)")
    p.add_argument("--eps-tail", type=float, default=None,
                   help=f"relative tail for truncation (default {DEFAULTS['eps_tail']})")


def _add_spectrum_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=None,
                   help="power-law decay exponent (alpha > 2)")
    p.add_argument("--spectrum", default=None,
                   help="spectrum file: .json definition or .csv table (needs --alpha)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="needlets",
        description="Needlet kernels, coefficient correlation decay, field "
                    "simulation, and frame bounds on the 2-sphere.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", help="tabulate K_t(cos theta) on a theta grid")
    _add_profile_args(p)
    p.add_argument("--t", required=True, help="comma list of scales")
    p.add_argument("--theta", required=True,
                   help="theta grid: start:stop:count or comma list "
                        "(values below theta_min are clamped)")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("correlation",
                       help="analytic covariance/correlation and decay fit")
    _add_profile_args(p)
    _add_spectrum_args(p)
    p.add_argument("--t", required=True, help="comma list of scales")
    geo = p.add_mutually_exclusive_group(required=True)
    geo.add_argument("--cos-gamma", default=None, help="comma list of inner products")
    geo.add_argument("--d", default=None, help="comma list of geodesic distances")
    p.add_argument("--fit", action="store_true",
                   help="append the decay report as JSON (needs 4r + 2 > alpha)")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_correlation)

    p = sub.add_parser("simulate",
                       help="Monte-Carlo correlation estimates against the analytic value")
    _add_profile_args(p)
    _add_spectrum_args(p)
    p.add_argument("--t", required=True, help="comma list of scales")
    p.add_argument("--d", required=True, help="comma list of geodesic distances")
    p.add_argument("--replicas", type=int, default=4000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify",
                       help="run the full verification suite, JSON report")
    _add_profile_args(p)
    _add_spectrum_args(p)
    p.add_argument("--t-grid", default="0.4,0.2,0.1,0.05",
                   help="scales for the series-bound and localization checks")
    p.add_argument("--variance-t-grid", default="0.2,0.1,0.05,0.025",
                   help="scales for the variance-floor check")
    p.add_argument("--loc-exponent", type=int, default=3,
                   help="spatial decay exponent probed by the localization check")
    p.add_argument("--envelope-lmax", type=int, default=2000)
    p.add_argument("--window", default="10:2000",
                   help="degree window for the derivative-decay check")
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("frame", help="frame-bound estimates over an oversample sweep")
    _add_profile_args(p)
    p.add_argument("--a", type=float, default=2.0, help="dilation a > 1")
    p.add_argument("--L", type=int, default=16, help="band limit")
    p.add_argument("--oversample", default="1,2,4", help="comma list of oversample factors")
    p.add_argument("--j-range", default="-6:0", help="scale index range min:max")
    p.add_argument("--export-grid", default=None,
                   help="write the point sets (first oversample) as CSV here")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_frame)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    try:
        return args.func(args)
    except DecayHypothesisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (DegreeCapExceeded, NumericFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
