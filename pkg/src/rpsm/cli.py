"""Command-line interface: ``rpsm summary | sweep | self-check | mc``.

Exit codes: 0 success, 1 validation or parse error, 2 self-check failure.
Command-line flags override config-file values, which override defaults.
``RPSM_THREADS`` caps the number of worker threads used by sweeps (0 = auto).
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, replace
from datetime import datetime, timezone

from . import __version__, analytic, interferometer as ifm, kernel as K, mc, oracle
from .analytic import ExperimentParams, Scheme
from .config import SweepSpec, parse_config, validate
from .errors import DegenerateDarkPort, RpsmError

CSV_COLUMNS = (
    "scheme", "theta", "beta", "loss", "epsilon", "n", "p_d1", "p_c1", "gamma1",
    "P_d", "Gamma", "residual", "P_V", "theta_tilde", "eta", "R_tilde",
    "sensitivity_canonical", "sensitivity_paper_convention", "status",
)
JSON_EXTRA = ("gamma_external", "aux", "kappa_n")

EXIT_OK, EXIT_INVALID, EXIT_SELF_CHECK = 0, 1, 2


# --- grid evaluation -----------------------------------------------------------

def _to_rad(spec: SweepSpec, value: float) -> float:
    return math.radians(value) if spec.angle_unit == "deg" else value


def grid_points(spec: SweepSpec) -> list[dict]:
    """Parameter points in row-major order over the swept axes."""
    axes = [(a.name, a.points()) for a in spec.axes]
    points = []
    for combo in itertools.product(*(pts for _, pts in axes)):
        point = {"theta": spec.theta, "beta": spec.beta, "loss": spec.loss, "n": spec.rounds}
        point.update(zip((name for name, _ in axes), combo))
        points.append(point)
    return points


def params_for(spec: SweepSpec, point: dict) -> ExperimentParams:
    return ExperimentParams(
        theta_rad=_to_rad(spec, point["theta"]),
        beta_rad=_to_rad(spec, point["beta"]),
        loss_L=point["loss"],
        epsilon_rad=_to_rad(spec, spec.epsilon),
        photons_N=spec.photons,
        rounds_n=point["n"],
        scheme=spec.scheme,
    )


def summary_row(params: ExperimentParams) -> dict:
    row = {
        "scheme": params.scheme.value,
        "theta": params.theta_rad,
        "beta": params.beta_rad,
        "loss": params.loss_L,
        "epsilon": params.epsilon_rad,
        "n": params.rounds_n,
    }
    try:
        s = analytic.evaluate(params)
    except DegenerateDarkPort:
        row.update({c: None for c in CSV_COLUMNS[6:-1] + JSON_EXTRA})
        row["status"] = "degenerate"
        return row
    row.update({
        "p_d1": s.p_d1, "p_c1": s.p_c1, "gamma1": s.gamma_1, "P_d": s.P_d,
        "Gamma": s.Gamma, "residual": s.residual, "P_V": s.P_V,
        "theta_tilde": s.theta_tilde, "eta": s.eta, "R_tilde": s.snr_enhancement,
        "sensitivity_canonical": s.sensitivity,
        "sensitivity_paper_convention": s.sensitivity_paper,
        "gamma_external": s.gamma_external, "aux": s.aux, "kappa_n": s.kappa_n,
        "status": "ok",
    })
    return row


def _threads() -> int | None:
    raw = os.environ.get("RPSM_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        return None
    return n if n > 0 else None


def run_sweep(spec: SweepSpec) -> list[dict]:
    """Evaluate every grid point; rows come back in row-major order."""
    params = [params_for(spec, p) for p in grid_points(spec)]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return list(pool.map(summary_row, params))


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if isinstance(value, int):
        return str(value)
    return "%.17g" % value


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    return value


def render_rows(rows: list[dict], fmt: str, timestamp: bool) -> str:
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    if fmt == "json":
        doc = {"generator": f"rpsm {__version__}"}
        if timestamp:
            doc["generated"] = stamp
        doc["columns"] = list(CSV_COLUMNS + JSON_EXTRA)
        doc["rows"] = [{k: _json_value(r[k]) for k in CSV_COLUMNS + JSON_EXTRA} for r in rows]
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    if timestamp:
        buf.write(f"# generated by rpsm {__version__} at {stamp}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([_cell(r[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


# --- self check ----------------------------------------------------------------

SHARED = ("P_d", "Gamma", "gamma_external", "residual", "P_V")


def default_check_points() -> list[ExperimentParams]:
    thetas = (0.05, 0.3, 1.0)
    betas = (0.1, 0.5, 1.5)
    rounds = (1, 2, 10, 1000, analytic.INFINITE)
    pts = []
    for th, be, n in itertools.product(thetas, betas, rounds):
        for L, eps in itertools.product((0.0, 0.1, 0.5), (0.0, 1.0, math.pi)):
            pts.append(ExperimentParams(th, be, L, eps, rounds_n=n, scheme=Scheme.SCHEME_I))
        pts.append(ExperimentParams(th, be, rounds_n=n, scheme=Scheme.SCHEME_II))
        if n == 1:
            pts.append(ExperimentParams(th, be, scheme=Scheme.NO_RECYCLE))
    for scheme in Scheme:
        pts.append(ExperimentParams(0.0, 0.0, scheme=scheme))
    return pts


def _discrepancy(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(b))


def self_check(points: list[ExperimentParams] | None = None, tol: float = 1e-10) -> dict:
    """Compare the closed forms with the pulse-train oracle on a grid of points."""
    points = default_check_points() if points is None else points
    worst = {k: 0.0 for k in SHARED + ("eta", "R_tilde")}
    conservation_analytic = conservation_oracle = composition = 0.0
    checked = degenerate = 0
    degenerate_points = []
    for p in points:
        d1, b1 = ifm.compose_first_pass(p.theta_rad, p.beta_rad)
        composition = max(
            composition,
            K.max_abs_diff(d1, ifm.single_pass_dark(p.theta_rad, p.beta_rad)),
            abs(b1 - ifm.single_pass_bright(p.theta_rad, p.beta_rad)),
        )
        try:
            a = analytic.evaluate(p)
        except DegenerateDarkPort:
            degenerate += 1
            degenerate_points.append({"scheme": p.scheme.value, "theta": p.theta_rad,
                                      "beta": p.beta_rad, "n": _json_value(float(p.rounds_n))})
            continue
        checked += 1
        o = oracle.simulate(p, keep=False)
        sq = oracle.shared_quantities(o)
        for k in SHARED:
            worst[k] = max(worst[k], _discrepancy(sq[k], getattr(a, k)))
        s2 = math.sin(p.theta_rad) ** 2
        if s2 > 0:
            eta_o = sq["P_V"] / s2
            worst["eta"] = max(worst["eta"], _discrepancy(eta_o, a.eta))
            worst["R_tilde"] = max(worst["R_tilde"], _discrepancy(
                math.sqrt(sq["P_d"] * eta_o), a.snr_enhancement))
        if p.scheme is not Scheme.NO_RECYCLE:
            total = a.P_d + a.Gamma + a.gamma_external + a.residual
            conservation_analytic = max(conservation_analytic, abs(total - 1))
            conservation_oracle = max(conservation_oracle, abs(o.bookkeeping - 1))
    failures = [k for k, v in worst.items() if not v <= tol]
    for name, val in (("conservation_analytic", conservation_analytic),
                      ("conservation_oracle", conservation_oracle),
                      ("composition", composition)):
        if not val <= tol:
            failures.append(name)
    return {
        "tol": tol,
        "points_checked": checked,
        "points_degenerate": degenerate,
        "degenerate": degenerate_points,
        "max_discrepancy": worst,
        "max_conservation_residual": {
            "analytic": conservation_analytic, "oracle": conservation_oracle,
        },
        "max_composition_error": composition,
        "failures": failures,
        "status": "PASS" if not failures else "FAIL",
    }


# --- monte carlo -----------------------------------------------------------------

def mc_command(spec: SweepSpec) -> dict:
    params = params_for(spec, grid_points(replace(spec, axes=()))[0])
    est = mc.run_trials(mc.McConfig(params, trials=spec.trials, master_seed=spec.seed))
    return {
        "scheme": params.scheme.value,
        "theta": params.theta_rad,
        "beta": params.beta_rad,
        "loss": params.loss_L,
        "epsilon": params.epsilon_rad,
        "photons": params.photons_N,
        "n": _json_value(float(params.rounds_n)),
        "trials": spec.trials,
        "seed": spec.seed,
        **{k: _json_value(v) for k, v in asdict(est).items()},
    }


# --- argument handling ---------------------------------------------------------

def _add_param_flags(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--scheme", required=required, help="none, scheme1 or scheme2")
    p.add_argument("--theta", type=float, required=required, help="Faraday rotation angle")
    p.add_argument("--beta", type=float, required=required, help="postselection phase")
    p.add_argument("--loss", type=float, help="external loss ratio L in [0,1)")
    p.add_argument("--epsilon", type=float, help="recycling delay phase")
    p.add_argument("--photons", type=float, help="mean photon number N per pulse")
    p.add_argument("--rounds", help="number of passes, or 'inf'")
    p.add_argument("--deg", action="store_true", help="angles are in degrees")


def _spec_from(args, base: SweepSpec) -> SweepSpec:
    updates = {}
    for flag, key in (("scheme", "scheme"), ("theta", "theta"), ("beta", "beta"),
                      ("loss", "loss"), ("epsilon", "epsilon"), ("photons", "photons"),
                      ("rounds", "rounds")):
        val = getattr(args, flag, None)
        if val is not None:
            updates[key] = val
    if getattr(args, "deg", False):
        updates["angle_unit"] = "deg"
    if getattr(args, "format", None):
        updates["output_format"] = args.format
    if getattr(args, "trials", None) is not None:
        updates["trials"] = args.trials
    if getattr(args, "seed", None) is not None:
        updates["seed"] = args.seed
    return validate(replace(base, **updates))


def _load(path: str | None) -> SweepSpec:
    if not path:
        return SweepSpec()
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _emit(text: str, path: str | None) -> None:
    if path and path != "-":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rpsm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rpsm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summary", help="closed-form results at one parameter point")
    _add_param_flags(p, required=True)

    p = sub.add_parser("sweep", help="evaluate a parameter grid and write CSV or JSON")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="output file ('-' for stdout); defaults to output_path")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--no-header-timestamp", action="store_true")
    _add_param_flags(p)

    p = sub.add_parser("self-check", help="closed forms vs pulse-train oracle")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--config", help="check this sweep grid instead of the built-in one")
    p.add_argument("--out")

    p = sub.add_parser("mc", help="Monte Carlo shot-noise estimate")
    p.add_argument("--config")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    _add_param_flags(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "summary":
            spec = _spec_from(args, SweepSpec())
            row = summary_row(params_for(spec, grid_points(spec)[0]))
            _emit(json.dumps({k: _json_value(v) for k, v in row.items()}, indent=1) + "\n", None)
            return EXIT_OK
        if args.command == "sweep":
            spec = _spec_from(args, _load(args.config))
            text = render_rows(run_sweep(spec), spec.output_format,
                               timestamp=not args.no_header_timestamp)
            _emit(text, args.out or spec.output_path)
            return EXIT_OK
        if args.command == "self-check":
            points = None
            if args.config:
                spec = _load(args.config)
                points = [params_for(spec, pt) for pt in grid_points(spec)]
            report = self_check(points, tol=args.tol)
            _emit(json.dumps(report, indent=1, default=_json_value) + "\n", args.out)
            return EXIT_OK if report["status"] == "PASS" else EXIT_SELF_CHECK
        if args.command == "mc":
            spec = _spec_from(args, _load(args.config))
            _emit(json.dumps(mc_command(spec), indent=1) + "\n", args.out)
            return EXIT_OK
    except BrokenPipeError:
        raise
    except (RpsmError, ValueError, OSError) as exc:
        print(f"rpsm: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_INVALID


def entry() -> int:
    try:
        return main()
    except BrokenPipeError:
        # stdout closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(entry())
