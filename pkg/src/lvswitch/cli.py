"""Command-line entry point: ``lvswitch <subcommand> [options]``.

Primary output (JSON or CSV) goes to ``--out`` or stdout. A run manifest with
the resolved configuration, seed, version and duration is written next to it
as ``<out>.manifest.json``, or to stderr when writing to stdout, so the
primary output stays byte-reproducible.

Exit codes: 0 success, 2 input error, 3 numerical failure, 4 validation failure.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .boundary import DiracBoundary, boundary_measure, density_table
from .envmodel import (SwitchRates, bracket_condition, classify, interval_I, interval_J,
                       jointly_favorable, load_pair, u_to_s)
from .errors import InputError, LVSwitchError, NotBothFavorable
from .golden import run_golden
from .invasion import classify_outcome, frequency_limits, sign_sweep, trace_zero_set
from .pdmp import SimConfig, extinction_ensemble, occupation_histogram, simulate

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_VALIDATION = 0, 2, 3, 4


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "nan" if math.isnan(v) else f"{float(v):.16e}"
    return "" if v is None else str(v)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _rates(args, pair) -> SwitchRates:
    st = args.s is not None or args.u is not None or args.t is not None
    raw = args.lambda0 is not None or args.lambda1 is not None
    if st and raw:
        raise InputError("give either --s/--t or --lambda0/--lambda1, not both")
    if st:
        if args.s is not None and args.u is not None:
            raise InputError("--s and --u are alternatives")
        if (args.s is None and args.u is None) or args.t is None:
            raise InputError("--s (or --u) and --t must be given together")
        if args.u is not None:
            if not 0.0 < args.u < 1.0:
                raise InputError(f"--u must lie in (0, 1), got {args.u!r}")
            return SwitchRates.from_st(float(u_to_s(pair, args.u)), args.t)
        return SwitchRates.from_st(args.s, args.t)
    if raw:
        if args.lambda0 is None or args.lambda1 is None:
            raise InputError("--lambda0 and --lambda1 must be given together")
        return SwitchRates(args.lambda0, args.lambda1)
    raise InputError("switching rates required: --s/--t or --lambda0/--lambda1")


def _rates_dict(r: SwitchRates) -> dict:
    return {"lambda0": r.lambda0, "lambda1": r.lambda1, "s": r.s, "t": r.t}


def _grid(spec: str, log: bool) -> np.ndarray:
    try:
        lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise InputError(f"grid must look like LO:HI:N, got {spec!r}") from None
    if n < 1:
        raise InputError("grid size must be >= 1")
    if log:
        if lo <= 0 or hi <= 0:
            raise InputError("log grid bounds must be positive")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def _sim_config(args) -> SimConfig:
    return SimConfig(ode_rel_tol=args.rtol, ode_abs_tol=args.atol, max_step=args.max_step,
                     record_dt=args.record_dt)


# -- subcommands ---------------------------------------------------------------------
# Each returns (primary output text, extra manifest fields).


def cmd_classify(args):
    pair = load_pair(args.pair)
    envs = []
    for i, env in enumerate((pair.env0, pair.env1)):
        reg = classify(env)
        envs.append({"index": i, "kind": reg.kind.value, "favorable_to_x": env.favorable_to_x,
                     "interior_equilibrium": list(reg.interior_eq) if reg.interior_eq else None,
                     "boundary_eq_x": list(reg.boundary_eq_x), "boundary_eq_y": list(reg.boundary_eq_y)})
    return _json({"environments": envs, "both_favorable_to_x": pair.both_favorable_to_x}), {}


def cmd_intervals(args):
    pair = load_pair(args.pair)
    iv, jv = interval_I(pair), interval_J(pair)
    try:
        joint = jointly_favorable(pair)
    except NotBothFavorable:
        joint = None
    br = bracket_condition(pair)
    doc = {"I": list(iv.interval) if iv.interval else None,
           "J": list(jv.interval) if jv.interval else None,
           "I_detail": iv.to_dict(), "J_detail": jv.to_dict(),
           "jointly_favorable": joint,
           "bracket_condition": {"holds": br.holds, "rate_ratio": br.rate_ratio,
                                 "ac_ratio": br.ac_ratio, "bd_ratio": br.bd_ratio}}
    return _json(doc), {}


def cmd_rates(args):
    pair = load_pair(args.pair)
    rates = _rates(args, pair)
    rep = classify_outcome(pair, rates)
    doc = rep.to_dict()
    doc["rates"] = _rates_dict(rates)
    low_y, high_y = frequency_limits(pair, rates.s, "y")
    low_x, high_x = frequency_limits(pair, rates.s, "x")
    doc["frequency_limits"] = {"y": {"low_t": low_y, "high_t": high_y},
                               "x": {"low_t": low_x, "high_t": high_x}}
    return _json(doc), {"rates": _rates_dict(rates)}


def cmd_sweep(args):
    pair = load_pair(args.pair)
    cells = sign_sweep(pair, _grid(args.s_grid, False), _grid(args.t_grid, True), threads=args.threads)
    rows = [(c.s, c.t, c.lambda_x, c.lambda_y, c.outcome) for c in cells]
    errors = [f"s={c.s!r} t={c.t!r}: {c.error}" for c in cells if c.error]
    return _csv(("s", "t", "lambda_x", "lambda_y", "outcome"), rows), {"cell_errors": errors}


def cmd_zeroset(args):
    pair = load_pair(args.pair)
    samples = None
    if args.s_grid:
        samples = _grid(args.s_grid, False)
    curve = trace_zero_set(pair, samples, t_bounds=(args.t_min, args.t_max))
    rows = [(p.s, p.t if p.t is not None else math.nan, p.resolved) for p in curve.samples]
    return _csv(("s", "t_of_s", "resolved"), rows), {"interval_I": list(curve.interval)}


def cmd_boundary(args):
    pair = load_pair(args.pair)
    rates = _rates(args, pair)
    bm = boundary_measure(pair, rates, args.face)
    if isinstance(bm, DiracBoundary):
        return _json({"kind": "dirac", "face": bm.face, "p": bm.p, "mass0": 1 - bm.nu1,
                      "mass1": bm.nu1}), {"rates": _rates_dict(rates)}
    table = density_table(bm, args.points)
    return _csv(("x", "h0", "h1", "marginal"), table.tolist()), {
        "rates": _rates_dict(rates), "mass0": bm.mass0, "mass1": bm.mass1,
        "support": [bm.p_lo, bm.p_hi]}


def _run_sim(args):
    pair = load_pair(args.pair)
    rates = _rates(args, pair)
    cfg = _sim_config(args)
    traj = simulate(pair, rates, args.x0, args.y0, args.regime0, args.horizon, args.seed, cfg)
    return pair, rates, cfg, traj


def cmd_simulate(args):
    pair, rates, cfg, traj = _run_sim(args)
    if args.svg:
        from .plotting import phase_plot_svg

        phase_plot_svg(pair, traj.x, traj.y, traj.regime, args.svg)
    rows = zip(traj.t, traj.x, traj.y, traj.regime)
    return _csv(("t", "x", "y", "regime"), rows), {
        "rates": _rates_dict(rates), "sim_config": cfg.to_dict(), "jump_count": traj.n_jumps,
        "accepted_steps": traj.steps}


def cmd_occupation(args):
    pair, rates, cfg, traj = _run_sim(args)
    window = (args.window_start, args.horizon) if args.window_start is not None else None
    hist = occupation_histogram(traj, bins=(args.bins, args.bins), window=window, pair=pair)
    return _csv(("regime", "x_lo", "x_hi", "y_lo", "y_hi", "mass"), hist.rows()), {
        "rates": _rates_dict(rates), "sim_config": cfg.to_dict(), "jump_count": traj.n_jumps}


def cmd_ensemble(args):
    pair = load_pair(args.pair)
    rates = _rates(args, pair)
    cfg = _sim_config(args)
    rep = extinction_ensemble(pair, rates, args.x0, args.y0, args.regime0, args.reps, args.horizon,
                              args.seed, cfg, threads=args.threads)
    doc = rep.to_dict()
    doc["rates"] = _rates_dict(rates)
    return _json(doc), {"rates": _rates_dict(rates), "sim_config": cfg.to_dict()}


def cmd_validate(args):
    checks = run_golden()
    lines = [f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}" for c in checks]
    n_fail = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - n_fail}/{len(checks)} golden checks passed")
    return "\n".join(lines) + "\n", {"failed": n_fail}


# -- parser ---------------------------------------------------------------------------


def _add_pair(p):
    p.add_argument("--pair", required=True, help="JSON file with env0/env1 parameter objects")


def _add_rates(p):
    g = p.add_argument_group("switching rates")
    g.add_argument("--s", type=float, help="long-run fraction of time in regime 1")
    g.add_argument("--u", type=float,
                   help="alternative to --s: weight of environment 1 in the averaged x-equation")
    g.add_argument("--t", type=float, help="total switching intensity lambda0 + lambda1")
    g.add_argument("--lambda0", type=float, help="jump rate out of regime 0")
    g.add_argument("--lambda1", type=float, help="jump rate out of regime 1")


def _add_sim(p, horizon):
    p.add_argument("--x0", type=float, default=0.5)
    p.add_argument("--y0", type=float, default=0.5)
    p.add_argument("--regime0", type=int, choices=(0, 1), default=0)
    p.add_argument("--horizon", type=float, default=horizon)
    p.add_argument("--record-dt", type=float, default=SimConfig.record_dt)
    p.add_argument("--rtol", type=float, default=SimConfig.ode_rel_tol)
    p.add_argument("--atol", type=float, default=SimConfig.ode_abs_tol)
    p.add_argument("--max-step", type=float, default=SimConfig.max_step)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lvswitch", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="worker cap for sweeps and ensembles")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="equilibrium type of each environment")
    _add_pair(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("intervals", parents=[common], help="intervals I and J of mixing weights")
    _add_pair(p)
    p.set_defaults(func=cmd_intervals)

    p = sub.add_parser("rates", parents=[common], help="both invasion rates and the predicted outcome")
    _add_pair(p)
    _add_rates(p)
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("sweep", parents=[common], help="invasion-rate signs over an (s, t) grid")
    _add_pair(p)
    p.add_argument("--s-grid", default="0.1:0.9:9", help="LO:HI:N, linear")
    p.add_argument("--t-grid", default="0.1:1000:9", help="LO:HI:N, log-spaced")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("zeroset", parents=[common], help="switching intensity where the y rate vanishes")
    _add_pair(p)
    p.add_argument("--s-grid", help="LO:HI:N samples (default: 21 points inside I)")
    p.add_argument("--t-min", type=float, default=1e-3)
    p.add_argument("--t-max", type=float, default=1e6)
    p.set_defaults(func=cmd_zeroset)

    p = sub.add_parser("boundary", parents=[common], help="density table of the boundary law")
    _add_pair(p)
    _add_rates(p)
    p.add_argument("--face", choices=("x", "y"), default="y", help="absent species")
    p.add_argument("--points", type=int, default=201)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("simulate", parents=[common], help="sampled trajectory as CSV")
    _add_pair(p)
    _add_rates(p)
    _add_sim(p, 200.0)
    p.add_argument("--svg", help="also write a phase-plane SVG to this path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("occupation", parents=[common], help="occupation histogram of one trajectory")
    _add_pair(p)
    _add_rates(p)
    _add_sim(p, 2000.0)
    p.add_argument("--bins", type=int, default=60)
    p.add_argument("--window-start", type=float, help="only count time after this instant")
    p.set_defaults(func=cmd_occupation)

    p = sub.add_parser("ensemble", parents=[common], help="Monte Carlo extinction frequencies")
    _add_pair(p)
    _add_rates(p)
    _add_sim(p, 2000.0)
    p.add_argument("--reps", type=int, default=100)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("validate", parents=[common], help="run the built-in golden checks")
    p.set_defaults(func=cmd_validate)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        text, extra = args.func(args)
    except InputError as exc:
        print(f"lvswitch {args.command}: input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LVSwitchError as exc:
        print(f"lvswitch {args.command}: numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _emit(text, args.out)
    config = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = {"command": args.command, "argv": argv, "config": config, "seed": args.seed,
                "version": __version__, "duration_s": time.perf_counter() - start, **extra}
    if args.out:
        Path(args.out + ".manifest.json").write_text(_json(manifest))
    else:
        sys.stderr.write(_json(manifest))
    if args.command == "validate" and extra["failed"]:
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
