"""Command-line interface: ``zealotdyn <subcommand> [flags]``.

Tables go to ``--out`` (or stdout) as CSV with a header row, or as JSON
with ``--format json``.  Column orders:

    analyze     t, k, prob, expectation
    stationary  k, prob
    mixing      n1, eps, t_mix, t_low, t_high, evaluations
    simulate    time, state
    ensemble    t, mean, std, ci_low, ci_high, tv_gap
    plan        z1_star_real, z1_star, D, feasible_exact, achieved_lambda, capped

``figures`` writes one file per figure panel into the ``--out`` directory.
Set ``ZD_LOG`` (e.g. ``ZD_LOG=info``) for progress messages on stderr.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from . import figures
from .equilibrium import equilibrium_expectation, stationary_distribution
from .mixing import DEFAULT_EPS, DEFAULT_RESOLUTION, MixingNotReached, mixing_time, total_variation
from .model import InvalidParams, new_model
from .montecarlo import SIMULATORS, confidence_interval, run_ensemble
from .planner import PlanRequest, optimal_injection
from .transient import transient_distribution

log = logging.getLogger("zealotdyn")


class UsageError(Exception):
    pass


def _times(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad time list {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("time list is empty")
    if min(values) < 0:
        raise argparse.ArgumentTypeError("times must be non-negative")
    return values


def _model(args):
    missing = [f for f in ("n", "z0", "z1", "n1") if getattr(args, f) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + f for f in missing))
    return new_model(args.n, args.z0, args.z1, args.n1)


def _emit(args, header, rows):
    figures.write_table(args.out or sys.stdout, header, rows, args.format)


def cmd_analyze(args):
    p = _model(args)
    rows = []
    for t in args.times:
        dist = transient_distribution(p, t)
        mean = dist.mean()
        rows.extend((t, k, q, mean) for k, q in zip(dist.states, dist.probs))
    _emit(args, ["t", "k", "prob", "expectation"], rows)


def cmd_stationary(args):
    p = _model(args)
    pi = stationary_distribution(p)
    log.info("equilibrium expectation %.12g", equilibrium_expectation(p))
    _emit(args, ["k", "prob"], zip(pi.states, pi.probs))


def cmd_mixing(args):
    p = _model(args)
    res = mixing_time(p, args.eps, args.resolution)
    _emit(args, ["n1", "eps", "t_mix", "t_low", "t_high", "evaluations"],
          [(p.n1, res.eps, res.t_mix, *res.bracket, res.evaluations)])


def cmd_simulate(args):
    p = _model(args)
    traj = SIMULATORS[args.simulator](p, args.horizon, args.seed)
    _emit(args, ["time", "state"], zip(traj.times, traj.states))


def cmd_ensemble(args):
    p = _model(args)
    stats = run_ensemble(p, args.m, args.times, args.seed, args.simulator, args.jobs)
    ci = confidence_interval(stats, args.phi)
    rows = []
    for j, t in enumerate(stats.snapshot_times):
        gap = total_variation(stats.empirical_dists[j], transient_distribution(p, t))
        rows.append((t, stats.mean[j], stats.std[j], ci[j, 0], ci[j, 1], gap))
    _emit(args, ["t", "mean", "std", "ci_low", "ci_high", "tv_gap"], rows)


def cmd_plan(args):
    if args.z0 is None or args.lam is None:
        raise UsageError("plan needs --z0 and --lambda")
    req = PlanRequest(z0=args.z0, lam=args.lam, alpha=args.alpha, z_max=args.zmax,
                      mode=args.mode, n=args.n)
    out = optimal_injection(req)
    row = out.as_row()
    for key, value in row.items():
        print(f"{key}: {figures.fmt(value) or 'unbounded'}")
    if out.conversion_ok is not None:
        print(f"conversion_ok: {figures.fmt(out.conversion_ok)}")
    if args.out:
        figures.write_table(args.out, list(row), [list(row.values())], args.format)


def cmd_figures(args):
    written = figures.write_figures(args.out or "figures", m=args.m, eps=args.eps,
                                    seed=args.seed, jobs=args.jobs, fmt_name=args.format)
    for path in written:
        print(path)


COMMANDS = {
    "analyze": cmd_analyze,
    "stationary": cmd_stationary,
    "mixing": cmd_mixing,
    "simulate": cmd_simulate,
    "ensemble": cmd_ensemble,
    "plan": cmd_plan,
    "figures": cmd_figures,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--z0", type=int)
    common.add_argument("--z1", type=int)
    common.add_argument("--n1", type=int)
    common.add_argument("--out", help="output file (directory for figures)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)

    parser = argparse.ArgumentParser(prog="zealotdyn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", parents=[common], help="transient distribution and mean")
    sp.add_argument("--times", type=_times, required=True)

    sub.add_parser("stationary", parents=[common], help="stationary distribution")

    sp = sub.add_parser("mixing", parents=[common], help="mixing time")
    sp.add_argument("--eps", type=float, default=DEFAULT_EPS)
    sp.add_argument("--resolution", type=float, default=DEFAULT_RESOLUTION)

    sp = sub.add_parser("simulate", parents=[common], help="one sample path")
    sp.add_argument("--horizon", type=float, required=True)
    sp.add_argument("--simulator", choices=sorted(SIMULATORS), default="agents")

    sp = sub.add_parser("ensemble", parents=[common], help="Monte Carlo summary")
    sp.add_argument("--times", type=_times, required=True)
    sp.add_argument("--m", type=int, default=1000)
    sp.add_argument("--phi", type=float, default=1.96)
    sp.add_argument("--simulator", choices=sorted(SIMULATORS), default="aggregate")

    sp = sub.add_parser("plan", parents=[common], help="optimal zealot injection")
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--zmax", type=float)
    sp.add_argument("--mode", choices=["inject", "convert"], default="inject")

    sp = sub.add_parser("figures", parents=[common], help="data behind figures 1-5")
    sp.add_argument("--m", type=int, default=1000)
    sp.add_argument("--eps", type=float, default=DEFAULT_EPS)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("ZD_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("zealotdyn: error: --jobs must be >= 1", file=sys.stderr)
        return 2
    try:
        COMMANDS[args.command](args)
    except (UsageError, InvalidParams, ValueError, MixingNotReached) as exc:
        print(f"zealotdyn: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"zealotdyn: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
