"""Plot-ready data for the reference experiments.

Every writer emits a header row and a fixed column order.  Floats are
written with 12 significant digits.
"""
from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

import numpy as np

from .equilibrium import equilibrium_expectation, stationary_distribution
from .mixing import DEFAULT_EPS, mixing_time, total_variation
from .model import ModelParams
from .montecarlo import agent_snapshots, confidence_interval, replica_seed, run_ensemble, simulate_agents
from .planner import exact_injection, feasibility_border, max_alpha_for_conversion
from .transient import transient_distribution

log = logging.getLogger(__name__)

GRID_N = 100
GRID_ZEALOTS = [(10, 5), (20, 25)]
GRID_N1 = [25, 75]
DIST_TIMES = [2.0, 4.0, 6.0, 20.0]
MEAN_TIMES = [float(t) for t in range(0, 42, 2)]
CONSENSUS = ModelParams(50, 5, 0, 10)
EQUILIBRIUM = ModelParams(50, 5, 2, 10)
CONSENSUS_RUNS = 100
AGENT_TIMES = [0.0, 5.0, 10.0, 20.0, 50.0]
FIG5_LAMBDA = 0.5
FIG5_Z0 = range(1, 101)
FIG5_ALPHAS = np.logspace(-2, 0, 100)


def fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.12g}"


def write_table(dest, header, rows, fmt_name="csv"):
    """Write ``rows`` to a path or an open text stream."""
    rows = [list(r) for r in rows]
    if hasattr(dest, "write"):
        _dump(dest, header, rows, fmt_name)
        return dest
    path = Path(dest)
    with open(path, "w", newline="") as fh:
        _dump(fh, header, rows, fmt_name)
    return path


def _native(v):
    if isinstance(v, np.generic):
        v = v.item()
    if isinstance(v, float) and not np.isfinite(v):
        return None
    return v


def _dump(fh, header, rows, fmt_name):
    if fmt_name == "json":
        json.dump([{h: _native(v) for h, v in zip(header, r)} for r in rows], fh, indent=1)
        fh.write("\n")
    else:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([fmt(v) for v in r] for r in rows)


def grid_params():
    for z0, z1 in GRID_ZEALOTS:
        for n1 in GRID_N1:
            yield ModelParams(GRID_N, z0, z1, n1)


def consensus_rows(seed: int, runs: int = CONSENSUS_RUNS):
    horizon = 50.0 * CONSENSUS.n
    rows = []
    for i in range(runs):
        s = replica_seed(seed, i)
        traj = simulate_agents(CONSENSUS, horizon, s)
        rows.append((i, s, traj.times[-1], traj.final_state))
    return rows


def agent_rows(p: ModelParams, seed: int):
    snaps = agent_snapshots(p, AGENT_TIMES, seed)
    for t in AGENT_TIMES:
        for user, x in enumerate(snaps[t]):
            yield t, user, int(x), int(user < p.z0 + p.z1)


def fig5_rows(n: int = GRID_N, lam: float = FIG5_LAMBDA):
    for z0 in FIG5_Z0:
        for a in FIG5_ALPHAS:
            z1 = exact_injection(z0, lam, a)
            feasible = z1 is not None
            yield z0, a, z1, feasible, feasible and z0 + z1 <= n


def fig5_frontier_rows(n: int = GRID_N, lam: float = FIG5_LAMBDA):
    for z0 in FIG5_Z0:
        yield z0, feasibility_border(z0, lam), max_alpha_for_conversion(n, z0, lam)


def write_figures(out_dir, m=1000, eps=DEFAULT_EPS, seed=0, jobs=1, fmt_name="csv"):
    """Write the data behind all five figures into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ext = "json" if fmt_name == "json" else "csv"
    written = []

    def emit(name, header, rows):
        written.append(write_table(out / f"{name}.{ext}", header, rows, fmt_name))

    # consensus regime
    emit("fig1_final", ["replica", "seed", "final_time", "final_state"], consensus_rows(seed))
    traj = simulate_agents(CONSENSUS, 50.0 * CONSENSUS.n, replica_seed(seed, 0))
    emit("fig1_trajectory", ["time", "state"], zip(traj.times, traj.states))
    emit("fig1_agents", ["t", "user", "opinion", "zealot"], agent_rows(CONSENSUS, replica_seed(seed, 0)))

    # two-sided zealots
    traj = simulate_agents(EQUILIBRIUM, 200.0, replica_seed(seed, 0))
    emit("fig2_trajectory", ["time", "state"], zip(traj.times, traj.states))
    emit("fig2_agents", ["t", "user", "opinion", "zealot"], agent_rows(EQUILIBRIUM, replica_seed(seed, 0)))

    dist_rows, mean_rows, mix_rows = [], [], []
    times = sorted(set(DIST_TIMES) | set(MEAN_TIMES))
    for idx, p in enumerate(grid_params()):
        log.info("ensemble for %s", p)
        stats = run_ensemble(p, m, times, base_seed=seed + idx, simulator="agents", jobs=jobs)
        ci = confidence_interval(stats)
        pi = stationary_distribution(p)
        theory = {t: transient_distribution(p, t) for t in times}
        for j, t in enumerate(times):
            if t in DIST_TIMES:
                emp = stats.empirical_dists[j]
                for k, th, e, s in zip(p.space.states, theory[t].probs, emp.probs, pi.probs):
                    dist_rows.append((p.z0, p.z1, p.n1, t, k, th, e, s))
            if t in MEAN_TIMES:
                mean_rows.append((
                    p.z0, p.z1, p.n1, t, stats.mean[j], stats.std[j], ci[j, 0], ci[j, 1],
                    theory[t].mean(), equilibrium_expectation(p),
                    total_variation(stats.empirical_dists[j], theory[t]),
                ))
        mix = mixing_time(p, eps)
        mix_rows.append((p.z0, p.z1, p.n1, eps, mix.t_mix))
    emit("fig3_distributions",
         ["z0", "z1", "n1", "t", "k", "theory", "empirical", "stationary"], dist_rows)
    emit("fig4_means",
         ["z0", "z1", "n1", "t", "mean", "std", "ci_low", "ci_high", "theory", "equilibrium", "tv_gap"],
         mean_rows)
    emit("fig4_mixing", ["z0", "z1", "n1", "eps", "t_mix"], mix_rows)

    emit("fig5_grid", ["z0", "alpha", "z1_star", "feasible", "conversion_ok"], fig5_rows())
    emit("fig5_frontier", ["z0", "alpha_border", "alpha_max_conversion"], fig5_frontier_rows())
    return written
