"""Agent-level and aggregate simulation of the zealot voter model.

Both simulators return a :class:`Trajectory` of the opinion-1 count,
recorded only when it changes.  Ensembles derive one 64-bit seed per
replica from ``(base_seed, replica index)``, so results do not depend on
how replicas are scheduled across workers.
"""
from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Sequence

import numpy as np

from .model import Distribution, ModelParams, rate_matrix

log = logging.getLogger(__name__)

_CHUNK = 4096


@dataclass(frozen=True)
class Trajectory:
    """Sample path of N1 as ``(time, state)`` change events."""

    times: np.ndarray
    states: np.ndarray
    seed: int
    horizon: float

    @property
    def events(self) -> list[tuple[float, int]]:
        return list(zip(self.times.tolist(), self.states.tolist()))

    @property
    def final_state(self) -> int:
        return int(self.states[-1])

    def state_at(self, t) -> np.ndarray | int:
        """State after the last event with time <= t (right-continuous)."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValueError("snapshot times must be non-negative")
        idx = np.searchsorted(self.times, t, side="right") - 1
        out = self.states[idx]
        return int(out) if out.ndim == 0 else out

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["time", "state"])
            for t, k in zip(self.times, self.states):
                writer.writerow([f"{t:.12g}", int(k)])

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(
                {
                    "seed": self.seed,
                    "horizon": self.horizon,
                    "time": self.times.tolist(),
                    "state": self.states.tolist(),
                },
                fh,
            )


@dataclass
class AgentState:
    """Opinion vector; users ``[0, z0)`` are 0-zealots, ``[z0, z0+z1)`` 1-zealots."""

    opinions: np.ndarray
    zealot0_count: int
    zealot1_count: int

    @classmethod
    def initial(cls, p: ModelParams) -> "AgentState":
        x = np.zeros(p.n, dtype=np.int8)
        # 1-zealots, then the free users that start with opinion 1
        x[p.z0:p.z0 + p.n1] = 1
        return cls(x, p.z0, p.z1)

    @property
    def free(self) -> slice:
        return slice(self.zealot0_count + self.zealot1_count, None)

    def is_zealot(self, i: int) -> bool:
        return i < self.zealot0_count + self.zealot1_count

    def count(self) -> int:
        return int(self.opinions.sum())


def replica_seed(base_seed: int, index: int) -> int:
    ss = np.random.SeedSequence(base_seed, spawn_key=(index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _absorbing(p: ModelParams, k: int) -> bool:
    n = p.n
    return (k - p.z1) * (n - k) == 0 and k * (n - k - p.z0) == 0


def _run_agents(p: ModelParams, horizon: float, seed: int, snapshot_times=()):
    rng = np.random.default_rng(seed)
    agents = AgentState.initial(p)
    x = agents.opinions.tolist()
    n, n_zealots = p.n, p.z0 + p.z1
    k = p.n1
    times, states = [0.0], [k]
    snaps = sorted(snapshot_times)
    snapshots = {}
    t = 0.0
    while True:
        gaps = rng.exponential(1.0 / n, _CHUNK)
        who = rng.integers(0, n, _CHUNK)
        # neighbour drawn from the other n-1 users
        nbr = rng.integers(0, n - 1, _CHUNK)
        for dt, i, j in zip(gaps.tolist(), who.tolist(), nbr.tolist()):
            t += dt
            while snaps and snaps[0] < t:
                snapshots[snaps.pop(0)] = np.array(x, dtype=np.int8)
            if t > horizon:
                break
            if i < n_zealots:
                continue
            if j >= i:
                j += 1
            new = x[j]
            if new != x[i]:
                x[i] = new
                k += 1 if new else -1
                times.append(t)
                states.append(k)
        else:
            if not _absorbing(p, k):
                continue
        break
    for s in snaps:
        snapshots[s] = np.array(x, dtype=np.int8)
    traj = Trajectory(np.array(times), np.array(states, dtype=np.int64), seed, horizon)
    return traj, snapshots


def simulate_agents(p: ModelParams, horizon: float, seed: int) -> Trajectory:
    """Event-driven agent simulation.

    Clock rings form a Poisson process of rate ``n``; the ringing user is
    uniform and, unless a zealot, copies a uniformly chosen other user.
    Zealot rings consume time and change nothing.  The run stops early once
    the count reaches an absorbing state.
    """
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    return _run_agents(p, horizon, seed)[0]


def agent_snapshots(p: ModelParams, times: Sequence[float], seed: int) -> dict[float, np.ndarray]:
    """Opinion vectors at the given times, from the same path as :func:`simulate_agents`."""
    times = [float(t) for t in times]
    if not times:
        return {}
    if min(times) < 0:
        raise ValueError("snapshot times must be non-negative")
    return _run_agents(p, max(max(times), 1e-12), seed, times)[1]


def simulate_aggregate(p: ModelParams, horizon: float, seed: int) -> Trajectory:
    """Gillespie simulation of the birth-death count directly."""
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    rng = np.random.default_rng(seed)
    Q = rate_matrix(p)
    down, up, lo = Q.down.tolist(), Q.up.tolist(), p.space.lo
    k, t = p.n1, 0.0
    times, states = [0.0], [k]
    while True:
        expo = rng.standard_exponential(_CHUNK).tolist()
        unif = rng.random(_CHUNK).tolist()
        for e, u in zip(expo, unif):
            d, a = down[k - lo], up[k - lo]
            total = d + a
            if total == 0.0:
                break
            t += e / total
            if t > horizon:
                break
            k += 1 if u * total < a else -1
            times.append(t)
            states.append(k)
        else:
            continue
        break
    return Trajectory(np.array(times), np.array(states, dtype=np.int64), seed, horizon)


SIMULATORS: dict[str, Callable[[ModelParams, float, int], Trajectory]] = {
    "aggregate": simulate_aggregate,
    "agents": simulate_agents,
}


@dataclass
class EnsembleStats:
    snapshot_times: np.ndarray
    empirical_dists: list[Distribution]
    mean: np.ndarray
    std: np.ndarray
    m: int
    samples: np.ndarray = field(repr=False)  # (m, len(snapshot_times))
    seeds: list[int] = field(default_factory=list, repr=False)


def _replica(sim_name, p, horizon, times, seed):
    traj = SIMULATORS[sim_name](p, horizon, seed)
    return traj.state_at(times)


def run_ensemble(
    p: ModelParams,
    m: int,
    snapshot_times: Sequence[float],
    base_seed: int = 0,
    simulator: str = "aggregate",
    jobs: int = 1,
) -> EnsembleStats:
    """Run ``m`` independent replicas and summarise N1 at each snapshot."""
    if m < 2:
        raise ValueError("need at least two replicas")
    times = np.asarray(snapshot_times, dtype=float)
    if times.ndim != 1 or times.size == 0 or np.any(times < 0):
        raise ValueError("snapshot times must be a non-empty list of non-negative values")
    if simulator not in SIMULATORS:
        raise ValueError(f"unknown simulator {simulator!r}")
    horizon = max(float(times.max()), 1e-9)
    seeds = [replica_seed(base_seed, i) for i in range(m)]
    work = partial(_replica, simulator, p, horizon, times)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(work, seeds, chunksize=max(1, m // (4 * jobs))))
    else:
        rows = [work(s) for s in seeds]
    samples = np.vstack(rows).astype(np.int64)
    log.info("ensemble of %d %s replicas done", m, simulator)
    return summarize(p, times, samples, seeds)


def summarize(p: ModelParams, times, samples: np.ndarray, seeds=()) -> EnsembleStats:
    space = p.space
    m = samples.shape[0]
    dists = []
    for col in samples.T:
        counts = np.bincount(col - space.lo, minlength=space.size)
        dists.append(Distribution(space, counts / m))
    return EnsembleStats(
        snapshot_times=np.asarray(times, dtype=float),
        empirical_dists=dists,
        mean=samples.mean(axis=0),
        std=samples.std(axis=0, ddof=1),
        m=m,
        samples=samples,
        seeds=list(seeds),
    )


def confidence_interval(stats: EnsembleStats, phi: float = 1.96) -> np.ndarray:
    """Normal-approximation band ``mean +/- phi * std / sqrt(m)``; shape (T, 2)."""
    if stats.m < 2:
        raise ValueError("need at least two replicas for a standard deviation")
    if not phi > 0:
        raise ValueError("phi must be positive")
    half = phi * stats.std / math.sqrt(stats.m)
    return np.column_stack([stats.mean - half, stats.mean + half])
