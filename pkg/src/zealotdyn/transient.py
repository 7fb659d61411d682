"""Transient distribution of N1(t) by uniformization.

With ``L = max_k |q_kk|`` and ``P = I + Q/L``, the row of ``exp(tQ)`` started
at ``n1`` is ``sum_j Poisson(L t)(j) e_{n1} P^j``.  Each term costs O(|S|)
because ``Q`` is tridiagonal, and every partial sum is nonnegative.
"""
from __future__ import annotations

import math

import numpy as np

from .model import Distribution, ModelParams, RateMatrix, rate_matrix

DEFAULT_TOL = 1e-10
DENSE_LIMIT = 200

# relative weight at which the recursion away from the mode stops
_NEGLIGIBLE = 1e-40


def poisson_weights(mean: float, tol: float = DEFAULT_TOL) -> tuple[int, np.ndarray]:
    """Truncated Poisson pmf.

    Returns ``(left, w)`` where ``w[i]`` is the probability of ``left + i``.
    Weights are built by recursion outward from the mode, so nothing
    underflows even for ``mean`` in the thousands.  The kept window carries
    at least ``1 - tol`` of the mass: at most ``tol/2`` is dropped on the
    left, and the right end stops once the cumulative weight reaches
    ``1 - tol/2``.
    """
    if mean < 0:
        raise ValueError("Poisson mean must be non-negative")
    if mean == 0:
        return 0, np.ones(1)
    mode = int(math.floor(mean))

    lower = [1.0]
    j = mode
    while j > 0 and lower[-1] > _NEGLIGIBLE:
        lower.append(lower[-1] * j / mean)
        j -= 1
    upper = []
    w, j = 1.0, mode
    while w > _NEGLIGIBLE:
        j += 1
        w = w * mean / j
        upper.append(w)
    rel = np.array(lower[::-1] + upper)
    first = mode - (len(lower) - 1)
    rel /= math.fsum(rel)

    cum = np.cumsum(rel)
    lo = int(np.searchsorted(cum, tol / 2, side="right"))
    hi = int(np.searchsorted(cum, 1.0 - tol / 2, side="left"))
    hi = min(max(hi, lo), rel.size - 1)
    return first + lo, rel[lo:hi + 1]


def _check(t: float, tol: float):
    if not t >= 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if not 0 < tol < 1:
        raise ValueError(f"tol must lie in (0, 1), got {tol}")


def propagate(Q: RateMatrix, probs: np.ndarray, t: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Evolve an arbitrary initial vector ``probs`` for time ``t``."""
    _check(t, tol)
    v = np.array(probs, dtype=float)
    rate = Q.max_exit_rate
    if rate == 0.0 or t == 0.0:
        return v
    left, weights = poisson_weights(rate * t, tol)
    # P = I + Q/rate applied as v + (v Q)/rate
    step_diag = 1.0 + Q.diag / rate
    step_up = Q.up[:-1] / rate
    step_down = Q.down[1:] / rate

    out = np.zeros_like(v)
    for j in range(left + weights.size):
        if j >= left:
            out += weights[j - left] * v
        if j == left + weights.size - 1:
            break
        nxt = v * step_diag
        nxt[1:] += v[:-1] * step_up
        nxt[:-1] += v[1:] * step_down
        v = nxt
    return out


def transient_distribution(p: ModelParams, t: float, tol: float = DEFAULT_TOL) -> Distribution:
    """Distribution of N1(t) given N1(0) = n1."""
    _check(t, tol)
    start = Distribution.point_mass(p.space, p.n1)
    if t == 0:
        return start
    probs = propagate(rate_matrix(p), start.probs, t, tol)
    if probs.min() < -1e-14:
        raise ArithmeticError(f"negative probability {probs.min():.3g}")
    np.clip(probs, 0.0, None, out=probs)
    return Distribution(p.space, probs)


def expected_opinion1(p: ModelParams, t: float, tol: float = DEFAULT_TOL) -> float:
    if t == 0:
        return float(p.n1)
    return transient_distribution(p, t, tol).mean()


def mean_closed_form(p: ModelParams, t: float) -> float:
    """E N1(t) from the linear mean equation.

    The drift ``up(k) - down(k) = (n z1 - (z0 + z1) k) / (n - 1)`` is affine
    in ``k``, so the mean relaxes exponentially to ``n z1 / (z0 + z1)`` at
    rate ``(z0 + z1) / (n - 1)``.
    """
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    s = p.z0 + p.z1
    target = p.n * p.z1 / s
    return target + (p.n1 - target) * math.exp(-s * t / (p.n - 1))


def expm_dense(A: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring around a Taylor core."""
    A = np.asarray(A, dtype=float)
    norm = np.linalg.norm(A, 1)
    squarings = max(0, int(math.ceil(math.log2(norm / 0.25)))) if norm > 0.25 else 0
    B = A / 2.0 ** squarings
    result = np.eye(A.shape[0])
    term = np.eye(A.shape[0])
    # ||B|| <= 1/4, so 20 terms put the remainder far below double precision
    for j in range(1, 21):
        term = term @ B / j
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def dense_expm_oracle(p: ModelParams, t: float) -> np.ndarray:
    """Full ``exp(tQ)`` for small state spaces (reference only)."""
    if p.space.size > DENSE_LIMIT:
        raise ValueError(
            f"state space of size {p.space.size} exceeds dense limit {DENSE_LIMIT}"
        )
    return expm_dense(t * rate_matrix(p).to_dense())
