"""Stationary distribution and equilibrium mean of N1."""
from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from .model import Distribution, ModelParams, rate_matrix

NULLSPACE_LIMIT = 10_000


def stationary_distribution(p: ModelParams) -> Distribution:
    """Birth-death product form ``pi_k ~ prod_{j<=k} up(j-1)/down(j)``.

    Evaluated as cumulative log-ratios with log-sum-exp normalisation, so
    strongly skewed equilibria do not underflow.  With one zealot camp empty
    the chain is absorbed at the opposite end of the state space and the
    point mass there is returned.
    """
    space = p.space
    if p.z1 == 0:
        return Distribution.point_mass(space, space.lo)
    if p.z0 == 0:
        return Distribution.point_mass(space, space.hi)
    Q = rate_matrix(p)
    if space.size == 1:
        return Distribution(space, np.ones(1))
    log_ratio = np.log(Q.up[:-1]) - np.log(Q.down[1:])
    log_w = np.concatenate(([0.0], np.cumsum(log_ratio)))
    return Distribution(space, np.exp(log_w - logsumexp(log_w)))


def nullspace_oracle(p: ModelParams) -> Distribution:
    """Solve ``pi Q = 0, sum(pi) = 1`` directly (reference only)."""
    space = p.space
    if space.size > NULLSPACE_LIMIT:
        raise ValueError(f"state space of size {space.size} too large for dense solve")
    A = rate_matrix(p).to_dense().T
    A[-1, :] = 1.0
    b = np.zeros(space.size)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError("stationary system is singular") from exc
    if not np.allclose(pi @ rate_matrix(p).to_dense(), 0.0, atol=1e-8):
        raise ArithmeticError("null-space solve did not converge")
    return Distribution(space, np.clip(pi, 0.0, None))


def equilibrium_expectation(p: ModelParams) -> float:
    return p.n * p.z1 / (p.z0 + p.z1)
