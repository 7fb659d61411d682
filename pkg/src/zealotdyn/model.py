"""Model parameters, state space and the birth-death generator.

N1(t), the number of opinion-1 holders (zealots included), moves on
``{z1, ..., n - z0}`` by unit steps with rates

    down(k) = (k - z1)(n - k) / (n - 1)
    up(k)   = k (n - k - z0) / (n - 1)

The generator is kept in tridiagonal form (three vectors) throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class InvalidParams(ValueError):
    """Raised for parameter sets outside the model's domain."""


@dataclass(frozen=True)
class StateSpace:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvalidParams(f"empty state space [{self.lo}, {self.hi}]")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    @property
    def states(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    def __contains__(self, k) -> bool:
        return self.lo <= k <= self.hi

    def index(self, k: int) -> int:
        if k not in self:
            raise InvalidParams(f"state {k} outside [{self.lo}, {self.hi}]")
        return k - self.lo


@dataclass(frozen=True)
class ModelParams:
    """One instance of the process.

    Parameters
    ----------
    n : int
        Total number of users.
    z0, z1 : int
        Number of 0-zealots and 1-zealots.
    n1 : int
        Initial number of opinion-1 holders, 1-zealots included.
    """

    n: int
    z0: int
    z1: int
    n1: int

    def __post_init__(self):
        n, z0, z1, n1 = self.n, self.z0, self.z1, self.n1
        for name in ("n", "z0", "z1", "n1"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                raise InvalidParams(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if n < 2:
            raise InvalidParams(f"need n >= 2, got n={n}")
        if z0 < 0 or z1 < 0:
            raise InvalidParams("zealot counts must be non-negative")
        if z0 + z1 == 0:
            raise InvalidParams("need at least one zealot (z0 + z1 > 0)")
        if z0 + z1 > n:
            raise InvalidParams(f"z0 + z1 = {z0 + z1} exceeds n = {n}")
        if not z1 <= n1 <= n - z0:
            raise InvalidParams(f"n1={n1} outside state space [{z1}, {n - z0}]")

    @property
    def space(self) -> StateSpace:
        return StateSpace(self.z1, self.n - self.z0)

    def with_n1(self, n1: int) -> "ModelParams":
        return ModelParams(self.n, self.z0, self.z1, n1)


def new_model(n: int, z0: int, z1: int, n1: int) -> ModelParams:
    """Validate and build a :class:`ModelParams`; raises :class:`InvalidParams`."""
    return ModelParams(n, z0, z1, n1)


def transition_rates(p: ModelParams, k: int) -> tuple[float, float, float]:
    """Return ``(down, stay, up)`` rates out of state ``k``."""
    if k not in p.space:
        raise InvalidParams(f"state {k} outside [{p.space.lo}, {p.space.hi}]")
    n = p.n
    down = (k - p.z1) * (n - k) / (n - 1)
    up = k * (n - k - p.z0) / (n - 1)
    return down, -down - up, up


@dataclass(frozen=True)
class RateMatrix:
    """Tridiagonal generator; entry ``i`` of each vector refers to state ``lo + i``."""

    space: StateSpace
    down: np.ndarray
    up: np.ndarray
    diag: np.ndarray = field(repr=False)

    @property
    def exit_rates(self) -> np.ndarray:
        return -self.diag

    @property
    def max_exit_rate(self) -> float:
        return float(np.max(-self.diag)) if self.diag.size else 0.0

    def apply_left(self, v: np.ndarray) -> np.ndarray:
        """Row-vector product ``v @ Q`` without forming ``Q``."""
        out = v * self.diag
        out[1:] += v[:-1] * self.up[:-1]
        out[:-1] += v[1:] * self.down[1:]
        return out

    def to_dense(self) -> np.ndarray:
        m = self.space.size
        Q = np.diag(self.diag)
        if m > 1:
            Q[np.arange(m - 1), np.arange(1, m)] = self.up[:-1]
            Q[np.arange(1, m), np.arange(m - 1)] = self.down[1:]
        return Q


def rate_matrix(p: ModelParams) -> RateMatrix:
    space = p.space
    k = space.states.astype(float)
    n = p.n
    down = (k - p.z1) * (n - k) / (n - 1)
    up = k * (n - k - p.z0) / (n - 1)
    diag = -down - up
    for arr in (down, up, diag):
        arr.setflags(write=False)
    return RateMatrix(space, down, up, diag)


@dataclass(frozen=True)
class Distribution:
    """Probability vector over a :class:`StateSpace`."""

    space: StateSpace
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (self.space.size,):
            raise ValueError(
                f"probs has shape {probs.shape}, expected ({self.space.size},)"
            )
        object.__setattr__(self, "probs", probs)

    @classmethod
    def point_mass(cls, space: StateSpace, k: int) -> "Distribution":
        probs = np.zeros(space.size)
        probs[space.index(k)] = 1.0
        return cls(space, probs)

    @property
    def states(self) -> np.ndarray:
        return self.space.states

    def __getitem__(self, k: int) -> float:
        return float(self.probs[self.space.index(k)])

    def mean(self) -> float:
        return float(np.dot(self.states, self.probs))

    def mode(self) -> int:
        return int(self.space.lo + np.argmax(self.probs))
