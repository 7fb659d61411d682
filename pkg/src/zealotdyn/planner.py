"""Zealot injection to depolarise an echo chamber.

An echo chamber has ``z0 > 0`` 0-zealots and no 1-zealots.  Injecting
``z1`` 1-zealots moves the equilibrium opinion to

    z1 / ((1 + alpha z1) z0 + z1)

where ``alpha`` models backfire: the effective 0-zealot mass grows with
every injected 1-zealot.  ``alpha = 0`` recovers ``z1 / (z0 + z1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

#: lower end of the backfire grid used for the feasibility map
ALPHA_GRID_MIN = 0.01


@dataclass(frozen=True)
class PlanRequest:
    z0: int
    lam: float
    alpha: float = 0.0
    z_max: float | None = None
    mode: Literal["inject", "convert"] = "inject"
    n: int | None = None

    def __post_init__(self):
        if self.z0 < 1:
            raise ValueError("the echo chamber needs at least one 0-zealot")
        if not 0 < self.lam < 1:
            raise ValueError(f"target heterogeneity must lie in (0, 1), got {self.lam}")
        if not 0 <= self.alpha < 1:
            raise ValueError(f"backfire rate must lie in [0, 1), got {self.alpha}")
        if self.z_max is not None and self.z_max < 0:
            raise ValueError("budget must be non-negative")
        if self.mode not in ("inject", "convert"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "convert":
            if self.n is None:
                raise ValueError("convert mode needs the group size n")
            if self.z0 > self.n:
                raise ValueError("z0 exceeds n")


@dataclass(frozen=True)
class PlanOutcome:
    """Result of :func:`optimal_injection`.

    ``z1_star`` is ``None`` only when the target is unreachable and no
    budget bounds the injection (``unbounded`` is then set).
    """

    z1_star_real: float
    z1_star: int | None
    feasible_exact: bool
    D: float
    achieved_lambda: float
    capped: bool
    unbounded: bool = False
    conversion_ok: bool | None = None

    def as_row(self) -> dict:
        return {
            "z1_star_real": self.z1_star_real,
            "z1_star": self.z1_star,
            "D": self.D,
            "feasible_exact": self.feasible_exact,
            "achieved_lambda": self.achieved_lambda,
            "capped": self.capped,
        }


def equilibrium_opinion(z0: float, z1: float, alpha: float = 0.0) -> float:
    if z0 == 0 and z1 == 0:
        raise ValueError("need at least one zealot")
    return z1 / ((1 + alpha * z1) * z0 + z1)


def discriminant(z0: float, lam: float, alpha: float) -> float:
    return 1 - lam - alpha * lam * z0


def exact_injection(z0: float, lam: float, alpha: float = 0.0) -> float | None:
    """Real-valued z1 hitting ``lam`` exactly, or None when no such z1 exists."""
    D = discriminant(z0, lam, alpha)
    return lam * z0 / D if D > 0 else None


def round_zealots(z1_real: float, z0: float, lam: float, alpha: float = 0.0) -> int:
    """Floor or ceiling of ``z1_real``, whichever lands closer to ``lam``.

    Ties go to the floor.
    """
    if z1_real < 0:
        raise ValueError("z1 must be non-negative")
    lo, hi = math.floor(z1_real), math.ceil(z1_real)
    if lo == hi:
        return int(lo)
    gap_lo = abs(equilibrium_opinion(z0, lo, alpha) - lam)
    gap_hi = abs(equilibrium_opinion(z0, hi, alpha) - lam)
    return int(hi if gap_hi < gap_lo else lo)


def optimal_injection(req: PlanRequest) -> PlanOutcome:
    z0, lam, alpha = req.z0, req.lam, req.alpha
    D = discriminant(z0, lam, alpha)
    budget = req.z_max
    if req.mode == "convert":
        room = req.n - z0
        budget = room if budget is None else min(budget, room)

    if D > 0:
        z1_real = lam * z0 / D
        capped = budget is not None and z1_real > budget
        if capped:
            z1 = math.floor(budget)
        else:
            z1 = round_zealots(z1_real, z0, lam, alpha)
            if budget is not None:
                z1 = min(z1, math.floor(budget))
        outcome = PlanOutcome(
            z1_star_real=z1_real,
            z1_star=z1,
            feasible_exact=not capped,
            D=D,
            achieved_lambda=equilibrium_opinion(z0, z1, alpha),
            capped=capped,
        )
    elif budget is None:
        # the gap to lam shrinks forever without closing; report the supremum
        outcome = PlanOutcome(
            z1_star_real=math.inf,
            z1_star=None,
            feasible_exact=False,
            D=D,
            achieved_lambda=1 / (1 + alpha * z0),
            capped=False,
            unbounded=True,
        )
    else:
        z1 = math.floor(budget)
        outcome = PlanOutcome(
            z1_star_real=math.inf,
            z1_star=z1,
            feasible_exact=False,
            D=D,
            achieved_lambda=equilibrium_opinion(z0, z1, alpha),
            capped=True,
        )
    if req.n is not None:
        z1_exact = exact_injection(z0, lam, alpha)
        ok = z1_exact is not None and z0 + z1_exact <= req.n
        outcome = PlanOutcome(**{**outcome.__dict__, "conversion_ok": ok})
    return outcome


def conversion_feasible(n: int, z0: int, lam: float, alpha: float = 0.0) -> bool:
    """Whether the target is reachable by converting existing members.

    Radicalised users are already members, so only ``z0 + z1* <= n`` binds;
    with ``alpha = 0`` this is ``z0/n + lam <= 1``.
    """
    if not 1 <= z0 <= n:
        raise ValueError("need 1 <= z0 <= n")
    if alpha == 0:
        return z0 / n + lam <= 1
    z1 = exact_injection(z0, lam, alpha)
    return z1 is not None and z0 + z1 <= n


def max_alpha_for_conversion(
    n: int, z0: int, lam: float, alpha_min: float = ALPHA_GRID_MIN
) -> float | None:
    """Largest backfire rate for which conversion still reaches ``lam``.

    Solving ``z0 + lam z0 / D(alpha) = n`` for ``alpha`` gives
    ``(1 - lam - lam z0 / (n - z0)) / (lam z0)``.  Returns None when that
    value falls below ``alpha_min`` (the low end of the backfire grid).
    """
    if not 1 <= z0 <= n:
        raise ValueError("need 1 <= z0 <= n")
    if z0 == n:
        return None
    alpha = (1 - lam - lam * z0 / (n - z0)) / (lam * z0)
    return alpha if alpha >= alpha_min else None


def feasibility_border(z0: float, lam: float) -> float:
    """Backfire rate at which the discriminant vanishes."""
    return (1 - lam) / (lam * z0)
