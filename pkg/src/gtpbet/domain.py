"""Outcome domains, training data and exact capital accounting.

The betting game is played over a compact region D in R^d whose convex
hull contains the origin in its interior.  Before round 1 the bettor
prepends synthetic "training" outcomes chosen so that any proportion
vector alpha that keeps 1 + alpha.x >= 0 on the training points keeps
1 + alpha.x >= epsilon0 on all of D.  Capital is tracked in log space
(nats) because raw capital overflows double precision on long runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Domain",
    "TrainingSet",
    "GameConfig",
    "CapitalLedger",
    "CollateralError",
    "make_training",
    "step_capital",
]

_BOUNDARY_SLACK = 1e-12  # absorbs transform rounding on membership tests


class CollateralError(ValueError):
    """Raised when a bet would allow the capital to reach zero or below."""


@dataclass(frozen=True)
class Domain:
    """Compact outcome region.

    kind is one of "box", "sphere" or "explicit_bound".  A box is given
    by component-wise bounds lo < 0 < hi; a sphere (ball) and an
    explicit bound are given by their radius.
    """

    d: int
    kind: str
    lo: np.ndarray | None = None
    hi: np.ndarray | None = None
    radius: float | None = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be positive")
        if self.kind == "box":
            lo = np.asarray(self.lo, dtype=float)
            hi = np.asarray(self.hi, dtype=float)
            if lo.shape != (self.d,) or hi.shape != (self.d,):
                raise ValueError("box bounds must have shape (d,)")
            if not (np.all(lo < 0.0) and np.all(hi > 0.0)):
                raise ValueError("box must contain the origin in its interior")
            object.__setattr__(self, "lo", lo)
            object.__setattr__(self, "hi", hi)
        elif self.kind in ("sphere", "explicit_bound"):
            if self.radius is None or self.radius <= 0.0:
                raise ValueError("radius must be positive")
        else:
            raise ValueError(f"unknown domain kind {self.kind!r}")

    @classmethod
    def box(cls, lo, hi) -> "Domain":
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        return cls(d=lo.size, kind="box", lo=lo, hi=hi)

    @classmethod
    def sphere(cls, d: int, radius: float) -> "Domain":
        return cls(d=d, kind="sphere", radius=radius)

    @classmethod
    def explicit_bound(cls, d: int, radius: float) -> "Domain":
        return cls(d=d, kind="explicit_bound", radius=radius)

    @property
    def delta_bar(self) -> float:
        """max norm over the domain, in closed form."""
        if self.kind == "box":
            return float(np.sqrt(np.sum(np.maximum(-self.lo, self.hi) ** 2)))
        return float(self.radius)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.d,):
            return False
        if self.kind == "box":
            return bool(
                np.all(x >= self.lo - _BOUNDARY_SLACK)
                and np.all(x <= self.hi + _BOUNDARY_SLACK)
            )
        return float(np.linalg.norm(x)) <= self.radius + _BOUNDARY_SLACK

    def max_growth_constant(self) -> float:
        """Largest one-round growth factor 1 + alpha.x over prudent alpha.

        Prudent means 1 + alpha.x >= 0 for every x in the domain.  Equals
        2 for any domain symmetric about the origin and can be large for
        skewed boxes (e.g. 11 for the interval [-0.1, 1]).
        """
        if self.kind == "box":
            ratios = np.maximum(self.hi / -self.lo, -self.lo / self.hi)
            return 1.0 + float(np.max(ratios))
        return 2.0


@dataclass(frozen=True)
class TrainingSet:
    """Synthetic prior outcomes guaranteeing epsilon0 interiority.

    scheme "axis_2d" uses the 2d vectors +-c e_i with
    c = delta_bar * sqrt(d) / (1 - epsilon0), which certifies the
    epsilon0 margin on any domain.  scheme "corners_2tod" uses the 2^d
    sign vectors of the box (the construction used with the return
    transform); it certifies prudence but only the epsilon0 -> 0 margin.
    """

    epsilon0: float
    points: np.ndarray  # (n0, d)
    scheme: str

    @property
    def n0(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if np.linalg.matrix_rank(pts) != pts.shape[1]:
            raise ValueError("training points must span R^d")


def make_training(domain: Domain, epsilon0: float, scheme: str = "axis_2d") -> TrainingSet:
    """Build the training set for a domain.

    Raises ValueError for epsilon0 outside (0,1), for the corner scheme
    on non-box domains, and for d > 20 corners (2^d explosion).
    """
    if not 0.0 < epsilon0 < 1.0:
        raise ValueError("epsilon0 must lie in (0, 1)")
    d = domain.d
    if scheme == "axis_2d":
        c = domain.delta_bar * math.sqrt(d) / (1.0 - epsilon0)
        pts = np.zeros((2 * d, d))
        for i in range(d):
            pts[2 * i, i] = c
            pts[2 * i + 1, i] = -c
        return TrainingSet(epsilon0=epsilon0, points=pts, scheme=scheme)
    if scheme == "corners_2tod":
        if domain.kind != "box":
            raise ValueError("corners_2tod requires a box domain")
        if d > 20:
            raise ValueError("corners_2tod limited to d <= 20")
        # sign corners of the box: lo_i or hi_i in each coordinate
        grid = np.stack(
            np.meshgrid(*[(domain.lo[i], domain.hi[i]) for i in range(d)], indexing="ij"),
            axis=-1,
        ).reshape(-1, d)
        return TrainingSet(epsilon0=epsilon0, points=grid, scheme=scheme)
    raise ValueError(f"unknown training scheme {scheme!r}")


@dataclass(frozen=True)
class GameConfig:
    domain: Domain
    training: TrainingSet
    strategy: str = "sos"
    seed: int = 0

    def __post_init__(self):
        if self.training.d != self.domain.d:
            raise ValueError("training dimension does not match domain")


# ledger CSV column order, one row per round
LEDGER_COLUMNS = (
    "n",
    "logK_true",
    "logK_hindsight",
    "logK_approx",
    "LD1",
    "LD2",
    "LD3",
    "GR",
    "QR",
    "DR",
)


@dataclass
class CapitalLedger:
    """Per-round capital and diagnostic series, all in nats."""

    n: list = field(default_factory=list)
    alpha_used: list = field(default_factory=list)
    outcomes: list = field(default_factory=list)
    logK_true: list = field(default_factory=list)
    logK_hindsight: list = field(default_factory=list)
    logK_approx: list = field(default_factory=list)
    LD1: list = field(default_factory=list)
    LD2: list = field(default_factory=list)
    LD3: list = field(default_factory=list)
    GR: list = field(default_factory=list)
    QR: list = field(default_factory=list)
    DR: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.n)

    @property
    def final_logK(self) -> float:
        return self.logK_true[-1] if self.logK_true else 0.0

    def to_csv(self, path) -> None:
        """Write one row per round, RFC-4180, LF line endings, 17 sig digits."""
        with open(path, "w", newline="") as fh:
            fh.write(",".join(LEDGER_COLUMNS) + "\n")
            for i in range(len(self.n)):
                row = [str(self.n[i])] + [
                    format(getattr(self, c)[i], ".17g")
                    for c in LEDGER_COLUMNS[1:]
                ]
                fh.write(",".join(row) + "\n")


def step_capital(ledger: CapitalLedger, alpha, x, **diagnostics) -> CapitalLedger:
    """Append one round to the ledger; logK_true grows by log(1 + alpha.x).

    Raises CollateralError naming the round if 1 + alpha.x <= 0.
    """
    alpha = np.asarray(alpha, dtype=float)
    x = np.asarray(x, dtype=float)
    growth = 1.0 + float(alpha @ x)
    n = (ledger.n[-1] + 1) if ledger.n else 1
    if growth <= 0.0:
        raise CollateralError(
            f"collateral violated at round {n}: 1 + alpha.x = {growth:.6g}"
        )
    prev = ledger.logK_true[-1] if ledger.logK_true else 0.0
    ledger.n.append(n)
    ledger.alpha_used.append(alpha)
    ledger.outcomes.append(x)
    ledger.logK_true.append(prev + math.log(growth))
    for col in LEDGER_COLUMNS[2:]:
        getattr(ledger, col).append(diagnostics.get(col, float("nan")))
    return ledger
