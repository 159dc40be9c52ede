"""Information criterion for choosing the number of betting items.

The nested games share one training set: the sign corners of the full
d_max-dimensional box, projected onto the first d coordinates for the
d-item game.  That makes the d-item objective the restriction of the
(d+1)-item objective to a zero last coordinate, so the hindsight KL term
is nondecreasing in d by construction.  The criterion subtracts the
determinant-ratio penalty, which grows with d, from the KL term; the
argmax trades fit against the cost of estimating more proportions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .domain import Domain, GameConfig, TrainingSet
from .sos import sos_run

__all__ = ["NestedGameReport", "select_dimension"]


@dataclass(frozen=True)
class NestedGameReport:
    d: np.ndarray  # 1..d_max
    kl_term: np.ndarray  # (N + n0) D_d(g || g*), the hindsight log capital
    penalty: np.ndarray  # 0.5 log [I_N]_d
    criterion: np.ndarray  # kl_term - penalty
    logK_true: np.ndarray
    selected: int

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("d,kl_term,penalty,criterion,logK_true,selected\n")
            for i in range(self.d.size):
                fh.write(
                    f"{self.d[i]},"
                    f"{self.kl_term[i]:.17g},{self.penalty[i]:.17g},"
                    f"{self.criterion[i]:.17g},{self.logK_true[i]:.17g},"
                    f"{int(self.d[i] == self.selected)}\n"
                )


def select_dimension(paths, epsilon0: float = 0.1, **sos_kwargs) -> NestedGameReport:
    """Run the sequential strategy for every prefix dimension and pick the
    one maximizing the hindsight-minus-penalty criterion.

    paths is an (N, d_max) array of per-item outcomes in [-1, 1]; items
    are nested in the given column order.  Ties break toward smaller d.
    """
    paths = np.atleast_2d(np.asarray(paths, dtype=float))
    N, d_max = paths.shape
    if N < 1:
        raise ValueError("empty outcome sequence")
    # shared training: corners of the full box, projected per prefix
    full = Domain.box(-np.ones(d_max), np.ones(d_max))
    signs = np.stack(
        np.meshgrid(*[(-1.0, 1.0)] * d_max, indexing="ij"), axis=-1
    ).reshape(-1, d_max)
    kl = np.empty(d_max)
    pen = np.empty(d_max)
    crit = np.empty(d_max)
    logk = np.empty(d_max)
    for d in range(1, d_max + 1):
        dom = Domain.box(-np.ones(d), np.ones(d))
        train = TrainingSet(
            epsilon0=epsilon0, points=signs[:, :d].copy(), scheme="corners_2tod"
        )
        cfg = GameConfig(domain=dom, training=train)
        res = sos_run(cfg, paths[:, :d], **sos_kwargs)
        led = res.ledger
        kl[d - 1] = led.logK_hindsight[-1]
        pen[d - 1] = led.LD2[-1]
        crit[d - 1] = kl[d - 1] - pen[d - 1]
        logk[d - 1] = led.logK_true[-1]
        if pen[d - 1] < -1e-8:
            raise AssertionError(f"negative penalty at d={d}")
    for d in range(1, d_max):
        if pen[d] < pen[d - 1] - 1e-8:
            warnings.warn(
                f"penalty not monotone between d={d} and d={d + 1}", stacklevel=2
            )
    selected = int(np.argmax(crit)) + 1  # argmax takes the first maximizer
    return NestedGameReport(
        d=np.arange(1, d_max + 1),
        kl_term=kl,
        penalty=pen,
        criterion=crit,
        logK_true=logk,
        selected=selected,
    )
