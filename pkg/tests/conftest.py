import numpy as np
import pytest

from gtpbet import Domain, GameConfig, TrainingSet, make_training


def unit_box_game(epsilon0=0.5):
    """d=1 game on [-1, 1] with axis training {+c, -c}."""
    dom = Domain.box([-1.0], [1.0])
    return GameConfig(domain=dom, training=make_training(dom, epsilon0))


def corner_game(d=1):
    """Box [-1,1]^d with the sign-corner training block."""
    dom = Domain.box(-np.ones(d), np.ones(d))
    return GameConfig(
        domain=dom, training=make_training(dom, 0.1, "corners_2tod")
    )


@pytest.fixture(scope="session")
def rademacher_run():
    """One shared 5000-round d=1 run reused by several diagnostics tests."""
    from gtpbet import sos_run

    rng = np.random.default_rng(7)
    path = rng.choice([-0.5, 0.5], size=(5000, 1))
    return sos_run(unit_box_game(0.1), path)
