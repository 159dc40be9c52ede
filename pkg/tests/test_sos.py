import math

import numpy as np
import pytest

from gtpbet import (
    deficiency_bounds,
    deficiency_constants,
    slln2_ratio,
    slln_ratio,
    sos_capital_fast,
    sos_run,
)
from conftest import unit_box_game


def test_all_zero_path():
    res = sos_run(unit_box_game(0.5), np.zeros((20, 1)))
    assert res.ledger.logK_true[-1] == 0.0
    np.testing.assert_allclose(res.alpha_star, 0.0, atol=1e-9)
    np.testing.assert_allclose(res.ledger.GR, 0.0, atol=1e-10)


def test_summation_by_parts_decomposition(rademacher_run):
    # hindsight minus realized capital = accumulated deficiency + the
    # training-only optimum, exactly, at every round
    res = rademacher_run
    led = res.ledger
    cum = np.cumsum(res.delta_phi)
    for n in (1, 10, 500, 4999):
        lhs = led.logK_hindsight[n] - led.logK_true[n]
        assert lhs == pytest.approx(cum[n] + res.phi00_alpha0, abs=1e-8)
        assert led.LD1[n] == pytest.approx(cum[n], abs=1e-8)


def test_determinant_recursion(rademacher_run):
    res = rademacher_run
    train = res.config.training.points
    X = np.concatenate([train, res.outcomes])
    n0 = train.shape[0]
    for n in (1, 7, 200, 3000):
        Vprev = X[: n0 + n - 1].T @ X[: n0 + n - 1]
        Vcur = X[: n0 + n].T @ X[: n0 + n]
        ratio = np.linalg.det(Vcur) / np.linalg.det(Vprev)
        assert 1.0 + res.a_n[n - 1] == pytest.approx(ratio, rel=1e-8)


def test_delta_phi_nonnegative_and_bounded(rademacher_run):
    res = rademacher_run
    assert np.all(res.delta_phi >= -1e-12)
    # per-round upper bound via the mixed-weight second-moment matrix
    train = res.config.training.points
    X = np.concatenate([train, res.outcomes])
    n0 = train.shape[0]
    for n in (2, 50, 1000, 4999):
        a_prev = res.alpha_star[n - 2]
        a_cur = res.alpha_star[n - 1]
        hist = X[: n0 + n - 1]
        rp = 1.0 + hist @ a_prev
        rc = 1.0 + hist @ a_cur
        Vmix = (hist / (rp * rc)[:, None]).T @ hist
        x = X[n0 + n - 1]
        xc = x / (1.0 + float(a_cur @ x))
        xp = x / (1.0 + float(a_prev @ x))
        bound = math.log(1.0 + float(xc @ np.linalg.solve(Vmix, xp)))
        assert res.delta_phi[n - 1] <= bound + 1e-10


def test_exact_relation_checked_tightly():
    # every round checked, strict tolerance
    rng = np.random.default_rng(12)
    path = rng.uniform(-0.8, 0.8, size=(300, 1))
    sos_run(unit_box_game(0.1), path, check_every=1, check_tol_28b=1e-7)


def test_delta_alpha_trend():
    rng = np.random.default_rng(23)
    path = rng.choice([-0.5, 0.5], size=(10_000, 1))
    res = sos_run(unit_box_game(0.1), path)
    d_alpha = np.linalg.norm(np.diff(res.alpha_star, axis=0), axis=1)
    head = np.median(d_alpha[:1000])
    tail = np.median(d_alpha[-1000:])
    assert tail < 0.25 * head


def test_outside_domain_rejected():
    with pytest.raises(ValueError, match="round 3"):
        sos_run(unit_box_game(0.1), np.array([[0.1], [0.2], [1.5]]))


def test_deficiency_constants_symmetric_interval():
    cfg = unit_box_game(0.5)  # training {+2, -2}
    c1, c2, c3 = deficiency_constants(cfg)
    # growth constant 2; over the polytope |alpha| <= 1/2 the training
    # inner product tops out at 1, so the training branch also gives 2
    assert c1 == pytest.approx(2.0)
    assert c2 == pytest.approx(16.0)
    assert c3 == pytest.approx(16.0 * (8.0 - math.log(8.0)))


def test_deficiency_constants_skewed_interval():
    from gtpbet import Domain, GameConfig, make_training

    dom = Domain.box([-0.1], [1.0])
    cfg = GameConfig(domain=dom, training=make_training(dom, 0.1))
    c1, _, _ = deficiency_constants(cfg)
    assert c1 >= 11.0


def test_deficiency_bounds_hold(rademacher_run):
    out = deficiency_bounds(rademacher_run)  # asserts lemma2 internally
    cum = out["cum_delta_phi"]
    assert np.all(cum <= out["lemma1_bound"] + 1e-9)
    assert np.all(cum <= out["lemma2_bound"] + 1e-9)
    assert np.all(np.diff(cum) >= -1e-12)


def test_slln_ratio_examples():
    assert slln_ratio(np.zeros((5, 1)))[-1] == 0.0
    path = np.full((100, 1), 0.5)
    got = slln_ratio(path)[-1]
    assert got == pytest.approx(50.0 / math.sqrt(25.0 * math.log(25.0)))


def test_slln_ratio_fair_coin_bounded():
    rng = np.random.default_rng(2)
    path = rng.choice([-1.0, 1.0], size=(100_000, 1))
    ratios = slln_ratio(path)
    assert np.max(ratios[100:]) < 3.0


def test_slln2_scalar_formula():
    rng = np.random.default_rng(3)
    path = rng.choice([-1.0, 1.0], size=(5000, 1))
    ratios = slln2_ratio(path)
    n = 4999
    s = float(np.sum(path[: n + 1]))
    assert ratios[n] == pytest.approx(s * s / ((n + 1) * math.log(n + 1)))


def test_slln2_detects_drift():
    rng = np.random.default_rng(4)
    path = (rng.uniform(-0.5, 0.5, size=(10_000, 2)) + 0.2).clip(-0.9, 0.9)
    ratios = slln2_ratio(path)
    assert ratios[-1] > 10.0


def test_capital_blows_up_on_drift():
    rng = np.random.default_rng(5)
    path = (rng.uniform(-0.5, 0.5, size=(3000, 1)) + 0.2).clip(-0.9, 0.9)
    res = sos_run(unit_box_game(0.1), path)
    logk = np.asarray(res.ledger.logK_true)
    assert logk[-1] > 50.0
    # unbounded growth shows up as strictly increasing block averages
    blocks = logk.reshape(6, 500).mean(axis=1)
    assert np.all(np.diff(blocks) > 0.0)


def test_fast_rule_tracks_exact_run_on_small_outcomes():
    from gtpbet.continuous import game_config_for_embedding

    rng = np.random.default_rng(6)
    delta = 0.01
    path = rng.choice([-delta, delta], size=(2000, 1), p=[0.45, 0.55])
    cfg = game_config_for_embedding(delta, 1)
    res = sos_run(cfg, path)
    c = delta / 0.9
    fast, _ = sos_capital_fast(path, np.array([[c], [-c]]), 1.0 / c)
    assert abs(fast - res.ledger.logK_true[-1]) < 0.05 * max(
        1.0, abs(res.ledger.logK_true[-1])
    )


def test_fast_rule_checkpoints_prefix_consistent():
    rng = np.random.default_rng(8)
    path = rng.uniform(-0.02, 0.02, size=(500, 3))
    train = 0.05 * np.concatenate([np.eye(3), -np.eye(3)])
    full, cps = sos_capital_fast(path, train, 20.0, checkpoints=[200, 500])
    part, _ = sos_capital_fast(path[:200], train, 20.0)
    assert cps[200] == pytest.approx(part, abs=1e-12)
    assert cps[500] == pytest.approx(full, abs=1e-12)


def test_summary_fields(rademacher_run):
    out = rademacher_run.summary()
    for key in ("N", "logK_true", "logK_hindsight", "logK_approx", "C1", "C2"):
        assert key in out
    assert out["N"] == 5000
