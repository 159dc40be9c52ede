"""Command-line front end: scenario runner, return transform, self test.

Scenarios are described by flat key=value config files, e.g.::

    scenario = girsanov
    seed = 7
    mu = 0.1
    sigma = 0.3
    T = 50
    delta = 0.01

Outputs (ledger CSV, summary JSON, long-format plot series) land next to
the config or in --outdir.  The environment variable GTPBET_SEED
overrides the configured seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .baselines import UniversalPortfolioConfig, universal_portfolio
from .continuous import gen_gbm, girsanov_rate_experiment, gen_fbm, holder_experiment
from .domain import Domain, GameConfig, TrainingSet, make_training
from .model_select import select_dimension
from .sos import sos_run
from .transform import read_price_csv, transform_returns

SCENARIOS = (
    "sos_csv",
    "sos_synthetic",
    "universal_compare",
    "holder",
    "girsanov",
    "model_select",
    "imaginary",
)


def parse_config(path) -> dict:
    cfg = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw.rstrip()}")
            key, value = (s.strip() for s in line.split("=", 1))
            cfg[key] = value
    return cfg


def _fnum(cfg, key, default=None):
    if key not in cfg:
        if default is None:
            raise KeyError(f"missing config key {key!r}")
        return default
    return float(cfg[key])


def _seed(cfg) -> int:
    env = os.environ.get("GTPBET_SEED")
    if env is not None:
        return int(env)
    return int(cfg.get("seed", "0"))


def _write_long_series(path, series: dict) -> None:
    """Long format: series,n,value - one row per point, gnuplot/vega ready."""
    with open(path, "w", newline="") as fh:
        fh.write("series,n,value\n")
        for name, values in series.items():
            for i, v in enumerate(values, start=1):
                fh.write(f"{name},{i},{v:.17g}\n")


def _imaginary_path(n_rounds: int) -> np.ndarray:
    return (1.0 / (np.arange(1, n_rounds + 1) + 1.0))[:, None]


def _unit_game(epsilon0=0.0) -> GameConfig:
    dom = Domain.box([-1.0], [1.0])
    training = TrainingSet(
        epsilon0=epsilon0 or 0.1,
        points=np.array([[-1.0], [1.0]]),
        scheme="corners_2tod",
    )
    return GameConfig(domain=dom, training=training)


def run_scenario(cfg: dict, outdir: Path) -> dict:
    scenario = cfg.get("scenario")
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}")
    outdir.mkdir(parents=True, exist_ok=True)
    seed = _seed(cfg)

    if scenario == "imaginary":
        n_rounds = int(_fnum(cfg, "N", 2000))
        res = sos_run(_unit_game(), _imaginary_path(n_rounds))
        res.ledger.to_csv(outdir / "ledger.csv")
        res.summary_json(outdir / "summary.json")
        _write_long_series(
            outdir / "series.csv",
            {"LK1": res.ledger.logK_true, "LK0": res.ledger.logK_hindsight},
        )
        return res.summary()

    if scenario == "sos_csv":
        prices = read_price_csv(cfg["input"])
        outcomes, game, _tr = transform_returns(prices, _fnum(cfg, "c", 0.17))
        res = sos_run(game, outcomes)
        res.ledger.to_csv(outdir / "ledger.csv")
        res.summary_json(outdir / "summary.json")
        _write_long_series(
            outdir / "series.csv",
            {
                "LK0": res.ledger.logK_hindsight,
                "LK1": res.ledger.logK_true,
                "LK2": res.ledger.logK_approx,
                "LD1": res.ledger.LD1,
                "LD2": res.ledger.LD2,
                "LD3": res.ledger.LD3,
            },
        )
        return res.summary()

    if scenario == "sos_synthetic":
        d = int(_fnum(cfg, "d", 1))
        n_rounds = int(_fnum(cfg, "N", 1000))
        half = _fnum(cfg, "halfwidth", 0.5)
        rng = np.random.default_rng(seed)
        dom = Domain.box(-half * np.ones(d), half * np.ones(d))
        game = GameConfig(
            domain=dom, training=make_training(dom, _fnum(cfg, "epsilon0", 0.1))
        )
        path = rng.choice([-half, half], size=(n_rounds, d))
        res = sos_run(game, path)
        res.ledger.to_csv(outdir / "ledger.csv")
        res.summary_json(outdir / "summary.json")
        return res.summary()

    if scenario == "universal_compare":
        d = 1
        n_rounds = int(_fnum(cfg, "N", 500))
        rng = np.random.default_rng(seed)
        path = rng.uniform(-0.8, 0.8, size=(n_rounds, d))
        res = sos_run(_unit_game(), path)
        M = int(_fnum(cfg, "M", 100))
        up0 = universal_portfolio(UniversalPortfolioConfig(M=M), path)
        up1 = universal_portfolio(
            UniversalPortfolioConfig(M=M, include_training=True), path
        )
        res.ledger.to_csv(outdir / "ledger.csv")
        with open(outdir / "universal.csv", "w", newline="") as fh:
            fh.write("n,K1,KU0,KU1\n")
            for i in range(n_rounds):
                fh.write(
                    f"{i + 1},{math.exp(res.ledger.logK_true[i]):.17g},"
                    f"{up0[i]:.17g},{up1[i]:.17g}\n"
                )
        summary = res.summary()
        summary["KU0_final"] = float(up0[-1])
        summary["KU1_final"] = float(up1[-1])
        with open(outdir / "summary.json", "w") as fh:
            json.dump(summary, fh, indent=2)
        return summary

    if scenario == "holder":
        hurst = _fnum(cfg, "H", 0.5)
        path = gen_fbm(
            hurst,
            _fnum(cfg, "scale", 0.12),
            _fnum(cfg, "T", 1.0),
            _fnum(cfg, "grid_step", 1e-5),
            seed,
        )
        deltas = [float(v) for v in cfg.get("delta", "0.02 0.01 0.005").split()]
        rows, hs = holder_experiment(path, deltas)
        with open(outdir / "holder.csv", "w", newline="") as fh:
            fh.write("delta,N,trV_N,logK,delta_alpha_norm\n")
            for r in rows:
                fh.write(
                    f"{r['delta']:.17g},{r['N']},{r['trV_N']:.17g},"
                    f"{r['logK']:.17g},{r['delta_alpha_norm']:.17g}\n"
                )
        summary = {"H": hurst, "rows": rows, "H_estimates": hs}
        with open(outdir / "summary.json", "w") as fh:
            json.dump(summary, fh, indent=2)
        return summary

    if scenario == "girsanov":
        d = int(_fnum(cfg, "d", 1))
        mu = np.full(d, _fnum(cfg, "mu", 0.1))
        sigma = np.eye(d) * _fnum(cfg, "sigma", 0.3)
        out = girsanov_rate_experiment(
            mu, sigma, _fnum(cfg, "T", 50.0), _fnum(cfg, "delta", 0.01), seed
        )
        with open(outdir / "summary.json", "w") as fh:
            json.dump(out, fh, indent=2)
        return out

    if scenario == "model_select":
        d_max = int(_fnum(cfg, "d_max", 3))
        n_rounds = int(_fnum(cfg, "N", 300))
        rng = np.random.default_rng(seed)
        drift = rng.uniform(0.05, 0.2, size=d_max)
        path = np.clip(
            rng.uniform(-0.5, 0.5, size=(n_rounds, d_max)) + drift, -0.9, 0.9
        )
        report = select_dimension(path)
        report.to_csv(outdir / "model_select.csv")
        summary = {
            "selected": report.selected,
            "criterion": report.criterion.tolist(),
        }
        with open(outdir / "summary.json", "w") as fh:
            json.dump(summary, fh, indent=2)
        return summary

    raise AssertionError("unreachable")


def _cmd_run(args) -> int:
    cfg = parse_config(args.config)
    outdir = Path(args.outdir) if args.outdir else Path(args.config).parent / "out"
    summary = run_scenario(cfg, outdir)
    print(json.dumps(summary, indent=2, default=str))
    return 0


def _cmd_transform(args) -> int:
    prices = read_price_csv(args.prices)
    outcomes, _game, tr = transform_returns(prices, args.c)
    out = Path(args.output) if args.output else Path(args.prices).with_suffix(".outcomes.csv")
    d = outcomes.shape[1]
    with open(out, "w", newline="") as fh:
        fh.write(",".join(f"x{j + 1}" for j in range(d)) + "\n")
        for row in outcomes:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")
    print(f"wrote {out} ({outcomes.shape[0]} rounds, d={d}, F={tr.F})")
    print("rho = " + " ".join(format(v, ".6g") for v in tr.rho))
    return 0


def _cmd_selftest(args) -> int:
    import pytest

    tests = Path(__file__).resolve().parent.parent.parent / "tests"
    return pytest.main(["-q", str(tests)])


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gtpbet", description="sequential optimizing betting strategies"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a scenario config")
    p_run.add_argument("config")
    p_run.add_argument("--outdir")
    p_run.set_defaults(func=_cmd_run)
    p_tr = sub.add_parser("transform", help="transform a price CSV to outcomes")
    p_tr.add_argument("prices")
    p_tr.add_argument("--c", type=float, default=0.17)
    p_tr.add_argument("--output")
    p_tr.set_defaults(func=_cmd_transform)
    p_st = sub.add_parser("selftest", help="run the invariant test suite")
    p_st.set_defaults(func=_cmd_selftest)
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
