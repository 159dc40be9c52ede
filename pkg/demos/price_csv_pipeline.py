"""End-to-end pipeline from a price CSV to a capital ledger.

Daily prices are turned into returns, mapped affinely onto [-1, 1] by
their observed extremes, centered by a forecast value built from the
training corners plus an initial forecast window, and then played as a
bounded betting game.  The same flow is available from the command line:

    gtpbet transform prices.csv --c 0.17
    gtpbet run run.cfg          # with scenario = sos_csv

This script does it in-process and prints the resulting ledger tail.
"""

import tempfile
from pathlib import Path

import numpy as np

from gtpbet import read_price_csv, sos_run, transform_returns

workdir = Path(tempfile.mkdtemp(prefix="gtpbet_demo_"))

# synthetic two-item daily price history, ~one year
rng = np.random.default_rng(8)
steps = 1.0 + rng.uniform(-0.03, 0.03, size=(250, 2)) + [0.001, 0.0005]
prices = 100.0 * np.cumprod(steps, axis=0)
csv = workdir / "prices.csv"
with open(csv, "w") as fh:
    fh.write("date,A,B\n")
    for i, row in enumerate(prices):
        fh.write(f"{i},{row[0]:.6f},{row[1]:.6f}\n")

table = read_price_csv(csv)
outcomes, game, tr = transform_returns(table, c=0.17)
print(f"read {table.shape[0]} price rows for {table.shape[1]} items")
print(f"forecast window F = {tr.F}, centering rho = {np.round(tr.rho, 4)}")
print(f"live game: {outcomes.shape[0]} rounds on the shifted box")
print()

res = sos_run(game, outcomes)
ledger_csv = workdir / "ledger.csv"
res.ledger.to_csv(ledger_csv)
led = res.ledger
print("round   logK_true  hindsight")
for n in (50, 100, len(led)):
    print(f"{n:5d}  {led.logK_true[n - 1]:9.4f}  {led.logK_hindsight[n - 1]:9.4f}")
print()
print(f"full ledger written to {ledger_csv}")
