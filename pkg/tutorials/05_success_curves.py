"""
Success rate against sparsity
=============================

A small version of the recovery sweep, written to CSV for plotting
elsewhere.  The same sweep is available as ``hubtomo recover-sweep``.
"""

import tempfile
from pathlib import Path

from hubtomo.experiments import SUMMARY_COLUMNS, ExperimentConfig, recover_sweep, success_curve, write_csv

config = ExperimentConfig(n=(100,), d=(10,), ratios=(0.4, 0.5), trials=5)
rows, summary, ok = recover_sweep(config)
print("all hubs certified:", ok)

for ratio in config.ratios:
    curve = success_curve(summary, "matching", 100, 10, ratio)
    print(f"N/m={ratio}: " + "  ".join(f"{r:.2f}:{s:.1f}" for r, s in curve.items()))

out = Path(tempfile.mkdtemp()) / "summary.csv"
write_csv(summary, out, SUMMARY_COLUMNS)
print("wrote", out)
print(out.read_text().splitlines()[0])
