"""A small end-to-end experiment comparing schedulers against the baseline.

The constant_zero arm trains on the hard task alone; every other arm
spends its early epochs on the easy task. All arms share initial
parameters and batch order within a fold, so the schedule is the only
thing that differs. Scale the counts/epochs up (see the README config)
for the full-size run.
"""

import tempfile
from pathlib import Path

from curricula.harness import parse_config, render_report, run_experiment

CONFIG = """\
seed: 7
k: 5
data:
  synthetic:
    counts: [120, 120, 120]
    overlap: 0.25
train:
  learning_rate: 0.05
  epochs: 40
  batch_size: 32
  hidden_sizes: [16]
arms:
  - kind: constant_zero
  - kind: exponential
  - kind: linear
  - kind: concave_quadratic
  - kind: step
"""

with tempfile.TemporaryDirectory() as tmp:
    config_path = Path(tmp) / "config.yaml"
    config_path.write_text(CONFIG)
    config = parse_config(config_path)
    print(f"running {len(config.arms)} arms x {config.k} folds ...\n")
    report = run_experiment(config)
    table = render_report(report, Path(tmp) / "out")
    print(table)
    print("per-fold binary task AUC for the baseline arm:")
    aucs = [f"{r.binary_auc:.3f}" for r in report.per_fold["constant_zero"]]
    print("  " + "  ".join(aucs))
