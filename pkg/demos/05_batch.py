"""A small seeded batch with mean and spread, written to CSV."""
import tempfile
from pathlib import Path

from neorl.experiment import ExperimentConfig, run_batch, write_batch

cfg = ExperimentConfig(preset="D", steps=9000, seeds=range(4))
curve, traces = run_batch(cfg, workers=1)
for s, m, sd in list(zip(curve.steps, curve.mean, curve.stddev))[::6]:
    print(f"step {s:5d}  {m:7.2f} ± {sd:5.2f}")

out = Path(tempfile.mkdtemp())
for f in write_batch(out, "D", curve, traces):
    print("wrote", f)
