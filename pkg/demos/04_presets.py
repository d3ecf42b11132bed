"""The four wirings side by side, plus a short trial of each."""
from neorl.experiment import ExperimentConfig, preset, run_trial
from neorl.network import Network

for name in "ABCD":
    print(Network(preset(name)).describe())
    tr = run_trial(ExperimentConfig(preset=name, steps=6000, seeds=(0,)), 0)
    print(f"  after {tr.steps[-1]} steps: reward {tr.accumulated[-1]:+.0f}"
          f" ({tr.green_captures} green, {tr.red_captures} red)\n")
