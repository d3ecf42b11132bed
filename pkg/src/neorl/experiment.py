"""Seeded WaterWorld experiments for the four preset architectures.

Preset wiring (``PC`` is the coarse place-cell node, ``OVC`` the fine one):

* ``A``: every object feeds ``PC``; its single desire drives ``OVC``; tap on ``OVC``.
* ``B``: green and red objects are read separately from ``PC``; both desires drive ``OVC``.
* ``C``: ``B`` plus a ``PC`` group over all objects, tapped 1:1 with ``OVC``.
* ``D``: ``C`` plus ``OVC``'s own desire fed back one step later with gain -1.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError
from .network import (
    Delay,
    EdgeSpec,
    ExternalObjects,
    Filter,
    Network,
    NetworkSpec,
    NodeDesire,
    NodeSpec,
    TapSpec,
)
from .waterworld import EnvParams, Event, WaterWorld

PRESETS = ("A", "B", "C", "D")

STEPS_PER_SECOND = 30

# constants a preset may be built with; anything else is rejected
DEFAULT_OVERRIDES = {
    "gamma": 0.95,
    "alpha": 0.1,
    "epsilon": 0.1,
    "pc_resolution": 7,
    "ovc_resolution": 23,
    "feedback_gain": -1.0,
    "pc_weight": 1.0,
    "ovc_weight": 1.0,
    "normalize_desire": False,
}

_ENV_STREAM, _POLICY_STREAM = 0, 1


def preset(name: str, bounds=(0.0, 0.0, 1.0, 1.0), **overrides) -> NetworkSpec:
    """Network spec for experiment ``A``, ``B``, ``C`` or ``D``."""
    name = str(name).upper()
    if name not in PRESETS:
        raise ConfigurationError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")
    unknown = set(overrides) - set(DEFAULT_OVERRIDES)
    if unknown:
        raise ConfigurationError(f"unknown override(s): {', '.join(sorted(unknown))}")
    c = {**DEFAULT_OVERRIDES, **overrides}
    learn = dict(gamma=c["gamma"], alpha=c["alpha"])
    ovc = NodeSpec("OVC", c["ovc_resolution"], groups=("main",), **learn)

    if name == "A":
        pc = NodeSpec("PC", c["pc_resolution"], groups=("all",), **learn)
        edges = [
            EdgeSpec(ExternalObjects(Filter.ALL), "PC", "all"),
            EdgeSpec(NodeDesire("PC", "all"), "OVC", "main"),
        ]
        taps = [TapSpec("OVC", "main", c["ovc_weight"])]
    else:
        collaborative = name in ("C", "D")
        pc_groups = ("green", "red", "all") if collaborative else ("green", "red")
        pc = NodeSpec("PC", c["pc_resolution"], groups=pc_groups, **learn)
        edges = [
            EdgeSpec(ExternalObjects(Filter.GREEN_ONLY), "PC", "green"),
            EdgeSpec(ExternalObjects(Filter.RED_ONLY), "PC", "red"),
            EdgeSpec(NodeDesire("PC", "green"), "OVC", "main"),
            EdgeSpec(NodeDesire("PC", "red"), "OVC", "main"),
        ]
        taps = [TapSpec("OVC", "main", c["ovc_weight"])]
        if collaborative:
            edges.append(EdgeSpec(ExternalObjects(Filter.ALL), "PC", "all"))
            taps.append(TapSpec("PC", "all", c["pc_weight"]))
        if name == "D":
            edges.append(EdgeSpec(NodeDesire("OVC", "main"), "OVC", "main", c["feedback_gain"], Delay.ONE_STEP))
    return NetworkSpec(
        (pc, ovc), tuple(edges), tuple(taps), c["epsilon"], tuple(bounds), bool(c["normalize_desire"])
    )


def to_minutes(step: int, steps_per_second: float = STEPS_PER_SECOND) -> float:
    if step < 0:
        raise ValueError("step must be non-negative")
    return step / (steps_per_second * 60)


@dataclass
class ExperimentConfig:
    preset: str | NetworkSpec = "D"
    env: EnvParams = field(default_factory=EnvParams)
    steps: int = 36_000
    seeds: tuple[int, ...] = tuple(range(20))
    overrides: dict = field(default_factory=dict)
    sample_interval: int = 300
    steps_per_second: float = STEPS_PER_SECOND

    def __post_init__(self):
        self.seeds = tuple(int(s) for s in self.seeds)
        if int(self.steps) != self.steps or self.steps < 1:
            raise ConfigurationError(f"steps must be an integer >= 1, got {self.steps!r}")
        if not self.seeds:
            raise ConfigurationError("seeds must be non-empty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigurationError(f"seeds must be distinct, got {self.seeds}")
        if self.sample_interval < 1:
            raise ConfigurationError("sample_interval must be >= 1")
        if self.steps_per_second <= 0:
            raise ConfigurationError("steps_per_second must be positive")
        if isinstance(self.preset, str):
            self.network_spec()  # validates the name and overrides early

    @property
    def label(self) -> str:
        return self.preset if isinstance(self.preset, str) else "custom"

    def network_spec(self) -> NetworkSpec:
        if isinstance(self.preset, NetworkSpec):
            if self.overrides:
                raise ConfigurationError("overrides apply to named presets only")
            return self.preset
        return preset(self.preset, self.env.bounds, **self.overrides)


class RewardTrace(NamedTuple):
    seed: int
    steps: tuple[int, ...]
    accumulated: tuple[float, ...]
    green_captures: int
    red_captures: int


class AggregateCurve(NamedTuple):
    steps: tuple[int, ...]
    minutes: tuple[float, ...]
    mean: tuple[float, ...]
    stddev: tuple[float, ...]
    n: int


def seed_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent environment and policy generators split from one master seed."""
    env = np.random.default_rng(np.random.SeedSequence([seed, _ENV_STREAM]))
    policy = np.random.default_rng(np.random.SeedSequence([seed, _POLICY_STREAM]))
    return env, policy


def sample_steps(steps: int, interval: int) -> list[int]:
    points = list(range(interval, steps + 1, interval))
    if not points or points[-1] != steps:
        points.append(steps)
    return points


def run_trial(config: ExperimentConfig, seed: int) -> RewardTrace:
    """One fresh agent in one fresh world, no pre-training."""
    return simulate(config, seed)[0]


def simulate(config: ExperimentConfig, seed: int) -> tuple[RewardTrace, Network]:
    """:func:`run_trial` that also hands back the trained network."""
    env_rng, policy_rng = seed_streams(seed)
    world = WaterWorld(config.env, env_rng)
    net = Network(config.network_spec())
    points = sample_steps(config.steps, config.sample_interval)
    samples = []
    total = 0.0
    greens = reds = 0
    obs = world.observe()
    nxt_point = 0
    for t in range(1, config.steps + 1):
        action = net.tick(obs, policy_rng).action
        reward, events = world.step(action)
        nxt = world.observe()
        net.learn(obs, action, nxt)
        obs = nxt
        if events:
            total += reward
            greens += events.count(Event.CAPTURED_GREEN)
            reds += events.count(Event.CAPTURED_RED)
        if t == points[nxt_point]:
            samples.append(total)
            nxt_point += 1
    return RewardTrace(int(seed), tuple(points), tuple(samples), greens, reds), net


def aggregate(traces, steps_per_second: float = STEPS_PER_SECOND) -> AggregateCurve:
    """Mean and sample standard deviation across seeds, reduced in seed order."""
    traces = sorted(traces, key=lambda tr: tr.seed)
    if not traces:
        raise ValueError("no traces to aggregate")
    steps = traces[0].steps
    if any(tr.steps != steps for tr in traces):
        raise ValueError("traces are sampled at different steps")
    values = np.array([tr.accumulated for tr in traces])
    n = len(traces)
    means, stds = [], []
    for col in values.T:
        m = math.fsum(col) / n
        means.append(m)
        stds.append(math.sqrt(math.fsum((v - m) ** 2 for v in col) / (n - 1)) if n > 1 else 0.0)
    minutes = tuple(to_minutes(s, steps_per_second) for s in steps)
    return AggregateCurve(steps, minutes, tuple(means), tuple(stds), n)


def _trial_job(args):
    config, seed = args
    return run_trial(config, seed)


def run_batch(config: ExperimentConfig, workers: int = 1) -> tuple[AggregateCurve, list[RewardTrace]]:
    """Run every seed (optionally across processes) and aggregate the traces."""
    jobs = [(config, s) for s in config.seeds]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(_trial_job, jobs))
    else:
        traces = [_trial_job(j) for j in jobs]
    traces.sort(key=lambda tr: tr.seed)
    return aggregate(traces, config.steps_per_second), traces


def _fmt(v: float) -> str:
    return repr(float(v))


def write_trace_csv(path, trace: RewardTrace, run_id: str, steps_per_second: float = STEPS_PER_SECOND) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["run_id", "step", "minutes", "accumulated_reward"])
        for s, acc in zip(trace.steps, trace.accumulated):
            w.writerow([run_id, s, _fmt(to_minutes(s, steps_per_second)), _fmt(acc)])


def write_aggregate_csv(path, curve: AggregateCurve) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "minutes", "mean", "stddev", "n"])
        for row in zip(curve.steps, curve.minutes, curve.mean, curve.stddev):
            w.writerow([row[0], _fmt(row[1]), _fmt(row[2]), _fmt(row[3]), curve.n])


def read_trace_csv(path) -> list[tuple[str, int, float, float]]:
    with open(path, newline="") as fh:
        return [(r["run_id"], int(r["step"]), float(r["minutes"]), float(r["accumulated_reward"]))
                for r in csv.DictReader(fh)]


def read_aggregate_csv(path) -> list[tuple[int, float, float, float, int]]:
    with open(path, newline="") as fh:
        return [(int(r["step"]), float(r["minutes"]), float(r["mean"]), float(r["stddev"]), int(r["n"]))
                for r in csv.DictReader(fh)]


def write_batch(out_dir, label: str, curve: AggregateCurve, traces, steps_per_second: float = STEPS_PER_SECOND) -> list[str]:
    """Per-seed CSVs plus ``{label}_aggregate.csv`` under ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for tr in traces:
        p = os.path.join(out_dir, f"{label}_seed{tr.seed}.csv")
        write_trace_csv(p, tr, f"{label}-{tr.seed}", steps_per_second)
        paths.append(p)
    p = os.path.join(out_dir, f"{label}_aggregate.csv")
    write_aggregate_csv(p, curve)
    paths.append(p)
    return paths


def with_overrides(config: ExperimentConfig, **changes) -> ExperimentConfig:
    return replace(config, **changes)
