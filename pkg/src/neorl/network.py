"""Purposive networks: neoRL nodes wired together by desire edges.

A network routes WaterWorld objects into nodes as elements-of-interest,
feeds each node's output desire into other nodes (or back into itself one
step later), and forms the agent's value function as a weighted sum of
selected node outputs.
"""
from __future__ import annotations

import enum
import graphlib
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .actions import N_ACTIONS, Action
from .errors import ConfigurationError
from .gvf import GvfBank
from .node import Element, NodeOutput, node_forward
from .nres import UNIT_SQUARE, Bounds, NresGrid, compatible
from .waterworld import Color, Observation


class Filter(enum.Enum):
    ALL = "all"
    GREEN_ONLY = "green"
    RED_ONLY = "red"


class Delay(enum.Enum):
    IMMEDIATE = "immediate"
    ONE_STEP = "one_step"


# valence given to each object colour when it enters a network
OBJECT_VALENCE = {Color.GREEN: 1.0, Color.RED: -1.0}


@dataclass(frozen=True)
class ExternalObjects:
    filter: Filter = Filter.ALL

    def __str__(self):
        return f"objects[{self.filter.value}]"


@dataclass(frozen=True)
class NodeDesire:
    node: str
    group: str

    def __str__(self):
        return f"{self.node}.{self.group}"


Source = Union[ExternalObjects, NodeDesire]


@dataclass(frozen=True)
class NodeSpec:
    name: str
    resolution: int
    gamma: float = 0.95
    alpha: float = 0.1
    groups: tuple[str, ...] = ("main",)
    bounds: Bounds | None = None  # None: the network's arena bounds


@dataclass(frozen=True)
class EdgeSpec:
    source: Source
    node: str
    group: str
    gain: float = 1.0
    delay: Delay = Delay.IMMEDIATE


@dataclass(frozen=True)
class TapSpec:
    node: str
    group: str
    weight: float = 1.0


@dataclass(frozen=True)
class NetworkSpec:
    nodes: tuple[NodeSpec, ...]
    edges: tuple[EdgeSpec, ...]
    taps: tuple[TapSpec, ...]
    epsilon: float = 0.1
    bounds: Bounds = UNIT_SQUARE
    normalize_desire: bool = False


class TickResult(NamedTuple):
    action: Action
    agent_q: np.ndarray
    diagnostics: dict[str, NodeOutput]


def epsilon_greedy(q, epsilon: float, rng: np.random.Generator) -> Action:
    """Uniform action with probability ``epsilon``, else uniform over the argmax set."""
    if rng.random() < epsilon:
        return Action(int(rng.integers(N_ACTIONS)))
    q = np.asarray(q)
    best = np.flatnonzero(q == q.max())
    if len(best) == 1:
        return Action(int(best[0]))
    return Action(int(best[rng.integers(len(best))]))


def _validate(spec: NetworkSpec) -> list[str]:
    """Check the spec and return node names in evaluation order."""
    if not 0.0 <= spec.epsilon <= 1.0:
        raise ConfigurationError(f"epsilon must lie in [0, 1], got {spec.epsilon!r}")
    names = [n.name for n in spec.nodes]
    if not names:
        raise ConfigurationError("network has no nodes")
    if len(set(names)) != len(names):
        raise ConfigurationError(f"duplicate node names in {names}")
    groups = {}
    for n in spec.nodes:
        if len(set(n.groups)) != len(n.groups) or not n.groups:
            raise ConfigurationError(f"node {n.name!r} needs unique, non-empty extraction groups, got {n.groups}")
        groups[n.name] = set(n.groups)

    def check_ref(node, group, what):
        if node not in groups:
            raise ConfigurationError(f"{what} refers to unknown node {node!r}")
        if group not in groups[node]:
            raise ConfigurationError(f"{what} refers to unknown group {node}.{group}")

    graph = {name: set() for name in names}
    for e in spec.edges:
        check_ref(e.node, e.group, f"edge into {e.node}.{e.group}")
        if not np.isfinite(e.gain):
            raise ConfigurationError(f"edge gain must be finite, got {e.gain!r}")
        if isinstance(e.source, NodeDesire):
            check_ref(e.source.node, e.source.group, f"edge from {e.source}")
            if e.delay is Delay.IMMEDIATE:
                if e.source.node == e.node:
                    raise ConfigurationError(
                        f"immediate self-edge on {e.node!r} is a cycle; recurrent edges need delay=one_step"
                    )
                graph[e.node].add(e.source.node)
        elif e.delay is not Delay.IMMEDIATE:
            raise ConfigurationError("edges from external objects must be immediate")

    if not spec.taps:
        raise ConfigurationError("network needs at least one value tap")
    for t in spec.taps:
        check_ref(t.node, t.group, "tap")
        if not np.isfinite(t.weight):
            raise ConfigurationError(f"tap weight must be finite, got {t.weight!r}")

    try:
        tuple(graphlib.TopologicalSorter(graph).static_order())
    except graphlib.CycleError as exc:
        cycle = " -> ".join(exc.args[1])
        raise ConfigurationError(f"immediate desire edges form a cycle: {cycle}") from None

    # Kahn's algorithm, ties broken by name so declaration order is irrelevant
    pending = {name: set(deps) for name, deps in graph.items()}
    order = []
    while pending:
        ready = sorted(name for name, deps in pending.items() if not deps)
        name = ready[0]
        order.append(name)
        del pending[name]
        for deps in pending.values():
            deps.discard(name)
    return order


class Network:
    """A validated purposive network with its own GVF banks and recurrent memory."""

    def __init__(self, spec: NetworkSpec):
        self.spec = spec
        self.order = _validate(spec)
        self.epsilon = spec.epsilon
        self.bounds = tuple(spec.bounds)
        specs = {n.name: n for n in spec.nodes}
        self.grids: dict[str, NresGrid] = {}
        self.banks: dict[str, GvfBank] = {}
        for name in self.order:
            ns = specs[name]
            grid = NresGrid(ns.resolution, tuple(ns.bounds or spec.bounds))
            if not compatible(grid, NresGrid(1, self.bounds)):
                raise ConfigurationError(
                    f"node {name!r} covers {grid.bounds}, incompatible with the arena {self.bounds}"
                )
            self.grids[name] = grid
            self.banks[name] = GvfBank(grid, ns.gamma, ns.alpha)
        self.groups = {name: specs[name].groups for name in self.order}
        self.taps = tuple(sorted(spec.taps, key=lambda t: (t.node, t.group)))
        self.edges = tuple(spec.edges)
        self.incoming: dict[tuple[str, str], list[int]] = {}
        for i, e in enumerate(self.edges):
            self.incoming.setdefault((e.node, e.group), []).append(i)
        self.recurrent = [i for i, e in enumerate(self.edges) if e.delay is Delay.ONE_STEP]
        x0, y0, x1, y1 = self.bounds
        centre = Element((x0 + x1) / 2, (y0 + y1) / 2, 0.0)
        self.delayed: dict[int, Element] = {i: centre for i in self.recurrent}

    def reset(self) -> None:
        for name, bank in self.banks.items():
            self.banks[name] = GvfBank(bank.grid, bank.gamma, bank.alpha)
        x0, y0, x1, y1 = self.bounds
        centre = Element((x0 + x1) / 2, (y0 + y1) / 2, 0.0)
        self.delayed = {i: centre for i in self.recurrent}

    @staticmethod
    def _external(obs: Observation) -> dict[Filter, list]:
        rows = [(o.position[0], o.position[1], OBJECT_VALENCE[o.color]) for o in obs.objects]
        return {
            Filter.ALL: rows,
            Filter.GREEN_ONLY: [r for r in rows if r[2] > 0],
            Filter.RED_ONLY: [r for r in rows if r[2] < 0],
        }

    def forward(self, obs: Observation) -> tuple[np.ndarray, dict[str, NodeOutput]]:
        """Evaluate every node group and the weighted value taps; no side effects."""
        external = self._external(obs)
        outputs: dict[tuple[str, str], NodeOutput] = {}
        agent = obs.agent_position
        for name in self.order:
            grid, bank = self.grids[name], self.banks[name]
            for group in self.groups[name]:
                elements = []
                for i in self.incoming.get((name, group), ()):
                    e = self.edges[i]
                    if isinstance(e.source, ExternalObjects):
                        elements.extend((x, y, v * e.gain) for x, y, v in external[e.source.filter])
                    else:
                        el = self.delayed[i] if e.delay is Delay.ONE_STEP else outputs[(e.source.node, e.source.group)].desire
                        elements.append((el.x, el.y, el.valence * e.gain))
                outputs[(name, group)] = node_forward(bank, grid, agent, elements, self.spec.normalize_desire)
        agent_q = np.zeros(N_ACTIONS)
        for t in self.taps:
            agent_q = agent_q + t.weight * outputs[(t.node, t.group)].q
        return agent_q, {f"{n}.{g}": out for (n, g), out in outputs.items()}

    def tick(self, obs: Observation, rng: np.random.Generator) -> TickResult:
        agent_q, diagnostics = self.forward(obs)
        action = epsilon_greedy(agent_q, self.epsilon, rng)
        for i in self.recurrent:
            src = self.edges[i].source
            self.delayed[i] = diagnostics[f"{src.node}.{src.group}"].desire
        return TickResult(action, agent_q, diagnostics)

    def learn(self, prev_obs: Observation, action: int, next_obs: Observation) -> None:
        """One off-policy transition per node, expressed in that node's own grid."""
        (x0, y0), (x1, y1) = prev_obs.agent_position, next_obs.agent_position
        for name in self.order:
            grid = self.grids[name]
            self.banks[name].update_all(grid.cell_of(x0, y0), int(action), grid.cell_of(x1, y1))

    def describe(self) -> str:
        """Plain-text adjacency listing of the wiring."""
        lines = [f"network: {len(self.order)} nodes, epsilon={self.epsilon:g}"]
        for name in self.order:
            grid = self.grids[name]
            bank = self.banks[name]
            lines.append(f"node {name}: {grid.resolution}x{grid.resolution} grid, gamma={bank.gamma:g}, alpha={bank.alpha:g}")
            for group in self.groups[name]:
                lines.append(f"  group {name}.{group}")
                for i in self.incoming.get((name, group), ()):
                    e = self.edges[i]
                    lag = " (one-step delay)" if e.delay is Delay.ONE_STEP else ""
                    lines.append(f"    <- {e.source} gain={e.gain:g}{lag}")
        for t in self.taps:
            lines.append(f"tap {t.node}.{t.group} weight={t.weight:g}")
        return "\n".join(lines)


def build_network(spec: NetworkSpec) -> Network:
    return Network(spec)


def tick(network: Network, observation: Observation, rng: np.random.Generator) -> TickResult:
    return network.tick(observation, rng)


def learn(network: Network, prev_observation: Observation, action: int, next_observation: Observation) -> Network:
    network.learn(prev_observation, action, next_observation)
    return network
