"""Brute-force ground truth for the GVF bank.

On a deterministic N x N grid world (4-neighbour moves, moving off the grid
stays put) the fixed point of a cell-entry GVF is known in closed form:
``Q*(s, a) = gamma ** d(next(s, a), goal)``, with ``d`` the breadth-first
step distance. :func:`value_iteration` computes the same table a second,
independent way.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .actions import N_ACTIONS, Action
from .errors import ConfigurationError
from .gvf import GvfBank
from .nres import NresGrid

# (drow, dcol) per action; rows grow along +y
_MOVES = {Action.N: (1, 0), Action.S: (-1, 0), Action.E: (0, 1), Action.W: (0, -1)}


@dataclass(frozen=True)
class GridWorld:
    resolution: int

    def __post_init__(self):
        if self.resolution < 1:
            raise ConfigurationError("resolution must be >= 1")

    @property
    def n_cells(self) -> int:
        return self.resolution ** 2

    def next(self, state: int, action: int) -> int:
        n = self.resolution
        row, col = divmod(state, n)
        dr, dc = _MOVES[Action(action)]
        r, c = row + dr, col + dc
        if not (0 <= r < n and 0 <= c < n):
            return state
        return r * n + c

    def distances(self, goal: int) -> np.ndarray:
        """Breadth-first step counts from every cell to ``goal``."""
        dist = np.full(self.n_cells, -1, dtype=np.int64)
        dist[goal] = 0
        frontier = deque([goal])
        while frontier:
            s = frontier.popleft()
            # moves are symmetric, so predecessors of s are its neighbours
            for a in Action:
                p = self.next(s, a)
                if dist[p] < 0:
                    dist[p] = dist[s] + 1
                    frontier.append(p)
        return dist


def q_star(world: GridWorld, goal: int, gamma: float) -> np.ndarray:
    """Exact ``[state, action]`` table for the GVF that terminates on entering ``goal``."""
    if not 0 <= goal < world.n_cells:
        raise IndexError(f"goal {goal} out of range")
    dist = world.distances(goal)
    table = np.empty((world.n_cells, N_ACTIONS))
    for s in range(world.n_cells):
        for a in range(N_ACTIONS):
            table[s, a] = gamma ** int(dist[world.next(s, a)])
    return table


def value_iteration(world: GridWorld, goal: int, gamma: float, tol: float = 1e-12, max_iter: int = 100_000) -> np.ndarray:
    """Iterate the cell-entry Bellman backup to a fixed point."""
    n = world.n_cells
    nxt = np.array([[world.next(s, a) for a in range(N_ACTIONS)] for s in range(n)])
    q = np.zeros((n, N_ACTIONS))
    for _ in range(max_iter):
        v = q.max(axis=1)
        new = np.where(nxt == goal, 1.0, gamma * v[nxt])
        if np.max(np.abs(new - q)) < tol:
            return new
        q = new
    raise RuntimeError("value iteration did not converge")


def sweep_schedule(world: GridWorld, goal: int) -> list[tuple[int, int, int]]:
    """Every ``(state, action, next_state)``, ordered by the successor's distance to ``goal``.

    Under alpha = 1 a single pass in this order reaches the exact fixed point
    for ``goal``. A pair whose successor lies ``k`` steps out is backed up only
    after that successor's best move (to ``k - 1``) has been, so the bootstrap
    it reads is already final.
    """
    dist = world.distances(goal)
    pairs = [(s, a, world.next(s, a)) for s in range(world.n_cells) for a in range(N_ACTIONS)]
    return sorted(pairs, key=lambda t: (int(dist[t[2]]), t[0], t[1]))


def train_to_convergence(bank: GvfBank, world: GridWorld | None = None) -> GvfBank:
    """Drive ``bank`` (alpha must be 1) to its fixed point with one sweep per goal.

    Transitions are fed through the bank's ordinary ``update_all``. Updates
    aimed at one goal also touch every other goal; at alpha = 1 values only
    rise toward the fixed point, so those side effects never undo earlier work.
    """
    if bank.alpha != 1.0:
        raise ConfigurationError("train_to_convergence needs alpha == 1")
    world = world or GridWorld(bank.grid.resolution)
    if world.resolution != bank.grid.resolution:
        raise ConfigurationError("world and bank resolutions differ")
    for goal in range(world.n_cells):
        for s, a, s2 in sweep_schedule(world, goal):
            bank.update_all(s, a, s2)
    return bank


def bank_q_star(world: GridWorld, gamma: float) -> np.ndarray:
    """Stacked ``[goal, state, action]`` oracle table for every goal."""
    return np.stack([q_star(world, g, gamma) for g in range(world.n_cells)])


def superpose_brute(bank: GvfBank, agent_cell: int, elements) -> np.ndarray:
    """Element-by-element superposition through ``q_slice``, one action at a time."""
    total = np.zeros(N_ACTIONS)
    grid: NresGrid = bank.grid
    for x, y, valence in elements:
        s = bank.q_slice(grid.cell_of(x, y), agent_cell)
        for a in range(N_ACTIONS):
            total[a] += valence * s[a]
    return total


def desire_brute(q) -> np.ndarray:
    """Sum of ``Q(a) * unit(a)`` over the four cardinal basis vectors."""
    basis = {Action.N: (0.0, 1.0), Action.S: (0.0, -1.0), Action.E: (1.0, 0.0), Action.W: (-1.0, 0.0)}
    d = [0.0, 0.0]
    for a, (ux, uy) in basis.items():
        d[0] += q[a] * ux
        d[1] += q[a] * uy
    return np.array(d)
