"""Tabular GVF banks: the cognitive map of a single NRES grid.

A bank holds one general value function per goal cell. Every GVF is
trained off-policy from the same behaviour stream with one-step Q-learning;
the cumulant is 1 on entering the goal cell, where the GVF also terminates.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .actions import N_ACTIONS, Action
from .errors import ConfigurationError
from .nres import NresGrid


class CellTransition(NamedTuple):
    from_cell: int
    action: int
    to_cell: int


@dataclass
class GvfBank:
    """Action values ``q[goal, state, action]`` for every goal cell of ``grid``."""

    grid: NresGrid
    gamma: float = 0.95
    alpha: float = 0.1
    table: np.ndarray = field(default=None, repr=False)  # stored [state, action, goal]

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ConfigurationError(f"gamma must lie in (0, 1), got {self.gamma!r}")
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigurationError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        n = self.grid.n_cells
        if self.table is None:
            self.table = np.zeros((n, N_ACTIONS, n))
        elif self.table.shape != (n, N_ACTIONS, n):
            raise ConfigurationError(f"table has shape {self.table.shape}, expected {(n, N_ACTIONS, n)}")

    @property
    def q(self) -> np.ndarray:
        """Writable view indexed ``[goal, state, action]``."""
        return self.table.transpose(2, 0, 1)

    @property
    def n_cells(self) -> int:
        return self.grid.n_cells

    def update_all(self, from_cell: int, action: int, to_cell: int) -> None:
        """Train every GVF in the bank on one observed transition (in place)."""
        # bootstrap from the successor state; goals entered this step terminate
        target = self.table[to_cell].max(axis=0)
        target *= self.gamma
        target[to_cell] = 1.0
        row = self.table[from_cell, action]
        row += self.alpha * (target - row)

    def q_slice(self, goal: int, state: int) -> np.ndarray:
        """The four action values for reaching ``goal`` from ``state`` (a copy)."""
        n = self.n_cells
        if not (0 <= goal < n and 0 <= state < n):
            raise IndexError(f"goal/state ({goal}, {state}) out of range for {n} cells")
        return self.table[state, :, goal].copy()

    def copy(self) -> "GvfBank":
        return GvfBank(self.grid, self.gamma, self.alpha, self.table.copy())

    def dump_csv(self, path, nonzero_only: bool = True) -> int:
        """Write ``goal,state,action,value`` rows; returns the number of rows."""
        rows = 0
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["goal", "state", "action", "value"])
            q = self.q
            idx = np.argwhere(q != 0.0) if nonzero_only else np.ndindex(*q.shape)
            for g, s, a in idx:
                writer.writerow([int(g), int(s), Action(int(a)).name, repr(float(q[g, s, a]))])
                rows += 1
        return rows


def create_bank(grid: NresGrid, gamma: float = 0.95, alpha: float = 0.1) -> GvfBank:
    return GvfBank(grid, gamma, alpha)


def update_all(bank: GvfBank, t: CellTransition) -> GvfBank:
    bank.update_all(t.from_cell, int(t.action), t.to_cell)
    return bank


def q_slice(bank: GvfBank, goal: int, state: int) -> np.ndarray:
    return bank.q_slice(goal, state)
