"""The neoRL behavioural node.

A node reads a set of elements-of-interest against its GVF bank. Each element
selects the GVF of the cell it falls in; the slices are weighted by valence
and superposed into one action-value quadruple. Because the actions have a
Euclidean meaning, the quadruple doubles as a desire vector, and the node can
emit that desire as a new element for any compatible node downstream.
"""
from __future__ import annotations

import math
from typing import Iterable, NamedTuple

import numpy as np

from .gvf import GvfBank
from .nres import Bounds, NresGrid


class Element(NamedTuple):
    """A point of interest in the arena with a signed reward expectancy."""

    x: float
    y: float
    valence: float

    @property
    def coordinate(self) -> tuple[float, float]:
        return (self.x, self.y)


class NodeOutput(NamedTuple):
    q: np.ndarray
    desire: Element


def _rows(elements) -> list[tuple[float, float, float]]:
    if isinstance(elements, np.ndarray):
        return [tuple(r) for r in elements.reshape(-1, 3).tolist()]
    return [(float(e[0]), float(e[1]), float(e[2])) for e in elements]


def _superpose(bank: GvfBank, agent_cell: int, rows) -> list[float]:
    # summation runs in the given row order
    grid, table = bank.grid, bank.table[agent_cell]
    qn = qs = qe = qw = 0.0
    for x, y, v in rows:
        if v == 0.0:
            continue
        n, s, e, w = table[:, grid.cell_of(x, y)].tolist()
        qn += v * n
        qs += v * s
        qe += v * e
        qw += v * w
    return [qn, qs, qe, qw]


def extract_q(bank: GvfBank, agent_cell: int, elements: Iterable[Element] | np.ndarray) -> np.ndarray:
    """Valence-weighted sum of the GVF slices addressed by ``elements``.

    ``elements`` may be a sequence of :class:`Element` (or ``(x, y, valence)``
    tuples) or an ``(k, 3)`` array. The empty set gives zeros.
    """
    if not 0 <= agent_cell < bank.n_cells:
        raise IndexError(f"agent cell {agent_cell} out of range")
    return np.array(_superpose(bank, agent_cell, _rows(elements)))


def desire_vector(q) -> np.ndarray:
    """Project an ``(N, S, E, W)`` value quadruple onto the cardinal basis."""
    q_n, q_s, q_e, q_w = (float(v) for v in q)
    return np.array([q_e - q_w, q_n - q_s])


def _emit(agent_position, dx: float, dy: float, valences, bounds: Bounds, normalize: bool) -> Element:
    valence = math.fsum(valences)
    if normalize:
        norm = math.hypot(dx, dy)
        if norm > 0.0:
            dx, dy = dx / norm, dy / norm
    x0, y0, x1, y1 = bounds
    x = min(max(agent_position[0] + dx, x0), x1)
    y = min(max(agent_position[1] + dy, y0), y1)
    return Element(x, y, valence)


def emit_element(agent_position, d, elements, bounds: Bounds, normalize: bool = False) -> Element:
    """Place the output desire at ``agent_position + d``, clamped to ``bounds``.

    The emitted valence is the sum of the input valences. With ``normalize``
    the displacement is rescaled to unit length first.
    """
    return _emit(agent_position, float(d[0]), float(d[1]), [r[2] for r in _rows(elements)], bounds, normalize)


def node_forward(bank: GvfBank, grid: NresGrid, agent_position, elements, normalize: bool = False) -> NodeOutput:
    """Evaluate a node: value quadruple plus the desire element it emits.

    Pure with respect to ``bank``. Inputs are sorted first so the result does
    not depend on the order the caller listed them in.
    """
    if grid is not bank.grid and grid != bank.grid:
        raise ValueError("grid does not match the bank's grid")
    rows = sorted(_rows(elements))
    qn, qs, qe, qw = _superpose(bank, grid.cell_of(agent_position[0], agent_position[1]), rows)
    desire = _emit(agent_position, qe - qw, qn - qs, [r[2] for r in rows], grid.bounds, normalize)
    return NodeOutput(np.array([qn, qs, qe, qw]), desire)
