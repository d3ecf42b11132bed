"""Self-check suites behind ``neorl verify``.

Each suite compares a production routine with its brute-force oracle and
returns a :class:`SuiteResult`. The routine under test can be swapped out,
which is how the mutation test in the test suite injects a broken
``desire_vector``.
"""
from __future__ import annotations

import time
from typing import Callable, NamedTuple

import numpy as np

from . import node as node_mod
from .gvf import GvfBank
from .node import Element
from .nres import make_grid
from .oracle import GridWorld, bank_q_star, desire_brute, superpose_brute, train_to_convergence


class SuiteResult(NamedTuple):
    name: str
    passed: bool
    detail: str
    seconds: float


def _timed(name, fn) -> SuiteResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, not an abort
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return SuiteResult(name, bool(ok), detail, time.perf_counter() - t0)


def oracle_suite():
    worst = 0.0
    for n in (1, 3, 7):
        for gamma in (0.5, 0.95):
            bank = train_to_convergence(GvfBank(make_grid(n), gamma, 1.0))
            worst = max(worst, float(np.max(np.abs(bank.q - bank_q_star(GridWorld(n), gamma)))))
    return worst < 1e-9, f"max |q - q*| = {worst:.3g}"


def _random_case(rng, n=5, k=6):
    bank = GvfBank(make_grid(n))
    bank.q[...] = rng.uniform(0, 1, bank.q.shape)
    els = [Element(*rng.uniform(0, 1, 2), float(rng.uniform(-2, 2))) for _ in range(k)]
    return bank, els, int(rng.integers(n * n))


def superposition_suite(extract: Callable | None = None, cases: int = 100, seed: int = 0):
    extract = extract or node_mod.extract_q
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        bank, els, cell = _random_case(rng)
        whole = extract(bank, cell, els)
        worst = max(worst, float(np.max(np.abs(whole - superpose_brute(bank, cell, els)))))
        mask = rng.integers(1, 2 ** len(els) - 1)
        s1 = [e for i, e in enumerate(els) if mask >> i & 1]
        s2 = [e for i, e in enumerate(els) if not mask >> i & 1]
        worst = max(worst, float(np.max(np.abs(whole - extract(bank, cell, s1) - extract(bank, cell, s2)))))
    return worst <= 1e-12, f"max deviation = {worst:.3g} over {cases} cases"


def desire_suite(desire: Callable | None = None, cases: int = 1000, seed: int = 1):
    desire = desire or node_mod.desire_vector
    rng = np.random.default_rng(seed)
    for _ in range(cases):
        q = rng.uniform(-1, 1, 4)
        if not np.array_equal(desire(q), desire_brute(q)):
            return False, f"desire_vector({q.tolist()}) != basis sum"
    for _ in range(cases):
        els = [Element(*rng.uniform(0, 1, 2), float(rng.integers(-3, 4))) for _ in range(rng.integers(0, 6))]
        out = node_mod.emit_element((0.5, 0.5), rng.uniform(-1, 1, 2), els, (0.0, 0.0, 1.0, 1.0))
        if out.valence != sum(e.valence for e in els):
            return False, "emitted valence differs from the input sum"
    return True, f"{cases} quadruples and {cases} element sets exact"


def partition_suite(samples: int = 10_000, seed: int = 2):
    rng = np.random.default_rng(seed)
    for n in (1, 3, 7, 23):
        g = make_grid(n)
        if [g.cell_of(*g.cell_center(c)) for c in range(g.n_cells)] != list(range(g.n_cells)):
            return False, f"cell_of(cell_center(c)) != c at N={n}"
        pts = rng.uniform(0, 1, (samples, 2))
        cells = g.cells_of(pts)
        w, h = g.cell_size
        rows, cols = np.divmod(cells, n)
        inside = (pts[:, 0] >= cols * w) & (pts[:, 0] < (cols + 1) * w) & (pts[:, 1] >= rows * h) & (pts[:, 1] < (rows + 1) * h)
        if not inside.all():
            return False, f"a point fell outside its claimed cell at N={n}"
    return True, f"{samples} points per grid, N in (1, 3, 7, 23)"


def run_all(desire: Callable | None = None, extract: Callable | None = None) -> list[SuiteResult]:
    return [
        _timed("oracle-equivalence", oracle_suite),
        _timed("superposition", lambda: superposition_suite(extract)),
        _timed("desire-arithmetic", lambda: desire_suite(desire)),
        _timed("partition", partition_suite),
    ]


def format_table(results: list[SuiteResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'suite':<{width}}  result  seconds  detail"]
    for r in results:
        lines.append(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.seconds:7.2f}  {r.detail}")
    return "\n".join(lines)
