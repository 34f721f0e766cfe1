"""Minimum eccentricity selection.

Find a node minimising ``f(v, e(v))`` without knowing eccentricities, using
lower bounds ``e_L`` as estimates and enriching the lower certificate with
antipodes until the estimate of the chosen node is exact.

An objective is a callable mapping the whole lower-bound vector ``ell`` to a
float vector of values ``f(v, ell[v])`` (``inf`` allowed).  It must be
non-decreasing in ``ell`` for every ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .certificates import BoundState
from .graph import Graph, Ranking
from .traversal import BACKWARD, FORWARD, DistanceRow, QueryCounter, dist_from

Objective = Callable[[np.ndarray], np.ndarray]


class MonotonicityError(RuntimeError):
    """The objective is observably not non-decreasing in its second argument."""


@dataclass
class Selection:
    node: int
    value: float
    row: DistanceRow | None  # forward sweep of ``node``; None on the early exit


def ecc_objective(ell: np.ndarray) -> np.ndarray:
    """``f(v, l) = l``: plain minimum eccentricity."""
    return ell.astype(np.float64)


def restricted(nodes: Iterable[int], n: int) -> Objective:
    """``f(v, l) = l`` on ``nodes`` and ``inf`` elsewhere."""
    mask = np.zeros(n, dtype=bool)
    mask[list(nodes)] = True

    def f(ell: np.ndarray) -> np.ndarray:
        return np.where(mask, ell.astype(np.float64), np.inf)

    return f


def pointwise(fn: Callable[[int, int], float]) -> Objective:
    """Lift a scalar ``fn(v, l)`` to the vector form (slow; for tests and small graphs)."""

    def f(ell: np.ndarray) -> np.ndarray:
        return np.fromiter((fn(v, int(l)) for v, l in enumerate(ell)), dtype=np.float64, count=len(ell))

    return f


def select(
    graph: Graph,
    ranking: Ranking,
    state: BoundState,
    f: Objective,
    counter: QueryCounter,
    check: bool = False,
) -> Selection:
    """Return a node ``u`` with ``f(u, e(u))`` minimal, along with that value.

    On return ``e_L(u) == e(u)`` and ``f(v, e_L(v)) >= f(u, e(u))`` for all
    ``v``.  Successful iterations cost one sweep, unsuccessful ones two (and
    add one new antipode to ``state.L``).  When every ``f(v, e_L(v))`` is
    already infinite the answer is infinite by monotonicity and no sweep is
    spent.
    """
    prev: np.ndarray | None = None
    while True:
        vals = f(state.e_L)
        if prev is not None and np.any(vals < prev):
            v = int(np.flatnonzero(vals < prev)[0])
            raise MonotonicityError(
                f"objective value of node {v} dropped while its lower bound grew; "
                "the objective must be non-decreasing in the bound"
            )
        u = int(np.argmin(vals))
        if np.isinf(vals[u]):
            return Selection(u, float("inf"), None)
        row = dist_from(graph, u, FORWARD, ranking, counter)
        if state.e_L[u] == row.ecc:
            value = float(vals[u])
            if check and np.any(f(state.e_L) < value):
                raise AssertionError("selection post-state violated")
            return Selection(u, value, row)
        a = row.antipode
        # a furthest node already in L would make the bound of u tight
        assert not state.in_L[a], f"antipode {a} of untight node {u} already in L"
        if graph.directed:
            state.lower_update(a, dist_from(graph, a, BACKWARD, ranking, counter))
        else:
            D_a = dist_from(graph, a, FORWARD, ranking, counter)
            state.lower_update(a, D_a, ecc_a=D_a.ecc)
        prev = vals


def arg_min_ecc(graph: Graph, ranking: Ranking, state: BoundState, f: Objective,
                counter: QueryCounter) -> int:
    return select(graph, ranking, state, f, counter).node


def min_ecc(graph: Graph, ranking: Ranking, state: BoundState, f: Objective,
            counter: QueryCounter) -> float:
    return select(graph, ranking, state, f, counter).value
