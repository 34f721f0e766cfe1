"""One-to-all distance engine with query accounting.

Every algorithm in this package touches the graph only through
:func:`dist_from`; each call counts as one sweep on the supplied
:class:`QueryCounter`, whatever its direction.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph, Ranking

INF = int(_kernels.INF)

FORWARD = "forward"
BACKWARD = "backward"


class UnreachableError(RuntimeError):
    """A sweep did not reach every node; restrict the graph to its core first."""


class QueryCounter:
    """Number of one-to-all queries since the last reset."""

    def __init__(self) -> None:
        self._sweeps = 0
        self._lock = threading.Lock()

    @property
    def sweeps(self) -> int:
        return self._sweeps

    def tick(self, k: int = 1) -> None:
        with self._lock:
            self._sweeps += k

    def reset(self) -> None:
        with self._lock:
            self._sweeps = 0

    def __repr__(self) -> str:
        return f"QueryCounter(sweeps={self._sweeps})"


@dataclass(frozen=True, eq=False)
class DistanceRow:
    source: int
    direction: str
    dist: np.ndarray
    ecc: int
    antipode: int

    def __len__(self) -> int:
        return len(self.dist)


class Scratch:
    """Reusable buffers for repeated sweeps on graphs with ``n`` nodes.

    A row computed into a scratch buffer is overwritten by the next sweep
    using the same buffer; copy ``row.dist`` to keep it.
    """

    def __init__(self, n: int) -> None:
        self.dist = np.empty(n, dtype=np.int64)
        self.queue = np.empty(max(n, 1), dtype=np.int64)
        self.done = np.empty(n, dtype=np.bool_)


def dist_from(
    graph: Graph,
    source: int,
    direction: str = FORWARD,
    ranking: Ranking | None = None,
    counter: QueryCounter | None = None,
    scratch: Scratch | None = None,
    allow_unreachable: bool = False,
) -> DistanceRow:
    """Distances from ``source`` (forward) or to ``source`` (backward).

    Unweighted graphs use BFS, anything else binary-heap Dijkstra.
    Unreachable nodes get distance ``INF``; they raise
    :class:`UnreachableError` unless ``allow_unreachable`` is set.
    """
    n = graph.n
    if not 0 <= source < n:
        raise IndexError(f"source {source} outside 0..{n - 1}")
    if direction not in (FORWARD, BACKWARD):
        raise ValueError(f"unknown direction {direction!r}")
    if direction == BACKWARD and graph.directed:
        ip, ix, w = graph.rindptr, graph.rindices, graph.rweights
    else:
        ip, ix, w = graph.indptr, graph.indices, graph.weights
    if scratch is None:
        dist = np.empty(n, dtype=np.int64)
        if graph.unit_weights:
            _kernels.bfs(ip, ix, source, dist, np.empty(n, dtype=np.int64))
        else:
            _kernels.dijkstra(ip, ix, w, source, dist, np.empty(n, dtype=np.bool_))
    else:
        dist = scratch.dist
        if graph.unit_weights:
            _kernels.bfs(ip, ix, source, dist, scratch.queue)
        else:
            _kernels.dijkstra(ip, ix, w, source, dist, scratch.done)
    if counter is not None:
        counter.tick()
    rank = ranking.rank if ranking is not None else np.arange(n, dtype=np.int64)
    ecc, antipode = _kernels.ecc_antipode(dist, rank)
    if ecc >= INF and not allow_unreachable:
        missing = int(np.flatnonzero(dist >= INF)[0])
        raise UnreachableError(
            f"node {missing} unreachable in {direction} sweep from {source}"
        )
    return DistanceRow(int(source), direction, dist, int(ecc), int(antipode))


def ecc_of(row: DistanceRow) -> int:
    return row.ecc


def antipode_of(row: DistanceRow) -> int:
    return row.antipode
