"""Structural measurements that explain small certificates.

The per-node counters stream one distance row at a time, so memory stays
linear; their sweeps run on a thread pool (the kernels release the GIL) whose
size is capped by the ``ECC_THREADS`` environment variable.
"""

from __future__ import annotations

import csv
import heapq
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .certificates import Verdict, verify_radius_certificate
from .graph import Graph, Ranking, restrict_to_core
from .solvers import all_eccentricities, diameter
from .traversal import BACKWARD, FORWARD, QueryCounter, Scratch, dist_from

CSV_HEADER = ["type", "name", "n", "m/n", "d", "w", "diam/rad", "D",
              "pi_c_0.8", "pi_c_1/3", "nc/n", "R", "A_ID", "F"]


def worker_count() -> int:
    env = os.environ.get("ECC_THREADS")
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


def _per_node(graph: Graph, ranking: Ranking | None, reduce: Callable, counter: QueryCounter | None,
              threads: int | None = None) -> set[int]:
    """Sweep from every node and union ``reduce(row)`` over all rows."""
    threads = threads or worker_count()
    chunks = np.array_split(np.arange(graph.n), min(threads, max(graph.n, 1)))

    def work(nodes: np.ndarray) -> set[int]:
        scratch = Scratch(graph.n)
        out: set[int] = set()
        for u in nodes:
            out |= reduce(dist_from(graph, int(u), FORWARD, ranking, counter, scratch))
        return out

    if threads == 1:
        parts = [work(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, chunks))
    return set().union(*parts)


def count_antipodes(graph: Graph, ranking: Ranking | None = None,
                    counter: QueryCounter | None = None, threads: int | None = None) -> set[int]:
    """The set of antipodes of all nodes (``n`` sweeps)."""
    return _per_node(graph, ranking, lambda row: {row.antipode}, counter, threads)


def count_furthest(graph: Graph, counter: QueryCounter | None = None,
                   threads: int | None = None) -> set[int]:
    """The set of nodes that are furthest from some node (``n`` sweeps)."""
    return _per_node(graph, None, lambda row: set(np.flatnonzero(row.dist == row.ecc).tolist()),
                     counter, threads)


def greedy_ball_cover(
    graph: Graph,
    ecc: np.ndarray,
    beta: float | Fraction,
    special_center: int | None = None,
    counter: QueryCounter | None = None,
) -> list[int]:
    """Greedy covering with balls ``B[u, floor(beta (diam - e(u)))]``.

    The special center, if given, keeps its full radius ``diam - e(c)``.
    Repeatedly takes the ball covering the most uncovered nodes, ties to the
    smallest center.  Directed graphs use in-balls ``{v : d(v, u) <= radius}``.
    """
    beta = Fraction(beta).limit_denominator(10**6)
    if not 0 < beta <= 1:
        raise ValueError("beta must lie in (0, 1]")
    ecc = np.asarray(ecc, dtype=np.int64)
    diam = int(ecc.max())
    direction = BACKWARD if graph.directed else FORWARD
    scratch = Scratch(graph.n)
    balls: list[np.ndarray] = []
    for u in range(graph.n):
        slack = diam - int(ecc[u])
        r = slack if u == special_center else (beta.numerator * slack) // beta.denominator
        if r == 0:
            balls.append(np.array([u], dtype=np.int32))
            continue
        dist = dist_from(graph, u, direction, None, counter, scratch).dist
        balls.append(np.flatnonzero(dist <= r).astype(np.int32))
    covered = np.zeros(graph.n, dtype=bool)
    heap = [(-len(b), u) for u, b in enumerate(balls)]
    heapq.heapify(heap)
    chosen: list[int] = []
    remaining = graph.n
    while remaining:
        neg, u = heapq.heappop(heap)
        gain = int(np.count_nonzero(~covered[balls[u]]))
        if gain != -neg:
            heapq.heappush(heap, (-gain, u))
            continue
        chosen.append(u)
        covered[balls[u]] = True
        remaining -= gain
    assert covered.all()
    return chosen


def center_concentration(graph: Graph, c: int, diam: int, rad: int,
                         counter: QueryCounter | None = None, check: bool = False) -> Fraction:
    """Fraction of nodes ``u`` with ``d(u, c) <= diam - rad``."""
    if check and dist_from(graph, c, FORWARD, counter=counter).ecc != rad:
        raise ValueError(f"node {c} is not a center")
    dist = dist_from(graph, c, BACKWARD, counter=counter).dist
    return Fraction(int(np.count_nonzero(dist <= diam - rad)), graph.n)


def antipode_closure_check(graph: Graph, S: Iterable[int], r: int,
                           ranking: Ranking | None = None,
                           counter: QueryCounter | None = None) -> Verdict:
    """Verify that ``S`` together with the antipodes of its members certifies radius ``r``."""
    S = list(dict.fromkeys(int(s) for s in S))
    closure = S + [dist_from(graph, s, FORWARD, ranking, counter).antipode for s in S]
    return verify_radius_certificate(graph, closure, r, counter=counter)


@dataclass
class GraphProfile:
    name: str
    type: str
    n: int
    m_over_n: float
    directed: bool
    weighted: bool
    diam: int
    rad: int
    D: int
    R: int
    nc_over_n: Fraction
    pi_c_08: int | None = None
    pi_c_13: int | None = None
    A: int | None = None
    F: int | None = None

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.diam, self.rad) if self.rad else Fraction(0)

    def row(self) -> list[str]:
        def opt(x):
            return "-" if x is None else str(x)

        return [self.type, self.name, str(self.n), f"{self.m_over_n:.2f}",
                "y" if self.directed else "n", "y" if self.weighted else "n",
                f"{float(self.ratio):.3f}", str(self.D), opt(self.pi_c_08), opt(self.pi_c_13),
                f"{float(self.nc_over_n):.4f}", str(self.R), opt(self.A), opt(self.F)]

    def csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(CSV_HEADER)
        w.writerow(self.row())
        return buf.getvalue()


def profile(graph: Graph, ranking: Ranking | None = None, full: bool = False,
            name: str = "graph", type: str = "synthetic", threads: int | None = None) -> GraphProfile:
    """Certificate sizes and structural columns for one graph, restricted to its core.

    The quadratic columns (greedy covers, antipode and furthest counts) are
    only computed with ``full``.
    """
    graph, _ = restrict_to_core(graph)
    if ranking is not None and len(ranking) != graph.n:
        raise ValueError("ranking must match the core-restricted graph")
    diam = diameter(graph, ranking, variant="center_init_delegate")
    rad = diam.radius
    c, r, D = rad.center, rad.value, diam.value
    if not graph.directed and r and D > 2 * r:
        raise AssertionError(f"undirected graph with diameter {D} > 2 * radius {r}")
    prof = GraphProfile(
        name=name, type=type, n=graph.n,
        m_over_n=graph.arc_count / graph.n,
        directed=graph.directed, weighted=not graph.unit_weights,
        diam=D, rad=r, D=len(diam.U), R=len(rad.L),
        nc_over_n=center_concentration(graph, c, D, r),
    )
    if full:
        ecc = all_eccentricities(graph, ranking).ecc
        prof.pi_c_08 = len(greedy_ball_cover(graph, ecc, Fraction(4, 5), special_center=c))
        prof.pi_c_13 = len(greedy_ball_cover(graph, ecc, Fraction(1, 3), special_center=c))
        prof.A = len(count_antipodes(graph, Ranking.identity(graph.n), threads=threads))
        prof.F = len(count_furthest(graph, threads=threads))
        assert prof.A <= prof.F <= graph.n
    return prof


def covers(graph: Graph, ecc: Sequence[int], centers: Sequence[int], beta: float | Fraction,
           special_center: int | None = None) -> bool:
    """Re-check that the reduced balls around ``centers`` cover every node."""
    beta = Fraction(beta).limit_denominator(10**6)
    ecc = np.asarray(ecc, dtype=np.int64)
    diam = int(ecc.max())
    direction = BACKWARD if graph.directed else FORWARD
    covered = np.zeros(graph.n, dtype=bool)
    for u in centers:
        slack = diam - int(ecc[u])
        r = slack if u == special_center else math.floor(beta * slack)
        covered |= dist_from(graph, int(u), direction).dist <= r
    return bool(covered.all())
