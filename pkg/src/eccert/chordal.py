"""Chordal graphs: recognition and center-ball eccentricity procedures.

On a chordal graph every node of maximum eccentricity is reached from a node
within distance 3 of a center, and every eccentricity is realized through a
node within distance 5 of a center.  Sweeping those balls therefore gives the
diameter (resp. all eccentricities) exactly.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from .certificates import (
    ALL_ECC,
    DIAMETER,
    BoundState,
    CertificateBundle,
    verify_diameter_certificate,
    verify_radius_certificate,
)
from .graph import Graph, Ranking
from .solvers import AllEccResult, DiameterResult, RunReport, TraceStep, _self_check, radius
from .traversal import FORWARD, QueryCounter, dist_from

logger = logging.getLogger(__name__)


class NotChordalError(ValueError):
    """Input is not a chordal graph (or not an undirected unweighted one)."""


@dataclass(frozen=True, eq=False)
class EliminationOrder:
    """Candidate perfect elimination order (reverse Lex-BFS order)."""

    order: np.ndarray
    perfect: bool


def _require_simple_undirected(graph: Graph) -> None:
    if graph.directed:
        raise NotChordalError("chordal procedures need an undirected graph")
    if not graph.unit_weights:
        raise NotChordalError("chordal procedures need an unweighted graph")


def lex_bfs(graph: Graph) -> list[int]:
    """Lex-BFS visiting order by partition refinement, starting from node 0."""
    n = graph.n
    classes: list[list[int]] = [list(range(n))] if n else []
    visited = np.zeros(n, dtype=bool)
    order: list[int] = []
    while classes:
        first = classes[0]
        v = first.pop(0)
        if not first:
            classes.pop(0)
        visited[v] = True
        order.append(v)
        nbrs = {int(w) for w in graph.neighbors(v) if not visited[w]}
        if not nbrs:
            continue
        refined: list[list[int]] = []
        for cls in classes:
            inside = [x for x in cls if x in nbrs]
            outside = [x for x in cls if x not in nbrs]
            if inside:
                refined.append(inside)
            if outside:
                refined.append(outside)
        classes = refined
    return order


def is_perfect_elimination_order(graph: Graph, order: np.ndarray) -> bool:
    """Each node's later neighbors (in ``order``) form a clique."""
    pos = np.empty(graph.n, dtype=np.int64)
    pos[order] = np.arange(graph.n)
    nbr_sets = [set(map(int, graph.neighbors(v))) for v in range(graph.n)]
    for v in order:
        later = [int(w) for w in nbr_sets[v] if pos[w] > pos[v]]
        if len(later) < 2:
            continue
        parent = min(later, key=lambda w: pos[w])
        if any(w != parent and w not in nbr_sets[parent] for w in later):
            return False
    return True


def is_chordal(graph: Graph) -> tuple[bool, EliminationOrder]:
    _require_simple_undirected(graph)
    order = np.asarray(lex_bfs(graph)[::-1], dtype=np.int64)
    perfect = is_perfect_elimination_order(graph, order)
    return perfect, EliminationOrder(order, perfect)


def _require_chordal(graph: Graph) -> None:
    ok, _ = is_chordal(graph)
    if not ok:
        raise NotChordalError("graph is not chordal")


def _ball(dist: np.ndarray, r: int) -> np.ndarray:
    return np.flatnonzero(dist <= r)


def chordal_diameter(
    graph: Graph,
    ranking: Ranking | None = None,
    counter: QueryCounter | None = None,
    self_check: bool = False,
) -> DiameterResult:
    """Diameter of a connected chordal graph from the ball of radius 3 around a center.

    The node maximizing the upper bound from that ball is swept once more to
    confirm it; should the bound ever be loose, sweeping continues through the
    next maximizers until the bound is met.
    """
    _require_chordal(graph)
    counter = counter if counter is not None else QueryCounter()
    t0, start = time.perf_counter(), counter.sweeps
    rad = radius(graph, ranking, counter)
    ranking = ranking if ranking is not None else Ranking.identity(graph.n)
    c = rad.center
    state = BoundState(graph.n)
    report = RunReport()
    C3 = _ball(dist_from(graph, c, FORWARD, ranking, counter).dist, 3)
    for x in C3:
        row = dist_from(graph, int(x), FORWARD, ranking, counter)
        state.upper_update(int(x), row.ecc, row)
    known: dict[int, int] = {int(x): state.ecc_U[int(x)] for x in C3}
    K: list[int] = []
    while max(known.values()) < state.e_U.max():
        p = int(np.argmax(state.e_U))
        bound = int(state.e_U[p])
        row = dist_from(graph, p, FORWARD, ranking, counter)
        K.append(p)
        known[p] = row.ecc
        report.trace.append(TraceStep(p, bound, row.ecc))
        if row.ecc < bound:
            logger.warning("ball bound %d at node %d exceeds its eccentricity %d", bound, p, row.ecc)
        state.upper_update(p, row.ecc, row)
    D = max(known.values())
    b = min(x for x, e in known.items() if e == D)
    report.sweeps = counter.sweeps - start
    report.U_size, report.K_size, report.L_size = len(state.U), len(K), len(rad.L)
    report.wall_time = time.perf_counter() - t0
    U = [(x, state.ecc_U[x]) for x in state.U]
    bundle = CertificateBundle.for_graph(graph, DIAMETER, ranking, D, [b], U)
    if self_check:
        _self_check(graph, bundle)
    return DiameterResult(D, b, U, K, bundle, report, state, rad)


def chordal_all_ecc(
    graph: Graph,
    ranking: Ranking | None = None,
    counter: QueryCounter | None = None,
    self_check: bool = False,
) -> AllEccResult:
    """All eccentricities of a connected chordal graph from the ball of radius 5 around a center.

    The returned bundle pairs that ball (a tight upper certificate) with the
    nodes of eccentricity at least ``diam - 1``, which hold a furthest node of
    every node in a chordal graph and so form a tight lower certificate.
    """
    _require_chordal(graph)
    counter = counter if counter is not None else QueryCounter()
    t0, start = time.perf_counter(), counter.sweeps
    rad = radius(graph, ranking, counter)
    ranking = ranking if ranking is not None else Ranking.identity(graph.n)
    state = BoundState(graph.n)
    C5 = _ball(dist_from(graph, rad.center, FORWARD, ranking, counter).dist, 5)
    for x in C5:
        row = dist_from(graph, int(x), FORWARD, ranking, counter)
        state.upper_update(int(x), row.ecc, row)
    ecc = state.e_U.copy()
    L = np.flatnonzero(ecc >= ecc.max() - 1).tolist()
    report = RunReport(sweeps=counter.sweeps - start, L_size=len(L), U_size=len(state.U),
                       wall_time=time.perf_counter() - t0)
    U = [(x, state.ecc_U[x]) for x in state.U]
    bundle = CertificateBundle.for_graph(graph, ALL_ECC, ranking, ecc, L, U)
    if self_check:
        _self_check(graph, bundle)
    state.L = list(L)
    return AllEccResult(ecc, L, U, bundle, report, state)


@dataclass
class ChordalReport:
    diam: int
    rad: int
    center_set: list[int]
    diametral_set: list[int]
    center_certifies_diameter: bool
    diametral_certifies_radius: bool
    bound_holds: bool  # diam >= 2 rad - 2
    pair_checked: bool  # whether diam >= 2 rad - 1 so the pair claims apply
    pair_certifies_radius: bool
    radius_formula_holds: bool

    @property
    def ok(self) -> bool:
        return (self.center_certifies_diameter and self.diametral_certifies_radius
                and self.bound_holds and self.pair_certifies_radius and self.radius_formula_holds)


def chordal_certificate_checks(graph: Graph) -> ChordalReport:
    """Check the center/diametral-set certificate claims on a small chordal graph."""
    from .oracle import apsp

    _require_chordal(graph)
    if graph.n > 200:
        raise ValueError("certificate checks are limited to 200 nodes")
    dm = apsp(graph)
    e = dm.ecc
    diam, rad = int(e.max()), int(e.min())
    C = np.flatnonzero(e == rad).tolist()
    Dset = np.flatnonzero(e == diam).tolist()
    c_ok = bool(verify_diameter_certificate(graph, [(x, rad) for x in C], diam))
    d_ok = bool(verify_radius_certificate(graph, Dset, rad))
    pair_checked = diam >= 2 * rad - 1
    pair_ok = formula_ok = True
    if pair_checked:
        x, y = map(int, np.argwhere(dm.dist == diam)[0])
        pair_ok = bool(verify_radius_certificate(graph, [x, y], rad))
        formula_ok = rad == (diam + 1) // 2
    return ChordalReport(diam, rad, C, Dset, c_ok, d_ok, diam >= 2 * rad - 2,
                         pair_checked, pair_ok, formula_ok)
