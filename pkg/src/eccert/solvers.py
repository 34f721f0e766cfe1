"""Exact radius, diameter and all-eccentricity solvers with certificates.

All solvers are sequential; ties in every argmin/argmax go to the smallest
node id, and the ranking only decides which furthest node is the antipode.

Directed graphs: ``e(u)`` is the forward eccentricity.  Lower and upper bound
updates need ``d(v, x)`` for all ``v``, obtained by a backward sweep from
``x``; every sweep counts once.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .certificates import (
    ALL_ECC,
    DIAMETER,
    RADIUS,
    BoundState,
    CertificateBundle,
    Verdict,
    backward_row,
    verify_bundle,
)
from .graph import Graph, Ranking
from .selection import select
from .traversal import BACKWARD, FORWARD, INF, QueryCounter, dist_from

VARIANTS = ("basic", "center_init", "delegate", "center_init_delegate")


class CertificateError(RuntimeError):
    """A solver produced a bundle its own verifier rejects."""

    def __init__(self, verdict: Verdict) -> None:
        self.verdict = verdict
        super().__init__(verdict.summary())


@dataclass
class TraceStep:
    selected: int
    bound: int
    ecc: int
    antipode: int | None = None
    delegate: int | None = None


@dataclass
class RunReport:
    sweeps: int = 0
    L_size: int = 0
    U_size: int = 0
    K_size: int = 0
    trace: list[TraceStep] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def iterations(self) -> int:
        return len(self.trace)


@dataclass
class RadiusResult:
    value: int
    center: int
    L: list[int]
    K: list[int]
    bundle: CertificateBundle
    report: RunReport
    state: BoundState = field(repr=False)
    exit: str = "tight"  # "tight" or "packing": which loop exit fired


@dataclass
class DiameterResult:
    value: int
    diametral: int
    U: list[tuple[int, int]]
    K: list[int]
    bundle: CertificateBundle
    report: RunReport
    state: BoundState = field(repr=False)
    radius: RadiusResult | None = None


@dataclass
class AllEccResult:
    ecc: np.ndarray
    L: list[int]
    U: list[tuple[int, int]]
    bundle: CertificateBundle
    report: RunReport
    state: BoundState = field(repr=False)


@dataclass
class ApproxResult:
    node: int
    ecc: int
    iterations: int
    sweeps: int
    exact: bool


def _ranking(graph: Graph, ranking: Ranking | None) -> Ranking:
    if ranking is None:
        return Ranking.identity(graph.n)
    if len(ranking) != graph.n:
        raise ValueError("ranking size differs from node count")
    return ranking


def _finish(report: RunReport, counter: QueryCounter, start: int, t0: float,
            state: BoundState, K: list[int]) -> None:
    report.sweeps = counter.sweeps - start
    report.L_size = len(state.L)
    report.U_size = len(state.U)
    report.K_size = len(K)
    report.wall_time = time.perf_counter() - t0


def _self_check(graph: Graph, bundle: CertificateBundle) -> None:
    verdict = verify_bundle(graph, bundle)
    if not verdict:
        raise CertificateError(verdict)


def _lower_row(graph: Graph, a: int, ranking: Ranking, counter: QueryCounter):
    direction = BACKWARD if graph.directed else FORWARD
    row = dist_from(graph, a, direction, ranking, counter)
    return row, (None if graph.directed else row.ecc)


# -------------------------------------------------------------------- radius


def _radius_loop(graph, ranking, counter, state, report, budget=None):
    """Run the radius loop; returns ``(center, ecc, K, eK, exit)``.

    ``exit`` is ``"tight"``, ``"packing"`` or ``"budget"``.
    """
    K: list[int] = []
    eK: list[int] = []
    while True:
        if budget is not None and len(report.trace) >= budget:
            i = int(np.argmin(eK))
            return K[i], eK[i], K, eK, "budget"
        u = int(np.argmin(state.e_L))
        bound = int(state.e_L[u])
        row = dist_from(graph, u, FORWARD, ranking, counter)
        if row.ecc == bound:
            report.trace.append(TraceStep(u, bound, row.ecc))
            return u, row.ecc, K, eK, "tight"
        a = row.antipode
        if state.in_L[a]:
            raise AssertionError(f"antipode {a} of untight node {u} already in L")
        K.append(u)
        eK.append(row.ecc)
        D_a, ecc_a = _lower_row(graph, a, ranking, counter)
        state.lower_update(a, D_a, ecc_a)
        report.trace.append(TraceStep(u, bound, row.ecc, antipode=a))
        if state.e_L.min() >= min(eK):
            i = int(np.argmin(eK))
            return K[i], eK[i], K, eK, "packing"


def radius(
    graph: Graph,
    ranking: Ranking | None = None,
    counter: QueryCounter | None = None,
    self_check: bool = False,
    tight_lower: bool = False,
) -> RadiusResult:
    """Radius, a center and a radius certificate made of antipodes.

    Uses at most ``2|L| + 1`` sweeps.
    """
    ranking = _ranking(graph, ranking)
    counter = counter if counter is not None else QueryCounter()
    if tight_lower and graph.directed:
        raise ValueError("the sharper lower bound is only valid for undirected graphs")
    t0, start = time.perf_counter(), counter.sweeps
    state = BoundState(graph.n, tight_lower=tight_lower)
    report = RunReport()
    c, r, K, _, exit_ = _radius_loop(graph, ranking, counter, state, report)
    _finish(report, counter, start, t0, state, K)
    bundle = CertificateBundle.for_graph(graph, RADIUS, ranking, r, state.L, [(c, r)])
    if self_check:
        _self_check(graph, bundle)
    return RadiusResult(r, c, list(state.L), K, bundle, report, state, exit_)


def radius_approx(
    graph: Graph,
    ranking: Ranking | None = None,
    eps: float = 0.5,
    budget: int | None = None,
    gamma: int | None = None,
    counter: QueryCounter | None = None,
) -> ApproxResult:
    """Stop the radius loop after ``budget`` iterations and return the best node seen.

    Without an explicit budget, ``gamma ** (ceil(log2(2 / eps)) + 1)`` is used,
    which guarantees eccentricity at most ``(1 + eps) rad`` on gamma-doubling
    graphs.
    """
    budget = _budget(eps, budget, gamma)
    ranking = _ranking(graph, ranking)
    counter = counter if counter is not None else QueryCounter()
    start = counter.sweeps
    report = RunReport()
    state = BoundState(graph.n)
    node, e, _, _, exit_ = _radius_loop(graph, ranking, counter, state, report, budget)
    return ApproxResult(node, e, len(report.trace), counter.sweeps - start, exit_ != "budget")


def _budget(eps: float, budget: int | None, gamma: int | None) -> int:
    if eps <= 0:
        raise ValueError("eps must be positive")
    if budget is None:
        if gamma is None:
            raise ValueError("give either an iteration budget or a doubling constant")
        budget = int(gamma) ** (math.ceil(math.log2(2 / eps)) + 1)
    if budget < 1:
        raise ValueError("iteration budget must be at least 1")
    return int(budget)


# ------------------------------------------------------------------ diameter


def _delegate_objective(D_u: np.ndarray, e_u: int):
    def f(ell: np.ndarray) -> np.ndarray:
        return np.where(D_u + ell <= e_u, ell.astype(np.float64), np.inf)

    return f


def _diameter_loop(graph, ranking, counter, state, report, K, eK, delegate, budget=None):
    while True:
        if budget is not None and len(report.trace) >= budget:
            return "budget"
        u = int(np.argmax(state.e_U))
        bound = int(state.e_U[u])
        row_u = dist_from(graph, u, FORWARD, ranking, counter)
        K.append(u)
        eK.append(row_u.ecc)
        if delegate:
            sel = select(graph, ranking, state, _delegate_objective(row_u.dist, row_u.ecc), counter)
            x, row_x = sel.node, sel.row
        else:
            x, row_x = u, row_u
        if not state.in_U[x]:
            state.upper_update(x, row_x.ecc, backward_row(graph, x, row_x, ranking, counter))
        report.trace.append(TraceStep(u, bound, row_u.ecc, delegate=x))
        if max(eK) >= state.e_U.max():
            return "done"


def _diameter_setup(graph, ranking, variant, counter, tight_lower=False):
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    K: list[int] = []
    eK: list[int] = []
    rad = None
    if variant.startswith("center_init"):
        rad = radius(graph, ranking, counter, tight_lower=tight_lower)
        state = rad.state if variant == "center_init_delegate" else BoundState(graph.n)
        c = rad.center
        direction = BACKWARD if graph.directed else FORWARD
        state.upper_update(c, rad.value, dist_from(graph, c, direction, ranking, counter))
        K.append(c)
        eK.append(rad.value)
    else:
        state = BoundState(graph.n, tight_lower=tight_lower)
    return state, K, eK, rad


def diameter(
    graph: Graph,
    ranking: Ranking | None = None,
    variant: str = "basic",
    counter: QueryCounter | None = None,
    self_check: bool = False,
) -> DiameterResult:
    """Diameter, a diametral node and a diameter certificate.

    ``variant``:

    * ``basic`` sweeps each selected node and adds it to ``U``;
    * ``center_init`` first runs :func:`radius` and seeds ``U`` and ``K`` with
      the center;
    * ``delegate`` replaces the selected node by a tight upper certificate of
      it with minimum eccentricity;
    * ``center_init_delegate`` does both, sharing the radius lower certificate.
    """
    ranking = _ranking(graph, ranking)
    counter = counter if counter is not None else QueryCounter()
    t0, start = time.perf_counter(), counter.sweeps
    state, K, eK, rad = _diameter_setup(graph, ranking, variant, counter)
    report = RunReport()
    _diameter_loop(graph, ranking, counter, state, report, K, eK, "delegate" in variant)
    _finish(report, counter, start, t0, state, K)
    i = int(np.argmax(eK))
    b, D = K[i], eK[i]
    U = [(x, state.ecc_U[x]) for x in state.U]
    bundle = CertificateBundle.for_graph(graph, DIAMETER, ranking, D, [b], U)
    if self_check:
        _self_check(graph, bundle)
    return DiameterResult(D, b, U, K, bundle, report, state, rad)


def diameter_approx(
    graph: Graph,
    ranking: Ranking | None = None,
    eps: float = 0.5,
    budget: int | None = None,
    gamma: int | None = None,
    counter: QueryCounter | None = None,
) -> ApproxResult:
    """Stop the basic diameter loop after ``budget`` iterations; return the max-ecc node seen."""
    budget = _budget(eps, budget, gamma)
    ranking = _ranking(graph, ranking)
    counter = counter if counter is not None else QueryCounter()
    start = counter.sweeps
    state = BoundState(graph.n)
    K: list[int] = []
    eK: list[int] = []
    report = RunReport()
    how = _diameter_loop(graph, ranking, counter, state, report, K, eK, False, budget)
    i = int(np.argmax(eK))
    return ApproxResult(K[i], eK[i], len(report.trace), counter.sweeps - start, how == "done")


# --------------------------------------------------------- all eccentricities


def all_eccentricities(
    graph: Graph,
    ranking: Ranking | None = None,
    counter: QueryCounter | None = None,
    self_check: bool = False,
) -> AllEccResult:
    """All eccentricities with a tight lower certificate and the minimum tight upper certificate."""
    ranking = _ranking(graph, ranking)
    counter = counter if counter is not None else QueryCounter()
    t0, start = time.perf_counter(), counter.sweeps
    state = BoundState(graph.n)
    report = RunReport()

    def untight(ell: np.ndarray) -> np.ndarray:
        return np.where(ell < state.e_U, ell.astype(np.float64), np.inf)

    while True:
        sel = select(graph, ranking, state, untight, counter)
        if np.isinf(sel.value):
            break
        u, row = sel.node, sel.row
        state.upper_update(u, row.ecc, backward_row(graph, u, row, ranking, counter))
        report.trace.append(TraceStep(u, int(row.ecc), int(row.ecc)))
    if not np.array_equal(state.e_L, state.e_U):
        raise AssertionError("bounds did not meet at termination")
    _finish(report, counter, start, t0, state, [])
    ecc = state.e_U.copy()
    U = [(x, state.ecc_U[x]) for x in state.U]
    bundle = CertificateBundle.for_graph(graph, ALL_ECC, ranking, ecc, state.L, U)
    if self_check:
        _self_check(graph, bundle)
    return AllEccResult(ecc, list(state.L), U, bundle, report, state)


# ------------------------------------------------------------------ doubling


def diameter_doubling(
    graph: Graph,
    ranking: Ranking | None = None,
    alpha: float | Fraction = Fraction(1, 2),
    counter: QueryCounter | None = None,
    self_check: bool = False,
) -> DiameterResult:
    """Diameter with a certificate whose size is linear in the ``alpha``-packing number
    on graphs of bounded doubling dimension.

    After each outer selection ``u``, nodes ``v`` with
    ``e_U(v) - e(v) > (1 - alpha) / (2 alpha) * d(u, v)`` are added to ``U``,
    furthest from ``u`` first.
    """
    alpha = Fraction(alpha).limit_denominator(10**6)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie strictly between 0 and 1")
    num, den = alpha.numerator, alpha.denominator
    ranking = _ranking(graph, ranking)
    counter = counter if counter is not None else QueryCounter()
    t0, start = time.perf_counter(), counter.sweeps
    state = BoundState(graph.n)
    report = RunReport()
    K: list[int] = []
    known: dict[int, int] = {}

    while (max(known.values()) if known else -1) < state.e_U.max():
        u = int(np.argmax(state.e_U))
        bound = int(state.e_U[u])
        row_u = dist_from(graph, u, FORWARD, ranking, counter)
        K.append(u)
        known[u] = row_u.ecc
        if not state.in_U[u]:
            state.upper_update(u, row_u.ecc, backward_row(graph, u, row_u, ranking, counter))
        D_u = row_u.dist.copy()
        report.trace.append(TraceStep(u, bound, row_u.ecc))

        def slack(ell: np.ndarray, D_u=D_u) -> np.ndarray:
            e_U = state.e_U
            finite = e_U < INF
            gap = np.where(finite, e_U, 0) - ell
            ok = ~finite | (2 * num * gap > (den - num) * D_u)
            return np.where(ok, -D_u.astype(np.float64), np.inf)

        while True:
            sel = select(graph, ranking, state, slack, counter)
            if np.isinf(sel.value):
                break
            v, row_v = sel.node, sel.row
            known[v] = row_v.ecc
            state.upper_update(v, row_v.ecc, backward_row(graph, v, row_v, ranking, counter))

    _finish(report, counter, start, t0, state, K)
    # smallest id among the nodes of maximum known eccentricity
    best = max(known.values())
    p = min(x for x, e in known.items() if e == best)
    U = [(x, state.ecc_U[x]) for x in state.U]
    bundle = CertificateBundle.for_graph(graph, DIAMETER, ranking, best, [p], U)
    if self_check:
        _self_check(graph, bundle)
    return DiameterResult(best, p, U, K, bundle, report, state)
