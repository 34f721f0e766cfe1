"""Lower/upper eccentricity bounds and independent certificate audits.

For every node ``u`` and any node ``x`` with known distances,
``d(u, x) <= e(u) <= d(u, x) + e(x)``.  A :class:`BoundState` accumulates
these bounds over a lower certificate ``L`` and an upper certificate ``U``.
Verifiers recompute everything they rely on by sweeping, so a forged bundle
cannot slip through.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .graph import Graph, Ranking
from .traversal import BACKWARD, FORWARD, INF, DistanceRow, QueryCounter, dist_from

logger = logging.getLogger(__name__)

RADIUS = "radius"
DIAMETER = "diameter"
ALL_ECC = "all-ecc"


class FingerprintMismatch(ValueError):
    """A certificate bundle was issued for a different graph."""


class BoundState:
    """Per-node bounds ``e_L <= e <= e_U`` with the certificate sets behind them.

    ``tight_lower`` enables the sharper lower bound
    ``max(d(v, x), e(x) - d(v, x))``; it is only sound for undirected graphs
    and is off by default.
    """

    def __init__(self, n: int, tight_lower: bool = False) -> None:
        self.n = n
        self.e_L = np.zeros(n, dtype=np.int64)
        self.e_U = np.full(n, INF, dtype=np.int64)
        self.L: list[int] = []
        self.U: list[int] = []
        self.ecc_U: dict[int, int] = {}
        self.in_L = np.zeros(n, dtype=bool)
        self.in_U = np.zeros(n, dtype=bool)
        self.tight_lower = tight_lower

    def lower_update(self, a: int, D_a: DistanceRow, ecc_a: int | None = None) -> None:
        """Add ``a`` to ``L``; ``D_a.dist[v]`` must be ``d(v, a)``."""
        if self.in_L[a]:
            logger.warning("node %d already in lower certificate", a)
            return
        self.L.append(int(a))
        self.in_L[a] = True
        np.maximum(self.e_L, D_a.dist, out=self.e_L)
        if self.tight_lower and ecc_a is not None:
            np.maximum(self.e_L, ecc_a - D_a.dist, out=self.e_L)

    def upper_update(
        self,
        x: int,
        e_x: int,
        D_x: DistanceRow,
        forward: DistanceRow | None = None,
    ) -> None:
        """Add ``x`` with eccentricity ``e_x``; ``D_x.dist[v]`` must be ``d(v, x)``."""
        if forward is not None and forward.ecc != e_x:
            raise ValueError(f"eccentricity {e_x} of node {x} disagrees with its sweep ({forward.ecc})")
        if D_x.direction == FORWARD and forward is None and D_x.source == x and D_x.ecc != e_x:
            # for undirected graphs the row doubles as the forward sweep
            raise ValueError(f"eccentricity {e_x} of node {x} disagrees with its sweep ({D_x.ecc})")
        if self.in_U[x]:
            logger.warning("node %d already in upper certificate", x)
            return
        self.U.append(int(x))
        self.in_U[x] = True
        self.ecc_U[int(x)] = int(e_x)
        np.minimum(self.e_U, D_x.dist + e_x, out=self.e_U)

    def sandwich_ok(self, ecc: np.ndarray) -> bool:
        return bool(np.all(self.e_L <= ecc) and np.all(ecc <= self.e_U))


def backward_row(graph: Graph, x: int, forward: DistanceRow, ranking: Ranking | None,
                 counter: QueryCounter | None) -> DistanceRow:
    """Row of distances *to* ``x``; free for undirected graphs."""
    if not graph.directed:
        return forward
    return dist_from(graph, x, BACKWARD, ranking, counter)


# ------------------------------------------------------------------ bundles


@dataclass
class CertificateBundle:
    """A claim together with the node sets that justify it.

    ``radius`` bundles carry the lower certificate in ``L`` and the center in
    ``U``; ``diameter`` bundles carry the upper certificate in ``U`` and the
    diametral node as the single member of ``L``.
    """

    kind: str
    n: int
    arc_count: int
    graph_sha256: str
    ranking: str | int
    value: int | list[int]
    L: list[int]
    U: list[tuple[int, int]]

    _VALUE_KEY = {RADIUS: "r", DIAMETER: "D", ALL_ECC: "ecc"}

    @classmethod
    def for_graph(cls, graph: Graph, kind: str, ranking: Ranking | None, value: Any,
                  L: Sequence[int], U: Sequence[tuple[int, int]]) -> CertificateBundle:
        fp = graph.fingerprint()
        if isinstance(value, np.ndarray):
            value = [int(v) for v in value]
        elif not isinstance(value, list):
            value = int(value)
        return cls(kind, fp["n"], fp["arc_count"], fp["graph_sha256"],
                   ranking.label if ranking is not None else "id", value,
                   [int(x) for x in L], [(int(x), int(e)) for x, e in U])

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "arc_count": self.arc_count,
            "graph_sha256": self.graph_sha256,
            "ranking": self.ranking,
            self._VALUE_KEY[self.kind]: self.value,
            "L": list(self.L),
            "U": [{"node": x, "ecc": e} for x, e in self.U],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=None, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> CertificateBundle:
        kind = d["kind"]
        if kind not in cls._VALUE_KEY:
            raise ValueError(f"unknown certificate kind {kind!r}")
        return cls(kind, int(d["n"]), int(d["arc_count"]), str(d["graph_sha256"]),
                   d.get("ranking", "id"), d[cls._VALUE_KEY[kind]],
                   [int(x) for x in d["L"]],
                   [(int(u["node"]), int(u["ecc"])) for u in d["U"]])

    @classmethod
    def from_json(cls, text: str) -> CertificateBundle:
        return cls.from_dict(json.loads(text))

    def matches(self, graph: Graph) -> bool:
        fp = graph.fingerprint()
        return (self.n, self.arc_count, self.graph_sha256) == (
            fp["n"], fp["arc_count"], fp["graph_sha256"])


# ---------------------------------------------------------------- verifiers


@dataclass
class Verdict:
    accepted: bool
    kind: str
    reason: str = ""
    uncovered: int | None = None
    witness: np.ndarray | None = None
    mismatches: list[int] = field(default_factory=list)
    sweeps: int = 0

    def __bool__(self) -> bool:
        return self.accepted

    def summary(self) -> str:
        status = "ACCEPT" if self.accepted else "REJECT"
        text = f"{status} {self.kind} ({self.sweeps} sweeps)"
        return f"{text}: {self.reason}" if self.reason else text


def _check_nodes(graph: Graph, nodes: Sequence[int]) -> None:
    for x in nodes:
        if not 0 <= x < graph.n:
            raise ValueError(f"certificate node {x} outside 0..{graph.n - 1}")


def verify_radius_certificate(
    graph: Graph,
    L: Sequence[int],
    r: int,
    center: int | None = None,
    counter: QueryCounter | None = None,
) -> Verdict:
    """Check that every node is at distance ``>= r`` from some member of ``L``.

    With ``center`` given, also check ``e(center) == r`` which certifies
    ``rad(G) == r``.  ``witness[u]`` is a member of ``L`` far enough from ``u``.
    """
    counter = counter if counter is not None else QueryCounter()
    start = counter.sweeps
    L = list(dict.fromkeys(int(x) for x in L))
    _check_nodes(graph, L)
    # d(u, u) = 0 is a valid lower bound even for an empty certificate
    best = np.zeros(graph.n, dtype=np.int64)
    witness = np.full(graph.n, -1, dtype=np.int64)
    for x in L:
        d = dist_from(graph, x, BACKWARD, counter=counter).dist
        better = (d > best) | ((witness < 0) & (d >= best))
        best[better] = d[better]
        witness[better] = x
    uncovered = np.flatnonzero(best < r)
    if len(uncovered):
        u = int(uncovered[0])
        return Verdict(False, RADIUS, f"node {u} has max distance {int(best[u])} < {r} to L",
                       uncovered=u, witness=witness, sweeps=counter.sweeps - start)
    if center is not None:
        _check_nodes(graph, [center])
        e_c = dist_from(graph, center, FORWARD, counter=counter).ecc
        if e_c != r:
            return Verdict(False, RADIUS, f"center {center} has eccentricity {e_c} != {r}",
                           witness=witness, sweeps=counter.sweeps - start)
    return Verdict(True, RADIUS, witness=witness, sweeps=counter.sweeps - start)


def _upper_bounds(graph: Graph, U: Sequence[tuple[int, int]], counter: QueryCounter):
    e_U = np.full(graph.n, INF, dtype=np.int64)
    witness = np.full(graph.n, -1, dtype=np.int64)
    for x, claimed in U:
        fwd = dist_from(graph, x, FORWARD, counter=counter)
        if fwd.ecc != claimed:
            return None, None, (x, claimed, fwd.ecc)
        d = backward_row(graph, x, fwd, None, counter).dist + fwd.ecc
        better = d < e_U
        e_U[better] = d[better]
        witness[better] = x
    return e_U, witness, None


def verify_diameter_certificate(
    graph: Graph,
    U: Sequence[tuple[int, int]],
    D: int,
    diametral: int | None = None,
    counter: QueryCounter | None = None,
) -> Verdict:
    """Check that the balls ``B[x, D - e(x)]`` over ``x`` in ``U`` cover every node.

    Each claimed ``e(x)`` is recomputed first.  With ``diametral`` given, also
    check ``e(diametral) == D`` which certifies ``diam(G) == D``.
    """
    counter = counter if counter is not None else QueryCounter()
    start = counter.sweeps
    U = list(dict.fromkeys((int(x), int(e)) for x, e in U))
    _check_nodes(graph, [x for x, _ in U])
    e_U, witness, stale = _upper_bounds(graph, U, counter)
    if stale is not None:
        x, claimed, actual = stale
        return Verdict(False, DIAMETER, f"stale eccentricity for {x}: claimed {claimed}, actual {actual}",
                       sweeps=counter.sweeps - start)
    uncovered = np.flatnonzero(e_U > D)
    if len(uncovered):
        u = int(uncovered[0])
        return Verdict(False, DIAMETER, f"node {u} not covered (upper bound {int(min(e_U[u], INF))} > {D})",
                       uncovered=u, witness=witness, sweeps=counter.sweeps - start)
    if diametral is not None:
        _check_nodes(graph, [diametral])
        e_b = dist_from(graph, diametral, FORWARD, counter=counter).ecc
        if e_b != D:
            return Verdict(False, DIAMETER, f"diametral node {diametral} has eccentricity {e_b} != {D}",
                           witness=witness, sweeps=counter.sweeps - start)
    return Verdict(True, DIAMETER, witness=witness, sweeps=counter.sweeps - start)


def verify_all_ecc_certificate(
    graph: Graph, bundle: CertificateBundle, counter: QueryCounter | None = None
) -> Verdict:
    """Check ``e_L(v) == e_U(v) == claimed[v]`` for every node."""
    if bundle.kind != ALL_ECC:
        raise ValueError(f"expected an all-ecc bundle, got {bundle.kind!r}")
    counter = counter if counter is not None else QueryCounter()
    start = counter.sweeps
    claimed = np.asarray(bundle.value, dtype=np.int64)
    if claimed.shape != (graph.n,):
        return Verdict(False, ALL_ECC, "claimed eccentricity vector has wrong length")
    _check_nodes(graph, list(bundle.L) + [x for x, _ in bundle.U])
    e_L = np.zeros(graph.n, dtype=np.int64)
    for x in dict.fromkeys(bundle.L):
        np.maximum(e_L, dist_from(graph, x, BACKWARD, counter=counter).dist, out=e_L)
    e_U, _, stale = _upper_bounds(graph, list(dict.fromkeys(bundle.U)), counter)
    if stale is not None:
        x, c, a = stale
        return Verdict(False, ALL_ECC, f"stale eccentricity for {x}: claimed {c}, actual {a}",
                       sweeps=counter.sweeps - start)
    bad = np.flatnonzero((e_L != claimed) | (e_U != claimed))
    if len(bad):
        u = int(bad[0])
        return Verdict(False, ALL_ECC,
                       f"{len(bad)} mismatches; node {u}: e_L={int(e_L[u])} e_U={int(min(e_U[u], INF))} claimed={int(claimed[u])}",
                       uncovered=u, mismatches=bad.tolist(), sweeps=counter.sweeps - start)
    return Verdict(True, ALL_ECC, sweeps=counter.sweeps - start)


def verify_bundle(graph: Graph, bundle: CertificateBundle,
                  counter: QueryCounter | None = None) -> Verdict:
    """Dispatch on ``bundle.kind``; the fingerprint must match ``graph``."""
    if not bundle.matches(graph):
        raise FingerprintMismatch("certificate fingerprint does not match the graph")
    if bundle.kind == RADIUS:
        if len(bundle.U) != 1:
            return Verdict(False, RADIUS, "radius bundle needs exactly one center in U")
        c, e_c = bundle.U[0]
        if e_c != bundle.value:
            return Verdict(False, RADIUS, f"center eccentricity {e_c} differs from claimed radius {bundle.value}")
        return verify_radius_certificate(graph, bundle.L, int(bundle.value), center=c, counter=counter)
    if bundle.kind == DIAMETER:
        if len(bundle.L) != 1:
            return Verdict(False, DIAMETER, "diameter bundle needs exactly one diametral node in L")
        return verify_diameter_certificate(graph, bundle.U, int(bundle.value),
                                           diametral=bundle.L[0], counter=counter)
    return verify_all_ecc_certificate(graph, bundle, counter)
