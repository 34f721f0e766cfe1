"""Brute-force reference computations for testing.

Distances come from :mod:`scipy.sparse.csgraph`, an implementation
independent of this package's own traversal kernels.  Exact certificate and
packing searches are exponential and capped at 24 nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .graph import Graph
from .traversal import INF

APSP_LIMIT = 5000
EXACT_LIMIT = 24


class OracleLimitError(ValueError):
    """Instance too large for a brute-force computation."""


class PartialOrderError(AssertionError):
    """The tight-upper-certificate relation is not a partial order on this instance."""


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """``dist[u, v] = d(u, v)`` with ``INF`` for unreachable pairs."""

    dist: np.ndarray
    directed: bool

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @property
    def ecc(self) -> np.ndarray:
        return self.dist.max(axis=1) if self.n else np.zeros(0, dtype=np.int64)

    @property
    def radius(self) -> int:
        return int(self.ecc.min())

    @property
    def diameter(self) -> int:
        return int(self.ecc.max())

    def centers(self) -> np.ndarray:
        e = self.ecc
        return np.flatnonzero(e == e.min())

    def check(self) -> None:
        """Zero diagonal, triangle inequality and symmetry iff undirected."""
        d = self.dist
        assert np.all(np.diag(d) == 0)
        for k in range(self.n):
            via = np.minimum(d[:, k : k + 1] + d[k : k + 1, :], INF)
            assert np.all(d <= via), "triangle inequality violated"
        if not self.directed:
            assert np.array_equal(d, d.T)


def apsp(graph: Graph) -> DistanceMatrix:
    """All-pairs distances (one Dijkstra per node inside scipy)."""
    if graph.n > APSP_LIMIT:
        raise OracleLimitError(f"apsp is limited to {APSP_LIMIT} nodes, got {graph.n}")
    if graph.n == 0:
        return DistanceMatrix(np.zeros((0, 0), dtype=np.int64), graph.directed)
    raw = shortest_path(graph.to_csr_matrix(), method="D", directed=graph.directed)
    dist = np.full(raw.shape, INF, dtype=np.int64)
    finite = ~np.isinf(raw)
    dist[finite] = raw[finite].astype(np.int64)
    return DistanceMatrix(dist, graph.directed)


def tight_relation(dm: DistanceMatrix) -> np.ndarray:
    """``rel[u, x]`` iff ``u ⪯ x``, i.e. ``e(u) = d(u, x) + e(x)``."""
    e = dm.ecc
    return e[:, None] == dm.dist + e[None, :]


def preceq_maximals(graph: Graph, dm: DistanceMatrix | None = None) -> set[int]:
    """Maximal elements of ``⪯``, after checking it is a partial order.

    Antisymmetry fails only when two distinct nodes are at distance zero from
    each other, which needs zero-weight cycles.
    """
    dm = dm if dm is not None else apsp(graph)
    rel = tight_relation(dm)
    n = dm.n
    if not np.all(np.diag(rel)):
        raise PartialOrderError("relation is not reflexive")
    both = rel & rel.T & ~np.eye(n, dtype=bool)
    if both.any():
        u, x = map(int, np.argwhere(both)[0])
        raise PartialOrderError(f"nodes {u} and {x} are tight certificates of each other")
    r = rel.astype(np.int64)
    if np.any((r @ r > 0) & ~rel):
        raise PartialOrderError("relation is not transitive")
    strictly_above = rel & ~np.eye(n, dtype=bool)
    return {int(u) for u in np.flatnonzero(~strictly_above.any(axis=1))}


# ------------------------------------------------------------ exact search


def _guard(n: int) -> None:
    if n > EXACT_LIMIT:
        raise OracleLimitError(f"exact search is limited to {EXACT_LIMIT} nodes, got {n}")


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def min_hitting_set(sets: Sequence[int]) -> list[int] | None:
    """Smallest set of elements hitting every bitmask in ``sets``; ``None`` if impossible.

    Branches on the members of the smallest unhit set.
    """
    if any(s == 0 for s in sets):
        return None
    sets = sorted(set(sets), key=_popcount)
    best: list[int] | None = None

    def rec(chosen: int, k: int, remaining: list[int]) -> None:
        nonlocal best
        if best is not None and k >= len(best):
            return
        if not remaining:
            best = _bits(chosen)
            return
        if best is not None and k + 1 >= len(best):
            return
        pick = remaining[0]
        for x in _bits(pick):
            bit = 1 << x
            rec(chosen | bit, k + 1, [s for s in remaining if not s & bit])

    rec(0, 0, sets)
    return sorted(best) if best is not None else None


def max_independent_set(conflict: Sequence[int]) -> list[int]:
    """Maximum independent set of the graph with adjacency bitmasks ``conflict``."""
    n = len(conflict)
    best: list[int] = []

    def rec(chosen: list[int], cand: int) -> None:
        nonlocal best
        if len(chosen) + _popcount(cand) <= len(best):
            return
        if not cand:
            best = list(chosen)
            return
        v = (cand & -cand).bit_length() - 1
        rec(chosen + [v], cand & ~conflict[v] & ~(1 << v))
        rec(chosen, cand & ~(1 << v))

    rec([], (1 << n) - 1)
    return sorted(best)


def min_radius_certificate_exact(graph: Graph, dm: DistanceMatrix | None = None) -> list[int]:
    """Minimum ``L`` with ``max_{x in L} d(u, x) >= rad`` for every ``u``."""
    _guard(graph.n)
    dm = dm if dm is not None else apsp(graph)
    r = dm.radius
    if r == 0:
        return []  # d(u, u) = 0 already meets the bound
    sets = [sum(1 << int(x) for x in np.flatnonzero(dm.dist[u] >= r)) for u in range(dm.n)]
    result = min_hitting_set(sets)
    assert result is not None
    return result


def min_diameter_certificate_exact(graph: Graph, dm: DistanceMatrix | None = None) -> list[int]:
    """Minimum ``U`` with ``min_{x in U} d(u, x) + e(x) <= diam`` for every ``u``."""
    _guard(graph.n)
    dm = dm if dm is not None else apsp(graph)
    e, D = dm.ecc, dm.diameter
    sets = [sum(1 << int(x) for x in np.flatnonzero(dm.dist[u] + e <= D)) for u in range(dm.n)]
    result = min_hitting_set(sets)
    assert result is not None
    return result


@dataclass(frozen=True)
class BallFamily:
    """Balls ``{v : d(v, u) < alpha (diam - e(u))}`` (``<=`` when ``closed``).

    With ``center`` set, that node's ball uses ``center_factor`` instead of
    ``alpha``.
    """

    alpha: Fraction
    closed: bool = False
    center: int | None = None
    center_factor: Fraction = Fraction(1)

    def members(self, dm: DistanceMatrix) -> list[int]:
        """Bitmask of members for each ball, indexed by ball center."""
        e, D = dm.ecc, dm.diameter
        out = []
        for u in range(dm.n):
            f = Fraction(self.center_factor if u == self.center else self.alpha)
            lhs = dm.dist[:, u] * f.denominator
            rhs = f.numerator * (D - int(e[u]))
            inside = lhs <= rhs if self.closed else lhs < rhs
            out.append(sum(1 << int(v) for v in np.flatnonzero(inside)))
        return out


@dataclass
class PackingResult:
    packing: list[int]
    cover: list[int] | None  # centers of a minimum covering, None if none exists

    @property
    def pi(self) -> int:
        return len(self.packing)

    @property
    def kappa(self) -> float:
        return len(self.cover) if self.cover is not None else float("inf")


def max_packing_exact(graph: Graph, family: BallFamily,
                      dm: DistanceMatrix | None = None) -> PackingResult:
    """Exact maximum packing and minimum covering for a ball family; checks ``pi <= kappa``."""
    _guard(graph.n)
    dm = dm if dm is not None else apsp(graph)
    balls = family.members(dm)
    n = dm.n
    conflict = [0] * n
    for b in balls:
        for v in _bits(b):
            conflict[v] |= b & ~(1 << v)
    packing = max_independent_set(conflict)
    # covering by balls = hitting set of the dual: node v is hit by balls containing it
    dual = [sum(1 << u for u in range(n) if balls[u] >> v & 1) for v in range(n)]
    cover = min_hitting_set(dual)
    result = PackingResult(packing, cover)
    assert result.pi <= result.kappa, "weak duality violated"
    return result


def is_packing(nodes: Sequence[int], family: BallFamily, dm: DistanceMatrix) -> bool:
    mask = sum(1 << int(v) for v in set(nodes))
    return all(_popcount(b & mask) <= 1 for b in family.members(dm))


def antipodes_exact(dm: DistanceMatrix, rank: np.ndarray | None = None) -> np.ndarray:
    """Antipode of every node: furthest node of highest rank."""
    rank = rank if rank is not None else np.arange(dm.n)
    e = dm.ecc
    out = np.empty(dm.n, dtype=np.int64)
    for u in range(dm.n):
        far = np.flatnonzero(dm.dist[u] == e[u])
        out[u] = far[np.argmax(rank[far])]
    return out
