"""Seeded synthetic graph families.

Every generator is a pure function of its parameters and seed.  Generators
that may produce disconnected graphs (deleted grids, oriented grids, power-law
and unit-disk graphs, interval graphs) leave core restriction to the caller.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.spatial import cKDTree

from .graph import Graph


@dataclass(frozen=True)
class GenSpec:
    """A family tag with its parameters; ``build()`` is deterministic."""

    family: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None

    def build(self) -> Graph:
        fn = FAMILIES.get(self.family)
        if fn is None:
            raise ValueError(f"unknown family {self.family!r}; choose from {sorted(FAMILIES)}")
        kwargs = dict(self.params)
        if self.seed is not None:
            kwargs["seed"] = self.seed
        return fn(**kwargs)

    def describe(self) -> str:
        parts = [f"family={self.family}"] + [f"{k}={v}" for k, v in sorted(self.params.items())]
        if self.seed is not None:
            parts.append(f"seed={self.seed}")
        return " ".join(parts)

    def to_dict(self) -> dict:
        return asdict(self)


def _rng(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(seed)


# ------------------------------------------------------------ small families


def gen_path(k: int) -> Graph:
    """Path on ``k`` nodes ``0 - 1 - ... - k-1``."""
    if k < 1:
        raise ValueError("path needs at least one node")
    return Graph.from_edges(k, [(i, i + 1) for i in range(k - 1)])


def gen_cycle(k: int) -> Graph:
    if k < 3:
        raise ValueError("cycle needs at least three nodes")
    return Graph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def gen_star(k: int) -> Graph:
    """Star ``K_{1,k}`` with center 0 and leaves ``1..k``."""
    if k < 1:
        raise ValueError("star needs at least one leaf")
    return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])


def gen_complete(k: int) -> Graph:
    if k < 1:
        raise ValueError("complete graph needs at least one node")
    return Graph.from_edges(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def gen_tree(n: int, seed: int | None = None) -> Graph:
    """Random recursive tree: node ``i`` attaches to a uniform earlier node."""
    if n < 1:
        raise ValueError("tree needs at least one node")
    rng = _rng(seed)
    parents = [int(rng.integers(0, i)) for i in range(1, n)]
    return Graph.from_edges(n, [(p, i) for i, p in enumerate(parents, start=1)])


def gen_er(n: int, p: float, seed: int | None = None) -> Graph:
    """Erdős–Rényi ``G(n, p)``."""
    if not 0 <= p <= 1:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = _rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return Graph.from_arcs(n, iu[keep], ju[keep])


# -------------------------------------------------------------------- grids


def _grid_edges(k: int) -> tuple[np.ndarray, np.ndarray]:
    ids = np.arange(k * k).reshape(k, k)
    horiz = (ids[:, :-1].ravel(), ids[:, 1:].ravel())
    vert = (ids[:-1, :].ravel(), ids[1:, :].ravel())
    return np.concatenate([horiz[0], vert[0]]), np.concatenate([horiz[1], vert[1]])


def gen_grid(k: int, deletion_fraction: float = 0.0, seed: int | None = None) -> Graph:
    """``k x k`` grid (node ``i*k + j``) with a uniform fraction of its edges deleted."""
    if k < 2:
        raise ValueError("grid side must be at least 2")
    if not 0 <= deletion_fraction < 1:
        raise ValueError("deletion fraction must lie in [0, 1)")
    src, dst = _grid_edges(k)
    m = len(src)
    drop = int(round(deletion_fraction * m))
    if drop:
        keep = np.sort(_rng(seed).permutation(m)[drop:])
        src, dst = src[keep], dst[keep]
    return Graph.from_arcs(k * k, src, dst)


def gen_weighted_directed_grid(k: int, seed: int | None = None) -> Graph:
    """``k x k`` grid with each edge oriented by a fair coin and weighted uniformly in 0..9."""
    if k < 2:
        raise ValueError("grid side must be at least 2")
    rng = _rng(seed)
    src, dst = _grid_edges(k)
    flip = rng.random(len(src)) < 0.5
    s = np.where(flip, dst, src)
    t = np.where(flip, src, dst)
    w = rng.integers(0, 10, size=len(src))
    return Graph.from_arcs(k * k, s, t, w, directed=True)


# ------------------------------------------------------------------- bowtie


def bowtie_size(p: int, q: int) -> int:
    return 2 * p * q + 10 * q + 2


def gen_bowtie(p: int, q: int) -> Graph:
    """Bow-tie graph ``BT_{p,q}`` with diameter ``4q-2`` and radius ``2q+1``.

    Layout (node ids in this order):

    * the center ``c = 0`` with five pendant leaves;
    * two hubs ``a`` and ``b``, each joined to ``c`` by three parallel paths of
      length ``q + 1``;
    * ``p`` spokes of length ``q`` hanging from each hub (the wings);
    * a shortcut path of length ``2q - 2`` between the hubs;
    * a tail of length ``2q - 3`` hanging from ``c``, whose end gets the
      highest id.

    The center is unique, ``{a, b, c}`` is a diameter certificate and a left
    tip, a right tip and the tail end form a radius certificate.  Diameter
    algorithms that start from the wings need a sweep per spoke.
    """
    if p < 2 or q < 6:
        raise ValueError("bow-tie needs p >= 2 and q >= 6")
    edges: list[tuple[int, int]] = []
    nxt = 0

    def new() -> int:
        nonlocal nxt
        nxt += 1
        return nxt - 1

    def chain(u: int, v: int | None, internal: int) -> int:
        """Path from ``u`` through ``internal`` new nodes, ending at ``v`` (or a new end)."""
        prev = u
        for _ in range(internal):
            x = new()
            edges.append((prev, x))
            prev = x
        if v is None:
            return prev
        edges.append((prev, v))
        return v

    c = new()
    for _ in range(5):
        edges.append((c, new()))
    a, b = new(), new()
    for hub in (a, b):
        for _ in range(3):
            chain(c, hub, q)
    for hub in (a, b):
        for _ in range(p):
            chain(hub, None, q)
    chain(a, b, 2 * q - 3)
    chain(c, None, 2 * q - 3)
    n = nxt
    assert n == bowtie_size(p, q)
    return Graph.from_edges(n, edges)


# ---------------------------------------------------------- random families


def gen_powerlaw(n: int, exponent: float = 2.5, seed: int | None = None,
                 max_retries: int = 20) -> Graph:
    """Configuration-model graph with ``P(deg = k)`` proportional to ``k^-exponent``.

    Stubs are matched uniformly at random; self-loops and repeated edges are
    dropped afterwards.  A degree sequence with odd sum is redrawn.
    """
    if n < 10:
        raise ValueError("power-law graph needs n >= 10")
    rng = _rng(seed)
    ks = np.arange(1, n, dtype=np.float64)
    prob = ks ** (-exponent)
    prob /= prob.sum()
    for _ in range(max_retries):
        deg = rng.choice(np.arange(1, n), size=n, p=prob)
        if deg.sum() % 2 == 0:
            break
    else:
        raise RuntimeError("could not draw a degree sequence with even sum")
    stubs = rng.permutation(np.repeat(np.arange(n), deg))
    u, v = stubs[0::2], stubs[1::2]
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    keep = lo != hi
    pairs = np.unique(np.stack([lo[keep], hi[keep]], axis=1), axis=0)
    return Graph.from_arcs(n, pairs[:, 0], pairs[:, 1])


def gen_udg(n: int, target_avg_degree: float = 10.0, seed: int | None = None) -> Graph:
    """Unit-disk graph on uniform points in the unit square.

    The connection radius ``r`` solves ``n * pi * r^2 = target`` (boundary
    effects make the realized degree slightly smaller).
    """
    if n < 10:
        raise ValueError("unit-disk graph needs n >= 10")
    rng = _rng(seed)
    pts = rng.random((n, 2))
    r = float(np.sqrt(target_avg_degree / (np.pi * n)))
    pairs = cKDTree(pts).query_pairs(r, output_type="ndarray")
    pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    return Graph.from_arcs(n, pairs[:, 0], pairs[:, 1])


# ------------------------------------------------------------------ chordal


def gen_ktree(n: int, k: int, seed: int | None = None) -> Graph:
    """Random ``k``-tree: a ``(k+1)``-clique grown by attaching nodes to ``k``-cliques."""
    if k < 1 or n < k + 1:
        raise ValueError("k-tree needs k >= 1 and n >= k + 1")
    rng = _rng(seed)
    edges = [(i, j) for i in range(k + 1) for j in range(i + 1, k + 1)]
    base = list(range(k + 1))
    cliques = [tuple(x for x in base if x != y) for y in base]
    for v in range(k + 1, n):
        cl = cliques[int(rng.integers(len(cliques)))]
        edges.extend((u, v) for u in cl)
        cliques.extend(tuple(x for x in cl if x != y) + (v,) for y in cl)
    return Graph.from_edges(n, edges)


def gen_interval(n: int, max_length: float = 0.1, seed: int | None = None) -> Graph:
    """Interval graph of ``n`` random intervals in ``[0, 1]`` with lengths up to ``max_length``."""
    rng = _rng(seed)
    left = rng.random(n)
    right = left + rng.random(n) * max_length
    order = np.argsort(left, kind="stable")
    edges = []
    for pos, i in enumerate(order):
        for j in order[pos + 1:]:
            if left[j] > right[i]:
                break
            edges.append((int(i), int(j)))
    return Graph.from_edges(n, edges)


def gen_chordal(kind: str, n: int, param: float, seed: int | None = None) -> Graph:
    """``kind="ktree"`` (``param`` is k) or ``kind="interval"`` (``param`` is the max length)."""
    if kind == "ktree":
        return gen_ktree(n, int(param), seed)
    if kind == "interval":
        return gen_interval(n, float(param), seed)
    raise ValueError(f"unknown chordal kind {kind!r}")


def gen_xy_chordal(k: int) -> Graph:
    """Split graph with clique ``X`` and independent set ``Y`` where ``x_i ~ y_j`` iff ``j <= i``.

    ``x_i`` is node ``i - 1`` and ``y_j`` is node ``k + j - 1``.  It has a
    two-node radius certificate ``{y_1, y_k}`` yet the radius loop can be forced
    to place every ``y_j`` into its lower certificate.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    edges += [(i - 1, k + j - 1) for i in range(1, k + 1) for j in range(1, i + 1)]
    return Graph.from_edges(2 * k, edges)


FAMILIES: dict[str, Callable[..., Graph]] = {
    "path": gen_path,
    "cycle": gen_cycle,
    "star": gen_star,
    "complete": gen_complete,
    "tree": gen_tree,
    "er": gen_er,
    "grid": gen_grid,
    "dgrid": gen_weighted_directed_grid,
    "bowtie": gen_bowtie,
    "powerlaw": gen_powerlaw,
    "udg": gen_udg,
    "ktree": gen_ktree,
    "interval": gen_interval,
    "xy": gen_xy_chordal,
}
