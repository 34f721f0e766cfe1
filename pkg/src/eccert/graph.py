"""Immutable compressed-adjacency graphs, parsers and core restriction."""

from __future__ import annotations

import gzip
import hashlib
import io
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

logger = logging.getLogger(__name__)


class GraphFormatError(ValueError):
    """Raised when an input file cannot be parsed into a graph."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _csr(n: int, src: np.ndarray, dst: np.ndarray, w: np.ndarray):
    # canonical arc order: by source, then target, then weight
    order = np.lexsort((w, dst, src))
    src, dst, w = src[order], dst[order], w[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, dst.astype(np.int64), w.astype(np.int64)


@dataclass(frozen=True, eq=False)
class Graph:
    """A graph on nodes ``0..n-1`` stored as CSR arrays.

    Undirected graphs store every edge as two arcs; their reverse adjacency is
    the forward adjacency itself.  Weights are non-negative integers and
    unweighted graphs carry weight 1 on every arc.
    """

    n: int
    directed: bool
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    rindptr: np.ndarray
    rindices: np.ndarray
    rweights: np.ndarray
    unit_weights: bool = field(init=False)

    def __post_init__(self) -> None:
        for name in ("indptr", "indices", "weights", "rindptr", "rindices", "rweights"):
            getattr(self, name).setflags(write=False)
        object.__setattr__(self, "unit_weights", bool(np.all(self.weights == 1)))

    @classmethod
    def from_arcs(
        cls,
        n: int,
        src: Iterable[int],
        dst: Iterable[int],
        weights: Iterable[int] | None = None,
        directed: bool = False,
    ) -> Graph:
        src = np.asarray(list(src) if not isinstance(src, np.ndarray) else src, dtype=np.int64)
        dst = np.asarray(list(dst) if not isinstance(dst, np.ndarray) else dst, dtype=np.int64)
        if weights is None:
            w = np.ones(len(src), dtype=np.int64)
        else:
            w = np.asarray(
                list(weights) if not isinstance(weights, np.ndarray) else weights, dtype=np.int64
            )
        if not (len(src) == len(dst) == len(w)):
            raise ValueError("arc arrays must have equal length")
        if n < 0:
            raise ValueError("node count must be non-negative")
        if len(src) and (src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n):
            raise ValueError("arc endpoint outside 0..n-1")
        if len(w) and w.min() < 0:
            raise ValueError("negative arc weight")
        if not directed:
            src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])
            w = np.concatenate([w, w])
        indptr, indices, wts = _csr(n, src, dst, w)
        if directed:
            rindptr, rindices, rwts = _csr(n, dst, src, w)
        else:
            rindptr, rindices, rwts = indptr, indices, wts
        return cls(n, directed, indptr, indices, wts, rindptr, rindices, rwts)

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, ...]], directed: bool = False
    ) -> Graph:
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples."""
        src, dst, wts = [], [], []
        for e in edges:
            src.append(e[0])
            dst.append(e[1])
            wts.append(e[2] if len(e) > 2 else 1)
        return cls.from_arcs(n, src, dst, wts, directed=directed)

    @property
    def arc_count(self) -> int:
        return int(self.indptr[-1])

    @property
    def edge_count(self) -> int:
        """Arcs for digraphs, edges (arcs / 2) for undirected graphs."""
        return self.arc_count if self.directed else self.arc_count // 2

    @property
    def max_weight(self) -> int:
        return int(self.weights.max()) if self.arc_count else 0

    def arcs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        return src, self.indices.copy(), self.weights.copy()

    def edges(self) -> list[tuple[int, int, int]]:
        """Edge list with each undirected edge listed once."""
        src, dst, w = self.arcs()
        if self.directed:
            return list(zip(src.tolist(), dst.tolist(), w.tolist()))
        out = []
        loops: dict[tuple[int, int], int] = {}
        for u, v, wt in zip(src.tolist(), dst.tolist(), w.tolist()):
            if u < v:
                out.append((u, v, wt))
            elif u == v:
                # a self-loop contributes two identical arcs
                loops[(u, wt)] = loops.get((u, wt), 0) + 1
        for (u, wt), k in sorted(loops.items()):
            out.extend([(u, u, wt)] * (k // 2))
        return out

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u] : self.indptr[u + 1]]

    def in_neighbors(self, u: int) -> np.ndarray:
        return self.rindices[self.rindptr[u] : self.rindptr[u + 1]]

    def sha256(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.n}:{int(self.directed)}:".encode())
        for arr in (self.indptr, self.indices, self.weights):
            h.update(np.ascontiguousarray(arr, dtype="<i8").tobytes())
        return h.hexdigest()

    def fingerprint(self) -> dict:
        return {"n": self.n, "arc_count": self.arc_count, "graph_sha256": self.sha256()}

    def same_arcs(self, other: Graph) -> bool:
        return (
            self.n == other.n
            and self.directed == other.directed
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.weights, other.weights)
        )

    def to_csr_matrix(self, reverse: bool = False) -> csr_matrix:
        """Sparse matrix with parallel arcs collapsed to their lightest weight."""
        if reverse:
            ip, ix, w = self.rindptr, self.rindices, self.rweights
        else:
            ip, ix, w = self.indptr, self.indices, self.weights
        src = np.repeat(np.arange(self.n), np.diff(ip))
        keep = src != ix
        src, dst, w = src[keep], ix[keep], w[keep]
        if len(src):
            order = np.lexsort((w, dst, src))
            src, dst, w = src[order], dst[order], w[order]
            first = np.ones(len(src), dtype=bool)
            first[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
            src, dst, w = src[first], dst[first], w[first]
        m = csr_matrix((w.astype(np.float64), (src, dst)), shape=(self.n, self.n))
        return m

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Graph(n={self.n}, arcs={self.arc_count}, {kind}, unit={self.unit_weights})"


@dataclass(frozen=True)
class Ranking:
    """A permutation ``rank`` of the nodes; higher rank wins antipode ties."""

    rank: np.ndarray
    label: str | int = "id"

    def __post_init__(self) -> None:
        r = np.asarray(self.rank, dtype=np.int64)
        if not np.array_equal(np.sort(r), np.arange(len(r))):
            raise ValueError("ranking must be a permutation of 0..n-1")
        r.setflags(write=False)
        object.__setattr__(self, "rank", r)

    @classmethod
    def identity(cls, n: int) -> Ranking:
        return cls(np.arange(n, dtype=np.int64), "id")

    @classmethod
    def random(cls, n: int, seed: int) -> Ranking:
        rng = np.random.default_rng(seed)
        return cls(rng.permutation(n).astype(np.int64), int(seed))

    def __len__(self) -> int:
        return len(self.rank)


def reverse(graph: Graph) -> Graph:
    """Transpose a digraph; undirected graphs are returned unchanged."""
    if not graph.directed:
        return graph
    return Graph(
        graph.n,
        True,
        graph.rindptr,
        graph.rindices,
        graph.rweights,
        graph.indptr,
        graph.indices,
        graph.weights,
    )


def _induced(graph: Graph, keep: np.ndarray) -> tuple[Graph, np.ndarray]:
    old_to_new = np.full(graph.n, -1, dtype=np.int64)
    old_to_new[keep] = np.arange(len(keep), dtype=np.int64)
    src, dst, w = graph.arcs()
    mask = (old_to_new[src] >= 0) & (old_to_new[dst] >= 0)
    src, dst, w = old_to_new[src[mask]], old_to_new[dst[mask]], w[mask]
    if not graph.directed:
        half = src <= dst
        # self-loops appear twice among the arcs
        loops = src == dst
        loop_idx = np.flatnonzero(loops)
        half[loop_idx[1::2]] = False
        src, dst, w = src[half], dst[half], w[half]
    return Graph.from_arcs(len(keep), src, dst, w, directed=graph.directed), old_to_new


def restrict_to_core(graph: Graph) -> tuple[Graph, np.ndarray]:
    """Restrict to the largest (strongly) connected component.

    Ties between equally large components go to the one holding the smallest
    node id.  Returns the induced graph and an ``old -> new`` id array with
    ``-1`` for dropped nodes.
    """
    if graph.n == 0:
        raise ValueError("cannot restrict an empty graph")
    ncomp, labels = connected_components(
        graph.to_csr_matrix(), directed=graph.directed, connection="strong"
    )
    if ncomp == 1:
        return graph, np.arange(graph.n, dtype=np.int64)
    sizes = np.bincount(labels, minlength=ncomp)
    best = sizes.max()
    # labels of maximal components; first occurrence in node order wins
    candidates = np.flatnonzero(sizes == best)
    first_node = np.array([np.flatnonzero(labels == c)[0] for c in candidates])
    label = candidates[np.argmin(first_node)]
    keep = np.flatnonzero(labels == label)
    dropped = graph.n - len(keep)
    logger.info("core restriction kept %d of %d nodes (%.2f%% dropped)",
                len(keep), graph.n, 100.0 * dropped / graph.n)
    return _induced(graph, keep)


def induced_subgraph(graph: Graph, nodes: Iterable[int]) -> tuple[Graph, np.ndarray]:
    keep = np.unique(np.asarray(list(nodes), dtype=np.int64))
    return _induced(graph, keep)


# ---------------------------------------------------------------- parsers


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        vals = [int(t) for t in tokens]
    except ValueError:
        raise GraphFormatError(f"non-integer token in {' '.join(tokens)!r}", lineno) from None
    return vals


def parse_edge_list(stream: IO[str]) -> Graph:
    """Parse ``u v`` / ``u v w`` lines with an optional ``n <count> directed <0|1>`` header."""
    n_declared: int | None = None
    directed = False
    src: list[int] = []
    dst: list[int] = []
    wts: list[int] = []
    seen_arc = False
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "n":
            if seen_arc or n_declared is not None:
                raise GraphFormatError("header must precede arcs and appear once", lineno)
            if len(tokens) not in (2, 4) or (len(tokens) == 4 and tokens[2] != "directed"):
                raise GraphFormatError("malformed header, expected 'n <count> directed <0|1>'", lineno)
            vals = _ints([tokens[1]] + tokens[3:], lineno)
            n_declared = vals[0]
            if n_declared < 0:
                raise GraphFormatError("negative node count", lineno)
            if len(vals) == 2:
                if vals[1] not in (0, 1):
                    raise GraphFormatError("directed flag must be 0 or 1", lineno)
                directed = bool(vals[1])
            continue
        if len(tokens) not in (2, 3):
            raise GraphFormatError(f"expected 2 or 3 fields, got {len(tokens)}", lineno)
        vals = _ints(tokens, lineno)
        u, v = vals[0], vals[1]
        w = vals[2] if len(vals) == 3 else 1
        if u < 0 or v < 0:
            raise GraphFormatError("negative node id", lineno)
        if w < 0:
            raise GraphFormatError("negative weight", lineno)
        if n_declared is not None and (u >= n_declared or v >= n_declared):
            raise GraphFormatError(f"node id {max(u, v)} >= declared n={n_declared}", lineno)
        src.append(u)
        dst.append(v)
        wts.append(w)
        seen_arc = True
    if n_declared is None:
        n_declared = 1 + max(max(src, default=-1), max(dst, default=-1))
    return Graph.from_arcs(n_declared, src, dst, wts, directed=directed)


def parse_dimacs_gr(stream: IO[str]) -> Graph:
    """Parse the DIMACS shortest-path ``.gr`` format (1-based, directed)."""
    n: int | None = None
    m_declared = 0
    src: list[int] = []
    dst: list[int] = []
    wts: list[int] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if len(tokens) != 4 or tokens[1] != "sp":
                raise GraphFormatError("malformed problem line, expected 'p sp n m'", lineno)
            n, m_declared = _ints(tokens[2:], lineno)
            continue
        if tokens[0] == "a":
            if n is None:
                raise GraphFormatError("arc before 'p sp' header", lineno)
            if len(tokens) != 4:
                raise GraphFormatError("malformed arc line, expected 'a u v w'", lineno)
            u, v, w = _ints(tokens[1:], lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"node id outside 1..{n}", lineno)
            if w < 0:
                raise GraphFormatError("negative weight", lineno)
            src.append(u - 1)
            dst.append(v - 1)
            wts.append(w)
            continue
        raise GraphFormatError(f"unknown line type {tokens[0]!r}", lineno)
    if n is None:
        raise GraphFormatError("missing 'p sp n m' header")
    if len(src) != m_declared:
        logger.warning("DIMACS header declares %d arcs, found %d", m_declared, len(src))
    return Graph.from_arcs(n, src, dst, wts, directed=True)


def open_text(path: str | Path) -> IO[str]:
    """Open a text stream; ``-`` is standard input and ``.gz`` files are decompressed."""
    if str(path) == "-":
        return io.TextIOWrapper(sys.stdin.buffer, encoding="utf-8")
    if str(path).endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def read_graph(path: str | Path, fmt: str = "auto") -> Graph:
    """Read an edge-list (``el``) or DIMACS (``gr``) file."""
    if fmt == "auto":
        name = str(path)[:-3] if str(path).endswith(".gz") else str(path)
        fmt = "gr" if name.endswith(".gr") else "el"
    parser = {"el": parse_edge_list, "gr": parse_dimacs_gr}.get(fmt)
    if parser is None:
        raise ValueError(f"unknown graph format {fmt!r}")
    with open_text(path) as fh:
        return parser(fh)


def write_edge_list(graph: Graph, stream: IO[str], comment: str | None = None) -> None:
    if comment:
        for line in comment.splitlines():
            stream.write(f"# {line}\n")
    stream.write(f"n {graph.n} directed {int(graph.directed)}\n")
    unit = graph.unit_weights
    for u, v, w in graph.edges():
        stream.write(f"{u} {v}\n" if unit else f"{u} {v} {w}\n")
