from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from eccert.generators import gen_er, gen_grid, gen_tree, gen_weighted_directed_grid
from eccert.graph import Graph, restrict_to_core

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def core(graph: Graph) -> Graph:
    return restrict_to_core(graph)[0]


@st.composite
def connected_graphs(draw, max_n: int = 30, directed: bool | None = None) -> Graph:
    """Core-restricted random graphs of several families (possibly weighted/directed)."""
    kind = draw(st.sampled_from(["er", "tree", "grid", "dgrid"] if directed is not True else ["dgrid"]))
    if directed is False and kind == "dgrid":
        kind = "er"
    seed = draw(st.integers(0, 2**32 - 1))
    if kind == "er":
        n = draw(st.integers(2, max_n))
        p = draw(st.sampled_from([0.1, 0.2, 0.4]))
        g = gen_er(n, p, seed)
    elif kind == "tree":
        g = gen_tree(draw(st.integers(1, max_n)), seed)
    elif kind == "grid":
        g = gen_grid(draw(st.integers(2, 6)), draw(st.sampled_from([0.0, 0.1, 0.2])), seed)
    else:
        g = gen_weighted_directed_grid(draw(st.integers(2, 6)), seed)
    return core(g)


@st.composite
def weighted_graphs(draw, max_n: int = 20) -> Graph:
    """Random weighted (di)graphs with zero weights and parallel arcs allowed."""
    n = draw(st.integers(1, max_n))
    directed = draw(st.booleans())
    m = draw(st.integers(0, 3 * n))
    src = draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    dst = draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    w = draw(st.lists(st.integers(0, 9), min_size=m, max_size=m))
    return Graph.from_arcs(n, src, dst, w, directed=directed)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
