from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eccert.certificates import verify_bundle, verify_diameter_certificate
from eccert.generators import gen_bowtie, gen_cycle, gen_grid, gen_path, gen_tree, gen_weighted_directed_grid
from eccert.graph import Ranking
from eccert.oracle import BallFamily, apsp, is_packing, preceq_maximals
from eccert.solvers import (
    VARIANTS,
    all_eccentricities,
    diameter,
    diameter_approx,
    diameter_doubling,
    radius,
    radius_approx,
)
from eccert.traversal import QueryCounter

from conftest import connected_graphs, core
from reference import replay_all_ecc, replay_radius

ALPHAS = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(3, 4)]


# ---------------------------------------------------------------- examples


def test_radius_path():
    r = radius(gen_path(5), self_check=True)
    assert (r.value, r.center) == (2, 2)
    assert r.L == [4, 0] and r.report.sweeps == 5


def test_radius_bowtie_small():
    assert radius(gen_bowtie(2, 6), self_check=True).value == 13


def test_radius_cycle8_replayed():
    r = radius(gen_cycle(8))
    assert r.value == 4
    assert len(r.L) == 8 and r.report.sweeps == 16


def test_radius_exits():
    # the star's second iteration ends through the packing condition
    from eccert.generators import gen_star

    assert radius(gen_star(4)).exit == "packing"
    assert radius(gen_path(5)).exit == "tight"


def test_report_matches_counter():
    c = QueryCounter()
    c.tick(3)
    r = radius(gen_grid(5), counter=c)
    assert r.report.sweeps == c.sweeps - 3
    assert r.report.iterations == len(r.report.trace)
    assert r.report.L_size == len(r.L) and r.report.K_size == len(r.K)


@pytest.mark.parametrize("variant", VARIANTS)
def test_diameter_path_all_variants(variant):
    d = diameter(gen_path(5), variant=variant, self_check=True)
    assert d.value == 4
    assert verify_diameter_certificate(gen_path(5), d.U, 4)


def test_diameter_bowtie_small():
    for v in VARIANTS:
        assert diameter(gen_bowtie(2, 6), variant=v).value == 22


def test_grid_center_covers_everything():
    g = gen_grid(5)
    d = diameter(g, variant="center_init")
    c = d.radius.center
    assert d.value == 8 and d.U[0] == (c, 4)
    assert verify_diameter_certificate(g, d.U[:1], 8)
    assert len(diameter(g, variant="center_init_delegate").U) == 1


def test_all_ecc_path_and_cycle():
    a = all_eccentricities(gen_path(5), self_check=True)
    assert a.ecc.tolist() == [4, 3, 2, 3, 4] and a.U == [(2, 2)]
    c = all_eccentricities(gen_cycle(6), self_check=True)
    assert c.ecc.tolist() == [3] * 6
    assert sorted(x for x, _ in c.U) == list(range(6)) and len(c.L) == 6


def test_all_ecc_bowtie_extremes():
    a = all_eccentricities(gen_bowtie(2, 6))
    assert (a.ecc.min(), a.ecc.max()) == (13, 22)


def test_doubling_examples():
    assert diameter_doubling(gen_grid(9), alpha=Fraction(1, 2), self_check=True).value == 16
    assert diameter_doubling(gen_path(5), alpha=Fraction(1, 3)).value == 4
    d = diameter_doubling(gen_cycle(10), alpha=0.5, self_check=True)
    assert d.value == 5 and len(d.U) <= 10


def test_doubling_sweep_budget_undirected():
    for g in (gen_grid(7), gen_cycle(9), gen_bowtie(2, 6)):
        d = diameter_doubling(g, alpha=Fraction(1, 2))
        assert d.report.sweeps <= len(d.U) + 2 * d.report.L_size


@pytest.mark.parametrize("alpha", [0, 1, -0.5, 2])
def test_doubling_rejects_alpha(alpha):
    with pytest.raises(ValueError):
        diameter_doubling(gen_path(3), alpha=alpha)


def test_approximation_examples():
    # one iteration only ever sees node 0 (smallest id among zero lower bounds)
    assert radius_approx(gen_path(5), eps=0.5, budget=1).ecc == 4
    assert radius_approx(gen_path(5), eps=0.5, budget=3).ecc <= 3
    a = radius_approx(gen_grid(9), eps=0.25, budget=8)
    assert a.ecc <= 10
    assert radius_approx(gen_cycle(12), eps=0.1, budget=2).ecc == 6
    assert diameter_approx(gen_grid(9), eps=0.25, budget=8).ecc >= 12
    assert diameter_approx(gen_path(5), eps=0.5, budget=1).ecc >= 2


def test_approximation_budget_from_gamma():
    a = radius_approx(gen_grid(9), eps=0.5, gamma=2)
    assert a.iterations <= 2 ** 3


@pytest.mark.parametrize("kwargs", [dict(budget=0), dict(eps=0, budget=3), dict(eps=0.5)])
def test_approximation_rejects_parameters(kwargs):
    with pytest.raises(ValueError):
        radius_approx(gen_path(3), **kwargs)


def test_unknown_variant_and_bad_flags():
    with pytest.raises(ValueError):
        diameter(gen_path(3), variant="fast")
    with pytest.raises(ValueError):
        radius(gen_weighted_directed_grid(3, seed=1), tight_lower=True)
    with pytest.raises(ValueError):
        radius(gen_path(3), Ranking.identity(4))


# ------------------------------------------------------- oracle properties


@given(connected_graphs(max_n=25), st.integers(0, 10**6), st.booleans())
def test_solvers_match_oracle(g, seed, use_random):
    dm = apsp(g)
    rank = Ranking.random(g.n, seed) if use_random else Ranking.identity(g.n)
    r = radius(g, rank, self_check=True)
    assert r.value == dm.radius and dm.ecc[r.center] == r.value
    assert r.report.sweeps <= 2 * len(r.L) + 1
    for v in VARIANTS:
        d = diameter(g, rank, v, self_check=True)
        assert d.value == dm.diameter and dm.ecc[d.diametral] == d.value
    a = all_eccentricities(g, rank, self_check=True)
    assert np.array_equal(a.ecc, dm.ecc)
    budget = len(a.U) + 2 * len(a.L) if not g.directed else 2 * len(a.U) + 2 * len(a.L)
    assert a.report.sweeps <= budget
    for alpha in ALPHAS:
        assert diameter_doubling(g, rank, alpha, self_check=True).value == dm.diameter


@given(connected_graphs(max_n=25), st.integers(0, 10**6))
def test_radius_matches_reference_replay(g, seed):
    rank = Ranking.random(g.n, seed)
    ref = replay_radius(apsp(g).dist.tolist(), rank.rank.tolist())
    r = radius(g, rank)
    assert (r.value, r.center, r.L, r.K, r.report.sweeps) == (
        ref["rad"], ref["center"], ref["L"], ref["K"], ref["sweeps"])


@given(connected_graphs(max_n=25, directed=False), st.integers(0, 10**6))
def test_all_ecc_matches_reference_replay(g, seed):
    rank = Ranking.random(g.n, seed)
    ref = replay_all_ecc(apsp(g).dist.tolist(), rank.rank.tolist())
    a = all_eccentricities(g, rank)
    assert a.L == ref["L"] and [x for x, _ in a.U] == ref["U"]
    assert a.report.sweeps == ref["sweeps"] == len(a.U) + 2 * len(a.L)


@given(connected_graphs(max_n=25, directed=False))
def test_all_ecc_upper_certificate_is_preceq_maximal(g):
    dm = apsp(g)
    U = {x for x, _ in all_eccentricities(g).U}
    assert U == preceq_maximals(g, dm)
    assert set(dm.centers().tolist()) <= U


@given(connected_graphs(max_n=25))
def test_loop_bound_properties(g):
    dm = apsp(g)
    assert all(step.bound <= dm.radius for step in radius(g).report.trace)
    for v in VARIANTS:
        assert all(step.bound >= dm.diameter for step in diameter(g, variant=v).report.trace)


@given(connected_graphs(max_n=25, directed=False))
def test_bound_error_estimate(g):
    """e(u) - e_L(u) <= d(x, L) and e^U(u) - e(u) <= 2 d(x, U) at each selection."""
    dm = apsp(g)
    D, e = dm.dist, dm.ecc
    L: list[int] = []
    for step in radius(g).report.trace:
        u = step.selected
        eL = max((D[u, l] for l in L), default=0)
        for x in np.flatnonzero(D[u] == e[u]):
            assert e[u] - eL <= min((D[x, l] for l in L), default=np.inf)
        if step.antipode is not None:
            L.append(step.antipode)
    U: list[int] = []
    for step in diameter(g, variant="basic").report.trace:
        u = step.selected
        eU = min((D[u, y] + e[y] for y in U), default=np.inf)
        for x in np.flatnonzero(e[u] == D[u] + e):
            assert eU - e[u] <= 2 * min((D[x, y] for y in U), default=np.inf)
        U.append(step.delegate)


@given(connected_graphs(max_n=20, directed=False))
def test_basic_diameter_packing(g):
    """The selected nodes of the basic diameter loop pack the 1/3-reduced open balls."""
    dm = apsp(g)
    d = diameter(g, variant="basic")
    assert is_packing(d.K, BallFamily(Fraction(1, 3)), dm)


@given(connected_graphs(max_n=20, directed=False), st.sampled_from(ALPHAS))
def test_doubling_outer_packing(g, alpha):
    dm = apsp(g)
    d = diameter_doubling(g, alpha=alpha)
    assert is_packing(d.K, BallFamily(alpha), dm)


@given(st.integers(2, 200), st.integers(0, 10**6))
def test_first_antipode_pair_on_trees(n, seed):
    g = gen_tree(n, seed)
    r = radius(g)
    dm = apsp(g)
    assert len(r.L) <= 2
    assert dm.dist[r.L[0], r.L[1]] == dm.diameter


@given(st.integers(2, 8), st.integers(0, 10**6))
def test_weighted_directed_grids(k, seed):
    g = core(gen_weighted_directed_grid(k, seed))
    dm = apsp(g)
    r = radius(g, self_check=True)
    assert r.value == dm.radius
    assert diameter(g, variant="center_init_delegate", self_check=True).value == dm.diameter


def test_approx_guarantee_on_grids():
    for k in range(9, 16):
        g = gen_grid(k)
        dm = apsp(g)
        assert radius_approx(g, eps=0.25, budget=16).ecc <= 1.25 * dm.radius
        assert diameter_approx(g, eps=0.25, budget=16).ecc >= 0.75 * dm.diameter


def test_bundles_from_every_solver_verify():
    g = gen_grid(4)
    for res in (radius(g), diameter(g), all_eccentricities(g), diameter_doubling(g)):
        assert verify_bundle(g, res.bundle)
