"""Acceptance suite: ten end-to-end criteria, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
Expected values come from the brute-force oracle, never from the solvers.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import pytest

import eccert.solvers as solvers_mod
from eccert.analysis import antipode_closure_check, profile
from eccert.certificates import verify_bundle
from eccert.chordal import chordal_all_ecc, chordal_certificate_checks, chordal_diameter
from eccert.generators import (
    bowtie_size,
    gen_bowtie,
    gen_er,
    gen_grid,
    gen_interval,
    gen_ktree,
    gen_tree,
    gen_weighted_directed_grid,
)
from eccert.graph import Graph, Ranking, restrict_to_core
from eccert.oracle import PartialOrderError, apsp, preceq_maximals
from eccert.solvers import (
    VARIANTS,
    all_eccentricities,
    diameter,
    diameter_approx,
    diameter_doubling,
    radius,
    radius_approx,
)

ALPHAS = (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(3, 4))
BOWTIE_PQ = [(p, q) for p in (2, 5, 20) for q in (6, 10, 20)]


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    capman = _CAPTURE.get("capsys")
    if capman is not None:
        with capman.disabled():
            print("\n" + line)
    else:
        print(line)


_CAPTURE: dict = {}


@pytest.fixture(autouse=True)
def _expose_capsys(capsys):
    _CAPTURE["capsys"] = capsys
    yield
    _CAPTURE.pop("capsys", None)


# ------------------------------------------------------------------ instances


@dataclass
class Instance:
    family: str
    graph: Graph
    ranking: Ranking
    chordal: bool


def instances() -> list[Instance]:
    rng = np.random.default_rng(20240611)
    out: list[Instance] = []

    def add(family: str, g: Graph, chordal: bool = False) -> None:
        g, _ = restrict_to_core(g)
        i = len(out)
        rank = Ranking.identity(g.n) if i % 2 == 0 else Ranking.random(g.n, int(rng.integers(2**31)))
        out.append(Instance(family, g, rank, chordal))

    for _ in range(45):
        n = int(rng.integers(5, 61))
        add("er", gen_er(n, min(1.0, rng.uniform(1.0, 3.0) * math.log(n) / n), int(rng.integers(2**31))))
    for _ in range(40):
        add("grid", gen_grid(int(rng.integers(2, 9)), float(rng.choice([0, 0.1, 0.2, 0.3])),
                             int(rng.integers(2**31))))
    for _ in range(40):
        add("tree", gen_tree(int(rng.integers(2, 201)), int(rng.integers(2**31))), chordal=True)
    for _ in range(40):
        add("dgrid", gen_weighted_directed_grid(int(rng.integers(2, 21)), int(rng.integers(2**31))))
    for i in range(40):
        n = int(rng.integers(5, 51))
        if i % 2:
            g = gen_ktree(n, int(rng.integers(1, 5)), int(rng.integers(2**31)))
        else:
            g = gen_interval(n, float(rng.uniform(0.05, 0.3)), int(rng.integers(2**31)))
        add("chordal", g, chordal=True)
    return out


# ------------------------------------------------------------------ campaign


@dataclass
class Campaign:
    """Everything criteria 1-4 and 8 need, gathered in one pass."""

    count: int = 0
    elapsed: float = 0.0
    mismatches: list[str] = field(default_factory=list)
    bundles: list[tuple[Graph, object, np.ndarray]] = field(default_factory=list)
    budget_violations: dict[str, list[str]] = field(default_factory=dict)
    preceq_failures: list[str] = field(default_factory=list)
    radius_runs: list[tuple[Graph, Ranking, list[int], int]] = field(default_factory=list)

    def budget(self, kind: str, ok: bool, where: str) -> None:
        self.budget_violations.setdefault(kind, [])
        if not ok:
            self.budget_violations[kind].append(where)


class SelectRecorder:
    """Wraps min-ecc-select to check its per-call sweep bound ``1 + 2 |L'|``."""

    def __init__(self) -> None:
        self.calls: list[tuple[int, int, bool]] = []
        self._orig = solvers_mod.select

    def __enter__(self) -> SelectRecorder:
        def wrapped(graph, ranking, state, f, counter):
            s0, l0 = counter.sweeps, len(state.L)
            sel = self._orig(graph, ranking, state, f, counter)
            self.calls.append((counter.sweeps - s0, len(state.L) - l0, sel.row is not None))
            return sel

        solvers_mod.select = wrapped
        return self

    def __exit__(self, *exc) -> None:
        solvers_mod.select = self._orig

    def violations(self) -> int:
        return sum(1 for sweeps, dl, found in self.calls if sweeps > int(found) + 2 * dl)

    def amortized_ok(self) -> bool:
        k = sum(found for _, _, found in self.calls)
        return sum(s for s, _, _ in self.calls) <= k + 2 * sum(dl for _, dl, _ in self.calls)


_CAMPAIGN: Campaign | None = None


def campaign() -> Campaign:
    global _CAMPAIGN
    if _CAMPAIGN is not None:
        return _CAMPAIGN
    camp = Campaign()
    t0 = time.perf_counter()
    with SelectRecorder() as rec:
        for idx, inst in enumerate(instances()):
            g, rank = inst.graph, inst.ranking
            where = f"#{idx} {inst.family} n={g.n}"
            dm = apsp(g)
            ecc, rad_true, diam_true = dm.ecc, dm.radius, dm.diameter
            camp.count += 1

            def expect(name: str, got, want) -> None:
                if not np.array_equal(np.asarray(got), np.asarray(want)):
                    camp.mismatches.append(f"{where} {name}: got {got}, expected {want}")

            r = radius(g, rank)
            expect("radius", r.value, rad_true)
            expect("center ecc", ecc[r.center], rad_true)
            camp.bundles.append((g, r.bundle, ecc))
            camp.budget("radius <= 2|L|+1", r.report.sweeps <= 2 * len(r.L) + 1, where)
            camp.radius_runs.append((g, rank, list(r.K), r.value))

            for variant in VARIANTS:
                d = diameter(g, rank, variant)
                expect(f"diameter[{variant}]", d.value, diam_true)
                expect(f"diametral[{variant}]", ecc[d.diametral], diam_true)
                camp.bundles.append((g, d.bundle, ecc))
            for alpha in ALPHAS:
                d = diameter_doubling(g, rank, alpha)
                expect(f"doubling[{alpha}]", d.value, diam_true)
                camp.bundles.append((g, d.bundle, ecc))

            a = all_eccentricities(g, rank)
            expect("all-ecc", a.ecc, ecc)
            camp.bundles.append((g, a.bundle, ecc))
            try:
                maximals = preceq_maximals(g, dm)
            except PartialOrderError as exc:
                camp.preceq_failures.append(f"{where}: {exc}")
                maximals = None
            if maximals is not None:
                U = {x for x, _ in a.U}
                camp.budget("all-ecc <= |U^|+2|L|", a.report.sweeps <= len(maximals) + 2 * len(a.L),
                            f"{where} sweeps={a.report.sweeps} |U^|={len(maximals)} |L|={len(a.L)}")
                if U != maximals:
                    camp.preceq_failures.append(
                        f"{where}: |U|={len(U)} |U^|={len(maximals)} extra={sorted(U - maximals)}")

            if inst.chordal:
                cd = chordal_diameter(g, rank)
                expect("chordal_diameter", cd.value, diam_true)
                camp.bundles.append((g, cd.bundle, ecc))
                ca = chordal_all_ecc(g, rank)
                expect("chordal_all_ecc", ca.ecc, ecc)
                camp.bundles.append((g, ca.bundle, ecc))
        camp.elapsed = time.perf_counter() - t0
        camp.budget("min-ecc-select per call <= 1+2|L'|", rec.violations() == 0,
                    f"{rec.violations()} of {len(rec.calls)} calls")
        camp.budget("min-ecc-select amortized <= k+2|L'|", rec.amortized_ok(), "sequence total")
    _CAMPAIGN = camp
    return camp


# ------------------------------------------------------------------ criteria


def test_c01_oracle_equivalence():
    camp = campaign()
    ok = camp.count >= 200 and not camp.mismatches and camp.elapsed < 120
    report(1, ok, f"{camp.count} instances, {len(camp.mismatches)} mismatches, {camp.elapsed:.1f}s "
                  f"(limit 120s)" + (f"; first: {camp.mismatches[0]}" if camp.mismatches else ""))
    assert ok


def _mutations(camp: Campaign, size: int, seed: int):
    """Yield ``(graph, mutated bundle, description)`` for a random sample of bundles."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(camp.bundles))
    made = 0
    for i in order:
        if made >= size:
            return
        g, b, ecc = camp.bundles[int(i)]
        dist = apsp(g).dist
        m = type(b)(**{**b.__dict__, "L": list(b.L), "U": list(b.U)})
        if made % 2 == 0:
            if b.kind == "radius":
                m.value = b.value + 1
                m.U = [(b.U[0][0], b.value + 1)]
            elif b.kind == "diameter":
                m.value = b.value + 1
            else:
                v = int(rng.integers(g.n))
                m.value = list(b.value)
                m.value[v] += 1
            yield g, m, f"{b.kind} value+1"
            made += 1
            continue
        removal = _breaking_removal(b, dist, ecc)
        if removal is None:
            continue
        side, j = removal
        if side == "L":
            m.L = [x for k, x in enumerate(b.L) if k != j]
        else:
            m.U = [x for k, x in enumerate(b.U) if k != j]
        yield g, m, f"{b.kind} drop {side}[{j}]"
        made += 1


def _breaking_removal(b, dist: np.ndarray, ecc: np.ndarray):
    """A certificate position whose removal leaves some node uncovered (by the oracle)."""
    if b.kind == "radius":
        for j in range(len(b.L)):
            rest = [x for k, x in enumerate(b.L) if k != j]
            best = dist[:, rest].max(axis=1) if rest else np.zeros(len(ecc), dtype=np.int64)
            if np.any(best < b.value):
                return "L", j
        return None
    if b.kind == "diameter":
        for j in range(len(b.U)):
            rest = [x for k, (x, _) in enumerate(b.U) if k != j]
            if not rest or np.any((dist[:, rest] + ecc[rest]).min(axis=1) > b.value):
                return "U", j
        return None
    for j in range(len(b.L)):
        rest = [x for k, x in enumerate(b.L) if k != j]
        if not rest or np.any(dist[:, rest].max(axis=1) < ecc):
            return "L", j
    for j in range(len(b.U)):
        rest = [x for k, (x, _) in enumerate(b.U) if k != j]
        if not rest or np.any((dist[:, rest] + ecc[rest]).min(axis=1) > ecc):
            return "U", j
    return None


def test_c02_certificate_soundness():
    camp = campaign()
    rejected_genuine = [i for i, (g, b, _) in enumerate(camp.bundles) if not verify_bundle(g, b)]
    muts = list(_mutations(camp, 100, seed=7))
    missed = [desc for g, m, desc in muts if verify_bundle(g, m)]
    ok = not rejected_genuine and len(muts) == 100 and not missed
    report(2, ok, f"{len(camp.bundles)} bundles, {len(rejected_genuine)} wrongly rejected; "
                  f"{len(muts) - len(missed)}/{len(muts)} mutations rejected")
    assert ok


def test_c03_query_budgets():
    camp = campaign()
    bad = {k: v for k, v in camp.budget_violations.items() if v}
    parts = [f"{k}: {len(v)} violations" for k, v in camp.budget_violations.items()]
    detail = "; ".join(parts)
    if bad:
        first = next(iter(bad.values()))[0]
        fams = sorted({w.split()[1] for v in bad.values() for w in v if w.startswith("#")})
        detail += f"; violating families {fams}; first: {first}"
    report(3, not bad, detail)
    assert not bad


def test_c04_preceq_optimality():
    camp = campaign()
    fails = camp.preceq_failures
    fams = sorted({w.split()[1] for w in fails})
    report(4, not fails, f"{camp.count - len(fails)}/{camp.count} instances with U == U^"
                         + (f"; failing families {fams}; first: {fails[0]}" if fails else ""))
    assert not fails


_BOWTIE: dict = {}
_BIG: dict = {}


def bowtie_runs() -> dict:
    if _BOWTIE:
        return _BOWTIE
    for p, q in BOWTIE_PQ:
        g = gen_bowtie(p, q)
        r = radius(g)
        c = diameter(g, variant="center_init_delegate")
        b = diameter(g, variant="basic")
        _BOWTIE[(p, q)] = (g, r, c, b)
    return _BOWTIE


def test_c05_bowtie_family():
    runs = bowtie_runs()
    problems = []
    for (p, q), (g, r, c, b) in runs.items():
        if (c.value, r.value) != (4 * q - 2, 2 * q + 1):
            problems.append(f"BT({p},{q}) values {c.value}/{r.value}")
        if r.report.sweeps > 30 or c.report.sweeps > 30:
            problems.append(f"BT({p},{q}) sweeps radius={r.report.sweeps} diameter={c.report.sweeps}")
    for q in (6, 10, 20):
        if not runs[(20, q)][3].report.sweeps > runs[(2, q)][3].report.sweeps:
            problems.append(f"basic sweeps do not grow with p at q={q}")
    t0 = time.perf_counter()
    big = gen_bowtie(500, 500)
    t_gen = time.perf_counter() - t0
    t0 = time.perf_counter()
    rb = radius(big)
    t_rad = time.perf_counter() - t0
    t0 = time.perf_counter()
    db = diameter(big, variant="center_init_delegate")
    t_diam = time.perf_counter() - t0
    if big.n != 505002 or bowtie_size(500, 500) != 505002:
        problems.append(f"BT(500,500) has {big.n} nodes")
    if (db.value, rb.value) != (1998, 1001) or t_rad >= 60 or t_diam >= 60:
        problems.append(f"BT(500,500) diam={db.value} rad={rb.value} t={t_rad:.1f}s/{t_diam:.1f}s")
    _BIG["run"] = (big, rb)
    basic = ", ".join(f"{runs[(p, 6)][3].report.sweeps}" for p in (2, 5, 20))
    report(5, not problems,
           f"max sweeps radius={max(v[1].report.sweeps for v in runs.values())} "
           f"center-init={max(v[2].report.sweeps for v in runs.values())}; basic at q=6, p=2/5/20: {basic}; "
           f"BT500 n={big.n} gen {t_gen:.1f}s radius {t_rad:.1f}s diameter {t_diam:.1f}s"
           + (f"; {problems}" if problems else ""))
    assert not problems


def test_c06_table_rows():
    bt = profile(gen_bowtie(500, 500), name="bowtie500")
    grid = profile(gen_grid(101, 0.1, seed=0), name="grid101-10")
    ratio = float(grid.ratio)
    ok = bt.R <= 10 and bt.D <= 6 and grid.D <= 3 and abs(ratio - 2) <= 0.05
    report(6, ok, f"bowtie500 R={bt.R} D={bt.D} (limits 10, 6); grid101-10 n={grid.n} D={grid.D} "
                  f"ratio={ratio:.3f} (limits D<=3, 2+-0.05)")
    assert ok


def test_c07_trees():
    rng = np.random.default_rng(99)
    problems = []
    for i in range(100):
        g = gen_tree(int(rng.integers(2, 201)), int(rng.integers(2**31)))
        rank = Ranking.identity(g.n) if i % 2 == 0 else Ranking.random(g.n, i)
        dm = apsp(g)
        r = radius(g, rank)
        a = r.report.trace[0].antipode
        if a is None or dm.ecc[a] != dm.diameter:
            problems.append(f"tree {i}: first antipode {a} has ecc {dm.ecc[a] if a is not None else None}")
        if len(r.L) > 2 or r.value != dm.radius:
            problems.append(f"tree {i}: |L|={len(r.L)} radius={r.value}")
    report(7, not problems, f"100 trees, {len(problems)} problems" + (f"; first: {problems[0]}" if problems else ""))
    assert not problems


def test_c08_antipode_closure():
    runs = list(campaign().radius_runs)
    runs += [(g, Ranking.identity(g.n), list(r.K), r.value) for g, r, _, _ in bowtie_runs().values()]
    big = _BIG.get("run")
    if big is not None:
        runs.append((big[0], Ranking.identity(big[0].n), list(big[1].K), big[1].value))
    fails = [i for i, (g, rank, K, r) in enumerate(runs) if not antipode_closure_check(g, K, r, rank)]
    report(8, not fails, f"{len(runs)} radius runs, {len(fails)} closure failures")
    assert not fails


def test_c09_chordal_certificates():
    rng = np.random.default_rng(5)
    fails, pair_cases = [], 0
    for i in range(100):
        n = int(rng.integers(5, 61))
        if i % 2:
            g = gen_ktree(n, int(rng.integers(1, 5)), int(rng.integers(2**31)))
        else:
            g, _ = restrict_to_core(gen_interval(n, float(rng.uniform(0.05, 0.3)), int(rng.integers(2**31))))
        rep = chordal_certificate_checks(g)
        pair_cases += rep.pair_checked
        if not rep.ok:
            fails.append(f"graph {i}: {rep}")
    report(9, not fails, f"100 chordal graphs, {pair_cases} with diam >= 2rad-1, {len(fails)} failures")
    assert not fails


def test_c10_approximation():
    eps = Fraction(1, 4)
    violations, runs = [], 0
    for k in range(9, 16):
        g = gen_grid(k)
        dm = apsp(g)
        for rank in (Ranking.identity(g.n), Ranking.random(g.n, k)):
            runs += 1
            ra = radius_approx(g, rank, eps=0.25, budget=16)
            da = diameter_approx(g, rank, eps=0.25, budget=16)
            if dm.ecc[ra.node] != ra.ecc or dm.ecc[da.node] != da.ecc:
                violations.append(f"k={k}: reported eccentricity is wrong")
            if ra.ecc > (1 + eps) * dm.radius:
                violations.append(f"k={k} radius: {ra.ecc} > 1.25 * {dm.radius}")
            if da.ecc * (1 + eps) < dm.diameter:
                violations.append(f"k={k} diameter: {da.ecc} < {dm.diameter} / 1.25")
    report(10, not violations, f"{runs} grid runs (9x9 to 15x15), {len(violations)} violations"
                               + (f"; first: {violations[0]}" if violations else ""))
    assert not violations


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_c"):
            try:
                fn()
            except AssertionError:
                pass
