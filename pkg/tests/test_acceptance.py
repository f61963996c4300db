"""Acceptance suite: one test per exit criterion, one printed verdict each.

Run with ``pytest -s tests/test_acceptance.py`` to see the verdict lines.
"""

import itertools

import numpy as np
import pytest

from minsched import (Instance, RateTable, TableRates, TrueRates,
                      brute_force_solve, build_full_lp, build_rate_table,
                      colgen_solve, decomposed_solve, generate_instance,
                      improve_upper, kmeans, lp_core, price, profile_of,
                      reduced_dual_solve, run_colgen, true_link_rate,
                      RateVariant, bound_pair, approximate_solve,
                      check_intra_dominance, check_singleton_dominance)
from helpers import (block_clustering, make_clustering, random_gain_table,
                     random_instance_for, random_monotone_table)
from test_clustering import exhaustive_best_wcss
from test_lp_core import random_feasible_problem, vertex_minimum


def _report(criterion: str, ok: bool, detail: str) -> None:
    print(f"\n[acceptance] criterion {criterion}: "
          f"{'PASS' if ok else 'FAIL'} -- {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def random_clustered_setup(rng, max_n=12, max_k=3):
    k = int(rng.integers(1, max_k + 1))
    sizes = rng.integers(1, 5, size=k)
    while sizes.sum() > max_n or sizes.sum() < k:
        sizes = rng.integers(1, 5, size=k)
    assignment = np.repeat(np.arange(k), sizes)
    rng.shuffle(assignment)
    return tuple(int(s) for s in sizes), make_clustering(assignment)


# -- shared experiment fixtures ------------------------------------------------

@pytest.fixture(scope="module")
def sweep15():
    """N=15, demands U[100,1500], K=1..6, 100 seeds, plus the true optimum."""
    rows = {}
    stars = {}
    for seed in range(100):
        inst = generate_instance(seed, 15, 100, 1500)
        stars[seed] = brute_force_solve(inst, TrueRates(inst)).total
        for k in range(1, 7):
            clustering = kmeans(inst.lengths, k, seed=seed)
            t_lower, t_upper, (_, sched_hi) = bound_pair(inst, clustering)
            improved = improve_upper(inst, sched_hi).total
            approx = approximate_solve(inst, clustering).total
            rows[(seed, k)] = (t_lower, t_upper, improved, approx)
    return rows, stars


@pytest.fixture(scope="module")
def study30():
    """N=30, demands U[100,3000], K=6, 100 seeds, no enumerated optimum."""
    rows = []
    for seed in range(100):
        inst = generate_instance(seed, 30, 100, 3000)
        clustering = kmeans(inst.lengths, 6, seed=seed)
        t_lower, t_upper, (_, sched_hi) = bound_pair(inst, clustering)
        improved = improve_upper(inst, sched_hi).total
        rows.append((t_lower, t_upper, improved))
    return rows


# -- criterion 1: oracle equivalence ------------------------------------------

def test_criterion_1_oracle_equivalence():
    rng = np.random.default_rng(101)
    worst = 0.0
    for trial in range(50):
        sizes, clustering = random_clustered_setup(rng)
        if trial % 2:
            table = random_monotone_table(rng, sizes)
        else:
            table = random_gain_table(rng, sizes)
        inst = random_instance_for(rng, clustering)

        t_brute = brute_force_solve(inst, TableRates(table, clustering)).total
        t_colgen = colgen_solve(inst, table, clustering).total
        t_dual, _ = reduced_dual_solve(inst, table, clustering)

        for a, b in itertools.combinations((t_brute, t_colgen, t_dual), 2):
            worst = max(worst, abs(a - b) / max(a, b))
    _report("1 (oracle equivalence)", worst <= 1e-6,
            f"50 instances, worst pairwise relative gap {worst:.2e} (tol 1e-6)")


# -- criterion 2: bound sandwich ------------------------------------------------

def test_criterion_2_bound_sandwich():
    failures = []
    for seed in range(100):
        inst = generate_instance(seed, 12, 100, 1500)
        clustering = kmeans(inst.lengths, 1 + seed % 4, seed=seed)
        t_star = brute_force_solve(inst, TrueRates(inst)).total
        t_lower, t_upper, (_, sched_hi) = bound_pair(inst, clustering)
        t_improved = improve_upper(inst, sched_hi).total
        slack = 1e-6 * t_star
        chain = (t_lower <= t_star + slack
                 and t_star <= t_improved + slack
                 and t_improved <= t_upper + slack)
        if not chain:
            failures.append(seed)
    _report("2 (bound sandwich)", not failures,
            f"100 instances at N=12; chain violations: {failures or 'none'}")


# -- criteria 3 and 4: the N=15 cluster-count study ----------------------------

def test_criterion_3_gap_shrinks_with_k(sweep15):
    rows, stars = sweep15
    mean_gap = {
        k: float(np.mean([
            (rows[(s, k)][1] - rows[(s, k)][0]) / stars[s] for s in range(100)
        ]))
        for k in range(1, 7)
    }
    monotone = all(mean_gap[k + 1] <= mean_gap[k] + 0.01 for k in range(1, 6))
    tail_ok = all(mean_gap[k] <= 0.12 for k in (4, 5, 6))
    detail = ", ".join(f"K={k}: {100 * mean_gap[k]:.1f}%" for k in range(1, 7))
    _report("3 (gap vs K)", monotone and tail_ok,
            detail + " (need non-increasing within 1pp, <=12% for K>=4)")


def test_criterion_4_approximation_quality(sweep15):
    rows, stars = sweep15
    counts = {}
    for k in (3, 4, 5, 6):
        errs = [abs(rows[(s, k)][3] - stars[s]) / stars[s] for s in range(100)]
        counts[k] = int(np.sum(np.asarray(errs) <= 0.03))
    ok = all(c >= 90 for c in counts.values())
    detail = ", ".join(f"K={k}: {c}/100 within 3%" for k, c in counts.items())
    _report("4 (approximation quality)", ok, detail + " (need >=90)")


# -- criterion 5: medium-size study --------------------------------------------

def test_criterion_5_medium_size_study(study30):
    gaps = [(hi - lo) / lo for lo, hi, _ in study30]
    gaps_improved = [(imp - lo) / lo for lo, _, imp in study30]
    never_worse = all(imp <= hi * (1 + 1e-9) for lo, hi, imp in study30)
    mean_gap = float(np.mean(gaps))
    mean_improved = float(np.mean(gaps_improved))
    ok = mean_gap <= 0.11 and mean_improved <= 0.07 and never_worse
    _report("5 (N=30 study)", ok,
            f"mean gap {100 * mean_gap:.1f}% (<=11%), improved "
            f"{100 * mean_improved:.1f}% (<=7%), improved never worse: "
            f"{never_worse}")


# -- criterion 6: pricing optimality --------------------------------------------

def test_criterion_6_pricing_optimality():
    rng = np.random.default_rng(106)
    checked = 0
    mismatches = 0
    for trial in range(10):
        sizes, clustering = random_clustered_setup(rng, max_n=10)
        n = clustering.n_points
        table = (random_monotone_table(rng, sizes) if trial % 2
                 else random_gain_table(rng, sizes))
        inst = random_instance_for(rng, clustering)
        problem, links = build_full_lp(inst, TableRates(table, clustering))
        a = problem.a  # (n, 2^n - 1), columns ordered by group bitmask

        masks = np.arange(1, 2 ** n, dtype=np.int64)
        member = ((masks[:, None] >> np.arange(n)) & 1).astype(np.int64)
        onehot = np.zeros((n, clustering.k), dtype=np.int64)
        for i in range(n):
            onehot[i, clustering.assignment[i]] = 1
        strides = np.cumprod(
            [1] + [s + 1 for s in table.cluster_sizes[::-1]])[:-1][::-1]
        flat_of_mask = (member @ onehot) @ strides  # lexicographic profile ids

        for _ in range(100):
            duals = rng.uniform(0.0, 0.6, size=n)
            rc_all = 1.0 - duals @ a
            best = float(rc_all.min())
            ties = np.flatnonzero(rc_all <= best + 1e-12)
            expected_flat = int(flat_of_mask[ties].min())

            result = price(duals, table, clustering)
            got_flat = table.flat_index(result.profile)
            checked += 1
            if got_flat != expected_flat or abs(result.reduced_cost - best) > 1e-9:
                mismatches += 1
    _report("6 (pricing optimality)", mismatches == 0,
            f"{checked} dual vectors across 10 instances, "
            f"{mismatches} profile mismatches")


# -- criterion 7: decomposition exactness ---------------------------------------

def test_criterion_7_decomposition_exactness():
    rng = np.random.default_rng(107)
    worst = 0.0
    decomposed_runs = 0
    for trial in range(20):
        k = int(rng.integers(2, 4))
        sizes = tuple(int(s) for s in rng.integers(1, 4, size=k))
        clustering = block_clustering(sizes)
        if trial % 3 == 2:
            # intra dominance with uniform in-cluster demands: own-cluster
            # rates stay flat, mixing crushes them
            def fn(j, g, k=k):
                others = sum(g[m] for m in range(k) if m != j)
                return 5.0 if others == 0 else 1.0 / (g[j] + others)
            table = RateTable.from_function(sizes, fn)
            table.validate_monotone(atol=1e-12)
            assert check_intra_dominance(table)
            # one demand value per cluster; order clusters by value so the
            # global demand sort stays aligned with the cluster blocks
            values = sorted((float(rng.integers(2, 9) * 100) for _ in sizes),
                            reverse=True)
            demands = [v for v, nj in zip(values, sizes) for _ in range(nj)]
            inst = Instance(demands=tuple(demands),
                            lengths=tuple(10.0 + i for i in range(sum(sizes))))
        else:
            # strong mutual interference: singleton dominance, any demands
            gains = rng.uniform(1e-7, 1e-6, size=k)
            table = RateTable.from_gains(sizes, gains, gains, 1e-13)
            assert check_singleton_dominance(table)
            inst = random_instance_for(rng, clustering)
        sched = decomposed_solve(inst, table, clustering)
        oracle = brute_force_solve(inst, TableRates(table, clustering)).total
        worst = max(worst, abs(sched.total - oracle) / oracle)
        decomposed_runs += 1

    false_positives = 0
    for trial in range(20):
        k = int(rng.integers(2, 4))
        sizes = tuple(int(s) for s in rng.integers(1, 4, size=k))
        gains = rng.uniform(1e-7, 1e-6, size=k)
        table = RateTable.from_gains(sizes, gains,
                                     np.full(k, 1e-19), 1e-13)
        if check_intra_dominance(table) or check_singleton_dominance(table):
            false_positives += 1
    ok = worst <= 1e-6 and false_positives == 0 and decomposed_runs == 20
    _report("7 (decomposition exactness)", ok,
            f"20 decomposable instances, worst gap {worst:.2e}; "
            f"{false_positives} false positives on 20 counterexamples")


# -- criterion 8: always-on property suites -------------------------------------

def test_criterion_8_property_suites():
    rng = np.random.default_rng(108)
    notes = []

    # rate monotonicity under group growth
    inst = generate_instance(207, 10, 100, 1500)
    ok_mono = True
    for _ in range(100):
        size = int(rng.integers(2, 11))
        big = frozenset(rng.choice(10, size=size, replace=False).tolist())
        small = big - {int(rng.choice(sorted(big)))}
        ok_mono &= all(
            true_link_rate(inst, small, i) >= true_link_rate(inst, big, i) - 1e-12
            for i in small
        )
    notes.append(f"rate monotonicity: {ok_mono}")

    # k-means: WCSS descent within a restart, global optimum at k=2
    ok_kmeans = True
    for trial in range(10):
        lengths = rng.uniform(3, 250, size=int(rng.integers(4, 13)))
        clustering = kmeans(lengths, 2, seed=trial, restarts=150)
        hist = clustering.wcss_history
        ok_kmeans &= all(hist[i + 1] <= hist[i] + 1e-9 * max(1, hist[i])
                         for i in range(len(hist) - 1))
        target = exhaustive_best_wcss(lengths, 2)
        ok_kmeans &= abs(clustering.wcss - target) <= 1e-9 * max(1.0, target)
    notes.append(f"k-means descent+optimum: {ok_kmeans}")

    # simplex: vertex-enumeration equivalence and the degenerate classic
    ok_lp = True
    for _ in range(20):
        problem = random_feasible_problem(rng)
        sol = lp_core.solve(problem)
        ok_lp &= sol.status is lp_core.LpStatus.OPTIMAL
        ok_lp &= abs(sol.objective - vertex_minimum(problem)) <= 1e-8
    beale = lp_core.LpProblem(
        a=[[0.25, -60.0, -0.04, 9.0, 1.0, 0.0, 0.0],
           [0.5, -90.0, -0.02, 3.0, 0.0, 1.0, 0.0],
           [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]],
        b=[0.0, 0.0, 1.0],
        c=[-0.75, 150.0, -0.02, 6.0, 0.0, 0.0, 0.0],
    )
    beale_sol = lp_core.solve(beale)
    ok_lp &= (beale_sol.status is lp_core.LpStatus.OPTIMAL
              and abs(beale_sol.objective - (-0.05)) <= 1e-9)
    notes.append(f"simplex equivalence+Beale: {ok_lp}")

    # column generation: master objective descends
    clustering = block_clustering((4, 4, 3))
    table = random_monotone_table(rng, (4, 4, 3))
    master = run_colgen(random_instance_for(rng, clustering), table, clustering)
    hist = master.objective_history
    ok_cg = (len(hist) > 2
             and all(hist[i + 1] <= hist[i] + 1e-9 * hist[i]
                     for i in range(len(hist) - 1)))
    notes.append(f"colgen descent: {ok_cg}")

    ok = ok_mono and ok_kmeans and ok_lp and ok_cg
    _report("8 (property suites)", ok, "; ".join(notes))
