"""Reduced dual LP: certify the optimal schedule length in polynomial size.

The full dual of the scheduling LP has one constraint per group
(2^N - 1 of them).  Under cardinality-based rates, all groups sharing a
profile carry the same rate coefficients, and once the dual prices
within each cluster are ordered by descending demand, the group made of
each cluster's top-demand links yields the most binding constraint of
its profile class.  Keeping only that representative per profile plus
the per-cluster ordering chains gives an LP with at most
N - 1 + prod(n_j + 1) constraints whose optimum equals the primal
minimum schedule length.  This module certifies the value only; primal
schedules come from column generation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp_core
from .clustering import Clustering
from .netmodel import Instance, RateTable

#: refuse to assemble dense LPs beyond this many matrix entries (~1.6 GB)
MAX_DENSE_ENTRIES = 200_000_000


@dataclass(frozen=True, eq=False)
class ReducedDual:
    """Assembled reduced dual: maximize demand-weighted dual prices
    subject to one constraint per profile plus ordering chains.

    ``links`` are the scheduled (positive-demand) links in global
    demand-descending order; the price variables follow that order.
    ``profile_rows[p]`` holds the rate coefficients of profile
    ``profiles[p]`` applied to the top-demand links of each cluster;
    ``chain_pairs`` lists (higher, lower) variable indices whose prices
    must be non-increasing.
    """

    links: tuple[int, ...]
    profiles: np.ndarray
    profile_rows: np.ndarray
    chain_pairs: tuple[tuple[int, int], ...]
    demands: np.ndarray

    @property
    def n_constraints(self) -> int:
        return self.profile_rows.shape[0] + len(self.chain_pairs)

    def as_problem(self) -> tuple[lp_core.LpProblem, tuple[int, ...]]:
        """Equality-form LP (slack per profile row, surplus per chain row)
        and a warm-start basis of those slack/surplus columns."""
        n_pi = len(self.links)
        n_prof = self.profile_rows.shape[0]
        n_chain = len(self.chain_pairs)
        m = n_prof + n_chain
        n = n_pi + m
        if m * n > MAX_DENSE_ENTRIES:
            raise ValueError(
                f"reduced dual of {m} x {n} is too large for the dense solver"
            )
        a = np.zeros((m, n))
        a[:n_prof, :n_pi] = self.profile_rows
        a[:n_prof, n_pi:n_pi + n_prof] = np.eye(n_prof)
        for r, (hi, lo) in enumerate(self.chain_pairs):
            a[n_prof + r, hi] = 1.0
            a[n_prof + r, lo] = -1.0
            a[n_prof + r, n_pi + n_prof + r] = -1.0
        b = np.concatenate([np.ones(n_prof), np.zeros(n_chain)])
        c = np.concatenate([-self.demands, np.zeros(m)])
        return lp_core.LpProblem(a=a, b=b, c=c), tuple(range(n_pi, n))


def build_reduced_dual(instance: Instance, table: RateTable,
                       clustering: Clustering) -> ReducedDual:
    """Assemble the reduced dual for an instance under a rate table.

    Only positive-demand links get price variables; within each cluster
    they appear in descending demand order (the instance's global order
    restricted to the cluster), which is what makes the single
    representative constraint per profile cover its whole class.
    """
    if tuple(clustering.sizes) != tuple(table.cluster_sizes):
        raise ValueError("table cluster sizes do not match the clustering")
    if clustering.n_points != instance.n_links:
        raise ValueError("clustering does not cover the instance's links")

    links = instance.positive_links
    if not links:
        raise ValueError("instance has no positive demand to schedule")
    var_of = {i: v for v, i in enumerate(links)}

    # cluster members restricted to scheduled links, demand-descending
    cluster_vars: list[list[int]] = []
    for j in range(clustering.k):
        cluster_vars.append(
            [var_of[i] for i in clustering.members(j) if i in var_of]
        )
    caps = np.array([len(v) for v in cluster_vars])

    profiles_all = table.profiles
    realizable = np.flatnonzero(
        (profiles_all <= caps[None, :]).all(axis=1) & (profiles_all.sum(axis=1) > 0)
    )
    profiles = profiles_all[realizable]
    rows = np.zeros((len(realizable), len(links)))
    for r, flat in enumerate(realizable):
        for j in range(clustering.k):
            g_j = int(profiles_all[flat, j])
            if g_j >= 1:
                rate = float(table.rates[j, flat])
                rows[r, cluster_vars[j][:g_j]] = rate

    chains = tuple(
        (members[t], members[t + 1])
        for members in cluster_vars
        for t in range(len(members) - 1)
    )
    demands = np.array([instance.demands[i] for i in links])
    return ReducedDual(links=tuple(links), profiles=profiles,
                       profile_rows=rows, chain_pairs=chains, demands=demands)


def reduced_dual_solve(instance: Instance, table: RateTable,
                       clustering: Clustering) -> tuple[float, np.ndarray]:
    """Optimal schedule length and a full dual price vector.

    The returned value equals the minimum schedule length of the
    table-rate LP (strong duality); prices of unscheduled links are 0.
    No primal schedule is produced.
    """
    reduced = build_reduced_dual(instance, table, clustering)
    problem, hint = reduced.as_problem()
    solution = lp_core.warm_solve(problem, hint)
    if solution.status is not lp_core.LpStatus.OPTIMAL:
        raise RuntimeError(f"reduced dual unexpectedly {solution.status.value}")
    duals = np.zeros(instance.n_links)
    duals[list(reduced.links)] = solution.x[: len(reduced.links)]
    return -float(solution.objective), duals
