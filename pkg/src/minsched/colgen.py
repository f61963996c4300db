"""Column generation for minimum-length scheduling under a rate table.

The restricted master is the scheduling LP over a growing subset of
groups, seeded with the single-link (TDMA) columns.  Pricing exploits
the cardinality structure: for a fixed profile the best group takes the
largest-dual links of each cluster, so the subproblem only has to scan
the prod(n_j + 1) - 1 profiles instead of all 2^N - 1 groups.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp_core
from .clustering import Clustering
from .netmodel import Instance, RateTable, TableRates
from .oracle import Schedule, ScheduleEntry

DEFAULT_EPS = 1e-9


@dataclass(frozen=True, eq=False)
class PricingResult:
    """Most negative reduced-cost group for a dual vector, with the
    profile that realizes it."""

    group: frozenset
    profile: tuple[int, ...]
    reduced_cost: float


def price(duals, table: RateTable, clustering: Clustering, *,
          max_counts=None) -> PricingResult:
    """Minimize 1 - sum_i r_i(group) * duals_i over all groups.

    Within each cluster the duals are sorted descending (ties toward
    the smallest link index) and prefix-summed; every profile's reduced
    cost is then one dot product.  Ties across profiles resolve to the
    lexicographically smallest profile.  ``max_counts`` optionally caps
    the per-cluster member count (used to keep drained links out of
    priced groups).
    """
    duals = np.asarray(duals, dtype=float)
    if duals.shape != (clustering.n_points,):
        raise ValueError("need one dual value per link")
    caps = tuple(clustering.sizes) if max_counts is None else tuple(max_counts)

    orders = []
    prefixes = []
    for j in range(clustering.k):
        members = np.array(clustering.members(j))
        order = members[np.argsort(-duals[members], kind="stable")]
        orders.append(order)
        prefixes.append(np.concatenate(([0.0], np.cumsum(duals[order]))))

    profiles = table.profiles
    gain = np.zeros(profiles.shape[0])
    for j in range(clustering.k):
        gain += table.rates[j, :] * prefixes[j][profiles[:, j]]
    rc = 1.0 - gain
    rc[0] = np.inf
    for j in range(clustering.k):
        rc[profiles[:, j] > caps[j]] = np.inf

    best = int(np.argmin(rc))  # first minimum = lexicographically smallest
    profile = tuple(int(g) for g in profiles[best])
    group = frozenset(
        int(i) for j in range(clustering.k) for i in orders[j][: profile[j]]
    )
    return PricingResult(group=group, profile=profile,
                         reduced_cost=float(rc[best]))


class RestrictedMaster:
    """Scheduling LP over an explicit set of groups, solved with warm
    starts as columns are appended.  Always contains the TDMA columns.
    """

    def __init__(self, instance: Instance, table: RateTable,
                 clustering: Clustering):
        if tuple(clustering.sizes) != tuple(table.cluster_sizes):
            raise ValueError("table cluster sizes do not match the clustering")
        if clustering.n_points != instance.n_links:
            raise ValueError("clustering does not cover the instance's links")
        self.instance = instance
        self.table = table
        self.clustering = clustering
        self.rate_source = TableRates(table, clustering)

        self.links = instance.positive_links
        self._row_of = {i: r for r, i in enumerate(self.links)}
        self.columns: list[tuple[frozenset, dict]] = []
        self._group_index: dict[frozenset, int] = {}
        self._a = np.zeros((len(self.links), 0))
        self._b = np.array([instance.demands[i] for i in self.links])
        self.solution: lp_core.LpSolution | None = None
        self.objective_history: list[float] = []
        self.added_reduced_costs: list[float] = []

        for i in self.links:
            self.add_group(frozenset((i,)))

    def __contains__(self, group: frozenset) -> bool:
        return frozenset(group) in self._group_index

    @property
    def n_columns(self) -> int:
        return len(self.columns)

    def add_group(self, group: frozenset) -> int:
        group = frozenset(group)
        if group in self._group_index:
            raise ValueError(f"group {sorted(group)} already in the master")
        if not group <= set(self.links):
            raise ValueError("group contains links with no demand to schedule")
        rates = self.rate_source.link_rates(group)
        col = np.zeros((len(self.links), 1))
        for i in group:
            col[self._row_of[i], 0] = rates[i]
        self._a = np.concatenate([self._a, col], axis=1)
        self.columns.append((group, rates))
        self._group_index[group] = len(self.columns) - 1
        return len(self.columns) - 1

    def solve(self, *, force_bland: bool = False, cold: bool = False) -> lp_core.LpSolution:
        problem = lp_core.LpProblem(a=self._a, b=self._b,
                                    c=np.ones(self.n_columns))
        if cold or self.solution is None:
            hint = range(len(self.links))  # TDMA columns are a feasible basis
        else:
            hint = self.solution.basis
        self.solution = lp_core.warm_solve(problem, hint, force_bland=force_bland)
        if self.solution.status is not lp_core.LpStatus.OPTIMAL:
            raise RuntimeError(
                f"restricted master unexpectedly {self.solution.status.value}"
            )
        self.objective_history.append(float(self.solution.objective))
        return self.solution

    def duals_full(self) -> np.ndarray:
        """Master dual prices mapped onto all N links (0 where unscheduled)."""
        out = np.zeros(self.instance.n_links)
        out[list(self.links)] = self.solution.duals
        return out

    def schedule(self) -> Schedule:
        x = self.solution.x
        floor = 1e-12 * max(1.0, float(self.solution.objective))
        entries = [
            ScheduleEntry(group=self.columns[c][0], duration=float(x[c]),
                          rates=self.columns[c][1])
            for c in np.flatnonzero(x > floor)
        ]
        return Schedule.from_entries(entries)


def run_colgen(instance: Instance, table: RateTable, clustering: Clustering,
               eps: float = DEFAULT_EPS,
               max_rounds: int | None = None) -> RestrictedMaster | None:
    """Full column-generation loop; returns the solved master, or None
    when the instance has nothing to schedule.  ``max_rounds`` defaults
    to 10x the number of profiles."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not instance.positive_links:
        return None

    master = RestrictedMaster(instance, table, clustering)
    counts = np.zeros(clustering.k, dtype=int)
    for i in master.links:
        counts[clustering.assignment[i]] += 1

    cap = max_rounds if max_rounds is not None else 10 * (table.profile_count + 1)
    bland = False
    for _ in range(cap):
        master.solve(force_bland=bland, cold=bland)
        result = price(master.duals_full(), table, clustering,
                       max_counts=tuple(counts))
        if result.reduced_cost >= -eps:
            return master
        if result.group in master:
            # numerically at the optimality edge; one cold re-solve under
            # Bland's rule, then accept the incumbent
            if bland:
                return master
            bland = True
            continue
        master.added_reduced_costs.append(result.reduced_cost)
        master.add_group(result.group)
    raise lp_core.SolverStallError(
        f"column generation exceeded {cap} pricing rounds"
    )


def colgen_solve(instance: Instance, table: RateTable, clustering: Clustering,
                 eps: float = DEFAULT_EPS) -> Schedule:
    """Optimal schedule for the table-rate LP, certified by a final
    pricing round with no improving group."""
    master = run_colgen(instance, table, clustering, eps)
    if master is None:
        return Schedule.from_entries([])
    schedule = master.schedule()
    schedule.check_drains(instance.demands)
    return schedule
