"""Ground-truth solver: enumerate every group, solve one LP.

For N schedulable links there are 2^N - 1 candidate groups; the
brute-force solver prices them all into a single LP and is therefore
the reference every faster method is validated against.  Capped at
N = 20 (about one million columns).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp_core
from .netmodel import Instance, TableRates, TrueRates, validate_group

BRUTE_FORCE_CAP = 20

#: entries shorter than this fraction of the total are dropped as noise
_DURATION_FLOOR = 1e-12
_DRAIN_RTOL = 1e-6


@dataclass(frozen=True, eq=False)
class ScheduleEntry:
    """One activation: a group, how long it runs, and the per-link rates
    in effect while it does."""

    group: frozenset
    duration: float
    rates: dict

    def served(self, link: int) -> float:
        return self.rates[link] * self.duration


@dataclass(frozen=True, eq=False)
class Schedule:
    """An ordered list of activations; ``total`` is the schedule length."""

    entries: tuple[ScheduleEntry, ...]
    total: float

    @classmethod
    def from_entries(cls, entries) -> "Schedule":
        kept = [e for e in entries if e.duration > 0]
        total = float(sum(e.duration for e in kept))
        floor = _DURATION_FLOOR * max(1.0, total)
        kept = [e for e in kept if e.duration > floor]
        return cls(entries=tuple(kept), total=float(sum(e.duration for e in kept)))

    def served(self, n_links: int) -> np.ndarray:
        """Bits delivered per link over the whole schedule."""
        out = np.zeros(n_links)
        for e in self.entries:
            for i in e.group:
                out[i] += e.served(i)
        return out

    def check_drains(self, demands) -> None:
        """Raise unless the schedule meets every demand exactly (1e-6 rel)."""
        demands = np.asarray(demands, dtype=float)
        served = self.served(len(demands))
        err = np.abs(served - demands)
        bad = err > _DRAIN_RTOL * np.maximum(1.0, demands)
        if bad.any():
            i = int(np.argmax(err))
            raise ValueError(
                f"schedule does not drain demand: link {i} served {served[i]:.6g} "
                f"of {demands[i]:.6g} bits"
            )


def _group_rate_matrix(rates, links: tuple[int, ...]) -> np.ndarray:
    """Rates of every non-empty subset of ``links``.

    Returns an array of shape (len(links), 2**len(links) - 1); column
    m - 1 holds the member rates of the subset with bitmask m (zero for
    non-members).  Vectorized for the two built-in rate sources.
    """
    n = len(links)
    masks = np.arange(1, 2 ** n, dtype=np.int64)
    member = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)  # (2^n-1, n)

    if isinstance(rates, TrueRates):
        inst = rates.instance
        gains = inst.gains[list(links)]
        totals = member @ gains
        denom = inst.noise_w + totals[:, None] - gains[None, :]
        sinr = np.where(member, gains[None, :], 0.0) / np.where(member, denom, 1.0)
        r = np.log2(1.0 + sinr)
    elif isinstance(rates, TableRates):
        table, clus = rates.table, rates.clustering
        clusters = np.array([clus.assignment[i] for i in links])
        onehot = np.zeros((n, table.k), dtype=np.int64)
        onehot[np.arange(n), clusters] = 1
        counts = member.astype(np.int64) @ onehot  # (2^n-1, K)
        strides = np.cumprod([1] + [s + 1 for s in table.cluster_sizes[::-1]])[:-1][::-1]
        flat = counts @ strides
        r = table.rates[clusters[None, :], flat[:, None]]
    else:  # generic rate source: per-group queries
        r = np.zeros((len(masks), n))
        for row, mask in enumerate(masks):
            group = frozenset(links[j] for j in range(n) if mask >> j & 1)
            group_rates = rates.link_rates(group)
            for j in range(n):
                if mask >> j & 1:
                    r[row, j] = group_rates[links[j]]
    return np.where(member, r, 0.0).T


def build_full_lp(instance: Instance, rates) -> tuple[lp_core.LpProblem, tuple[int, ...]]:
    """The complete minimum-length LP over all groups of the instance's
    positive-demand links; returns (problem, scheduled link ids).

    Columns are ordered by group bitmask (1 .. 2^n - 1), so column
    m - 1 is the group whose members are the set bits of m.
    """
    links = instance.positive_links
    if len(links) > BRUTE_FORCE_CAP:
        raise ValueError(
            f"{len(links)} schedulable links exceed the brute-force cap of "
            f"{BRUTE_FORCE_CAP} (2^N - 1 columns)"
        )
    if not links:
        raise ValueError("instance has no positive demand to schedule")
    a = _group_rate_matrix(rates, links)
    b = np.array([instance.demands[i] for i in links])
    c = np.ones(a.shape[1])
    return lp_core.LpProblem(a=a, b=b, c=c), links


def brute_force_solve(instance: Instance, rates) -> Schedule:
    """Globally optimal schedule by full group enumeration (N <= 20)."""
    links = instance.positive_links
    if not links:
        return Schedule.from_entries([])
    problem, links = build_full_lp(instance, rates)
    # singleton columns form a feasible starting basis (plain TDMA)
    hint = [(1 << j) - 1 for j in range(len(links))]
    solution = lp_core.warm_solve(problem, hint)
    if solution.status is not lp_core.LpStatus.OPTIMAL:
        raise RuntimeError(f"full LP unexpectedly {solution.status.value}")

    entries = []
    floor = _DURATION_FLOOR * max(1.0, float(solution.objective))
    for col in np.flatnonzero(solution.x > floor):
        mask = int(col) + 1
        group = frozenset(
            links[j] for j in range(len(links)) if mask >> j & 1
        )
        entries.append(
            ScheduleEntry(
                group=group,
                duration=float(solution.x[col]),
                rates=rates.link_rates(group),
            )
        )
    schedule = Schedule.from_entries(entries)
    schedule.check_drains(instance.demands)
    return schedule


def simulate_schedule(instance: Instance, schedule: Schedule, rates) -> np.ndarray:
    """Replay a schedule against the demands under the given rate source.

    Returns per-link residual demand (negative where over-served).  The
    rates are recomputed from the rate source, not read from the
    schedule, so this audits both durations and stored rates.
    """
    residual = np.asarray(instance.demands, dtype=float).copy()
    for entry in schedule.entries:
        validate_group(entry.group, instance.n_links)
        group_rates = rates.link_rates(entry.group)
        for i in entry.group:
            residual[i] -= group_rates[i] * entry.duration
    return residual
