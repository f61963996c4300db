"""Recognize when scheduling decomposes into independent per-cluster runs.

A schedule never needs groups that mix clusters when intra-cluster
groups drain traffic at least as fast as any mixed group.  Two
sufficient conditions over profile sum-rates are checked:

* *intra dominance* -- each cluster owns some intra-cluster group whose
  sum-rate matches or beats every inter-cluster group's; sufficient
  when demands are uniform within each cluster.
* *singleton dominance* -- already the lone-link group of every cluster
  matches or beats every inter-cluster group's sum-rate; sufficient for
  arbitrary demands.

Because groups sharing a profile share their sum-rate, the scan touches
at most prod(n_j + 1) - 1 profiles rather than 2^N - 1 groups.  When a
condition holds, :func:`decomposed_solve` runs one single-cluster solve
per cluster and concatenates the schedules.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import Clustering
from .colgen import colgen_solve
from .netmodel import Instance, RateTable
from .oracle import Schedule, ScheduleEntry

_UNIFORM_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class DecompositionReport:
    """Outcome of the sum-rate scan over all profiles."""

    intra_dominance: bool
    singleton_dominance: bool
    witness_profiles: tuple[tuple[int, ...], ...]
    best_intra_sum_rates: tuple[float, ...]
    max_inter_sum_rate: float
    profiles_checked: int


def sum_rate(profile, table: RateTable) -> float:
    """Total bits per unit time drained by any group with this profile."""
    profile = table.validate_profile(profile)
    flat = table.flat_index(profile)
    return float(
        sum(g * table.rates[j, flat] for j, g in enumerate(profile) if g >= 1)
    )


def analyze_decomposition(table: RateTable) -> DecompositionReport:
    """Scan every profile once and evaluate both dominance conditions."""
    profiles = table.profiles
    sums = np.zeros(profiles.shape[0])
    for j in range(table.k):
        sums += profiles[:, j] * table.rates[j, :]
    active_clusters = (profiles > 0).sum(axis=1)

    inter = active_clusters >= 2
    max_inter = float(sums[inter].max()) if inter.any() else 0.0

    witnesses = []
    best_intra = []
    for j in range(table.k):
        intra_j = (active_clusters == 1) & (profiles[:, j] > 0)
        idx = np.flatnonzero(intra_j)
        best = idx[np.argmax(sums[idx])]
        witnesses.append(tuple(int(g) for g in profiles[best]))
        best_intra.append(float(sums[best]))

    solo = [table.rate(j, tuple(int(m == j) for m in range(table.k)))
            for j in range(table.k)]
    return DecompositionReport(
        intra_dominance=all(r >= max_inter for r in best_intra),
        singleton_dominance=min(solo) >= max_inter,
        witness_profiles=tuple(witnesses),
        best_intra_sum_rates=tuple(best_intra),
        max_inter_sum_rate=max_inter,
        profiles_checked=int(profiles.shape[0] - 1),
    )


def check_intra_dominance(table: RateTable) -> bool:
    """True when each cluster has an intra-cluster group whose sum-rate
    matches or beats every inter-cluster group (vacuous for K=1)."""
    return analyze_decomposition(table).intra_dominance


def check_singleton_dominance(table: RateTable) -> bool:
    """True when every cluster's single-link rate matches or beats every
    inter-cluster group's sum-rate (vacuous for K=1)."""
    return analyze_decomposition(table).singleton_dominance


def demands_uniform_within_clusters(instance: Instance,
                                    clustering: Clustering,
                                    rtol: float = _UNIFORM_RTOL) -> bool:
    """Do all scheduled links of each cluster carry the same demand?"""
    for j in range(clustering.k):
        ds = [instance.demands[i] for i in clustering.members(j)
              if instance.demands[i] > 0]
        if ds and (max(ds) - min(ds)) > rtol * max(ds):
            return False
    return True


def decomposed_solve(instance: Instance, table: RateTable,
                     clustering: Clustering) -> Schedule:
    """Solve each cluster independently and concatenate the schedules.

    Only valid when a dominance condition matching the demand pattern
    holds: singleton dominance for arbitrary demands, or intra
    dominance when demands are uniform within every cluster.  Raises
    ValueError otherwise.
    """
    if tuple(clustering.sizes) != tuple(table.cluster_sizes):
        raise ValueError("table cluster sizes do not match the clustering")
    report = analyze_decomposition(table)
    if not report.singleton_dominance:
        if not (report.intra_dominance
                and demands_uniform_within_clusters(instance, clustering)):
            raise ValueError(
                "no decomposition condition holds for this instance: "
                f"singleton_dominance={report.singleton_dominance}, "
                f"intra_dominance={report.intra_dominance}, "
                "uniform demands required for the latter"
            )

    entries: list[ScheduleEntry] = []
    for j in range(clustering.k):
        members = [i for i in clustering.members(j) if instance.demands[i] > 0]
        if not members:
            continue
        sub_instance = Instance(
            demands=tuple(instance.demands[i] for i in members),
            lengths=tuple(instance.lengths[i] for i in members),
            power_w=instance.power_w,
            noise_w=instance.noise_w,
            alpha=instance.alpha,
        )
        n_sub = len(members)
        lens = sub_instance.lengths
        sub_clustering = Clustering(
            k=1,
            assignment=(0,) * n_sub,
            sizes=(n_sub,),
            mu=(float(np.mean(lens)),),
            len_min=(min(lens),),
            len_max=(max(lens),),
            wcss=float(np.sum((np.array(lens) - np.mean(lens)) ** 2)),
        )
        sub_table = RateTable.from_function(
            (n_sub,),
            lambda _c, g, j=j: table.rate(
                j, tuple(g[0] if m == j else 0 for m in range(table.k))
            ),
        )
        sub_schedule = colgen_solve(sub_instance, sub_table, sub_clustering)
        for entry in sub_schedule.entries:
            entries.append(
                ScheduleEntry(
                    group=frozenset(members[i] for i in entry.group),
                    duration=entry.duration,
                    rates={members[i]: r for i, r in entry.rates.items()},
                )
            )
    schedule = Schedule.from_entries(entries)
    schedule.check_drains(instance.demands)
    return schedule
