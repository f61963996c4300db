"""Schedule-length bounds and the mean-radius approximation.

Solving the scheduling LP under the optimistic (UPPER) rate table gives
a length that no true schedule can beat; the pessimistic (LOWER) table
gives a length that true rates can always achieve.  The pessimistic
schedule is then replayed under the true rates: whenever a link drains
its share early it is dropped from the running group, the remaining
links speed up (rate monotonicity), and the replayed length is a
tighter upper bound that comes with a concrete feasible schedule.
The MEAN table yields a point approximation that may land on either
side of the true optimum.
"""

from __future__ import annotations

from dataclasses import dataclass

from .clustering import Clustering
from .colgen import colgen_solve
from .netmodel import Instance, RateVariant, TrueRates, build_rate_table
from .oracle import Schedule, ScheduleEntry, brute_force_solve

_CHAIN_SLACK = 1e-9
_STAR_RTOL = 1e-6


@dataclass(frozen=True, eq=False)
class BoundsReport:
    """Bounds for one instance/clustering: t_lower <= (true optimum)
    <= t_upper_improved <= t_upper, with t_approx the mean-radius
    estimate and t_star the enumerated optimum when available."""

    t_lower: float
    t_upper: float
    t_upper_improved: float
    t_approx: float
    t_star: float | None
    lower_schedule: Schedule
    upper_schedule: Schedule
    improved_schedule: Schedule
    approx_schedule: Schedule

    def __post_init__(self):
        slack = _CHAIN_SLACK * max(1.0, self.t_upper)
        if not (self.t_lower <= self.t_upper_improved + slack
                and self.t_upper_improved <= self.t_upper + slack):
            raise ValueError(
                f"bound chain violated: {self.t_lower} <= "
                f"{self.t_upper_improved} <= {self.t_upper} fails"
            )
        if self.t_star is not None:
            slack = _STAR_RTOL * self.t_star
            if not (self.t_lower - slack <= self.t_star
                    <= self.t_upper_improved + slack):
                raise ValueError(
                    f"optimum {self.t_star} escapes "
                    f"[{self.t_lower}, {self.t_upper_improved}]"
                )


def bound_pair(instance: Instance, clustering: Clustering):
    """Lower and upper bounds on the true optimal schedule length.

    Returns (t_lower, t_upper, (lower_schedule, upper_schedule)).  The
    lower-bound schedule assumes optimistic rates and is generally not
    realizable; the upper-bound schedule is realizable because every
    true rate meets or beats its pessimistic table value.
    """
    sched_lo = colgen_solve(
        instance, build_rate_table(instance, clustering, RateVariant.UPPER),
        clustering,
    )
    sched_hi = colgen_solve(
        instance, build_rate_table(instance, clustering, RateVariant.LOWER),
        clustering,
    )
    return sched_lo.total, sched_hi.total, (sched_lo, sched_hi)


def improve_upper(instance: Instance, upper_schedule: Schedule) -> Schedule:
    """Replay a pessimistic schedule under the true rates.

    Each entry is charged exactly the bits it served in the original
    schedule.  Within an entry the earliest queue to empty is found
    analytically, the group shrinks, the survivors' rates are
    recomputed (they can only rise), and the process repeats.  The
    replayed schedule is feasible under true rates and never longer
    than the original.
    """
    upper_schedule.check_drains(instance.demands)
    true_rates = TrueRates(instance)
    entries: list[ScheduleEntry] = []
    for entry in upper_schedule.entries:
        quota = {i: entry.served(i) for i in entry.group}
        active = frozenset(entry.group)
        while active:
            rates = true_rates.link_rates(active)
            drain = {i: quota[i] / rates[i] for i in active}
            tau = min(drain.values())
            entries.append(ScheduleEntry(group=active, duration=tau, rates=rates))
            done = {i for i in active if drain[i] <= tau * (1.0 + 1e-12)}
            for i in active:
                quota[i] -= rates[i] * tau
            active = active - done
    schedule = Schedule.from_entries(entries)
    schedule.check_drains(instance.demands)
    return schedule


def approximate_solve(instance: Instance, clustering: Clustering) -> Schedule:
    """Schedule under mean-radius rates; a point estimate of the true
    optimum, feasible only for the mean-rate system."""
    return colgen_solve(
        instance, build_rate_table(instance, clustering, RateVariant.MEAN),
        clustering,
    )


def compute_bounds(instance: Instance, clustering: Clustering, *,
                   with_oracle: bool = False) -> BoundsReport:
    """All bounds for one instance; optionally also the enumerated true
    optimum (N <= 20 only)."""
    t_lower, t_upper, (sched_lo, sched_hi) = bound_pair(instance, clustering)
    improved = improve_upper(instance, sched_hi)
    approx = approximate_solve(instance, clustering)
    t_star = None
    if with_oracle:
        t_star = brute_force_solve(instance, TrueRates(instance)).total
    return BoundsReport(
        t_lower=t_lower,
        t_upper=t_upper,
        t_upper_improved=improved.total,
        t_approx=approx.total,
        t_star=t_star,
        lower_schedule=sched_lo,
        upper_schedule=sched_hi,
        improved_schedule=improved,
        approx_schedule=approx,
    )
