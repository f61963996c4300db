"""One-dimensional k-means clustering of link lengths (Lloyd's algorithm).

Links are grouped by their transmitter-receiver distance so that each
cluster can be treated as a ring of near-uniform channel gain.  The
clustering minimizes the within-cluster sum of squares (WCSS) over the
scalar lengths; each cluster exposes its mean, minimum and maximum
length, which downstream rate models turn into nominal / optimistic /
pessimistic channel gains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

MAX_LLOYD_ITERATIONS = 1000


class IterationLimitError(RuntimeError):
    """Lloyd's algorithm failed to stabilize within the iteration cap."""


@dataclass(frozen=True, eq=False)
class Clustering:
    """Partition of N links into k non-empty clusters by link length.

    ``assignment[i]`` is the cluster index of link i.  ``mu``, ``len_min``
    and ``len_max`` are the per-cluster mean / minimum / maximum lengths
    in meters.  ``wcss_history`` records the WCSS after every Lloyd
    iteration of the winning restart, starting with the (repaired)
    random initial assignment.
    """

    k: int
    assignment: tuple[int, ...]
    sizes: tuple[int, ...]
    mu: tuple[float, ...]
    len_min: tuple[float, ...]
    len_max: tuple[float, ...]
    wcss: float
    wcss_history: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"cluster count must be >= 1, got {self.k}")
        if len(self.sizes) != self.k or any(s < 1 for s in self.sizes):
            raise ValueError("every cluster must be non-empty")
        if sum(self.sizes) != len(self.assignment):
            raise ValueError("sizes inconsistent with assignment")
        for j in range(self.k):
            if not (self.len_min[j] <= self.mu[j] <= self.len_max[j]):
                raise ValueError(f"cluster {j}: mean outside [min, max]")

    @property
    def n_points(self) -> int:
        return len(self.assignment)

    @cached_property
    def _members(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for i, j in enumerate(self.assignment):
            out[j].append(i)
        return tuple(tuple(m) for m in out)

    def members(self, j: int) -> tuple[int, ...]:
        """Indices of the points in cluster j, ascending."""
        return self._members[j]


def _repair_empty(lengths: np.ndarray, assign: np.ndarray, k: int) -> None:
    """Move points into empty clusters, farthest-from-own-mean first.

    Donors are restricted to clusters of size >= 2 so no new empties
    appear.  Mutates ``assign`` in place.
    """
    while True:
        sizes = np.bincount(assign, minlength=k)
        empties = np.flatnonzero(sizes == 0)
        if empties.size == 0:
            return
        means = np.zeros(k)
        np.add.at(means, assign, lengths)
        nonzero = sizes > 0
        means[nonzero] /= sizes[nonzero]
        dist = np.abs(lengths - means[assign])
        dist[sizes[assign] < 2] = -np.inf
        donor = int(np.argmax(dist))
        assign[donor] = empties[0]


def _lloyd(lengths: np.ndarray, k: int, rng: np.random.Generator):
    """One restart of Lloyd's algorithm; returns (assign, wcss, history)."""
    n = lengths.size
    assign = rng.integers(0, k, size=n)
    _repair_empty(lengths, assign, k)

    history: list[float] = []
    means = np.zeros(k)
    for _ in range(MAX_LLOYD_ITERATIONS):
        sizes = np.bincount(assign, minlength=k)
        np.add.at(means, assign, lengths)
        means /= sizes
        wcss = float(np.sum((lengths - means[assign]) ** 2))
        history.append(wcss)

        # nearest-mean reassignment; argmin breaks ties toward the
        # lowest cluster index
        new_assign = np.argmin(np.abs(lengths[:, None] - means[None, :]), axis=1)
        _repair_empty(lengths, new_assign, k)
        if np.array_equal(new_assign, assign):
            return assign, wcss, history
        assign = new_assign
        means[:] = 0.0
    raise IterationLimitError(
        f"k-means did not stabilize within {MAX_LLOYD_ITERATIONS} iterations"
    )


def kmeans(lengths, k: int, seed: int, restarts: int = 10) -> Clustering:
    """Cluster scalar lengths into k groups minimizing WCSS.

    Runs ``restarts`` independent Lloyd restarts from random initial
    assignments and keeps the best WCSS.  Deterministic for a given
    (seed, restarts) pair.  Raises ValueError if k exceeds the number
    of points.
    """
    arr = np.asarray(lengths, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("lengths must be a non-empty 1-D sequence")
    if not 1 <= k <= arr.size:
        raise ValueError(f"need 1 <= k <= {arr.size}, got k={k}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")

    best: tuple[np.ndarray, float, list[float]] | None = None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        assign, wcss, history = _lloyd(arr, k, np.random.default_rng(child))
        if best is None or wcss < best[1]:
            best = (assign, wcss, history)

    assign, wcss, history = best
    mu, lo, hi = [], [], []
    for j in range(k):
        vals = arr[assign == j]
        mu.append(float(vals.mean()))
        lo.append(float(vals.min()))
        hi.append(float(vals.max()))
    return Clustering(
        k=k,
        assignment=tuple(int(a) for a in assign),
        sizes=tuple(int(s) for s in np.bincount(assign, minlength=k)),
        mu=tuple(mu),
        len_min=tuple(lo),
        len_max=tuple(hi),
        wcss=wcss,
        wcss_history=tuple(history),
    )


def cluster_radii(clustering: Clustering):
    """Per-cluster (mean, min, max) lengths as three tuples."""
    return clustering.mu, clustering.len_min, clustering.len_max
