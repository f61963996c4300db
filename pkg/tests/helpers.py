"""Shared builders for synthetic clusterings, rate tables and instances."""

from __future__ import annotations

import numpy as np

from minsched import Clustering, Instance, RateTable


def make_clustering(assignment, lengths=None) -> Clustering:
    """Clustering from an explicit assignment (lengths default to 1+index)."""
    assignment = tuple(int(a) for a in assignment)
    k = max(assignment) + 1
    if lengths is None:
        lengths = [float(i + 1) for i in range(len(assignment))]
    lengths = np.asarray(lengths, dtype=float)
    mu, lo, hi, sizes = [], [], [], []
    for j in range(k):
        vals = lengths[[i for i, a in enumerate(assignment) if a == j]]
        sizes.append(len(vals))
        mu.append(float(vals.mean()))
        lo.append(float(vals.min()))
        hi.append(float(vals.max()))
    wcss = float(sum((lengths[i] - mu[a]) ** 2 for i, a in enumerate(assignment)))
    return Clustering(k=k, assignment=assignment, sizes=tuple(sizes),
                      mu=tuple(mu), len_min=tuple(lo), len_max=tuple(hi),
                      wcss=wcss)


def block_clustering(sizes, lengths=None) -> Clustering:
    """Clusters of consecutive link indices with the given sizes."""
    assignment = [j for j, n in enumerate(sizes) for _ in range(n)]
    return make_clustering(assignment, lengths)


def random_monotone_table(rng: np.random.Generator, sizes) -> RateTable:
    """Synthetic positive table, non-increasing in every profile coordinate:
    rate(j, g) = a_j / (1 + sum_m w_m * (g_m - [m == j]))."""
    k = len(sizes)
    a = rng.uniform(1.0, 5.0, size=k)
    w = rng.uniform(0.1, 1.0, size=k)

    def fn(j, g):
        load = sum(w[m] * (g[m] - (1 if m == j else 0)) for m in range(k))
        return a[j] / (1.0 + load)

    table = RateTable.from_function(tuple(sizes), fn)
    table.validate_monotone(atol=1e-12)
    return table


def random_gain_table(rng: np.random.Generator, sizes,
                      noise_w: float = 1e-13) -> RateTable:
    """SINR-style table from random per-cluster gains (signal == interference)."""
    gains = rng.uniform(1e-7, 1e-5, size=len(sizes))
    return RateTable.from_gains(tuple(sizes), gains, gains, noise_w)


def random_instance_for(rng: np.random.Generator, clustering: Clustering,
                        demand_lo=100.0, demand_hi=1500.0) -> Instance:
    """Instance whose demand vector is random (descending); lengths are
    irrelevant for table-based solvers but kept positive."""
    n = clustering.n_points
    demands = np.sort(rng.uniform(demand_lo, demand_hi, size=n))[::-1]
    return Instance(
        demands=tuple(float(d) for d in demands),
        lengths=tuple(float(l) for l in 10.0 + np.arange(n)),
    )
