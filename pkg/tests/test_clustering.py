"""k-means on link lengths: examples, descent, and global optimality checks."""

import itertools

import numpy as np
import pytest

from minsched import cluster_radii, kmeans


def exhaustive_best_wcss(lengths, k):
    """Global minimum WCSS; optimal 1-D clusters are contiguous in sorted
    order, so it suffices to scan contiguous partitions."""
    pts = np.sort(np.asarray(lengths, dtype=float))
    n = len(pts)
    best = np.inf
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0,) + cuts + (n,)
        wcss = 0.0
        for a, b in zip(bounds, bounds[1:]):
            seg = pts[a:b]
            wcss += float(np.sum((seg - seg.mean()) ** 2))
        best = min(best, wcss)
    return best


def test_two_cluster_example():
    clustering = kmeans([1.0, 2.0, 10.0, 11.0], 2, seed=0)
    groups = {clustering.members(j) for j in range(2)}
    assert groups == {(0, 1), (2, 3)}
    assert sorted(clustering.mu) == [1.5, 10.5]
    assert clustering.wcss == pytest.approx(1.0, abs=1e-12)


def test_k_equals_n_gives_singletons():
    clustering = kmeans([5.0, 9.0, 14.0, 2.0], 4, seed=1)
    assert clustering.sizes == (1, 1, 1, 1)
    assert clustering.wcss == 0.0


def test_k_one_gives_arithmetic_mean():
    lengths = [3.0, 4.0, 10.0]
    clustering = kmeans(lengths, 1, seed=2)
    assert clustering.mu[0] == pytest.approx(np.mean(lengths), rel=1e-15)


def test_radii_single_member_and_pair():
    clustering = kmeans([42.0], 1, seed=0)
    mu, lo, hi = cluster_radii(clustering)
    assert (mu[0], lo[0], hi[0]) == (42.0, 42.0, 42.0)

    clustering = kmeans([3.0, 250.0], 1, seed=0)
    mu, lo, hi = cluster_radii(clustering)
    assert (mu[0], lo[0], hi[0]) == (126.5, 3.0, 250.0)


def test_invariants_on_random_inputs():
    rng = np.random.default_rng(3)
    for trial in range(20):
        lengths = rng.uniform(3, 250, size=rng.integers(4, 30))
        k = int(rng.integers(1, min(7, len(lengths)) + 1))
        clustering = kmeans(lengths, k, seed=trial)
        assert sum(clustering.sizes) == len(lengths)
        assert all(s >= 1 for s in clustering.sizes)
        recomputed = sum(
            (lengths[i] - clustering.mu[a]) ** 2
            for i, a in enumerate(clustering.assignment)
        )
        assert clustering.wcss == pytest.approx(recomputed, rel=1e-9)
        for j in range(k):
            assert clustering.len_min[j] <= clustering.mu[j] <= clustering.len_max[j]


def test_wcss_descends_within_restart():
    rng = np.random.default_rng(4)
    for trial in range(20):
        lengths = rng.uniform(3, 250, size=20)
        clustering = kmeans(lengths, 4, seed=trial, restarts=1)
        hist = clustering.wcss_history
        assert all(hist[i + 1] <= hist[i] + 1e-9 * max(1.0, hist[i])
                   for i in range(len(hist) - 1))
        assert clustering.wcss <= hist[0] + 1e-12


def test_matches_global_optimum_for_k2_small_n():
    # random-partition initialization starts every restart with both means
    # near the grand mean, so escaping that basin takes many restarts
    rng = np.random.default_rng(5)
    for trial in range(15):
        lengths = rng.uniform(3, 250, size=rng.integers(4, 13))
        clustering = kmeans(lengths, 2, seed=trial, restarts=150)
        assert clustering.wcss == pytest.approx(
            exhaustive_best_wcss(lengths, 2), rel=1e-9, abs=1e-9
        )


def test_deterministic_per_seed():
    lengths = np.random.default_rng(6).uniform(3, 250, size=15).tolist()
    a = kmeans(lengths, 3, seed=9)
    b = kmeans(lengths, 3, seed=9)
    assert a.assignment == b.assignment and a.wcss == b.wcss


def test_duplicate_lengths_keep_clusters_nonempty():
    clustering = kmeans([5.0] * 6, 3, seed=0)
    assert clustering.sizes.count(0) == 0
    assert sum(clustering.sizes) == 6
    assert clustering.wcss == 0.0


def test_domain_errors():
    with pytest.raises(ValueError):
        kmeans([1.0, 2.0], 3, seed=0)  # k > N
    with pytest.raises(ValueError):
        kmeans([], 1, seed=0)
    with pytest.raises(ValueError):
        kmeans([1.0, 2.0], 2, seed=0, restarts=0)
