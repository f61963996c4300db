"""Problem instances, the SINR/Shannon rate model, and clustered rate tables.

An :class:`Instance` is a set of N transmitter-receiver pairs (links)
sharing one channel: per-link traffic demands in bits, link lengths in
meters, uniform transmit power, background noise and a path-loss
exponent.  All receivers sit at a common center point, so the
interference a receiver sees from transmitter k equals k's own received
signal power.

When links are grouped into K clusters of similar length, the rate of
an active link depends only on its cluster and on how many links of
each cluster transmit simultaneously (the *profile* of the active
group).  :class:`RateTable` stores those per-(cluster, profile) rates;
:func:`build_rate_table` derives them from a clustering in one of three
variants:

* ``MEAN``  - every link at its cluster's mean length (nominal rates),
* ``UPPER`` - signal at the cluster's minimum length, interference at
  maximum lengths: an optimistic table whose schedule length bounds the
  true optimum from below,
* ``LOWER`` - the mirror image: pessimistic rates, schedule length
  bounds the true optimum from above.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path

import numpy as np

from .clustering import Clustering

Group = frozenset  # frozenset[int], non-empty set of link indices
Profile = tuple  # tuple[int, ...], per-cluster activation counts

#: transmit power used by generated instances: 30 dBm
DEFAULT_POWER_W = 1.0
#: background noise used by generated instances: -100 dBm
DEFAULT_NOISE_W = 1e-13
DEFAULT_ALPHA = 4.0
#: link lengths of generated instances fall in this range (meters)
LENGTH_RANGE_M = (3.0, 250.0)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    if watts <= 0:
        raise ValueError(f"power must be positive, got {watts}")
    return 10.0 * math.log10(watts) + 30.0


def channel_gain(length_m: float, alpha: float, power_w: float) -> float:
    """Received signal power (watts) over a distance-based path-loss model."""
    if length_m <= 0:
        raise ValueError(f"length must be positive, got {length_m}")
    if power_w <= 0:
        raise ValueError(f"power must be positive, got {power_w}")
    return power_w * length_m ** (-alpha)


def shannon_rate(sinr: float) -> float:
    """Achievable rate log2(1 + sinr) in bits per unit time (unit bandwidth)."""
    if sinr < 0:
        raise ValueError(f"SINR must be non-negative, got {sinr}")
    return math.log2(1.0 + sinr)


class RateVariant(Enum):
    """Which cluster radius feeds the gain computation of a rate table."""

    MEAN = "mean"
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True, eq=False)
class Instance:
    """A scheduling instance: demands (bits, descending) and link geometry.

    ``source_order`` records, when the instance was loaded from unsorted
    data, the original position of each link before the demand sort.
    """

    demands: tuple[float, ...]
    lengths: tuple[float, ...]
    power_w: float = DEFAULT_POWER_W
    noise_w: float = DEFAULT_NOISE_W
    alpha: float = DEFAULT_ALPHA
    source_order: tuple[int, ...] | None = None

    def __post_init__(self):
        if len(self.demands) == 0:
            raise ValueError("instance needs at least one link")
        if len(self.demands) != len(self.lengths):
            raise ValueError("demands and lengths must have equal length")
        if any(d < 0 for d in self.demands):
            raise ValueError("demands must be non-negative")
        if any(self.demands[i] < self.demands[i + 1] for i in range(len(self.demands) - 1)):
            raise ValueError("demands must be sorted in descending order")
        if any(l <= 0 for l in self.lengths):
            raise ValueError("lengths must be strictly positive")
        if self.power_w <= 0 or self.noise_w <= 0:
            raise ValueError("power and noise must be positive")
        if self.alpha <= 0:
            raise ValueError("path-loss exponent must be positive")

    @property
    def n_links(self) -> int:
        return len(self.demands)

    @cached_property
    def gains(self) -> np.ndarray:
        """Per-link received signal power S_i in watts."""
        return np.array(
            [channel_gain(l, self.alpha, self.power_w) for l in self.lengths]
        )

    @cached_property
    def positive_links(self) -> tuple[int, ...]:
        """Links with positive demand; only these are ever scheduled."""
        return tuple(i for i, d in enumerate(self.demands) if d > 0)

    @classmethod
    def from_unsorted(cls, demands, lengths, power_w=DEFAULT_POWER_W,
                      noise_w=DEFAULT_NOISE_W, alpha=DEFAULT_ALPHA) -> "Instance":
        """Build an instance from unsorted demands, recording the permutation.

        Links are reordered by descending demand (stable, so equal
        demands keep their relative order); lengths follow their links.
        """
        demands = list(demands)
        order = sorted(range(len(demands)), key=lambda i: -demands[i])
        return cls(
            demands=tuple(float(demands[i]) for i in order),
            lengths=tuple(float(lengths[i]) for i in order),
            power_w=power_w,
            noise_w=noise_w,
            alpha=alpha,
            source_order=tuple(order),
        )


def validate_group(group: frozenset, n_links: int) -> None:
    if not group:
        raise ValueError("group must be non-empty")
    if not all(isinstance(i, (int, np.integer)) and 0 <= i < n_links for i in group):
        raise ValueError(f"group members must be link indices in [0, {n_links})")


def true_link_rate(instance: Instance, group: frozenset, link: int) -> float:
    """Rate of ``link`` when exactly the links in ``group`` transmit.

    Interference is the summed received power of the other group
    members (all receivers share the center point), treated as noise.
    """
    validate_group(group, instance.n_links)
    if link not in group:
        raise ValueError(f"link {link} is not a member of the group")
    gains = instance.gains
    interference = math.fsum(gains[k] for k in group if k != link)
    return shannon_rate(gains[link] / (instance.noise_w + interference))


def generate_instance(seed: int, n_links: int, demand_lo: float,
                      demand_hi: float) -> Instance:
    """Random instance with transmitters scattered around the central
    receivers: link lengths follow the planar-uniform radial density
    (proportional to the radius) conditioned to [3, 250] m, demands are
    uniform in [demand_lo, demand_hi] bits and sorted descending, power
    is 30 dBm, noise -100 dBm, path-loss exponent 4.  Deterministic per
    seed.
    """
    if n_links < 1:
        raise ValueError("n_links must be >= 1")
    if not 0 < demand_lo <= demand_hi:
        raise ValueError("need 0 < demand_lo <= demand_hi")
    rng = np.random.default_rng(seed)
    lo, hi = LENGTH_RANGE_M
    lengths = np.sqrt(lo ** 2 + rng.uniform(0.0, 1.0, size=n_links)
                      * (hi ** 2 - lo ** 2))
    demands = np.sort(rng.uniform(demand_lo, demand_hi, size=n_links))[::-1]
    return Instance(
        demands=tuple(float(d) for d in demands),
        lengths=tuple(float(l) for l in lengths),
    )


def save_instance(instance: Instance, path) -> None:
    doc = {
        "n": instance.n_links,
        "demands_bits": list(instance.demands),
        "lengths_m": list(instance.lengths),
        "power_dbm": watts_to_dbm(instance.power_w),
        "noise_dbm": watts_to_dbm(instance.noise_w),
        "alpha": instance.alpha,
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_instance(path) -> Instance:
    """Read an instance JSON document; demands may be unsorted on disk."""
    doc = json.loads(Path(path).read_text())
    if doc["n"] != len(doc["demands_bits"]) or doc["n"] != len(doc["lengths_m"]):
        raise ValueError(f"{path}: 'n' inconsistent with array lengths")
    return Instance.from_unsorted(
        demands=doc["demands_bits"],
        lengths=doc["lengths_m"],
        power_w=dbm_to_watts(doc["power_dbm"]),
        noise_w=dbm_to_watts(doc["noise_dbm"]),
        alpha=float(doc["alpha"]),
    )


def profile_of(group: frozenset, clustering: Clustering) -> tuple[int, ...]:
    """Per-cluster member counts of a group."""
    if not group:
        raise ValueError("group must be non-empty")
    counts = [0] * clustering.k
    for i in group:
        counts[clustering.assignment[i]] += 1
    return tuple(counts)


@dataclass(frozen=True, eq=False)
class RateTable:
    """Per-(cluster, profile) link rates for a K-cluster network.

    ``rates`` has shape (K, prod(n_j + 1)); entry [j, flat(g)] is the
    rate of every active cluster-j link under profile g, and 0.0 where
    g_j = 0 (no cluster-j link is active there; use :meth:`rate` for
    checked access).  Profiles are flattened in row-major order, so flat
    index order equals lexicographic profile order.
    """

    cluster_sizes: tuple[int, ...]
    rates: np.ndarray
    signal_gain_w: tuple[float, ...] | None = None
    interference_gain_w: tuple[float, ...] | None = None
    noise_w: float | None = None

    def __post_init__(self):
        k = len(self.cluster_sizes)
        if k < 1 or any(n < 1 for n in self.cluster_sizes):
            raise ValueError("cluster sizes must all be >= 1")
        shape = (k, int(np.prod([n + 1 for n in self.cluster_sizes])))
        if self.rates.shape != shape:
            raise ValueError(f"rates must have shape {shape}, got {self.rates.shape}")

    @property
    def k(self) -> int:
        return len(self.cluster_sizes)

    @property
    def cluster_gains(self) -> tuple[float, ...] | None:
        return self.signal_gain_w

    @property
    def profile_count(self) -> int:
        """Number of distinct non-empty profiles: prod(n_j + 1) - 1."""
        return self.rates.shape[1] - 1

    @cached_property
    def profiles(self) -> np.ndarray:
        """All profiles as an array of shape (prod(n_j + 1), K); row 0 is empty."""
        grids = np.meshgrid(
            *[np.arange(n + 1) for n in self.cluster_sizes], indexing="ij"
        )
        return np.stack([g.ravel() for g in grids], axis=1)

    def flat_index(self, profile) -> int:
        return int(np.ravel_multi_index(tuple(profile),
                                        tuple(n + 1 for n in self.cluster_sizes)))

    def validate_profile(self, profile) -> tuple[int, ...]:
        profile = tuple(int(g) for g in profile)
        if len(profile) != self.k:
            raise ValueError(f"profile must have {self.k} entries")
        if any(not 0 <= g <= n for g, n in zip(profile, self.cluster_sizes)):
            raise ValueError(f"profile {profile} outside cluster sizes {self.cluster_sizes}")
        if sum(profile) == 0:
            raise ValueError("profile must activate at least one link")
        return profile

    def rate(self, cluster: int, profile) -> float:
        """Rate of an active cluster-``cluster`` link under ``profile``."""
        profile = self.validate_profile(profile)
        if profile[cluster] < 1:
            raise ValueError(
                f"profile {profile} activates no link of cluster {cluster}"
            )
        return float(self.rates[cluster, self.flat_index(profile)])

    def validate_monotone(self, atol: float = 0.0) -> None:
        """Raise unless augmenting any profile coordinate never raises a rate
        and every active rate is positive."""
        sizes = tuple(n + 1 for n in self.cluster_sizes)
        cube = self.rates.reshape((self.k,) + sizes)
        for j in range(self.k):
            # restrict to entries with g_j >= 1; the rest are placeholders
            active = np.take(cube[j], np.arange(1, sizes[j]), axis=j)
            if active.size and float(active.min()) <= 0:
                raise ValueError(f"cluster {j} has a non-positive active rate")
            for m in range(self.k):
                diff = np.diff(active, axis=m)
                if diff.size and float(diff.max()) > atol:
                    raise ValueError(
                        f"rate table not monotone: cluster {j} rate increases "
                        f"when profile coordinate {m} is augmented"
                    )

    @classmethod
    def from_function(cls, cluster_sizes, fn) -> "RateTable":
        """Tabulate ``fn(cluster_index, profile_tuple) -> rate`` densely."""
        cluster_sizes = tuple(int(n) for n in cluster_sizes)
        k = len(cluster_sizes)
        total = int(np.prod([n + 1 for n in cluster_sizes]))
        rates = np.zeros((k, total))
        table = cls(cluster_sizes=cluster_sizes, rates=rates)
        for flat, g in enumerate(table.profiles):
            if flat == 0:
                continue
            for j in range(k):
                if g[j] >= 1:
                    rates[j, flat] = fn(j, tuple(int(x) for x in g))
        return table

    @classmethod
    def from_gains(cls, cluster_sizes, signal_gain_w, interference_gain_w,
                   noise_w: float) -> "RateTable":
        """Rates from per-cluster gains: a cluster-j link under profile g gets
        log2(1 + Gs_j / (noise + sum_m g_m*Gi_m - Gi_j)), i.e. the other
        g_j - 1 links of its own cluster and all g_m links of other
        clusters interfere at their cluster's interference gain.
        """
        cluster_sizes = tuple(int(n) for n in cluster_sizes)
        sig = np.asarray(signal_gain_w, dtype=float)
        intf = np.asarray(interference_gain_w, dtype=float)
        if sig.shape != (len(cluster_sizes),) or intf.shape != (len(cluster_sizes),):
            raise ValueError("need one signal and one interference gain per cluster")
        if sig.min() <= 0 or intf.min() <= 0 or noise_w <= 0:
            raise ValueError("gains and noise must be positive")

        k = len(cluster_sizes)
        total = int(np.prod([n + 1 for n in cluster_sizes]))
        probe = cls(cluster_sizes=cluster_sizes, rates=np.zeros((k, total)))
        profiles = probe.profiles
        rates = np.zeros((k, total))
        for j in range(k):
            active = profiles[:, j] >= 1
            # drop the link's own contribution before summing: every term
            # stays non-negative, so tiny noise is never cancelled away
            others = profiles[active].astype(float)
            others[:, j] -= 1.0
            denom = others @ intf + noise_w
            rates[j, active] = np.log2(1.0 + sig[j] / denom)
        rates[:, 0] = 0.0
        return cls(
            cluster_sizes=cluster_sizes,
            rates=rates,
            signal_gain_w=tuple(float(x) for x in sig),
            interference_gain_w=tuple(float(x) for x in intf),
            noise_w=float(noise_w),
        )


def build_rate_table(instance: Instance, clustering: Clustering,
                     variant: RateVariant) -> RateTable:
    """Rate table for an instance under a clustering, per the variant's
    choice of signal/interference radii (see module docstring)."""
    if clustering.n_points != instance.n_links:
        raise ValueError("clustering does not cover the instance's links")
    gain = lambda length: channel_gain(length, instance.alpha, instance.power_w)
    if variant is RateVariant.MEAN:
        sig = [gain(m) for m in clustering.mu]
        intf = sig
    elif variant is RateVariant.UPPER:
        sig = [gain(l) for l in clustering.len_min]
        intf = [gain(l) for l in clustering.len_max]
    elif variant is RateVariant.LOWER:
        sig = [gain(l) for l in clustering.len_max]
        intf = [gain(l) for l in clustering.len_min]
    else:
        raise ValueError(f"unknown rate variant: {variant!r}")
    return RateTable.from_gains(clustering.sizes, sig, intf, instance.noise_w)


class TrueRates:
    """Rate source backed by the instance's exact SINR geometry."""

    def __init__(self, instance: Instance):
        self.instance = instance

    def link_rates(self, group: frozenset) -> dict[int, float]:
        validate_group(group, self.instance.n_links)
        gains = self.instance.gains
        total = math.fsum(gains[k] for k in group)
        out = {}
        for i in group:
            out[i] = shannon_rate(gains[i] / (self.instance.noise_w + total - gains[i]))
        return out


class TableRates:
    """Rate source that looks up a clustered rate table via group profiles."""

    def __init__(self, table: RateTable, clustering: Clustering):
        if tuple(clustering.sizes) != tuple(table.cluster_sizes):
            raise ValueError("table cluster sizes do not match the clustering")
        self.table = table
        self.clustering = clustering

    def link_rates(self, group: frozenset) -> dict[int, float]:
        validate_group(group, self.clustering.n_points)
        profile = profile_of(group, self.clustering)
        flat = self.table.flat_index(profile)
        return {
            i: float(self.table.rates[self.clustering.assignment[i], flat])
            for i in group
        }
