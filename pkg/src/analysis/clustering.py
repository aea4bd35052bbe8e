"""
View-count clustering for the GOP tiering simulator

WHAT: 1-D k-means (exact and Lloyd) over view counts, plus cluster -> tier mapping
WHY: GOPs with similar view counts share a storage tier; hotter clusters get
     faster (pricier) tiers
ARCHITECTURE: Layer 2 of 3-layer type-safe architecture

SOLVERS:
1. kmeans_1d_exact - Globally optimal partition by dynamic programming.
   In one dimension an optimal k-means partition is a set of contiguous
   intervals of the sorted values, so the problem becomes "where do the k-1
   cut points go". The DP row for q clusters is filled with a
   divide-and-conquer search that relies on the optimal cut moving right as
   the prefix grows, giving O(k · n log n) work.
2. kmeans_lloyd - k-means++ seeding (scikit-learn) followed by Lloyd
   iterations. Fast and usually close to the optimum; the objective never
   increases from one iteration to the next.

Labels are always reported hottest first: label 0 has the highest centroid.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from sklearn.cluster import kmeans_plusplus

from src.models.clustering_inputs import Clustering, ClusteringConfig, TierAssignment
from src.models.pricing_inputs import PricingCatalog
from src.models.repository_inputs import FavSelection, Gop, Repository
from src.utils.errors import BadK, ClusterCountMismatch, EmptyCluster, EmptyInput

logger = logging.getLogger(__name__)


def _validate(values: list[float], k: int) -> np.ndarray:
    if len(values) == 0:
        raise EmptyInput("Cannot cluster an empty list of values")
    if not 1 <= k <= len(values):
        raise BadK(f"k must be in 1..{len(values)} for {len(values)} values, got {k}")
    return np.asarray(values, dtype=np.float64)


def _interval_costs(
    s1: np.ndarray, s2: np.ndarray, w: np.ndarray, starts: np.ndarray, end: int
) -> np.ndarray:
    """Sum of squared deviations of unique-value slots [start, end) for many starts."""
    weight = w[end] - w[starts]
    total = s1[end] - s1[starts]
    return np.maximum(s2[end] - s2[starts] - total * total / weight, 0.0)


def _optimal_cuts(unique: np.ndarray, counts: np.ndarray, k: int) -> list[int]:
    """
    Cut points (in unique-value slots) of the optimal k-partition.

    Returns [0, c1, ..., c_{k-1}, m]: cluster q covers unique slots [c_q, c_{q+1}).
    """
    m = unique.size
    # centering keeps the prefix sums of squares small
    centered = unique - np.average(unique, weights=counts)
    w = np.concatenate(([0.0], np.cumsum(counts, dtype=np.float64)))
    s1 = np.concatenate(([0.0], np.cumsum(counts * centered)))
    s2 = np.concatenate(([0.0], np.cumsum(counts * centered * centered)))

    # one cluster covering slots [0, j)
    previous = np.full(m + 1, np.inf)
    previous[1:] = np.maximum(s2[1:] - s1[1:] * s1[1:] / w[1:], 0.0)
    argmins: list[np.ndarray] = []

    for q in range(2, k + 1):
        current = np.full(m + 1, np.inf)
        best_start = np.zeros(m + 1, dtype=np.int64)
        # (j_lo, j_hi, i_lo, i_hi): fill rows j in [j_lo, j_hi] searching cuts in [i_lo, i_hi]
        stack = [(q, m, q - 1, m - 1)]
        while stack:
            j_lo, j_hi, i_lo, i_hi = stack.pop()
            if j_lo > j_hi:
                continue
            mid = (j_lo + j_hi) // 2
            lo = max(i_lo, q - 1)
            hi = min(i_hi, mid - 1)
            starts = np.arange(lo, hi + 1)
            candidates = previous[starts] + _interval_costs(s1, s2, w, starts, mid)
            pick = int(np.argmin(candidates))
            current[mid] = candidates[pick]
            best_start[mid] = lo + pick
            stack.append((j_lo, mid - 1, i_lo, lo + pick))
            stack.append((mid + 1, j_hi, lo + pick, i_hi))
        argmins.append(best_start)
        previous = current

    cuts = [m]
    end = m
    for best_start in reversed(argmins):
        end = int(best_start[end])
        cuts.append(end)
    cuts.append(0)
    return sorted(cuts)


def _clustering_from_ranges(
    values: np.ndarray,
    order: np.ndarray,
    ranges: list[tuple[int, int]],
    k: int,
    method: str,
    history: list[float] | None = None,
) -> Clustering:
    """Build a hottest-first Clustering from ascending sorted-position ranges."""
    labels = np.empty(values.size, dtype=np.int64)
    centroids: list[float] = []
    sizes: list[int] = []
    objective = 0.0
    sorted_values = values[order]
    for position, (start, end) in enumerate(reversed(ranges)):
        members = sorted_values[start:end]
        labels[order[start:end]] = position
        mean = float(members.mean())
        centroids.append(mean)
        sizes.append(int(members.size))
        objective += float(np.sum((members - mean) ** 2))
    return Clustering(
        k=k,
        labels=labels.tolist(),
        centroids=centroids,
        sizes=sizes,
        objective=objective,
        objective_history=history or [],
        method=method,
    )


def kmeans_1d_exact(values: list[float], k: int) -> Clustering:
    """
    Globally optimal 1-D k-means partition.

    Args:
        values: Values to cluster (any order, duplicates allowed)
        k: Number of clusters, 1 <= k <= len(values)

    Returns:
        Clustering whose clusters are contiguous intervals of the sorted values

    Raises:
        EmptyInput: values is empty
        BadK: k out of range

    EDUCATIONAL NOTE:
    Identical values are solved as one weighted point, which shrinks the DP
    for integer view counts. When there are fewer distinct values than k,
    every distinct value gets its own cluster (objective 0) and copies of
    repeated values are split off until k clusters exist.
    """
    x = _validate(values, k)
    order = np.argsort(x, kind="stable")
    sorted_values = x[order]
    unique, first_index, counts = np.unique(sorted_values, return_index=True, return_counts=True)

    slot_bounds = np.append(first_index, x.size)
    if unique.size <= k:
        ranges = [(int(slot_bounds[i]), int(slot_bounds[i + 1])) for i in range(unique.size)]
        while len(ranges) < k:
            for i, (start, end) in enumerate(ranges):
                if end - start > 1:
                    ranges[i : i + 1] = [(start, end - 1), (end - 1, end)]
                    break
    else:
        cuts = _optimal_cuts(unique, counts.astype(np.float64), k)
        ranges = [
            (int(slot_bounds[a]), int(slot_bounds[b])) for a, b in zip(cuts, cuts[1:])
        ]

    return _clustering_from_ranges(x, order, ranges, k, "exact")


def kmeans_lloyd(values: list[float], k: int, max_iters: int = 300, seed: int = 0) -> Clustering:
    """
    Lloyd's k-means from k-means++ seeding.

    Args:
        values: Values to cluster
        k: Number of clusters, 1 <= k <= len(values)
        max_iters: Iteration cap (>= 1)
        seed: Seed for k-means++ center selection

    Returns:
        Clustering with objective_history holding the objective after each iteration

    Raises:
        EmptyInput, BadK
    """
    x = _validate(values, k)
    if max_iters < 1:
        raise ValueError(f"max_iters must be >= 1, got {max_iters}")

    centers, _ = kmeans_plusplus(x.reshape(-1, 1), n_clusters=k, random_state=seed)
    centers = centers[:, 0].astype(np.float64)

    labels: np.ndarray | None = None
    history: list[float] = []
    for _ in range(max_iters):
        assigned = np.argmin(np.abs(x[:, None] - centers[None, :]), axis=1)
        for c in range(k):
            members = x[assigned == c]
            if members.size:
                centers[c] = members.mean()
        history.append(float(np.sum((x - centers[assigned]) ** 2)))
        if labels is not None and np.array_equal(assigned, labels):
            labels = assigned
            break
        labels = assigned

    assert labels is not None
    counts = np.bincount(labels, minlength=k)
    means = np.array(
        [x[labels == c].mean() if counts[c] else np.nan for c in range(k)], dtype=np.float64
    )
    # hottest first, empty clusters last, ties by original label
    rank = sorted(range(k), key=lambda c: (counts[c] == 0, -means[c] if counts[c] else 0.0, c))
    relabel = np.empty(k, dtype=np.int64)
    relabel[rank] = np.arange(k)
    final = relabel[labels]

    return Clustering(
        k=k,
        labels=final.tolist(),
        centroids=[float(means[c]) for c in rank],
        sizes=[int(counts[c]) for c in rank],
        objective=history[-1],
        objective_history=history,
        method="lloyd",
    )


def cluster_values(values: list[float], config: ClusteringConfig, k: int | None = None) -> Clustering:
    """
    Cluster with the configured solver (best of `restarts` seeds for Lloyd).

    Args:
        values: Values to cluster
        config: ClusteringConfig
        k: Override for config.k (used when fewer values than tiers exist)
    """
    k = config.k if k is None else k
    if config.method == "exact":
        return kmeans_1d_exact(values, k)

    best: Clustering | None = None
    for restart in range(config.restarts):
        run = kmeans_lloyd(values, k, max_iters=config.max_iters, seed=config.seed + restart)
        if best is None or run.objective < best.objective:
            best = run
    assert best is not None
    return best


def assign_tiers(
    clustering: Clustering, catalog: PricingCatalog, strict: bool = True
) -> TierAssignment:
    """
    Map clusters to tiers: higher centroid -> lower rank (pricier, faster) tier.

    Args:
        clustering: Clustering to place
        catalog: PricingCatalog providing the tier ladder
        strict: Require exactly one non-empty cluster per tier (a bijection).
            With strict=False, empty clusters are skipped and fewer clusters
            than tiers take the top of the ladder.

    Raises:
        ClusterCountMismatch: k differs from the tier count (strict) or exceeds it
        EmptyCluster: a cluster has no members (strict)

    Centroid ties go to the lower label first, which gets the higher-ranked tier.
    """
    tier_count = len(catalog.tiers)
    if strict and clustering.k != tier_count:
        raise ClusterCountMismatch(
            f"{clustering.k} clusters cannot map one-to-one onto {tier_count} tiers"
        )
    if strict and any(size == 0 for size in clustering.sizes):
        raise EmptyCluster(
            f"Only {len(clustering.non_empty_labels())} of {clustering.k} clusters are "
            "non-empty; every tier needs a cluster."
        )

    labels = clustering.non_empty_labels()
    if len(labels) > tier_count:
        raise ClusterCountMismatch(f"{len(labels)} non-empty clusters exceed {tier_count} tiers")

    ordered = sorted(labels, key=lambda label: (-clustering.centroids[label], label))
    return TierAssignment(
        cluster_to_tier={label: catalog.tiers[pos].id for pos, label in enumerate(ordered)}
    )


def cluster_onto_tiers(
    values: list[float], config: ClusteringConfig, catalog: PricingCatalog
) -> tuple[Clustering, TierAssignment]:
    """
    Cluster values and place the clusters, tolerating tiny inputs.

    With fewer values than tiers, k shrinks to the value count and the
    clusters take the top tiers.

    Raises:
        ClusterCountMismatch: config.k differs from the catalog tier count
        EmptyInput: values is empty
    """
    if config.k != len(catalog.tiers):
        raise ClusterCountMismatch(
            f"Clustering k={config.k} must equal the catalog tier count {len(catalog.tiers)}"
        )
    k = min(config.k, len(values)) if values else config.k
    clustering = cluster_values(values, config, k=k)
    return clustering, assign_tiers(clustering, catalog, strict=False)


@dataclass(frozen=True)
class GopClusterResult:
    """FAV GOPs in clustering order, with their clustering and tier placement."""

    gops: list[Gop]
    clustering: Clustering
    assignment: TierAssignment


def fav_gops_in_order(repo: Repository, favs: FavSelection) -> list[Gop]:
    """FAV GOPs in repository order (video order, then GOP index)."""
    return [gop for gop in repo.gops() if gop.key in favs.fav_gops]


def cluster_fav_gops(
    repo: Repository, favs: FavSelection, config: ClusteringConfig, catalog: PricingCatalog
) -> GopClusterResult:
    """Cluster the FAV GOPs by views and place the clusters on tiers."""
    gops = fav_gops_in_order(repo, favs)
    clustering, assignment = cluster_onto_tiers([float(g.views) for g in gops], config, catalog)
    logger.debug(
        "Clustered %d FAV GOPs: sizes=%s centroids=%s", len(gops), clustering.sizes, clustering.centroids
    )
    return GopClusterResult(gops=gops, clustering=clustering, assignment=assignment)


CLUSTER_DUMP_COLUMNS = ["video_id", "gop_index", "size_mb", "views", "cluster_label", "tier_id"]


def cluster_dump_rows(result: GopClusterResult) -> list[dict[str, object]]:
    """Rows of the clusters.csv scatter dump (one per FAV GOP)."""
    return [
        {
            "video_id": gop.video_id,
            "gop_index": gop.index,
            "size_mb": gop.size_mb,
            "views": gop.views,
            "cluster_label": label,
            "tier_id": result.assignment.tier_of(label),
        }
        for gop, label in zip(result.gops, result.clustering.labels)
    ]


__all__ = [
    "kmeans_1d_exact",
    "kmeans_lloyd",
    "cluster_values",
    "assign_tiers",
    "cluster_onto_tiers",
    "GopClusterResult",
    "fav_gops_in_order",
    "cluster_fav_gops",
    "CLUSTER_DUMP_COLUMNS",
    "cluster_dump_rows",
]
