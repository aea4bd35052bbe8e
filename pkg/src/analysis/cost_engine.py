"""
Placement Policy Cost Engine for the GOP tiering simulator

WHAT: Monthly cost of five storage/re-transcoding policies on one repository
WHY: Compare tiered GOP placement against the classic approaches
ARCHITECTURE: Layer 2 of 3-layer type-safe architecture

POLICIES:
1. FullPreTranscoding    - Store every GOP in the rank-1 tier; never transcode
2. FullReTranscoding     - Store nothing; re-transcode every view
3. PartialPreTranscoding - Store FAV GOPs in the rank-1 tier; re-transcode the rest
4. VideoClustering       - Cluster FAV videos by video views (k=4); store each whole
                           FAV video in its cluster's tier; re-transcode non-FAV videos
5. GopClustering         - Cluster FAV GOPs by views (k=4); store each cluster in its
                           tier; re-transcode every non-FAV GOP

FORMULAS:
    Storage of one cluster = (sum of GOP sizes in MB) × tier price / 2^10
    Re-transcoding of one GOP = views × transcode seconds × VM hourly rate / 3600
    Total storage = sum over clusters (one term per tier)

EDUCATIONAL NOTE:
Storage is billed once per period no matter how often a GOP is read, while
re-transcoding is billed per view. Keeping hot GOPs and dropping cold ones
is therefore always the direction of savings; tiering then lowers the price
of what is kept.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from src.config import SimConfig
from src.models.clustering_inputs import ClusteringConfig
from src.models.cost_inputs import ALL_POLICIES, CostBreakdown, PolicyId
from src.models.pricing_inputs import PricingCatalog, StorageTier, TierId
from src.models.repository_inputs import FavSelection, Gop, Repository
from src.analysis.clustering import cluster_onto_tiers
from src.analysis.repository import select_favs
from src.utils.errors import EmptyInput, InconsistentSelection, NegativeSize

logger = logging.getLogger(__name__)


def cluster_storage_cost(gop_sizes_mb: Iterable[float] | np.ndarray, tier_price: float) -> float:
    """
    Monthly storage cost of one cluster: (sum of sizes in MB) × price / 2^10.

    Args:
        gop_sizes_mb: Sizes of the GOPs stored together (MB)
        tier_price: USD per GB-month of the cluster's tier

    Raises:
        NegativeSize: a size or the price is not positive

    Example:
        2048 MB at 0.023 USD/GB-month -> 0.046 USD/month
    """
    sizes = np.fromiter(gop_sizes_mb, dtype=np.float64) if not isinstance(
        gop_sizes_mb, np.ndarray
    ) else gop_sizes_mb
    if tier_price <= 0:
        raise NegativeSize(f"Tier price must be positive, got {tier_price}")
    if (sizes <= 0).any():
        raise NegativeSize("GOP sizes must be positive")
    return math.fsum(sizes.tolist()) * tier_price / SimConfig.MB_PER_GB


def transcode_cost(gop: Gop, vm_hourly_rate: float) -> float:
    """
    Cost of serving every view of a GOP by re-transcoding it on demand.

    FORMULA:
        views × transcode_time_s × vm_hourly_rate / 3600
    """
    return gop.views * gop.transcode_time_s * vm_hourly_rate / SimConfig.SECONDS_PER_HOUR


def storage_to_transcode_ratio(gop: Gop, tier: StorageTier, vm_hourly_rate: float) -> float:
    """
    Period storage cost divided by period re-transcoding cost of one GOP.

    Below 1 the GOP is cheaper to keep than to re-transcode on demand.
    A GOP with no views is never worth storing (ratio is infinite).
    """
    compute = transcode_cost(gop, vm_hourly_rate)
    storage = cluster_storage_cost([gop.size_mb], tier.price_per_gb_month)
    return math.inf if compute == 0 else storage / compute


@dataclass(frozen=True)
class GopTable:
    """
    Column arrays of every GOP in repository order (video order, then index).

    Built once per repository and shared by every policy and FAV level, so
    the per-GOP sums run as numpy masks instead of Python loops.
    """

    video_ids: list[str]
    offsets: np.ndarray
    size_mb: np.ndarray
    views: np.ndarray
    transcode_time_s: np.ndarray

    @classmethod
    def from_repository(cls, repo: Repository) -> "GopTable":
        counts = [len(video.gops) for video in repo.videos]
        gops = list(repo.gops())
        return cls(
            video_ids=[video.id for video in repo.videos],
            offsets=np.concatenate(([0], np.cumsum(counts, dtype=np.int64))).astype(np.int64),
            size_mb=np.array([g.size_mb for g in gops], dtype=np.float64),
            views=np.array([g.views for g in gops], dtype=np.int64),
            transcode_time_s=np.array([g.transcode_time_s for g in gops], dtype=np.float64),
        )

    def __len__(self) -> int:
        return int(self.size_mb.size)

    def transcode_costs(self, vm_hourly_rate: float) -> np.ndarray:
        """Per-GOP re-transcoding cost, same arithmetic as transcode_cost()."""
        return self.views * self.transcode_time_s * vm_hourly_rate / SimConfig.SECONDS_PER_HOUR

    def video_rows(self, position: int) -> slice:
        return slice(int(self.offsets[position]), int(self.offsets[position + 1]))

    def video_mask(self, video_ids: frozenset[str]) -> np.ndarray:
        mask = np.zeros(len(self), dtype=bool)
        for position, video_id in enumerate(self.video_ids):
            if video_id in video_ids:
                mask[self.video_rows(position)] = True
        return mask

    def gop_mask(self, keys: frozenset[tuple[str, int]]) -> np.ndarray:
        position = {video_id: i for i, video_id in enumerate(self.video_ids)}
        rows = np.fromiter(
            (self.offsets[position[video_id]] + index for video_id, index in keys),
            dtype=np.int64,
            count=len(keys),
        )
        mask = np.zeros(len(self), dtype=bool)
        mask[rows] = True
        return mask


def _check_selection(repo: Repository, favs: FavSelection) -> None:
    if favs.repository_size != len(repo.videos):
        raise InconsistentSelection(
            f"Selection was made on {favs.repository_size} videos, repository has {len(repo.videos)}"
        )
    gop_counts = {video.id: len(video.gops) for video in repo.videos}
    missing = [vid for vid in favs.fav_video_ids if vid not in gop_counts]
    if missing:
        raise InconsistentSelection(f"FAV video {sorted(missing)[0]!r} is not in the repository")
    for video_id, index in favs.fav_gops:
        if not 0 <= index < gop_counts[video_id]:
            raise InconsistentSelection(f"FAV GOP ({video_id!r}, {index}) is not in the repository")

    derived = select_favs(repo, favs.fav_fraction, favs.gop_hotness_threshold)
    if derived.fav_video_ids != favs.fav_video_ids or derived.fav_gops != favs.fav_gops:
        raise InconsistentSelection(
            f"Selection at fraction {favs.fav_fraction} and threshold "
            f"{favs.gop_hotness_threshold} was not derived from this repository"
        )


def _transcoded(table: GopTable, mask: np.ndarray, vm_hourly_rate: float) -> tuple[float, int]:
    """Exact cost and view count of re-transcoding the GOP rows in `mask`."""
    costs = table.transcode_costs(vm_hourly_rate)[mask]
    return math.fsum(costs.tolist()), int(table.views[mask].sum())


def _per_cluster_costs(
    sizes: np.ndarray,
    row_labels: np.ndarray,
    cluster_to_tier: dict[int, TierId],
    catalog: PricingCatalog,
) -> tuple[dict[int, float], dict[TierId, float]]:
    per_cluster: dict[int, float] = {}
    per_tier: dict[TierId, float] = {}
    for label in sorted(cluster_to_tier):
        tier = catalog.tier(cluster_to_tier[label])
        cost = cluster_storage_cost(sizes[row_labels == label], tier.price_per_gb_month)
        per_cluster[label] = cost
        per_tier[tier.id] = cost
    return per_cluster, per_tier


def _full_pre(table: GopTable, catalog: PricingCatalog) -> CostBreakdown:
    tier = catalog.hottest_tier()
    return CostBreakdown.build(
        PolicyId.FULL_PRE_TRANSCODING,
        per_tier_usd={tier.id: cluster_storage_cost(table.size_mb, tier.price_per_gb_month)},
        compute_usd=0.0,
        stored_gops=len(table),
    )


def _full_re(table: GopTable, catalog: PricingCatalog) -> CostBreakdown:
    compute, views = _transcoded(table, np.ones(len(table), dtype=bool), catalog.vm_hourly_rate)
    return CostBreakdown.build(
        PolicyId.FULL_RE_TRANSCODING, per_tier_usd={}, compute_usd=compute, transcoded_views=views
    )


def _partial_pre(table: GopTable, favs: FavSelection, catalog: PricingCatalog) -> CostBreakdown:
    tier = catalog.hottest_tier()
    stored = table.gop_mask(favs.fav_gops)
    compute, views = _transcoded(table, ~stored, catalog.vm_hourly_rate)
    return CostBreakdown.build(
        PolicyId.PARTIAL_PRE_TRANSCODING,
        per_tier_usd={tier.id: cluster_storage_cost(table.size_mb[stored], tier.price_per_gb_month)},
        compute_usd=compute,
        stored_gops=int(stored.sum()),
        transcoded_views=views,
    )


def _video_clustering(
    repo: Repository,
    table: GopTable,
    favs: FavSelection,
    catalog: PricingCatalog,
    config: ClusteringConfig,
) -> CostBreakdown:
    positions = [i for i, video in enumerate(repo.videos) if video.id in favs.fav_video_ids]
    clustering, assignment = cluster_onto_tiers(
        [float(repo.videos[i].video_views) for i in positions], config, catalog
    )

    # every GOP of a FAV video inherits the video's cluster label; -1 = not stored
    row_labels = np.full(len(table), -1, dtype=np.int64)
    for position, label in zip(positions, clustering.labels):
        row_labels[table.video_rows(position)] = label
    per_cluster, per_tier = _per_cluster_costs(
        table.size_mb, row_labels, assignment.cluster_to_tier, catalog
    )

    stored = row_labels >= 0
    compute, views = _transcoded(table, ~stored, catalog.vm_hourly_rate)
    return CostBreakdown.build(
        PolicyId.VIDEO_CLUSTERING,
        per_tier_usd=per_tier,
        compute_usd=compute,
        per_cluster_usd=per_cluster,
        stored_gops=int(stored.sum()),
        transcoded_views=views,
    )


def _gop_clustering(
    table: GopTable, favs: FavSelection, catalog: PricingCatalog, config: ClusteringConfig
) -> CostBreakdown:
    stored = table.gop_mask(favs.fav_gops)
    rows = np.flatnonzero(stored)
    clustering, assignment = cluster_onto_tiers(
        table.views[rows].astype(np.float64).tolist(), config, catalog
    )

    row_labels = np.full(len(table), -1, dtype=np.int64)
    row_labels[rows] = clustering.labels
    per_cluster, per_tier = _per_cluster_costs(
        table.size_mb, row_labels, assignment.cluster_to_tier, catalog
    )

    compute, views = _transcoded(table, ~stored, catalog.vm_hourly_rate)
    return CostBreakdown.build(
        PolicyId.GOP_CLUSTERING,
        per_tier_usd=per_tier,
        compute_usd=compute,
        per_cluster_usd=per_cluster,
        stored_gops=int(rows.size),
        transcoded_views=views,
    )


def evaluate_policy(
    policy: PolicyId,
    repo: Repository,
    favs: FavSelection,
    catalog: PricingCatalog,
    config: ClusteringConfig | None = None,
    table: GopTable | None = None,
) -> CostBreakdown:
    """
    Price one policy on one repository and FAV selection.

    Args:
        policy: Policy to evaluate
        repo: Repository (validated)
        favs: FavSelection derived from `repo`
        catalog: PricingCatalog
        config: ClusteringConfig for the two clustering policies (default: exact, k=4)
        table: Pre-built GopTable of `repo` (built here when omitted)

    Returns:
        CostBreakdown (per_cluster_usd filled for the clustering policies)

    Raises:
        InconsistentSelection: favs were not derived from repo
        ClusterCountMismatch: config.k differs from the catalog tier count
    """
    _check_selection(repo, favs)
    if table is None:
        table = GopTable.from_repository(repo)
    return _evaluate(policy, repo, favs, catalog, config or ClusteringConfig(), table)


def _evaluate(
    policy: PolicyId,
    repo: Repository,
    favs: FavSelection,
    catalog: PricingCatalog,
    config: ClusteringConfig,
    table: GopTable,
) -> CostBreakdown:
    if policy == PolicyId.FULL_PRE_TRANSCODING:
        breakdown = _full_pre(table, catalog)
    elif policy == PolicyId.FULL_RE_TRANSCODING:
        breakdown = _full_re(table, catalog)
    elif policy == PolicyId.PARTIAL_PRE_TRANSCODING:
        breakdown = _partial_pre(table, favs, catalog)
    elif policy == PolicyId.VIDEO_CLUSTERING:
        breakdown = _video_clustering(repo, table, favs, catalog, config)
    elif policy == PolicyId.GOP_CLUSTERING:
        breakdown = _gop_clustering(table, favs, catalog, config)
    else:
        raise ValueError(f"Unknown policy: {policy}")

    logger.debug(
        "%s: storage=%.6f compute=%.6f total=%.6f",
        policy.value, breakdown.storage_usd, breakdown.compute_usd, breakdown.total_usd,
    )
    return breakdown


def evaluate_all(
    repo: Repository,
    favs: FavSelection,
    catalog: PricingCatalog,
    config: ClusteringConfig | None = None,
    policies: Sequence[PolicyId] = ALL_POLICIES,
    table: GopTable | None = None,
) -> dict[PolicyId, CostBreakdown]:
    """Evaluate several policies on the same inputs, sharing one GopTable and one selection check."""
    _check_selection(repo, favs)
    if table is None:
        table = GopTable.from_repository(repo)
    config = config or ClusteringConfig()
    return {policy: _evaluate(policy, repo, favs, catalog, config, table) for policy in policies}


def total_cost(breakdowns: Sequence[CostBreakdown | float]) -> float:
    """
    Exact sum of totals (correctly rounded, so independent of order).

    Accepts CostBreakdowns or plain per-cluster costs.

    Raises:
        EmptyInput: empty list
    """
    if not breakdowns:
        raise EmptyInput("total_cost needs at least one cost")
    return math.fsum(
        item.total_usd if isinstance(item, CostBreakdown) else float(item) for item in breakdowns
    )


__all__ = [
    "cluster_storage_cost",
    "transcode_cost",
    "storage_to_transcode_ratio",
    "GopTable",
    "evaluate_policy",
    "evaluate_all",
    "total_cost",
]
