"""
Pydantic models for the GOP tiering simulator.

Models provide type-safe data structures with automatic validation.

Available Models:
    - pricing_inputs: Storage tiers and the pricing catalog (StorageTier, PricingCatalog)
    - repository_inputs: Repository model (Gop, Video, Repository, FavSelection)
    - synth_inputs: Synthetic repository generator spec (SynthSpec)
    - clustering_inputs: 1-D k-means models (ClusteringConfig, Clustering, TierAssignment)
    - cost_inputs: Placement policies and their costs (PolicyId, CostBreakdown)
    - sweep_inputs: Experiment grid models (SweepSpec, SweepRow, SweepResult, etc.)
"""

from src.models.pricing_inputs import (
    ALL_TIER_IDS,
    TIER_COUNT,
    PricingCatalog,
    StorageTier,
    TierId,
)

from src.models.repository_inputs import (
    FavSelection,
    Gop,
    Repository,
    RepositoryTotals,
    Video,
)

from src.models.synth_inputs import SynthSpec

from src.models.clustering_inputs import (
    Clustering,
    ClusteringConfig,
    TierAssignment,
)

from src.models.cost_inputs import (
    ALL_POLICIES,
    POLICY_CLI_NAMES,
    CostBreakdown,
    PolicyId,
)

from src.models.sweep_inputs import (
    HYBRID_POLICIES,
    FailedCell,
    ReportBundle,
    SweepAggregate,
    SweepResult,
    SweepRow,
    SweepSpec,
)

__all__ = [
    # Pricing models
    "TierId",
    "ALL_TIER_IDS",
    "TIER_COUNT",
    "StorageTier",
    "PricingCatalog",
    # Repository models
    "Gop",
    "Video",
    "Repository",
    "RepositoryTotals",
    "FavSelection",
    # Synthesis models
    "SynthSpec",
    # Clustering models
    "ClusteringConfig",
    "Clustering",
    "TierAssignment",
    # Cost models
    "PolicyId",
    "POLICY_CLI_NAMES",
    "ALL_POLICIES",
    "CostBreakdown",
    # Sweep models
    "HYBRID_POLICIES",
    "SweepSpec",
    "SweepRow",
    "SweepAggregate",
    "FailedCell",
    "SweepResult",
    "ReportBundle",
]
