"""
Cost Pydantic Models for the GOP tiering simulator

ARCHITECTURE NOTE:
Layer 1 of our 3-layer architecture:
    Layer 1: Pydantic Models (THIS FILE) - Data validation
    Layer 2: Calculator Classes - analysis/cost_engine.py
    Layer 3: CLI Interface - `storage-sim cost`

EDUCATIONAL NOTE:
Every placement policy pays for two things each period:
    - Storage: GB stored × monthly tier price (what it keeps)
    - Compute: VM hours spent re-transcoding on each view (what it dropped)
Policies differ only in WHICH GOPs they keep and in WHICH tier.
"""

from __future__ import annotations

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.pricing_inputs import TierId

_REL_TOL = 1e-9


class PolicyId(str, Enum):
    """The five placement policies compared by the simulator."""

    FULL_PRE_TRANSCODING = "FullPreTranscoding"
    FULL_RE_TRANSCODING = "FullReTranscoding"
    PARTIAL_PRE_TRANSCODING = "PartialPreTranscoding"
    VIDEO_CLUSTERING = "VideoClustering"
    GOP_CLUSTERING = "GopClustering"

    @property
    def cli_name(self) -> str:
        return POLICY_CLI_NAMES[self]

    @classmethod
    def from_cli_name(cls, name: str) -> "PolicyId":
        for policy, cli_name in POLICY_CLI_NAMES.items():
            if name in (cli_name, policy.value):
                return policy
        raise ValueError(f"Unknown policy {name!r}. Choose from: {', '.join(POLICY_CLI_NAMES.values())}")


POLICY_CLI_NAMES: dict[PolicyId, str] = {
    PolicyId.FULL_PRE_TRANSCODING: "full-pre",
    PolicyId.FULL_RE_TRANSCODING: "full-re",
    PolicyId.PARTIAL_PRE_TRANSCODING: "partial-pre",
    PolicyId.VIDEO_CLUSTERING: "video-clustering",
    PolicyId.GOP_CLUSTERING: "gop-clustering",
}

ALL_POLICIES: list[PolicyId] = list(PolicyId)


class CostBreakdown(BaseModel):
    """
    One policy's cost for one period.

    VALIDATES:
        - total_usd = storage_usd + compute_usd (1e-9 relative)
        - storage_usd = sum of per_tier_usd
        - Every component is non-negative

    per_cluster_usd is only filled by the clustering policies; for the GOP
    clustering policy it holds the four per-cluster storage costs, hottest
    cluster first.
    """

    model_config = ConfigDict(frozen=True)

    policy: PolicyId
    storage_usd: float = Field(..., ge=0.0, description="Storage cost for the period")
    compute_usd: float = Field(..., ge=0.0, description="Re-transcoding VM cost for the period")
    total_usd: float = Field(..., ge=0.0, description="storage_usd + compute_usd")
    per_tier_usd: dict[TierId, float] = Field(default_factory=dict)
    per_cluster_usd: dict[int, float] = Field(default_factory=dict)
    stored_gops: int = Field(default=0, ge=0, description="GOPs kept in storage")
    transcoded_views: int = Field(default=0, ge=0, description="Views served by re-transcoding")

    @model_validator(mode="after")
    def components_must_add_up(self) -> "CostBreakdown":
        if not math.isclose(
            self.total_usd, self.storage_usd + self.compute_usd, rel_tol=_REL_TOL, abs_tol=1e-12
        ):
            raise ValueError(
                f"total_usd {self.total_usd} != storage {self.storage_usd} + compute {self.compute_usd}"
            )
        tier_sum = math.fsum(self.per_tier_usd.values())
        if not math.isclose(self.storage_usd, tier_sum, rel_tol=_REL_TOL, abs_tol=1e-12):
            raise ValueError(f"storage_usd {self.storage_usd} != sum of per-tier costs {tier_sum}")
        if any(v < 0 for v in self.per_tier_usd.values()) or any(
            v < 0 for v in self.per_cluster_usd.values()
        ):
            raise ValueError("Per-tier and per-cluster costs must be non-negative")
        return self

    @classmethod
    def build(
        cls,
        policy: PolicyId,
        per_tier_usd: dict[TierId, float],
        compute_usd: float,
        per_cluster_usd: dict[int, float] | None = None,
        stored_gops: int = 0,
        transcoded_views: int = 0,
    ) -> "CostBreakdown":
        """Assemble a breakdown, deriving storage and total from the parts."""
        storage = math.fsum(per_tier_usd.values())
        return cls(
            policy=policy,
            storage_usd=storage,
            compute_usd=compute_usd,
            total_usd=storage + compute_usd,
            per_tier_usd=per_tier_usd,
            per_cluster_usd=per_cluster_usd or {},
            stored_gops=stored_gops,
            transcoded_views=transcoded_views,
        )


__all__ = [
    "PolicyId",
    "POLICY_CLI_NAMES",
    "ALL_POLICIES",
    "CostBreakdown",
]
