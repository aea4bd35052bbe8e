"""
Pricing Pydantic Models for the GOP tiering simulator

This module defines the storage-tier catalog every cost formula reads from.

ARCHITECTURE NOTE:
These models represent Layer 1 of our 3-layer architecture:
    Layer 1: Pydantic Models (THIS FILE) - Data validation
    Layer 2: Calculator Classes - Business logic (analysis/pricing.py, analysis/cost_engine.py)
    Layer 3: CLI Interface - cli/storage_sim.py

EDUCATIONAL CONTEXT:
- Cloud object storage is billed per GB per month, with cheaper classes for
  data that is read less often.
- Transcoding runs on virtual machines billed per hour, which is why a view of
  a GOP that is NOT stored costs VM time instead of storage.
- Catalogs are frozen: once validated, they can be shared across worker
  processes without copying or locking.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

TierId = Literal["Standard", "StandardIA", "OneZoneIA", "Glacier"]

ALL_TIER_IDS: tuple[TierId, ...] = ("Standard", "StandardIA", "OneZoneIA", "Glacier")

TIER_COUNT = 4


class StorageTier(BaseModel):
    """
    One priced storage class.

    WHAT: Storage class id, monthly per-GB price, and its rank
    WHY: The rank decides which cluster of GOPs lands here (rank 1 = hottest data)

    USAGE EXAMPLE:
        tier = StorageTier(id="Standard", price_per_gb_month=0.023, rank=1)
    """

    model_config = ConfigDict(frozen=True)

    id: TierId = Field(..., description="Storage class identifier")
    price_per_gb_month: float = Field(
        ...,
        gt=0.0,
        description="USD per GB per month (0.023 = S3 Standard list price)",
    )
    rank: int = Field(
        ...,
        ge=1,
        le=TIER_COUNT,
        description="1 = most expensive / fastest access, 4 = coldest",
    )


class PricingCatalog(BaseModel):
    """
    The four storage tiers plus the VM rate used for re-transcoding.

    WHAT: Complete price list consumed by every placement policy
    WHY: Costs of all five policies must come from ONE consistent price list
    VALIDATES:
        - Exactly four tiers with pairwise distinct ids
        - Ranks are a permutation of 1..4
        - Price strictly decreases as rank increases
        - VM hourly rate is positive

    The tiers are always held in rank order after validation, so
    `catalog.tiers[0]` is the rank-1 tier.
    """

    tiers: list[StorageTier] = Field(
        ...,
        description="Exactly four storage tiers (any input order; stored by rank)",
    )
    vm_hourly_rate: float = Field(
        ...,
        gt=0.0,
        description="USD per VM-hour used to re-transcode GOPs on demand",
    )

    @field_validator("tiers")
    @classmethod
    def tiers_must_form_a_ladder(cls, v: list[StorageTier]) -> list[StorageTier]:
        """
        Enforce the four-tier ladder and return it sorted by rank.

        EDUCATIONAL NOTE:
        Clusters are mapped onto tiers by rank, so a catalog where a colder
        rank costs MORE would silently make the placement policy pay extra
        for colder data. We reject it here instead.
        """
        if len(v) != TIER_COUNT:
            raise ValueError(
                f"Catalog must define exactly {TIER_COUNT} tiers, found {len(v)}. "
                f"Expected one of each: {', '.join(ALL_TIER_IDS)}."
            )

        ids = [tier.id for tier in v]
        if len(set(ids)) != len(ids):
            raise ValueError(f"Duplicate tier id in catalog: {ids}")

        ranks = sorted(tier.rank for tier in v)
        if ranks != list(range(1, TIER_COUNT + 1)):
            raise ValueError(f"Tier ranks must be a permutation of 1..{TIER_COUNT}, got {ranks}")

        ordered = sorted(v, key=lambda tier: tier.rank)
        for upper, lower in zip(ordered, ordered[1:]):
            if lower.price_per_gb_month >= upper.price_per_gb_month:
                raise ValueError(
                    f"Price must strictly decrease with rank: {lower.id} (rank {lower.rank}) "
                    f"costs {lower.price_per_gb_month} but {upper.id} (rank {upper.rank}) "
                    f"costs {upper.price_per_gb_month}."
                )
        return ordered

    def tier(self, tier_id: str) -> StorageTier:
        """Look up a tier by id."""
        for tier in self.tiers:
            if tier.id == tier_id:
                return tier
        raise KeyError(f"Unknown storage tier: {tier_id}")

    def tier_by_rank(self, rank: int) -> StorageTier:
        """Look up a tier by rank (1 = hottest)."""
        return self.tiers[rank - 1]

    def hottest_tier(self) -> StorageTier:
        """The rank-1 tier every single-tier baseline stores into."""
        return self.tiers[0]

    def prices_by_rank(self) -> list[float]:
        return [tier.price_per_gb_month for tier in self.tiers]

    model_config = {
        "frozen": True,
        "json_schema_extra": {
            "examples": [
                {
                    "tiers": [
                        {"id": "Standard", "price_per_gb_month": 0.023, "rank": 1},
                        {"id": "StandardIA", "price_per_gb_month": 0.0125, "rank": 2},
                        {"id": "OneZoneIA", "price_per_gb_month": 0.01, "rank": 3},
                        {"id": "Glacier", "price_per_gb_month": 0.001, "rank": 4},
                    ],
                    "vm_hourly_rate": 0.20,
                }
            ]
        },
    }


__all__ = [
    "TierId",
    "ALL_TIER_IDS",
    "TIER_COUNT",
    "StorageTier",
    "PricingCatalog",
]
