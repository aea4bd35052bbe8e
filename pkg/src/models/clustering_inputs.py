"""
Clustering Pydantic Models for the GOP tiering simulator

ARCHITECTURE NOTE:
Layer 1 of our 3-layer architecture:
    Layer 1: Pydantic Models (THIS FILE) - Data validation
    Layer 2: Calculator Classes - analysis/clustering.py
    Layer 3: CLI Interface - `storage-sim cluster`

EDUCATIONAL NOTE:
GOPs are grouped by how often they are viewed, then each group is stored in
one storage tier. With four tiers we want four groups, hottest first:

    cluster 0 (most views)   -> rank-1 tier (Standard)
    cluster 1                -> rank-2 tier (Standard-IA)
    cluster 2                -> rank-3 tier (One Zone-IA)
    cluster 3 (fewest views) -> rank-4 tier (Glacier)
"""

from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.pricing_inputs import TierId


class ClusteringConfig(BaseModel):
    """
    How the clustering policies partition view counts.

    WHAT: Solver choice and its knobs
    WHY: The exact solver is deterministic and is the default; Lloyd exists for
         scale comparisons and as a fidelity check
    """

    model_config = ConfigDict(frozen=True)

    k: int = Field(default=4, ge=1, description="Cluster count (must equal tier count to price)")
    method: Literal["exact", "lloyd"] = Field(
        default="exact",
        description=(
            "Clustering solver:\n"
            "  - 'exact': dynamic-programming optimum for 1-D data\n"
            "  - 'lloyd': k-means++ seeding followed by Lloyd iterations"
        ),
    )
    max_iters: int = Field(default=300, ge=1, description="Lloyd iteration cap")
    seed: int = Field(default=0, description="Lloyd seeding seed")
    restarts: int = Field(default=1, ge=1, description="Lloyd runs; the best objective wins")


class Clustering(BaseModel):
    """
    Partition of a list of values into k labeled groups.

    Labels are ordered hottest first: label 0 has the highest centroid.

    VALIDATES:
        - Every label is in 0..k-1
        - Each centroid equals the mean of its members (1e-9 relative)
    """

    model_config = ConfigDict(frozen=True)

    k: int = Field(..., ge=1)
    labels: list[int] = Field(..., description="Cluster label per input value, input order")
    centroids: list[float] = Field(..., description="Mean value per label (NaN if empty)")
    sizes: list[int] = Field(..., description="Member count per label")
    objective: float = Field(..., ge=0.0, description="Within-cluster sum of squares")
    objective_history: list[float] = Field(
        default_factory=list, description="Objective after each Lloyd iteration"
    )
    method: Literal["exact", "lloyd"] = "exact"

    @model_validator(mode="after")
    def labels_and_centroids_must_agree(self) -> "Clustering":
        if len(self.centroids) != self.k or len(self.sizes) != self.k:
            raise ValueError(f"Expected {self.k} centroids and sizes")
        for label in self.labels:
            if not 0 <= label < self.k:
                raise ValueError(f"Label {label} outside 0..{self.k - 1}")
        counts = [0] * self.k
        for label in self.labels:
            counts[label] += 1
        if counts != self.sizes:
            raise ValueError(f"Cluster sizes {self.sizes} do not match labels {counts}")
        return self

    def non_empty_labels(self) -> list[int]:
        return [label for label, size in enumerate(self.sizes) if size > 0]

    def check_centroids(self, values: list[float], rel_tol: float = 1e-9) -> None:
        """Raise ValueError unless every centroid is the mean of its members."""
        members: list[list[float]] = [[] for _ in range(self.k)]
        for value, label in zip(values, self.labels):
            members[label].append(value)
        for label, group in enumerate(members):
            if not group:
                continue
            mean = math.fsum(group) / len(group)
            if not math.isclose(mean, self.centroids[label], rel_tol=rel_tol, abs_tol=1e-12):
                raise ValueError(
                    f"Centroid {label} is {self.centroids[label]} but its members average {mean}"
                )


class TierAssignment(BaseModel):
    """
    Mapping of cluster labels onto storage tiers.

    VALIDATES:
        - Injective: no two clusters share a tier
    A strict assignment covers all four labels and tiers (a bijection).
    """

    model_config = ConfigDict(frozen=True)

    cluster_to_tier: dict[int, TierId] = Field(..., description="Cluster label -> tier id")

    @model_validator(mode="after")
    def tiers_must_be_distinct(self) -> "TierAssignment":
        tiers = list(self.cluster_to_tier.values())
        if len(set(tiers)) != len(tiers):
            raise ValueError(f"Two clusters share a tier: {self.cluster_to_tier}")
        return self

    def tier_of(self, label: int) -> TierId:
        return self.cluster_to_tier[label]


__all__ = [
    "ClusteringConfig",
    "Clustering",
    "TierAssignment",
]
