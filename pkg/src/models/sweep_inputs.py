"""
Sweep Pydantic Models for the GOP tiering simulator

ARCHITECTURE NOTE:
Layer 1 of our 3-layer architecture:
    Layer 1: Pydantic Models (THIS FILE) - Data validation
    Layer 2: Calculator Classes - strategies/sweep.py, reports/sweep_report.py
    Layer 3: CLI Interface - `storage-sim sweep` / `storage-sim report`

EDUCATIONAL NOTE:
A sweep is a grid: every FAV percentage × every seed × every policy. One
grid cell (fav_pct, seed) synthesizes (or loads) a repository, selects its
FAVs and prices all requested policies on it. Seeds are averaged so that
one lucky repository does not decide the comparison.
"""

from __future__ import annotations

import math
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config import SimConfig
from src.models.clustering_inputs import ClusteringConfig
from src.models.cost_inputs import ALL_POLICIES, CostBreakdown, PolicyId
from src.models.synth_inputs import SynthSpec

HYBRID_POLICIES: list[PolicyId] = [
    PolicyId.PARTIAL_PRE_TRANSCODING,
    PolicyId.VIDEO_CLUSTERING,
    PolicyId.GOP_CLUSTERING,
]


class SweepSpec(BaseModel):
    """
    One experiment manifest.

    VALIDATES:
        - fav_percentages each in (0, 1] and strictly increasing
        - seeds non-empty and distinct
        - policies non-empty and distinct

    When repository_path is set the repository is loaded once and shared by
    every seed; seeds then only label rows (and seed Lloyd clustering).
    Otherwise each seed synthesizes `synth` with its seed replaced.
    """

    fav_percentages: list[float] = Field(
        default_factory=lambda: list(SimConfig.DEFAULT_FAV_PERCENTAGES),
        description="FAV fractions to sweep (0.05 = 5%)",
    )
    seeds: list[int] = Field(
        default_factory=lambda: list(SimConfig.DEFAULT_SEEDS),
        min_length=1,
        description="One synthesized repository per seed",
    )
    policies: list[PolicyId] = Field(default_factory=lambda: list(ALL_POLICIES), min_length=1)
    synth: SynthSpec = Field(default_factory=SynthSpec, description="Repository generator spec")
    repository_path: Path | None = Field(
        default=None, description="Existing repository file used instead of synthesis"
    )
    output_dir: Path = Field(default_factory=SimConfig.output_dir)
    gop_hotness_threshold: float = Field(
        default=SimConfig.DEFAULT_GOP_HOTNESS_THRESHOLD, ge=0.0, le=1.0
    )
    clustering: ClusteringConfig = Field(default_factory=ClusteringConfig)
    figure_policies: list[PolicyId] = Field(
        default_factory=lambda: list(HYBRID_POLICIES),
        description="Policies kept in the filtered curves file (empty = no file)",
    )

    @field_validator("fav_percentages")
    @classmethod
    def fav_percentages_must_increase(cls, v: list[float]) -> list[float]:
        if not v:
            raise ValueError("fav_percentages must not be empty")
        for pct in v:
            if not 0.0 < pct <= 1.0:
                raise ValueError(f"FAV percentage {pct} outside (0, 1]; use fractions (0.05 = 5%)")
        for lower, upper in zip(v, v[1:]):
            if upper <= lower:
                raise ValueError(f"fav_percentages must be strictly increasing: {lower} then {upper}")
        return v

    @field_validator("seeds")
    @classmethod
    def seeds_must_be_distinct(cls, v: list[int]) -> list[int]:
        if len(set(v)) != len(v):
            raise ValueError(f"Duplicate seeds: {v}")
        return v

    @field_validator("policies")
    @classmethod
    def policies_must_be_distinct(cls, v: list[PolicyId]) -> list[PolicyId]:
        if len(set(v)) != len(v):
            raise ValueError(f"Duplicate policies: {[p.value for p in v]}")
        return v

    def cell_count(self) -> int:
        return len(self.fav_percentages) * len(self.seeds)

    model_config = {
        "frozen": True,
        "json_schema_extra": {
            "examples": [
                {
                    "fav_percentages": [0.05, 0.10, 0.15, 0.20, 0.25, 0.30],
                    "seeds": [1, 2, 3, 4, 5],
                    "synth": {"video_count": 1000},
                    "output_dir": "results/small",
                }
            ]
        },
    }


class SweepRow(BaseModel):
    """
    One (fav_pct, seed, policy) cost.

    breakdown is None only for rows injected from a totals-only CSV
    (for example a published cost table).
    """

    model_config = ConfigDict(frozen=True)

    fav_pct: float = Field(..., gt=0.0, le=1.0)
    seed: int
    policy: PolicyId
    total_usd: float = Field(..., ge=0.0)
    breakdown: CostBreakdown | None = None

    @model_validator(mode="after")
    def breakdown_must_match_row(self) -> "SweepRow":
        if self.breakdown is None:
            return self
        if self.breakdown.policy != self.policy:
            raise ValueError(
                f"Row policy {self.policy.value} does not match breakdown policy "
                f"{self.breakdown.policy.value}"
            )
        if not math.isclose(self.total_usd, self.breakdown.total_usd, rel_tol=1e-9, abs_tol=1e-12):
            raise ValueError(
                f"Row total {self.total_usd} differs from breakdown total {self.breakdown.total_usd}"
            )
        return self

    def sort_key(self) -> tuple[float, int, int]:
        return (self.fav_pct, self.seed, ALL_POLICIES.index(self.policy))


class SweepAggregate(BaseModel):
    """Mean and sample standard deviation of total_usd across seeds."""

    model_config = ConfigDict(frozen=True)

    fav_pct: float
    policy: PolicyId
    mean_usd: float = Field(..., ge=0.0)
    std_usd: float = Field(..., ge=0.0, description="Sample std (ddof=1); 0 with one seed")
    n_seeds: int = Field(..., ge=1)


class FailedCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    fav_pct: float
    seed: int
    message: str


class SweepResult(BaseModel):
    """
    All rows of a sweep plus their per-(fav_pct, policy) aggregates.

    VALIDATES:
        - No two rows share (fav_pct, seed, policy)
        - rows + failed cells × policies = fav_percentages × seeds × policies
    """

    model_config = ConfigDict(frozen=True)

    fav_percentages: list[float]
    seeds: list[int]
    policies: list[PolicyId]
    rows: list[SweepRow]
    aggregates: list[SweepAggregate] = Field(default_factory=list)
    failures: list[FailedCell] = Field(default_factory=list)

    @model_validator(mode="after")
    def grid_must_be_accounted_for(self) -> "SweepResult":
        keys = {(row.fav_pct, row.seed, row.policy) for row in self.rows}
        if len(keys) != len(self.rows):
            raise ValueError("Duplicate (fav_pct, seed, policy) rows in sweep result")
        expected = len(self.fav_percentages) * len(self.seeds) * len(self.policies)
        accounted = len(self.rows) + len(self.failures) * len(self.policies)
        if accounted != expected:
            raise ValueError(
                f"Sweep grid has {expected} cells×policies but {len(self.rows)} rows and "
                f"{len(self.failures)} failed cells were recorded"
            )
        return self

    @property
    def complete(self) -> bool:
        return not self.failures


class ReportBundle(BaseModel):
    """Rendered report texts."""

    table_csv: str
    curves_csv: str
    summary_text: str
    figure_curves_csv: str | None = None
    reductions: dict[str, float] = Field(
        default_factory=dict, description="Baseline policy value -> GopClustering saving fraction"
    )


__all__ = [
    "HYBRID_POLICIES",
    "SweepSpec",
    "SweepRow",
    "SweepAggregate",
    "FailedCell",
    "SweepResult",
    "ReportBundle",
]
