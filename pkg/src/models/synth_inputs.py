"""
Synthesis Pydantic Models for the GOP tiering simulator

ARCHITECTURE NOTE:
Layer 1 of our 3-layer architecture:
    Layer 1: Pydantic Models (THIS FILE) - Data validation
    Layer 2: Calculator Classes - analysis/synth.py
    Layer 3: CLI Interface - `storage-sim synth`

EDUCATIONAL NOTE:
Video stream providers do not publish their repositories, so experiments run
on synthetic ones. The generator reproduces the two access shapes that matter
for placement:
    - Across videos: Zipf-like popularity (a few videos get most views)
    - Inside a video: views decay from the first GOP (viewers drop off), with
      random spikes where a mid-video GOP becomes popular (seeking, replays)
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator


class SynthSpec(BaseModel):
    """
    Parameters of one synthetic repository.

    VALIDATES:
        - Every [min, max] range has min <= max and a positive lower bound
        - video_count >= 1

    USAGE EXAMPLE:
        spec = SynthSpec.small(seed=42)
        repo = synthesize(spec)
    """

    video_count: int = Field(default=1000, ge=1, description="Number of videos")
    seed: int = Field(default=0, description="Seed of the single PCG64 stream")
    gop_count_range: tuple[int, int] = Field(
        default=(60, 240), description="GOPs per video, inclusive [min, max]"
    )
    gop_size_mb_range: tuple[float, float] = Field(
        default=(500.0, 2000.0), description="GOP size in MB, [min, max)"
    )
    transcode_time_s_range: tuple[float, float] = Field(
        default=(0.5, 1.5), description="VM seconds to re-transcode one GOP, [min, max)"
    )
    transcode_model: Literal["uniform", "linear"] = Field(
        default="uniform",
        description=(
            "How transcode time is generated:\n"
            "  - 'uniform': drawn uniformly from transcode_time_s_range\n"
            "  - 'linear': mapped linearly from GOP size onto the range"
        ),
    )
    video_popularity_exponent: float = Field(
        default=0.8, gt=0.0, description="Zipf exponent across videos"
    )
    intra_video_decay: float = Field(
        default=0.9, gt=0.0, lt=1.0, description="Geometric view decay per GOP position"
    )
    random_spike_prob: float = Field(
        default=0.1, ge=0.0, le=1.0, description="Chance a non-first GOP gets a popularity spike"
    )
    max_video_views: int = Field(
        default=50_000, ge=1, description="Views of the most popular video"
    )
    period_days: int = Field(default=30, gt=0, description="Accounting period of the repository")

    @model_validator(mode="after")
    def ranges_must_be_ordered_and_positive(self) -> "SynthSpec":
        ranges = {
            "gop_count_range": self.gop_count_range,
            "gop_size_mb_range": self.gop_size_mb_range,
            "transcode_time_s_range": self.transcode_time_s_range,
        }
        for name, (low, high) in ranges.items():
            if low <= 0:
                raise ValueError(f"{name} lower bound must be positive, got {low}")
            if low > high:
                raise ValueError(f"{name} must have min <= max, got [{low}, {high}]")
        return self

    @classmethod
    def small(cls, seed: int = 0) -> "SynthSpec":
        """1,000-video preset used by tests and the default sweep."""
        return cls(video_count=1000, seed=seed)

    @classmethod
    def full_scale(cls, seed: int = 0) -> "SynthSpec":
        """50,000-video preset the size of a production-scale study."""
        return cls(video_count=50_000, seed=seed)

    model_config = {
        "frozen": True,
        "json_schema_extra": {
            "examples": [
                {
                    "video_count": 1000,
                    "seed": 42,
                    "gop_count_range": [60, 240],
                    "gop_size_mb_range": [500.0, 2000.0],
                    "transcode_time_s_range": [0.5, 1.5],
                    "transcode_model": "uniform",
                    "video_popularity_exponent": 0.8,
                    "intra_video_decay": 0.9,
                    "random_spike_prob": 0.1,
                    "max_video_views": 50000,
                }
            ]
        },
    }


__all__ = ["SynthSpec"]
