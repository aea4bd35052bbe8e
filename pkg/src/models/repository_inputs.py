"""
Repository Pydantic Models for the GOP tiering simulator

This module defines GOPs, videos, repositories, and FAV selections.

ARCHITECTURE NOTE:
These models represent Layer 1 of our 3-layer architecture:
    Layer 1: Pydantic Models (THIS FILE) - Data validation
    Layer 2: Calculator Classes - Business logic (analysis/repository.py)
    Layer 3: CLI Interface - cli/storage_sim.py

EDUCATIONAL CONTEXT:
- A video stream is a sequence of Groups Of Pictures (GOPs). GOPs can be
  transcoded independently, so the GOP is the unit every placement decision
  is made on. Sequence headers, frame types and macroblocks are not modeled.
- Sizes are in megabytes. The storage formula divides by 2^10 to get GB,
  which only balances dimensionally with MB inputs.
- Views are counted over one accounting period (default 30 days), the same
  window storage is billed for.
"""

from __future__ import annotations

from collections.abc import Iterator

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Gop(BaseModel):
    """
    One group of pictures.

    WHAT: Size, per-period views, and re-transcode time of one GOP
    WHY: Storage cost depends on size, re-transcoding cost on views × time

    USAGE EXAMPLE:
        gop = Gop(video_id="v000001", index=0, size_mb=1200.0, views=5000, transcode_time_s=0.9)
    """

    model_config = ConfigDict(frozen=True)

    video_id: str = Field(..., min_length=1, description="Owning video id")
    index: int = Field(..., ge=0, description="0-based position within the video")
    size_mb: float = Field(..., gt=0.0, description="Stored size in megabytes")
    views: int = Field(..., ge=0, description="Accesses during the last period")
    transcode_time_s: float = Field(
        ..., gt=0.0, description="VM seconds to re-transcode this GOP on demand"
    )

    @property
    def key(self) -> tuple[str, int]:
        return (self.video_id, self.index)


class Video(BaseModel):
    """
    A video stream as an ordered list of GOPs.

    VALIDATES:
        - At least one GOP, indexed 0..len-1 in order, all owned by this video
        - video_views >= the most-viewed GOP (watching a GOP means opening the video)
    """

    model_config = ConfigDict(frozen=True)

    id: str = Field(..., min_length=1, description="Video identifier")
    gops: list[Gop] = Field(..., min_length=1, description="GOPs in playback order")
    video_views: int = Field(..., ge=0, description="Video accesses during the period")

    @model_validator(mode="after")
    def gops_must_belong_in_order(self) -> "Video":
        for position, gop in enumerate(self.gops):
            if gop.index != position:
                raise ValueError(
                    f"Video {self.id}: GOP at position {position} has index {gop.index}. "
                    "GOP indexes must be 0..len-1 in order."
                )
            if gop.video_id != self.id:
                raise ValueError(
                    f"Video {self.id}: GOP {position} claims video_id {gop.video_id!r}."
                )
        peak = max(gop.views for gop in self.gops)
        if self.video_views < peak:
            raise ValueError(
                f"Video {self.id}: video_views={self.video_views} is below its most "
                f"viewed GOP ({peak}). A GOP view implies a video access."
            )
        return self

    @property
    def size_mb(self) -> float:
        return sum(gop.size_mb for gop in self.gops)

    @property
    def peak_gop_views(self) -> int:
        return max(gop.views for gop in self.gops)


class Repository(BaseModel):
    """
    The full collection of videos for one accounting period.

    VALIDATES:
        - Video ids are pairwise distinct
        - period_days > 0
    """

    model_config = ConfigDict(frozen=True)

    videos: list[Video] = Field(default_factory=list, description="All videos")
    synthesis_seed: int | None = Field(
        default=None, description="Seed the repository was synthesized with, if any"
    )
    period_days: int = Field(default=30, gt=0, description="Accounting period length in days")

    @field_validator("videos")
    @classmethod
    def video_ids_must_be_unique(cls, v: list[Video]) -> list[Video]:
        seen: set[str] = set()
        for video in v:
            if video.id in seen:
                raise ValueError(f"Duplicate video id in repository: {video.id}")
            seen.add(video.id)
        return v

    def gops(self) -> Iterator[Gop]:
        """Every GOP of every video, in file order."""
        for video in self.videos:
            yield from video.gops

    def video(self, video_id: str) -> Video:
        for video in self.videos:
            if video.id == video_id:
                return video
        raise KeyError(f"Unknown video id: {video_id}")


class RepositoryTotals(BaseModel):
    """Exact sums over every GOP of a repository."""

    video_count: int = Field(..., ge=0)
    gop_count: int = Field(..., ge=0)
    total_size_mb: float = Field(..., ge=0.0)
    total_views: int = Field(..., ge=0)


class FavSelection(BaseModel):
    """
    Frequently accessed videos and, inside them, frequently accessed GOPs.

    WHAT: Output of the two-level FAV selection
    WHY: FAV percentage is chosen per video, but clustering runs on GOPs

    VALIDATES:
        - Every FAV GOP belongs to a FAV video and has a non-negative index
        - |fav_video_ids| equals ceil(fav_fraction × repository_size)
          (within one video of rounding)
    """

    model_config = ConfigDict(frozen=True)

    fav_video_ids: frozenset[str] = Field(..., description="Ids of FAV videos")
    fav_gops: frozenset[tuple[str, int]] = Field(
        ..., description="(video_id, gop_index) pairs selected for storage"
    )
    fav_fraction: float = Field(..., gt=0.0, le=1.0, description="Requested FAV fraction")
    gop_hotness_threshold: float = Field(
        default=0.05, ge=0.0, le=1.0, description="Per-video GOP hotness cutoff used"
    )
    repository_size: int = Field(..., ge=1, description="Video count of the source repository")

    @model_validator(mode="after")
    def selection_must_be_consistent(self) -> "FavSelection":
        negative = [key for key in self.fav_gops if key[1] < 0]
        if negative:
            raise ValueError(f"FAV GOP index must be >= 0, got {sorted(negative)[0]}")
        orphans = [key for key in self.fav_gops if key[0] not in self.fav_video_ids]
        if orphans:
            raise ValueError(
                f"{len(orphans)} FAV GOP(s) belong to non-FAV videos, e.g. {sorted(orphans)[0]}"
            )
        expected = self.fav_fraction * self.repository_size
        if abs(len(self.fav_video_ids) - expected) > 1.0:
            raise ValueError(
                f"{len(self.fav_video_ids)} FAV videos does not match fraction "
                f"{self.fav_fraction} of {self.repository_size} videos"
            )
        return self

    def is_fav_gop(self, gop: Gop) -> bool:
        return (gop.video_id, gop.index) in self.fav_gops


__all__ = [
    "Gop",
    "Video",
    "Repository",
    "RepositoryTotals",
    "FavSelection",
]
