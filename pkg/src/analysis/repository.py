"""
Repository operations for the GOP tiering simulator

WHAT: FAV selection, repository totals, and the JSON-lines repository file
WHY: Every policy needs the same FAV set and the same GOP inventory
ARCHITECTURE: Layer 2 of 3-layer type-safe architecture

REPOSITORY FILE FORMAT (JSON lines, UTF-8):
    line 1:  {"repository":{"synthesis_seed":42,"period_days":30}}
    line 2+: {"id":"v000001","video_views":50000,
              "gops":[{"size_mb":1234.5,"views":50000,"transcode_time_s":0.93}, ...]}

GOP video_id and index are implied by the enclosing record and position.
Floats are written in shortest round-trip form, so a read/write cycle
reproduces the file byte for byte.
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.models.repository_inputs import (
    FavSelection,
    Gop,
    Repository,
    RepositoryTotals,
    Video,
)
from src.utils.errors import EmptyRepository, RepositoryFormatError

logger = logging.getLogger(__name__)

# Guards ceil() against 0.3 * 10 == 3.0000000000000004
_FRACTION_EPSILON = 1e-9


class GopRecord(BaseModel):
    """On-disk GOP record."""

    model_config = ConfigDict(extra="forbid")

    size_mb: float
    views: int
    transcode_time_s: float


class VideoRecord(BaseModel):
    """On-disk video record (one line)."""

    model_config = ConfigDict(extra="forbid")

    id: str
    video_views: int
    gops: list[GopRecord]


class RepositoryHeader(BaseModel):
    synthesis_seed: int | None = None
    period_days: int = Field(default=30, gt=0)


class HeaderRecord(BaseModel):
    """First line of a repository file."""

    repository: RepositoryHeader


def fav_video_count(video_count: int, fav_fraction: float) -> int:
    """Number of FAV videos: ceil(fav_fraction × video_count)."""
    return min(video_count, math.ceil(fav_fraction * video_count - _FRACTION_EPSILON))


def select_favs(
    repo: Repository,
    fav_fraction: float,
    gop_hotness_threshold: float = 0.05,
) -> FavSelection:
    """
    Pick FAV videos, then the hot GOPs inside them.

    RULES:
        1. The top ceil(fav_fraction × N) videos by video_views are FAV
           (ties broken by ascending video id).
        2. Inside a FAV video, a GOP is a FAV GOP iff
           views >= gop_hotness_threshold × (max GOP views in that video).

    Args:
        repo: Repository to select from
        fav_fraction: Fraction of videos that are FAV, in (0, 1]
        gop_hotness_threshold: Per-video relative cutoff, in [0, 1]

    Returns:
        FavSelection

    Raises:
        EmptyRepository: repository has no videos
        ValueError: fraction or threshold out of range
    """
    if not repo.videos:
        raise EmptyRepository("Cannot select FAVs from a repository with no videos")
    if not 0.0 < fav_fraction <= 1.0:
        raise ValueError(f"fav_fraction must be in (0, 1], got {fav_fraction}")
    if not 0.0 <= gop_hotness_threshold <= 1.0:
        raise ValueError(f"gop_hotness_threshold must be in [0, 1], got {gop_hotness_threshold}")

    ranked = sorted(repo.videos, key=lambda video: (-video.video_views, video.id))
    favs = ranked[: fav_video_count(len(ranked), fav_fraction)]

    fav_gops: set[tuple[str, int]] = set()
    for video in favs:
        cutoff = gop_hotness_threshold * video.peak_gop_views
        fav_gops.update((video.id, gop.index) for gop in video.gops if gop.views >= cutoff)

    logger.debug(
        "Selected %d FAV videos and %d FAV GOPs at fraction %.3f",
        len(favs), len(fav_gops), fav_fraction,
    )
    return FavSelection(
        fav_video_ids=frozenset(video.id for video in favs),
        fav_gops=frozenset(fav_gops),
        fav_fraction=fav_fraction,
        gop_hotness_threshold=gop_hotness_threshold,
        repository_size=len(repo.videos),
    )


def repository_totals(repo: Repository) -> RepositoryTotals:
    """Exact size/view/GOP sums over the whole repository."""
    sizes: list[float] = []
    total_views = 0
    for gop in repo.gops():
        sizes.append(gop.size_mb)
        total_views += gop.views
    return RepositoryTotals(
        video_count=len(repo.videos),
        gop_count=len(sizes),
        total_size_mb=math.fsum(sizes),
        total_views=total_views,
    )


def _video_record(video: Video) -> VideoRecord:
    return VideoRecord(
        id=video.id,
        video_views=video.video_views,
        gops=[
            GopRecord(size_mb=g.size_mb, views=g.views, transcode_time_s=g.transcode_time_s)
            for g in video.gops
        ],
    )


def _video_from_record(record: VideoRecord) -> Video:
    return Video(
        id=record.id,
        video_views=record.video_views,
        gops=[
            Gop(
                video_id=record.id,
                index=index,
                size_mb=g.size_mb,
                views=g.views,
                transcode_time_s=g.transcode_time_s,
            )
            for index, g in enumerate(record.gops)
        ],
    )


def dumps_repository(repo: Repository) -> str:
    """Serialize a repository to the JSON-lines text."""
    header = HeaderRecord(
        repository=RepositoryHeader(synthesis_seed=repo.synthesis_seed, period_days=repo.period_days)
    )
    lines = [header.model_dump_json()]
    lines.extend(_video_record(video).model_dump_json() for video in repo.videos)
    return "\n".join(lines) + "\n"


def write_repository(repo: Repository, path: Path | str) -> Path:
    """Write a repository file, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_repository(repo), encoding="utf-8")
    logger.info("Wrote %d videos to %s", len(repo.videos), path)
    return path


def _is_header(line: str) -> bool:
    try:
        record = json.loads(line)
    except json.JSONDecodeError:
        return False
    return isinstance(record, dict) and "repository" in record


def read_repository(path: Path | str) -> Repository:
    """
    Load and validate a repository file.

    Raises:
        FileNotFoundError: path does not exist
        RepositoryFormatError: a line is not a valid header/video record
    """
    path = Path(path)
    header = RepositoryHeader()
    videos: list[Video] = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                if lineno == 1 and _is_header(line):
                    header = HeaderRecord.model_validate_json(line).repository
                    continue
                videos.append(_video_from_record(VideoRecord.model_validate_json(line)))
            except ValidationError as e:
                raise RepositoryFormatError(f"{path}:{lineno}: {e.errors()[0]['msg']}") from e
    try:
        return Repository(
            videos=videos,
            synthesis_seed=header.synthesis_seed,
            period_days=header.period_days,
        )
    except ValidationError as e:
        raise RepositoryFormatError(f"{path}: {e.errors()[0]['msg']}") from e


def scan_repository_totals(path: Path | str) -> RepositoryTotals:
    """
    Stream the repository file and sum it without building models.

    Independent second pass used to cross-check repository_totals().
    """
    video_count = gop_count = total_views = 0
    sizes: list[float] = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.strip():
                continue
            record = json.loads(line)
            if "repository" in record:
                continue
            video_count += 1
            for gop in record["gops"]:
                gop_count += 1
                sizes.append(gop["size_mb"])
                total_views += gop["views"]
    return RepositoryTotals(
        video_count=video_count,
        gop_count=gop_count,
        total_size_mb=math.fsum(sizes),
        total_views=total_views,
    )


__all__ = [
    "fav_video_count",
    "select_favs",
    "repository_totals",
    "dumps_repository",
    "write_repository",
    "read_repository",
    "scan_repository_totals",
]
