"""
Synthetic repository generator for the GOP tiering simulator

WHAT: Deterministic long-tail video repositories from a SynthSpec
WHY: Placement experiments need repositories with realistic popularity shape
ARCHITECTURE: Layer 2 of 3-layer type-safe architecture

GENERATION MODEL:
    Video of popularity rank j (1-based):
        video_views_j = round(max_video_views / j ** exponent)
    GOP i (0-based) of that video:
        views_i = round(video_views_j × decay ** i)
        except that with probability random_spike_prob a GOP with i >= 1 is
        "spiked": its views are redrawn uniformly from 0..video_views_j

DETERMINISM CONTRACT:
    One numpy PCG64 stream (`numpy.random.default_rng(seed)`) drives every draw.
    Videos are generated in rank order; for each video the draws are, in order:
        1. GOP count           rng.integers(lo, hi, endpoint=True)
        2. GOP sizes           rng.uniform(lo, hi, n)
        3. transcode times     rng.uniform(lo, hi, n)   ('uniform' model only)
        4. spike coin flips    rng.random(n)
        5. spike view values   rng.integers(0, video_views, n, endpoint=True)
    The same spec therefore produces the same repository, bit for bit.
"""

from __future__ import annotations

import logging

import numpy as np
from pydantic import ValidationError

from src.models.repository_inputs import Gop, Repository, Video
from src.models.synth_inputs import SynthSpec
from src.utils.errors import InvalidSpec, describe_validation_error

logger = logging.getLogger(__name__)


def build_synth_spec(**fields) -> SynthSpec:
    """
    Validate SynthSpec fields, reporting failures as InvalidSpec.

    Raises:
        InvalidSpec: any range or bound violated
    """
    try:
        return SynthSpec(**fields)
    except ValidationError as e:
        raise InvalidSpec(f"Invalid synthesis spec: {describe_validation_error(e)}") from e


def popularity_curve(video_count: int, max_video_views: int, exponent: float) -> list[int]:
    """
    Rank-ordered video view counts of a Zipf-like popularity law.

    EDUCATIONAL NOTE:
    With exponent 0.8 the curve is a classic long tail: the top 10% of
    videos collect well over half of all views.
    """
    ranks = np.arange(1, video_count + 1, dtype=np.float64)
    return np.rint(max_video_views / ranks**exponent).astype(np.int64).tolist()


def _transcode_times(
    rng: np.random.Generator, spec: SynthSpec, sizes: np.ndarray
) -> np.ndarray:
    t_lo, t_hi = spec.transcode_time_s_range
    if spec.transcode_model == "uniform":
        return rng.uniform(t_lo, t_hi, sizes.size)

    s_lo, s_hi = spec.gop_size_mb_range
    if s_hi == s_lo:
        return np.full(sizes.size, t_lo)
    # linear in size, clipped so rounding never leaves the range
    return np.clip(t_lo + (t_hi - t_lo) * (sizes - s_lo) / (s_hi - s_lo), t_lo, t_hi)


def _synthesize_video(
    rng: np.random.Generator, spec: SynthSpec, video_id: str, video_views: int
) -> Video:
    n_lo, n_hi = spec.gop_count_range
    n = int(rng.integers(n_lo, n_hi, endpoint=True))

    s_lo, s_hi = spec.gop_size_mb_range
    sizes = rng.uniform(s_lo, s_hi, n)
    times = _transcode_times(rng, spec, sizes)

    spiked = rng.random(n) < spec.random_spike_prob
    spiked[0] = False
    spike_views = rng.integers(0, video_views, n, endpoint=True)

    decayed = np.rint(video_views * spec.intra_video_decay ** np.arange(n)).astype(np.int64)
    views = np.where(spiked, spike_views, decayed)

    gops = [
        Gop(video_id=video_id, index=i, size_mb=size, views=v, transcode_time_s=t)
        for i, (size, v, t) in enumerate(zip(sizes.tolist(), views.tolist(), times.tolist()))
    ]
    return Video(id=video_id, gops=gops, video_views=video_views)


def video_id_for_rank(rank: int, video_count: int) -> str:
    """Zero-padded id so ascending id order equals popularity rank order."""
    width = max(6, len(str(video_count)))
    return f"v{rank:0{width}d}"


def synthesize(spec: SynthSpec) -> Repository:
    """
    Generate a repository from a validated spec.

    Args:
        spec: SynthSpec (validated by Pydantic)

    Returns:
        Repository with spec.video_count videos in popularity-rank order
    """
    rng = np.random.default_rng(spec.seed)
    popularity = popularity_curve(
        spec.video_count, spec.max_video_views, spec.video_popularity_exponent
    )

    videos = [
        _synthesize_video(rng, spec, video_id_for_rank(rank, spec.video_count), video_views)
        for rank, video_views in enumerate(popularity, start=1)
    ]

    logger.info(
        "Synthesized %d videos (%d GOPs) with seed %d",
        len(videos), sum(len(v.gops) for v in videos), spec.seed,
    )
    return Repository(videos=videos, synthesis_seed=spec.seed, period_days=spec.period_days)


__all__ = [
    "build_synth_spec",
    "popularity_curve",
    "video_id_for_rank",
    "synthesize",
]
