"""
Tests for the synthetic repository generator.

These tests verify:
- Determinism by seed (byte-identical serialized repositories)
- Long-tail popularity across videos
- Intra-video decay and spikes
- SynthSpec range validation

RUNNING TESTS:
    uv run pytest tests/python/test_synth.py -v
"""

import numpy as np
import pytest

from src.analysis.repository import dumps_repository
from src.analysis.synth import (
    build_synth_spec,
    popularity_curve,
    synthesize,
    video_id_for_rank,
)
from src.models.synth_inputs import SynthSpec
from src.utils.errors import InvalidSpec

# Fewer GOPs per video keeps generation fast where the GOP count does not matter
SHORT_VIDEOS = {"gop_count_range": (5, 30)}


class TestDeterminism:
    """One PCG64 stream per seed."""

    def test_same_seed_same_bytes(self):
        """Seed 42 twice serializes identically."""
        spec = SynthSpec(video_count=100, seed=42, **SHORT_VIDEOS)
        assert dumps_repository(synthesize(spec)) == dumps_repository(synthesize(spec))

    def test_different_seed_differs(self):
        """A new seed changes the GOP draws."""
        a = synthesize(SynthSpec(video_count=50, seed=1, **SHORT_VIDEOS))
        b = synthesize(SynthSpec(video_count=50, seed=2, **SHORT_VIDEOS))
        assert dumps_repository(a) != dumps_repository(b)

    def test_seed_recorded_on_repository(self):
        """The repository remembers the seed it came from."""
        repo = synthesize(SynthSpec(video_count=3, seed=9, **SHORT_VIDEOS))
        assert repo.synthesis_seed == 9


class TestPopularity:
    """Zipf-like popularity across videos."""

    def test_videos_in_rank_order(self):
        """Video views never increase with rank, ids follow rank."""
        repo = synthesize(SynthSpec(video_count=200, seed=3, **SHORT_VIDEOS))
        views = [video.video_views for video in repo.videos]

        assert views == sorted(views, reverse=True)
        assert repo.videos[0].video_views == 50_000
        assert [v.id for v in repo.videos] == sorted(v.id for v in repo.videos)

    def test_curve_formula(self):
        """views_j = round(max / j^exponent)."""
        curve = popularity_curve(4, 1000, 1.0)
        assert curve == [1000, 500, 333, 250]

    def test_top_decile_holds_most_views_at_full_scale(self):
        """At 50,000 videos the top 10% of videos hold over half the views."""
        spec = SynthSpec.full_scale(seed=0)
        curve = np.array(
            popularity_curve(spec.video_count, spec.max_video_views, spec.video_popularity_exponent)
        )

        top = np.sort(curve)[::-1][: spec.video_count // 10]

        assert top.sum() / curve.sum() > 0.5

    def test_tail_heavier_than_exponential(self):
        """Videos deep in the tail still get views."""
        curve = popularity_curve(50_000, 50_000, 0.8)
        assert curve[49_499] > 0

    def test_id_width_grows_with_count(self):
        """Ids stay sortable past a million videos."""
        assert video_id_for_rank(7, 1000) == "v000007"
        assert video_id_for_rank(7, 1_000_000) == "v0000007"


class TestIntraVideoViews:
    """GOP views decay from the start, with random spikes."""

    def test_no_spikes_means_non_increasing_views(self):
        """decay 0.5 without spikes: GOP 0 is the peak and views never rise."""
        spec = SynthSpec(
            video_count=20, seed=4, intra_video_decay=0.5, random_spike_prob=0.0,
            max_video_views=1000, **SHORT_VIDEOS,
        )
        for video in synthesize(spec).videos:
            views = [gop.views for gop in video.gops]
            assert views == sorted(views, reverse=True)
            assert views[0] == max(views) == video.video_views

    def test_spikes_appear_mid_video(self):
        """With every GOP spiked, some later GOP beats the geometric curve."""
        spec = SynthSpec(video_count=5, seed=8, random_spike_prob=1.0, **SHORT_VIDEOS)
        repo = synthesize(spec)
        above_curve = [
            gop
            for video in repo.videos
            for gop in video.gops[1:]
            if gop.views > round(video.video_views * spec.intra_video_decay**gop.index)
        ]
        assert above_curve

    def test_first_gop_never_spiked(self):
        """GOP 0 always carries the video's views."""
        spec = SynthSpec(video_count=30, seed=5, random_spike_prob=1.0, **SHORT_VIDEOS)
        for video in synthesize(spec).videos:
            assert video.gops[0].views == video.video_views

    def test_fields_respect_ranges(self):
        """Every draw lies inside its configured range."""
        spec = SynthSpec(video_count=100, seed=10, **SHORT_VIDEOS)
        for video in synthesize(spec).videos:
            assert 5 <= len(video.gops) <= 30
            for gop in video.gops:
                assert 500.0 <= gop.size_mb <= 2000.0
                assert 0.5 <= gop.transcode_time_s <= 1.5
                assert 0 <= gop.views <= video.video_views

    def test_linear_transcode_model(self):
        """'linear' maps the smallest sizes to the shortest times."""
        spec = SynthSpec(video_count=10, seed=12, transcode_model="linear", **SHORT_VIDEOS)
        gops = [gop for video in synthesize(spec).videos for gop in video.gops]
        gops.sort(key=lambda g: g.size_mb)
        times = [g.transcode_time_s for g in gops]

        assert times == sorted(times)
        assert all(0.5 <= t <= 1.5 for t in times)

    def test_linear_model_with_fixed_size(self):
        """A degenerate size range gives the minimum time everywhere."""
        spec = SynthSpec(
            video_count=3, seed=1, transcode_model="linear",
            gop_size_mb_range=(1000.0, 1000.0), **SHORT_VIDEOS,
        )
        for video in synthesize(spec).videos:
            assert {gop.transcode_time_s for gop in video.gops} == {0.5}


class TestSynthSpecValidation:
    """Range invariants surface as InvalidSpec."""

    def test_presets(self):
        """small is 1,000 videos, full_scale is 50,000."""
        assert SynthSpec.small(seed=3).video_count == 1000
        assert SynthSpec.full_scale(seed=3).video_count == 50_000
        assert SynthSpec.small(seed=3).seed == 3

    def test_zero_videos(self):
        """video_count must be at least 1."""
        with pytest.raises(InvalidSpec, match="video_count"):
            build_synth_spec(video_count=0)

    def test_inverted_range(self):
        """min > max is rejected."""
        with pytest.raises(InvalidSpec, match="gop_size_mb_range"):
            build_synth_spec(gop_size_mb_range=(2000.0, 500.0))

    def test_non_positive_lower_bound(self):
        """Sizes, times and GOP counts start above zero."""
        with pytest.raises(InvalidSpec, match="transcode_time_s_range"):
            build_synth_spec(transcode_time_s_range=(0.0, 1.0))

    @pytest.mark.parametrize("decay", [0.0, 1.0, 1.5])
    def test_decay_must_be_a_fraction(self, decay):
        """Decay lies strictly between 0 and 1."""
        with pytest.raises(InvalidSpec):
            build_synth_spec(intra_video_decay=decay)

    def test_invalid_spec_is_a_value_error(self):
        """InvalidSpec is caught by plain ValueError handlers."""
        with pytest.raises(ValueError):
            build_synth_spec(random_spike_prob=2.0)
