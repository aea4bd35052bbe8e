"""
Shared fixtures for the GOP tiering simulator tests.
"""

import pytest

from src.analysis.pricing import default_catalog
from src.models.repository_inputs import Gop, Repository, Video


def make_video(video_id, gops, video_views=None):
    """
    Build a Video from (size_mb, views, transcode_time_s) triples.

    video_views defaults to the most viewed GOP.
    """
    built = [
        Gop(video_id=video_id, index=i, size_mb=size, views=views, transcode_time_s=time_s)
        for i, (size, views, time_s) in enumerate(gops)
    ]
    peak = max(views for _, views, _ in gops)
    return Video(id=video_id, gops=built, video_views=peak if video_views is None else video_views)


@pytest.fixture
def catalog():
    """S3 list prices with a 0.20 USD/hour VM, independent of the environment."""
    return default_catalog(vm_hourly_rate=0.20)


@pytest.fixture
def tiny_repository():
    """
    Four videos, ten GOPs.

    v1 is the most viewed, v4 the least. v2 has one cold GOP (views below
    5% of its peak) so GOP-level selection differs from video-level.
    """
    return Repository(
        videos=[
            make_video("v1", [(1000.0, 900, 1.0), (800.0, 1000, 0.8), (1200.0, 700, 1.2)]),
            make_video("v2", [(600.0, 400, 0.6), (900.0, 10, 0.9), (700.0, 350, 0.7)]),
            make_video("v3", [(1500.0, 100, 1.5), (500.0, 80, 0.5)]),
            make_video("v4", [(2000.0, 5, 1.0), (1000.0, 3, 0.5)]),
        ],
        synthesis_seed=7,
    )
