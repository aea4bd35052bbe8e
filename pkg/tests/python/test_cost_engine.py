"""
Tests for the placement policy cost engine.

These tests verify:
- Per-cluster storage arithmetic and re-transcoding cost
- Semantics of the five policies on hand-built repositories
- Additivity, price linearity and storage dominance over random instances
- total_cost and error handling

RUNNING TESTS:
    uv run pytest tests/python/test_cost_engine.py -v
"""

import math

import numpy as np
import pytest

from src.analysis.cost_engine import (
    GopTable,
    cluster_storage_cost,
    evaluate_all,
    evaluate_policy,
    storage_to_transcode_ratio,
    total_cost,
    transcode_cost,
)
from src.analysis.pricing import scale_catalog
from src.analysis.repository import repository_totals, select_favs
from src.analysis.synth import synthesize
from src.models.cost_inputs import ALL_POLICIES, CostBreakdown, PolicyId
from src.models.repository_inputs import FavSelection, Gop, Repository
from src.models.synth_inputs import SynthSpec
from src.utils.errors import EmptyInput, InconsistentSelection, NegativeSize

from conftest import make_video


def random_instance(rng):
    """A small synthesized repository with a random FAV fraction."""
    spec = SynthSpec(
        video_count=int(rng.integers(5, 40)),
        seed=int(rng.integers(0, 1_000_000)),
        gop_count_range=(2, 15),
        max_video_views=int(rng.integers(100, 50_000)),
    )
    repo = synthesize(spec)
    favs = select_favs(repo, float(rng.uniform(0.05, 0.5)))
    return repo, favs


class TestStorageArithmetic:
    """(sum of sizes in MB) × price / 2^10."""

    def test_2048_mb_at_standard(self):
        """2048 MB at 0.023 USD/GB-month is 0.046 USD."""
        assert cluster_storage_cost([1024.0, 512.0, 512.0], 0.023) == pytest.approx(0.046, rel=1e-12)

    def test_1024_mb_at_glacier(self):
        """1 GB at 0.001 is 0.001."""
        assert cluster_storage_cost([1024.0], 0.001) == pytest.approx(0.001, rel=1e-12)

    def test_empty_cluster_costs_nothing(self):
        """An empty cluster stores nothing."""
        assert cluster_storage_cost([], 0.023) == 0.0

    def test_four_tier_ladder(self, catalog):
        """2048/1024/512/256 MB on the four tiers matches the hand formula."""
        sizes = {"Standard": 2048.0, "StandardIA": 1024.0, "OneZoneIA": 512.0, "Glacier": 256.0}
        total = sum(
            cluster_storage_cost([size], catalog.tier(tier).price_per_gb_month)
            for tier, size in sizes.items()
        )
        expected = (2048 * 0.023 + 1024 * 0.0125 + 512 * 0.01 + 256 * 0.001) / 1024
        assert total == pytest.approx(expected, rel=1e-9)

    def test_four_tier_ladder_through_gop_clustering(self, catalog):
        """The same ladder priced by the GOP clustering policy."""
        video = make_video(
            "v1",
            [(2048.0, 1000, 1.0), (1024.0, 500, 1.0), (512.0, 100, 1.0), (256.0, 10, 1.0)],
        )
        repo = Repository(videos=[video])
        favs = select_favs(repo, 1.0, gop_hotness_threshold=0.0)

        breakdown = evaluate_policy(PolicyId.GOP_CLUSTERING, repo, favs, catalog)

        expected = (2048 * 0.023 + 1024 * 0.0125 + 512 * 0.01 + 256 * 0.001) / 1024
        assert breakdown.storage_usd == pytest.approx(expected, rel=1e-9)
        assert breakdown.compute_usd == 0.0
        assert breakdown.per_cluster_usd[0] == pytest.approx(0.046, rel=1e-12)
        assert breakdown.per_tier_usd["Glacier"] == pytest.approx(0.00025, rel=1e-12)

    @pytest.mark.parametrize("sizes, price", [([-1.0], 0.023), ([0.0], 0.023), ([10.0], 0.0)])
    def test_non_positive_inputs(self, sizes, price):
        """Sizes and prices must be positive."""
        with pytest.raises(NegativeSize):
            cluster_storage_cost(sizes, price)


class TestTranscodeCost:
    """views × seconds × hourly rate / 3600."""

    def test_one_vm_hour(self):
        """3600 one-second transcodes at 0.20/hour cost 0.20."""
        gop = Gop(video_id="v", index=0, size_mb=1.0, views=3600, transcode_time_s=1.0)
        assert transcode_cost(gop, 0.20) == pytest.approx(0.20, rel=1e-12)

    def test_no_views_no_cost(self):
        """An unwatched GOP costs nothing to leave un-stored."""
        gop = Gop(video_id="v", index=0, size_mb=1.0, views=0, transcode_time_s=1.0)
        assert transcode_cost(gop, 0.20) == 0.0

    def test_full_re_matches_per_view_accumulation(self, tiny_repository, catalog):
        """Charging every simulated view one by one gives the same compute cost."""
        favs = select_favs(tiny_repository, 0.5)
        accumulated = []
        for gop in tiny_repository.gops():
            for _ in range(gop.views):
                accumulated.append(gop.transcode_time_s * catalog.vm_hourly_rate / 3600)

        breakdown = evaluate_policy(PolicyId.FULL_RE_TRANSCODING, tiny_repository, favs, catalog)

        assert breakdown.compute_usd == pytest.approx(math.fsum(accumulated), rel=1e-9)
        assert breakdown.transcoded_views == len(accumulated)

    def test_storage_to_transcode_ratio(self, catalog):
        """Hot GOPs are worth storing, unwatched ones never are."""
        hot = Gop(video_id="v", index=0, size_mb=1000.0, views=10_000, transcode_time_s=1.0)
        cold = Gop(video_id="v", index=1, size_mb=1000.0, views=0, transcode_time_s=1.0)
        standard = catalog.hottest_tier()

        assert storage_to_transcode_ratio(hot, standard, catalog.vm_hourly_rate) < 1.0
        assert storage_to_transcode_ratio(cold, standard, catalog.vm_hourly_rate) == math.inf


class TestPolicies:
    """Per-policy semantics on the tiny fixture."""

    def test_full_pre_is_total_size_at_standard(self, tiny_repository, catalog):
        """Everything stored at 0.023, nothing transcoded."""
        favs = select_favs(tiny_repository, 0.5)
        breakdown = evaluate_policy(PolicyId.FULL_PRE_TRANSCODING, tiny_repository, favs, catalog)

        size = repository_totals(tiny_repository).total_size_mb
        assert breakdown.total_usd == pytest.approx(size * 0.023 / 1024, rel=1e-12)
        assert breakdown.compute_usd == 0.0
        assert breakdown.stored_gops == 10
        assert breakdown.per_tier_usd.keys() == {"Standard"}

    def test_full_re_stores_nothing(self, tiny_repository, catalog):
        """Storage is zero and every view is transcoded."""
        favs = select_favs(tiny_repository, 0.5)
        breakdown = evaluate_policy(PolicyId.FULL_RE_TRANSCODING, tiny_repository, favs, catalog)

        assert breakdown.storage_usd == 0.0
        assert breakdown.per_tier_usd == {}
        assert breakdown.transcoded_views == repository_totals(tiny_repository).total_views

    def test_full_re_with_no_views_is_free(self, catalog):
        """No accesses, no transcodes."""
        repo = Repository(videos=[make_video("v1", [(100.0, 0, 1.0), (200.0, 0, 1.0)])])
        favs = select_favs(repo, 1.0)
        assert evaluate_policy(PolicyId.FULL_RE_TRANSCODING, repo, favs, catalog).total_usd == 0.0

    def test_partial_pre_stores_fav_gops_at_standard(self, tiny_repository, catalog):
        """FAV GOPs at Standard; the cold v2 GOP and non-FAV videos are transcoded."""
        favs = select_favs(tiny_repository, 0.5)
        breakdown = evaluate_policy(PolicyId.PARTIAL_PRE_TRANSCODING, tiny_repository, favs, catalog)

        stored_mb = 1000 + 800 + 1200 + 600 + 700
        transcoded = [(10, 0.9), (100, 1.5), (80, 0.5), (5, 1.0), (3, 0.5)]
        compute = math.fsum(v * t * 0.20 / 3600 for v, t in transcoded)

        assert breakdown.storage_usd == pytest.approx(stored_mb * 0.023 / 1024, rel=1e-12)
        assert breakdown.compute_usd == pytest.approx(compute, rel=1e-12)
        assert breakdown.stored_gops == 5
        assert breakdown.transcoded_views == 198

    def test_video_clustering_stores_whole_fav_videos(self, tiny_repository, catalog):
        """Both FAV videos are stored in full, including v2's cold GOP."""
        favs = select_favs(tiny_repository, 0.5)
        breakdown = evaluate_policy(PolicyId.VIDEO_CLUSTERING, tiny_repository, favs, catalog)

        # two FAV videos -> two clusters on the two hottest tiers
        assert breakdown.per_tier_usd == pytest.approx(
            {"Standard": 3000 * 0.023 / 1024, "StandardIA": 2200 * 0.0125 / 1024}
        )
        assert breakdown.stored_gops == 6
        assert breakdown.transcoded_views == 100 + 80 + 5 + 3
        assert len(breakdown.per_cluster_usd) == 2

    def test_gop_clustering_uses_four_tiers(self, tiny_repository, catalog):
        """Five FAV GOPs fill all four clusters."""
        favs = select_favs(tiny_repository, 0.5)
        breakdown = evaluate_policy(PolicyId.GOP_CLUSTERING, tiny_repository, favs, catalog)

        assert len(breakdown.per_cluster_usd) == 4
        assert breakdown.per_tier_usd.keys() == {"Standard", "StandardIA", "OneZoneIA", "Glacier"}
        assert breakdown.stored_gops == 5

    def test_evaluate_all_returns_every_policy(self, tiny_repository, catalog):
        """One breakdown per policy, in the requested order."""
        favs = select_favs(tiny_repository, 0.5)
        breakdowns = evaluate_all(tiny_repository, favs, catalog)
        assert list(breakdowns) == ALL_POLICIES
        assert all(b.policy == p for p, b in breakdowns.items())

    def test_shared_table_gives_same_costs(self, tiny_repository, catalog):
        """Passing a pre-built GopTable does not change any cost."""
        favs = select_favs(tiny_repository, 0.5)
        table = GopTable.from_repository(tiny_repository)
        assert evaluate_all(tiny_repository, favs, catalog, table=table) == evaluate_all(
            tiny_repository, favs, catalog
        )

    def test_selection_from_another_repository(self, tiny_repository, catalog):
        """A selection built on a different repository is rejected."""
        other = Repository(videos=[make_video("x", [(1.0, 1, 0.5)])])
        favs = select_favs(other, 1.0)
        with pytest.raises(InconsistentSelection):
            evaluate_policy(PolicyId.GOP_CLUSTERING, tiny_repository, favs, catalog)

    def test_selection_with_unknown_gop(self, tiny_repository, catalog):
        """A FAV GOP index past the end of its video is rejected."""
        favs = FavSelection(
            fav_video_ids=frozenset({"v1", "v2"}),
            fav_gops=frozenset({("v1", 0), ("v1", 9)}),
            fav_fraction=0.5,
            repository_size=4,
        )
        with pytest.raises(InconsistentSelection):
            evaluate_policy(PolicyId.PARTIAL_PRE_TRANSCODING, tiny_repository, favs, catalog)

    def test_selection_with_negative_gop_index(self, catalog):
        """A negative index never aliases onto a neighbouring video's GOP."""
        repo = Repository(
            videos=[make_video("v1", [(100.0, 50, 0.5)]), make_video("v2", [(900.0, 1, 0.5)])]
        )
        favs = FavSelection.model_construct(
            fav_video_ids=frozenset({"v1"}),
            fav_gops=frozenset({("v1", -1)}),
            fav_fraction=0.5,
            gop_hotness_threshold=0.05,
            repository_size=2,
        )
        with pytest.raises(InconsistentSelection):
            evaluate_policy(PolicyId.PARTIAL_PRE_TRANSCODING, repo, favs, catalog)

    def test_selection_from_lookalike_repository(self, catalog):
        """Same ids and GOP counts, different views: the selection does not carry over."""
        source = Repository(videos=[make_video("v1", [(100.0, 1000, 0.5), (100.0, 10, 0.5)])])
        target = Repository(videos=[make_video("v1", [(100.0, 10, 0.5), (100.0, 1000, 0.5)])])
        favs = select_favs(source, 0.5, 0.5)

        with pytest.raises(InconsistentSelection, match="not derived"):
            evaluate_policy(PolicyId.PARTIAL_PRE_TRANSCODING, target, favs, catalog)
        with pytest.raises(InconsistentSelection):
            evaluate_all(target, favs, catalog)


class TestCostProperties:
    """Invariants over 100 random instances each."""

    def test_storage_dominance(self, catalog):
        """GOP clustering never stores for more than partial pre-transcoding, same compute."""
        rng = np.random.default_rng(100)
        for _ in range(100):
            repo, favs = random_instance(rng)
            table = GopTable.from_repository(repo)
            gop = evaluate_policy(PolicyId.GOP_CLUSTERING, repo, favs, catalog, table=table)
            partial = evaluate_policy(PolicyId.PARTIAL_PRE_TRANSCODING, repo, favs, catalog, table=table)

            assert gop.storage_usd <= partial.storage_usd * (1 + 1e-12)
            assert gop.compute_usd == partial.compute_usd

    def test_additivity(self, catalog):
        """total = storage + compute, storage = sum of tiers = sum of clusters."""
        rng = np.random.default_rng(101)
        for _ in range(100):
            repo, favs = random_instance(rng)
            for breakdown in evaluate_all(repo, favs, catalog).values():
                assert breakdown.total_usd == pytest.approx(
                    breakdown.storage_usd + breakdown.compute_usd, rel=1e-9
                )
                assert breakdown.storage_usd == pytest.approx(
                    math.fsum(breakdown.per_tier_usd.values()), rel=1e-9, abs=1e-15
                )
                if breakdown.per_cluster_usd:
                    assert breakdown.storage_usd == pytest.approx(
                        math.fsum(breakdown.per_cluster_usd.values()), rel=1e-9
                    )

    @pytest.mark.parametrize("factor", [0.5, 2.0, 10.0])
    def test_price_linearity(self, catalog, factor):
        """Scaling every price and the VM rate scales every total."""
        rng = np.random.default_rng(int(factor * 10))
        scaled = scale_catalog(catalog, factor)
        for _ in range(100):
            repo, favs = random_instance(rng)
            table = GopTable.from_repository(repo)
            base = evaluate_all(repo, favs, catalog, table=table)
            rescaled = evaluate_all(repo, favs, scaled, table=table)
            for policy in ALL_POLICIES:
                assert rescaled[policy].total_usd == pytest.approx(
                    factor * base[policy].total_usd, rel=1e-9, abs=1e-15
                )

    def test_full_pre_ignores_views_and_vm_rate(self, catalog):
        """FullPre depends on sizes and the Standard price only."""
        rng = np.random.default_rng(102)
        repo, favs = random_instance(rng)
        expensive_vm = catalog.model_copy(update={"vm_hourly_rate": 9.0})

        a = evaluate_policy(PolicyId.FULL_PRE_TRANSCODING, repo, favs, catalog)
        b = evaluate_policy(PolicyId.FULL_PRE_TRANSCODING, repo, favs, expensive_vm)
        assert a == b

    def test_totals_non_negative(self, catalog):
        """No policy ever has a negative component."""
        rng = np.random.default_rng(103)
        for _ in range(100):
            repo, favs = random_instance(rng)
            for b in evaluate_all(repo, favs, catalog).values():
                assert min(b.storage_usd, b.compute_usd, b.total_usd) >= 0.0


class TestTotalCost:
    """Exact sums of totals."""

    def test_per_cluster_sum(self):
        """0.046 + 0.020 + 0.010 + 0.001 = 0.077."""
        assert total_cost([0.046, 0.020, 0.010, 0.001]) == pytest.approx(0.077, rel=1e-12)

    def test_single_breakdown_is_identity(self):
        """One breakdown sums to its own total."""
        b = CostBreakdown.build(PolicyId.FULL_RE_TRANSCODING, per_tier_usd={}, compute_usd=1.25)
        assert total_cost([b]) == 1.25

    def test_permutation_invariant(self):
        """Any order of the same costs gives the same sum, bit for bit."""
        rng = np.random.default_rng(0)
        costs = rng.uniform(0, 1e6, 200).tolist()
        expected = total_cost(costs)
        for _ in range(20):
            assert total_cost(rng.permutation(costs).tolist()) == expected

    def test_empty_list(self):
        """Summing nothing is an error."""
        with pytest.raises(EmptyInput):
            total_cost([])

    def test_breakdown_invariant_enforced(self):
        """A total that is not storage + compute is rejected."""
        with pytest.raises(ValueError):
            CostBreakdown(
                policy=PolicyId.FULL_PRE_TRANSCODING,
                storage_usd=1.0,
                compute_usd=0.0,
                total_usd=2.0,
                per_tier_usd={"Standard": 1.0},
            )
