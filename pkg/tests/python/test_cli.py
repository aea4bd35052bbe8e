"""
Tests for the storage-sim command line.

The CLI is called in-process through main(argv), so exit codes, stdout and
written files can be checked without a subprocess.

RUNNING TESTS:
    uv run pytest tests/python/test_cli.py -v
"""

import json

import pandas as pd
import pytest

from src import __version__
from src.analysis.repository import read_repository, repository_totals
from src.cli.storage_sim import main
from src.config import SimConfig

SMALL = ["--videos", "12", "--seed", "42"]


@pytest.fixture
def repo_path(tmp_path):
    """A 12-video repository written by the synth command."""
    path = tmp_path / "repo.jsonl"
    assert main(["synth", *SMALL, "-o", str(path)]) == 0
    return path


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch, tmp_path):
    """No catalog or VM rate leaks in from the developer's environment."""
    monkeypatch.delenv("STORAGE_SIM_CATALOG", raising=False)
    monkeypatch.delenv("STORAGE_SIM_VM_HOURLY_RATE", raising=False)
    monkeypatch.setenv("STORAGE_SIM_OUTPUT_DIR", str(tmp_path / "results"))


class TestSynthCommand:
    """storage-sim synth"""

    def test_same_seed_writes_identical_files(self, tmp_path):
        """Two runs with seed 42 produce byte-identical repositories."""
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert main(["synth", *SMALL, "-o", str(a)]) == 0
        assert main(["synth", *SMALL, "-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_prints_totals(self, repo_path, capsys):
        """The totals line matches the written repository."""
        main(["synth", *SMALL, "-o", str(repo_path)])
        out = capsys.readouterr().out
        totals = repository_totals(read_repository(repo_path))

        assert f"videos=12 gops={totals.gop_count}" in out
        assert f"total_views={totals.total_views}" in out

    def test_spec_file_with_flag_override(self, tmp_path):
        """Flags override the YAML spec."""
        path = tmp_path / "repo.jsonl"
        spec = str(SimConfig.DATA_DIR / "synth_small.yaml")
        assert main(["synth", "--spec", spec, "--videos", "5", "-o", str(path)]) == 0

        repo = read_repository(path)
        assert len(repo.videos) == 5
        assert repo.synthesis_seed == 42

    def test_missing_output_is_usage_error(self):
        """-o is required."""
        assert main(["synth", "--videos", "10"]) == 2

    def test_zero_videos_is_usage_error(self, tmp_path, capsys):
        """An invalid spec exits with 2 and explains why."""
        assert main(["synth", "--videos", "0", "-o", str(tmp_path / "r.jsonl")]) == 2
        assert "video_count" in capsys.readouterr().err


class TestCostCommand:
    """storage-sim cost"""

    def test_full_pre_json(self, repo_path, capsys):
        """FullPre total is total size × 0.023 / 1024."""
        capsys.readouterr()
        code = main(["cost", str(repo_path), "--policy", "full-pre", "--format", "json"])
        record = json.loads(capsys.readouterr().out)
        size = repository_totals(read_repository(repo_path)).total_size_mb

        assert code == 0
        assert record["policy"] == "FullPreTranscoding"
        assert record["total_usd"] == pytest.approx(size * 0.023 / 1024, rel=1e-12)
        assert record["compute_usd"] == 0.0
        assert record["seed"] == 42

    def test_default_policy_human(self, repo_path, capsys):
        """Without --policy the proposed policy is priced."""
        capsys.readouterr()
        assert main(["cost", str(repo_path), "--fav-pct", "0.5"]) == 0
        out = capsys.readouterr().out
        assert "GopClustering at 50% FAV" in out
        assert "Per cluster:" in out

    def test_unknown_policy_is_usage_error(self, repo_path):
        """Policy names are validated by the parser."""
        assert main(["cost", str(repo_path), "--policy", "cheapest"]) == 2

    @pytest.mark.parametrize("fav", ["0", "1.5", "thirty"])
    def test_bad_fav_pct(self, repo_path, fav):
        """FAV fractions lie in (0, 1]."""
        assert main(["cost", str(repo_path), "--fav-pct", fav]) == 2

    def test_missing_repository_is_io_error(self, tmp_path, capsys):
        """A missing input file exits with 1."""
        assert main(["cost", str(tmp_path / "absent.jsonl")]) == 1
        assert "ERROR" in capsys.readouterr().err

    def test_append_csv(self, repo_path, tmp_path):
        """Each call appends one row under a single header."""
        out = tmp_path / "costs.csv"
        for policy in ("full-re", "gop-clustering"):
            assert main(["cost", str(repo_path), "--policy", policy, "--append-csv", str(out)]) == 0

        frame = pd.read_csv(out)
        assert list(frame["policy"]) == ["FullReTranscoding", "GopClustering"]

    def test_malformed_catalog_is_usage_error(self, repo_path, tmp_path):
        """A catalog with rising prices is rejected with 2."""
        catalog = tmp_path / "catalog.yaml"
        catalog.write_text(
            "vm_hourly_rate: 0.2\n"
            "tiers:\n"
            "  - {id: Standard, price_per_gb_month: 0.001, rank: 1}\n"
            "  - {id: StandardIA, price_per_gb_month: 0.0125, rank: 2}\n"
            "  - {id: OneZoneIA, price_per_gb_month: 0.01, rank: 3}\n"
            "  - {id: Glacier, price_per_gb_month: 0.023, rank: 4}\n"
        )
        assert main(["cost", str(repo_path), "--catalog", str(catalog)]) == 2


class TestClusterCommand:
    """storage-sim cluster"""

    def test_dump_labels(self, repo_path, tmp_path):
        """Every FAV GOP lands in one of the four clusters."""
        out = tmp_path / "clusters.csv"
        assert main(["cluster", str(repo_path), "--fav-pct", "0.5", "-o", str(out)]) == 0

        frame = pd.read_csv(out)
        assert list(frame.columns) == ["video_id", "gop_index", "size_mb", "views", "cluster_label", "tier_id"]
        assert set(frame["cluster_label"]) == {0, 1, 2, 3}

    def test_default_output_dir(self, repo_path, tmp_path):
        """Without -o the dump goes to the configured output directory."""
        assert main(["cluster", str(repo_path)]) == 0
        assert (tmp_path / "results" / "clusters.csv").exists()

    def test_lloyd_method(self, repo_path, tmp_path, capsys):
        """The Lloyd solver is selectable."""
        out = tmp_path / "clusters.csv"
        assert main(["cluster", str(repo_path), "--method", "lloyd", "--restarts", "3", "-o", str(out)]) == 0
        assert "method=lloyd" in capsys.readouterr().out


class TestSweepAndReportCommands:
    """storage-sim sweep / report"""

    def test_sweep_writes_every_file(self, tmp_path):
        """Table, curves, summary, clusters and rows files."""
        out = tmp_path / "sweep"
        code = main(
            ["sweep", "--videos", "15", "--seeds", "1", "2", "--fav-pct", "0.1", "0.3",
             "--jobs", "1", "-o", str(out)]
        )

        assert code == 0
        for name in ("table.csv", "curves.csv", "summary.txt", "clusters.csv", "rows.csv", "curves_hybrid.csv"):
            assert (out / name).exists(), name
        assert len(pd.read_csv(out / "rows.csv")) == 2 * 2 * 5

    def test_sweep_twice_identical_csvs(self, tmp_path):
        """Same arguments, byte-identical outputs."""
        args = ["sweep", "--videos", "10", "--seeds", "3", "--fav-pct", "0.2", "--jobs", "1"]
        assert main([*args, "-o", str(tmp_path / "a")]) == 0
        assert main([*args, "-o", str(tmp_path / "b")]) == 0
        for name in ("table.csv", "curves.csv", "rows.csv", "clusters.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_sweep_from_manifest(self, tmp_path):
        """A YAML manifest with flag overrides."""
        out = tmp_path / "manifest"
        spec = str(SimConfig.DATA_DIR / "sweep_small.yaml")
        code = main(
            ["sweep", spec, "--videos", "10", "--seeds", "1", "--fav-pct", "0.3", "--jobs", "1", "-o", str(out)]
        )
        assert code == 0
        assert len(pd.read_csv(out / "rows.csv")) == 5

    def test_sweep_partial_failure_exit_code(self, tmp_path):
        """Failed cells exit with 1."""
        code = main(
            ["sweep", "--repository", str(tmp_path / "missing.jsonl"), "--seeds", "1",
             "--fav-pct", "0.3", "-o", str(tmp_path / "out")]
        )
        assert code == 1

    def test_report_on_published_costs(self, tmp_path, capsys):
        """The published table reports the 18.75% saving."""
        out = tmp_path / "report"
        assert main(["report", str(SimConfig.DATA_DIR / "published_costs.csv"), "-o", str(out)]) == 0

        assert "18.75%" in capsys.readouterr().out
        assert (out / "table.csv").exists()

    def test_report_on_sweep_rows(self, tmp_path, capsys):
        """rows.csv written by sweep is accepted by report."""
        out = tmp_path / "sweep"
        main(["sweep", "--videos", "10", "--seeds", "1", "--fav-pct", "0.3", "--jobs", "1", "-o", str(out)])
        capsys.readouterr()

        assert main(["report", str(out / "rows.csv")]) == 0
        assert "GOP TIERING COST SWEEP" in capsys.readouterr().out

    def test_report_on_malformed_rows(self, tmp_path):
        """A broken rows file exits with 1."""
        path = tmp_path / "rows.csv"
        path.write_text("fav_pct,policy\n0.1,gop-clustering\n")
        assert main(["report", str(path)]) == 1


class TestVersion:
    """--version"""

    def test_version_prints_catalog(self, capsys):
        """Version and the embedded list prices."""
        assert main(["--version"]) == 0
        out = capsys.readouterr().out
        assert __version__ in out
        assert "Glacier" in out and "0.0125" in out

    def test_no_command_is_usage_error(self):
        """A subcommand is required."""
        assert main([]) == 2
