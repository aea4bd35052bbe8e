#!/usr/bin/env python3
"""
GOP Tiering Simulator CLI

This module provides the `storage-sim` command: synthesize repositories,
price placement policies, dump clusterings, run FAV sweeps and render reports.

ARCHITECTURE NOTE:
This is Layer 3 of our 3-layer architecture:
    Layer 1: Pydantic Models - Data validation
    Layer 2: Calculators - synth, clustering, cost engine, sweep, report
    Layer 3: CLI Interface (THIS FILE) - Scripted use

USAGE:
    # Synthesize the 1,000-video preset
    storage-sim synth --videos 1000 --seed 42 -o data/repo.jsonl

    # Price one policy at 30% FAV
    storage-sim cost data/repo.jsonl --policy gop-clustering --fav-pct 0.30

    # Cluster scatter dump for plotting
    storage-sim cluster data/repo.jsonl --fav-pct 0.3 -o results/clusters.csv

    # Full sweep from a manifest, 4 worker processes
    storage-sim sweep data/sweep_small.yaml --jobs 4 -o results/small

    # Report from a rows CSV (sweep output or a published cost table)
    storage-sim report data/published_costs.csv

EXIT CODES:
    0    success, every requested output written
    1    IO failure, runtime failure, or some sweep cells failed
    2    invalid arguments or invalid spec/catalog
    130  interrupted
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from src import __version__
from src.config import SimConfig
from src.models.clustering_inputs import ClusteringConfig
from src.models.cost_inputs import POLICY_CLI_NAMES, CostBreakdown, PolicyId
from src.models.pricing_inputs import PricingCatalog
from src.models.sweep_inputs import SweepResult, SweepRow
from src.analysis.clustering import cluster_dump_rows, cluster_fav_gops, fav_gops_in_order
from src.analysis.cost_engine import evaluate_policy, storage_to_transcode_ratio
from src.analysis.pricing import default_catalog, dump_catalog, resolve_catalog
from src.analysis.repository import (
    read_repository,
    repository_totals,
    select_favs,
    write_repository,
)
from src.analysis.synth import build_synth_spec, synthesize
from src.reports.sweep_report import (
    load_rows_csv,
    render_report,
    rows_frame,
    write_cluster_dump,
    write_report,
    write_rows_csv,
)
from src.strategies.sweep import SweepRunner, assemble_result, load_sweep_spec, result_from_rows
from src.utils.errors import (
    BadK,
    ClusterCountMismatch,
    InvalidSpec,
    MalformedCatalog,
    PartialFailure,
    StorageSimError,
)

logger = logging.getLogger(__name__)

# Errors caused by what the user asked for, reported with exit code 2
USAGE_ERRORS = (InvalidSpec, MalformedCatalog, BadK, ClusterCountMismatch)


def _fraction(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0, 1], got {value} (use 0.30 for 30%)")
    return value


def _threshold(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in [0, 1], got {value}")
    return value


def _policy(text: str) -> PolicyId:
    try:
        return PolicyId.from_cli_name(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _progress(message: str) -> None:
    print(message, file=sys.stderr)


def _clustering_config(args: argparse.Namespace) -> ClusteringConfig:
    return ClusteringConfig(
        method=args.method,
        seed=getattr(args, "cluster_seed", 0),
        restarts=getattr(args, "restarts", 1),
    )


# ---------------------------------------------------------------------------
# synth
# ---------------------------------------------------------------------------


def cmd_synth(args: argparse.Namespace, catalog: PricingCatalog) -> int:
    """Write a synthesized repository and print its totals."""
    fields = dict(SimConfig.load_document(args.spec)) if args.spec else {}
    if args.preset == "full-scale":
        fields.setdefault("video_count", 50_000)
    overrides = {
        "video_count": args.videos,
        "seed": args.seed,
        "transcode_model": args.transcode_model,
        "max_video_views": args.max_video_views,
    }
    fields.update({key: value for key, value in overrides.items() if value is not None})
    spec = build_synth_spec(**fields)

    _progress(f"🧮 Synthesizing {spec.video_count:,} videos (seed {spec.seed})...")
    repo = synthesize(spec)
    path = write_repository(repo, args.output)
    _progress(f"💾 Saved to: {path}")

    totals = repository_totals(repo)
    print(
        f"videos={totals.video_count} gops={totals.gop_count} "
        f"total_size_mb={totals.total_size_mb:.3f} total_views={totals.total_views}"
    )
    return 0


# ---------------------------------------------------------------------------
# cost
# ---------------------------------------------------------------------------


def format_breakdown_human(breakdown: CostBreakdown, fav_pct: float, not_worth_storing: int) -> str:
    """
    Human-readable cost breakdown.

    Per-cluster lines are labeled C1..C4, hottest cluster first.
    """
    lines = [
        "=" * 60,
        f"💰 {breakdown.policy.value} at {fav_pct:.0%} FAV",
        "=" * 60,
        f"  Storage:            ${breakdown.storage_usd:>14,.4f}",
        f"  Re-transcoding:     ${breakdown.compute_usd:>14,.4f}",
        f"  Total:              ${breakdown.total_usd:>14,.4f}",
        "",
    ]
    if breakdown.per_tier_usd:
        lines.append("  Per tier:")
        for tier_id, cost in breakdown.per_tier_usd.items():
            lines.append(f"    {tier_id:<16}  ${cost:>14,.4f}")
    if breakdown.per_cluster_usd:
        lines.append("  Per cluster:")
        for label, cost in sorted(breakdown.per_cluster_usd.items()):
            lines.append(f"    C{label + 1:<15}  ${cost:>14,.4f}")
    lines.extend(
        [
            "",
            f"  Stored GOPs:        {breakdown.stored_gops:>15,}",
            f"  Re-transcoded views:{breakdown.transcoded_views:>15,}",
            f"  FAV GOPs cheaper to re-transcode than to keep in the rank-1 tier: {not_worth_storing:,}",
        ]
    )
    return "\n".join(lines)


def cmd_cost(args: argparse.Namespace, catalog: PricingCatalog) -> int:
    """Price one policy on a repository file."""
    _progress(f"📥 Reading {args.repository}...")
    repo = read_repository(args.repository)
    favs = select_favs(repo, args.fav_pct, args.threshold)

    _progress(f"🧮 Pricing {args.policy.cli_name}...")
    breakdown = evaluate_policy(args.policy, repo, favs, catalog, _clustering_config(args))

    hottest = catalog.hottest_tier()
    not_worth_storing = sum(
        1
        for gop in fav_gops_in_order(repo, favs)
        if storage_to_transcode_ratio(gop, hottest, catalog.vm_hourly_rate) >= 1.0
    )

    if args.format == "json":
        record = {
            "fav_pct": args.fav_pct,
            "seed": repo.synthesis_seed,
            **breakdown.model_dump(mode="json"),
            "fav_gops_not_worth_storing": not_worth_storing,
        }
        print(json.dumps(record, indent=2))
    else:
        print(format_breakdown_human(breakdown, args.fav_pct, not_worth_storing))

    if args.append_csv:
        row = SweepRow(
            fav_pct=args.fav_pct,
            seed=repo.synthesis_seed or 0,
            policy=args.policy,
            total_usd=breakdown.total_usd,
            breakdown=breakdown,
        )
        single = assemble_result([row.fav_pct], [row.seed], [row.policy], [row])
        path = Path(args.append_csv)
        path.parent.mkdir(parents=True, exist_ok=True)
        rows_frame(single).to_csv(path, mode="a", header=not path.exists(), index=False)
        _progress(f"💾 Appended to: {path}")
    return 0


# ---------------------------------------------------------------------------
# cluster
# ---------------------------------------------------------------------------


def cmd_cluster(args: argparse.Namespace, catalog: PricingCatalog) -> int:
    """Cluster FAV GOPs by views and write the scatter dump."""
    _progress(f"📥 Reading {args.repository}...")
    repo = read_repository(args.repository)
    favs = select_favs(repo, args.fav_pct, args.threshold)

    _progress(f"🧮 Clustering {len(favs.fav_gops):,} FAV GOPs...")
    result = cluster_fav_gops(repo, favs, _clustering_config(args), catalog)
    output = Path(args.output) if args.output else SimConfig.output_dir() / "clusters.csv"
    write_cluster_dump(cluster_dump_rows(result), output)
    _progress(f"💾 Saved to: {output}")

    clustering = result.clustering
    print(f"{'cluster':<8} {'tier':<12} {'gops':>8} {'mean views':>14}")
    for label in clustering.non_empty_labels():
        print(
            f"C{label + 1:<7} {result.assignment.tier_of(label):<12} "
            f"{clustering.sizes[label]:>8,} {clustering.centroids[label]:>14,.1f}"
        )
    print(f"objective={clustering.objective:.6g} method={clustering.method}")
    return 0


# ---------------------------------------------------------------------------
# sweep / report
# ---------------------------------------------------------------------------


def _write_sweep_outputs(
    result: SweepResult, runner: SweepRunner, output_dir: Path
) -> None:
    bundle = render_report(result, runner.spec.figure_policies or None)
    write_report(bundle, output_dir)
    write_rows_csv(result, output_dir / "rows.csv")
    write_cluster_dump(runner.cluster_rows, output_dir / "clusters.csv")
    print(bundle.summary_text)


def cmd_sweep(args: argparse.Namespace, catalog: PricingCatalog) -> int:
    """Run a sweep and write table, curves, summary, clusters and rows files."""
    overrides: dict[str, object] = {}
    if args.seeds:
        overrides["seeds"] = args.seeds
    if args.fav_pct:
        overrides["fav_percentages"] = args.fav_pct
    if args.output:
        overrides["output_dir"] = args.output
    if args.repository:
        overrides["repository_path"] = args.repository
    if args.videos is not None:
        overrides["synth"] = {"video_count": args.videos}
    if args.method:
        overrides["clustering"] = {"method": args.method}

    source = args.spec if args.spec else {}
    spec = load_sweep_spec(source, overrides)
    runner = SweepRunner(spec, catalog, jobs=args.jobs)
    _progress(
        f"🧮 Sweeping {len(spec.fav_percentages)} FAV levels × {len(spec.seeds)} seeds "
        f"({runner.jobs} job(s))..."
    )

    try:
        result = runner.run()
    except PartialFailure as e:
        for fav_pct, seed, message in e.failures:
            _progress(f"❌ fav={fav_pct:g} seed={seed}: {message}")
        if e.result.rows:
            _write_sweep_outputs(e.result, runner, spec.output_dir)
        raise

    _write_sweep_outputs(result, runner, spec.output_dir)
    _progress(f"✅ Wrote sweep outputs to: {spec.output_dir}")
    return 0


def cmd_report(args: argparse.Namespace, catalog: PricingCatalog) -> int:
    """Render a report from a rows CSV."""
    _progress(f"📥 Reading {args.rows}...")
    result = result_from_rows(load_rows_csv(args.rows))
    bundle = render_report(result)
    print(bundle.summary_text)
    if args.output:
        written = write_report(bundle, args.output)
        _progress(f"💾 Wrote {len(written)} file(s) to: {args.output}")
    return 0


COMMANDS = {
    "synth": cmd_synth,
    "cost": cmd_cost,
    "cluster": cmd_cluster,
    "sweep": cmd_sweep,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    catalog_text = dump_catalog(default_catalog(SimConfig.DEFAULT_VM_HOURLY_RATE))
    parser = argparse.ArgumentParser(
        prog="storage-sim",
        description="Cost simulator for view-clustered tiered storage of video GOPs",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Synthesize, then price the proposed policy
  %(prog)s synth --videos 1000 --seed 42 -o repo.jsonl
  %(prog)s cost repo.jsonl --policy gop-clustering --fav-pct 0.30

  # Sweep 5%%..30%% FAV over seeds 1..5
  %(prog)s sweep data/sweep_small.yaml -o results/small

  # Report a published cost table
  %(prog)s report data/published_costs.csv
        """,
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}\n\nEmbedded pricing catalog (S3 list prices):\n{catalog_text}",
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--catalog",
        type=str,
        default=None,
        help="Pricing catalog YAML (default: $STORAGE_SIM_CATALOG, else S3 list prices)",
    )
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging"
    )

    clustering = argparse.ArgumentParser(add_help=False)
    clustering.add_argument(
        "--method",
        choices=["exact", "lloyd"],
        default="exact",
        help="Clustering solver (default: exact)",
    )
    clustering.add_argument("--cluster-seed", type=int, default=0, help="Lloyd seeding seed")
    clustering.add_argument("--restarts", type=int, default=1, help="Lloyd runs, best kept")

    selection = argparse.ArgumentParser(add_help=False)
    selection.add_argument("repository", type=str, help="Repository file (JSON lines)")
    selection.add_argument(
        "--fav-pct", type=_fraction, default=0.30, help="FAV fraction (default: 0.30)"
    )
    selection.add_argument(
        "--threshold",
        type=_threshold,
        default=SimConfig.DEFAULT_GOP_HOTNESS_THRESHOLD,
        help="GOP hotness threshold relative to the video's peak (default: 0.05)",
    )

    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    synth = sub.add_parser("synth", parents=[common], help="Synthesize a repository")
    synth.add_argument("-o", "--output", required=True, help="Repository file to write")
    synth.add_argument("--spec", type=str, default=None, help="SynthSpec YAML (flags override)")
    synth.add_argument("--preset", choices=["small", "full-scale"], default="small")
    synth.add_argument("--videos", type=int, default=None, help="Number of videos")
    synth.add_argument("--seed", type=int, default=None, help="PRNG seed")
    synth.add_argument("--transcode-model", choices=["uniform", "linear"], default=None)
    synth.add_argument("--max-video-views", type=int, default=None)

    cost = sub.add_parser(
        "cost", parents=[common, selection, clustering], help="Price one policy"
    )
    cost.add_argument(
        "--policy",
        type=_policy,
        default=PolicyId.GOP_CLUSTERING,
        metavar="{" + ",".join(POLICY_CLI_NAMES.values()) + "}",
        help="Placement policy (default: gop-clustering)",
    )
    cost.add_argument("--format", choices=["human", "json"], default="human")
    cost.add_argument("--append-csv", type=str, default=None, help="Append the row to a CSV")

    cluster = sub.add_parser(
        "cluster", parents=[common, selection, clustering], help="Write the clusters.csv dump"
    )
    cluster.add_argument("-o", "--output", default=None, help="CSV path (default: <output dir>/clusters.csv)")

    sweep = sub.add_parser("sweep", parents=[common], help="Run a FAV-percentage sweep")
    sweep.add_argument("spec", nargs="?", default=None, help="SweepSpec YAML (optional)")
    sweep.add_argument("-o", "--output", default=None, help="Output directory")
    sweep.add_argument("--seeds", type=int, nargs="+", default=None)
    sweep.add_argument("--fav-pct", type=_fraction, nargs="+", default=None)
    sweep.add_argument("--videos", type=int, default=None, help="Override synth.video_count")
    sweep.add_argument("--repository", type=str, default=None, help="Use a repository file")
    sweep.add_argument("--method", choices=["exact", "lloyd"], default=None)
    sweep.add_argument(
        "--jobs", type=int, default=None, help="Worker processes (default: CPU count)"
    )

    report = sub.add_parser("report", parents=[common], help="Render a report from rows CSV")
    report.add_argument("rows", type=str, help="rows.csv or a totals-only cost fixture")
    report.add_argument("-o", "--output", default=None, help="Directory for table/curves/summary")

    return parser


def main(argv: list[str] | None = None) -> int:
    """
    Main CLI entry point.

    Returns:
        int: Exit code (0 success, 1 IO/runtime/partial failure, 2 usage, 130 cancelled)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0 if e.code is None else 2

    _configure_logging(args.verbose)

    try:
        catalog = resolve_catalog(args.catalog)
        return COMMANDS[args.command](args, catalog)
    except KeyboardInterrupt:
        print("\n⚠️  Operation cancelled by user", file=sys.stderr)
        return 130
    except USAGE_ERRORS as e:
        print(f"❌ ERROR: {e}", file=sys.stderr)
        return 2
    except PartialFailure as e:
        print(f"❌ ERROR: {e}", file=sys.stderr)
        return 1
    except (OSError, StorageSimError) as e:
        print(f"❌ ERROR: {e}", file=sys.stderr)
        return 1
    except Exception as e:
        print(f"❌ ERROR: {e}", file=sys.stderr)
        logger.debug("Unhandled error", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
