"""
Sweep Report Generator for the GOP tiering simulator

WHAT: Turns a SweepResult into cost tables, plotting curves and a summary
WHY: The comparison is read as a table (policies × FAV levels) and as curves
ARCHITECTURE: Layer 2 of 3-layer type-safe architecture

OUTPUT FILES (all in the sweep output directory):
    table.csv         fav_pct, then one mean-total column per policy
    curves.csv        fav_pct, policy, mean_usd, std_usd, n_seeds (long form)
    curves_hybrid.csv   curves.csv restricted to the hybrid policies
    summary.txt       human summary with the proposed policy's savings
    clusters.csv      video_id, gop_index, size_mb, views, cluster_label, tier_id
    rows.csv          every (fav_pct, seed, policy) row with its full breakdown

rows.csv is also the fixture-injection format read back by `load_rows_csv`:
only fav_pct, policy and total_usd are required, so a published cost table
can be reported without running any simulation.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path

import pandas as pd

from src.models.cost_inputs import CostBreakdown, PolicyId
from src.models.pricing_inputs import ALL_TIER_IDS
from src.models.sweep_inputs import ReportBundle, SweepResult, SweepRow
from src.analysis.clustering import CLUSTER_DUMP_COLUMNS
from src.strategies.sweep import compute_reduction
from src.utils.errors import DivisionByZero, EmptyResult, MalformedCostRows

logger = logging.getLogger(__name__)

PROPOSED_POLICY = PolicyId.GOP_CLUSTERING
REDUCTION_BASELINES = [PolicyId.VIDEO_CLUSTERING, PolicyId.PARTIAL_PRE_TRANSCODING]

TIER_COLUMNS = [f"{tier_id}_usd" for tier_id in ALL_TIER_IDS]
CLUSTER_COLUMNS = [f"C{label + 1}" for label in range(len(ALL_TIER_IDS))]
ROW_COLUMNS = (
    ["fav_pct", "seed", "policy", "storage_usd", "compute_usd", "total_usd"]
    + TIER_COLUMNS
    + CLUSTER_COLUMNS
    + ["stored_gops", "transcoded_views"]
)
CURVE_COLUMNS = ["fav_pct", "policy", "mean_usd", "std_usd", "n_seeds"]

_FLOAT_FORMAT = "%.6f"


def _curves_frame(result: SweepResult) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "fav_pct": agg.fav_pct,
                "policy": agg.policy.value,
                "mean_usd": agg.mean_usd,
                "std_usd": agg.std_usd,
                "n_seeds": agg.n_seeds,
            }
            for agg in result.aggregates
        ],
        columns=CURVE_COLUMNS,
    )


def _table_frame(curves: pd.DataFrame, policies: list[PolicyId]) -> pd.DataFrame:
    table = curves.pivot(index="fav_pct", columns="policy", values="mean_usd")
    table = table.reindex(columns=[p.value for p in policies if p.value in table.columns])
    table.columns.name = None
    return table.reset_index()


def _reductions(result: SweepResult) -> dict[str, float]:
    """GopClustering saving vs each baseline at the highest FAV level."""
    top = result.fav_percentages[-1]
    means = {agg.policy: agg.mean_usd for agg in result.aggregates if agg.fav_pct == top}
    if PROPOSED_POLICY not in means:
        return {}

    reductions: dict[str, float] = {}
    for baseline in REDUCTION_BASELINES:
        if baseline not in means:
            continue
        try:
            reductions[baseline.value] = compute_reduction(means[PROPOSED_POLICY], means[baseline])
        except DivisionByZero:
            logger.warning("Skipping reduction vs %s: zero baseline cost", baseline.value)
    return reductions


def _summary_text(result: SweepResult, table: pd.DataFrame, reductions: dict[str, float]) -> str:
    lines = [
        "=" * 70,
        "📊 GOP TIERING COST SWEEP",
        "=" * 70,
        f"FAV levels: {', '.join(f'{p:.0%}' for p in result.fav_percentages)}",
        f"Seeds:      {', '.join(str(s) for s in result.seeds)}",
        f"Policies:   {', '.join(p.value for p in result.policies)}",
        f"Rows:       {len(result.rows)}",
        "",
        "💰 MEAN TOTAL COST PER PERIOD (USD)",
        "-" * 70,
        table.to_string(index=False, float_format=lambda v: f"{v:,.2f}"),
        "",
    ]
    if reductions:
        top = result.fav_percentages[-1]
        lines.append(f"📉 {PROPOSED_POLICY.value} SAVINGS AT {top:.0%} FAV")
        lines.append("-" * 70)
        for baseline, fraction in reductions.items():
            lines.append(f"  vs {baseline:<24} {format_percent(fraction)}")
        lines.append("")
    if result.failures:
        lines.append(f"⚠️  {len(result.failures)} cell(s) failed and are missing from the table")
        lines.append("")
    return "\n".join(lines)


def render_report(
    result: SweepResult, figure_policies: list[PolicyId] | None = None
) -> ReportBundle:
    """
    Render the table, curves and summary of a sweep.

    Args:
        result: SweepResult (from run_sweep or result_from_rows)
        figure_policies: If given, also render curves restricted to these policies

    Returns:
        ReportBundle with CSV texts, summary text and the reduction fractions

    Raises:
        EmptyResult: the result has no rows
    """
    if not result.rows:
        raise EmptyResult("Cannot render a report for a sweep without rows")

    curves = _curves_frame(result)
    table = _table_frame(curves, result.policies)
    reductions = _reductions(result)

    figure_csv = None
    if figure_policies:
        keep = [p.value for p in figure_policies]
        figure_csv = curves[curves["policy"].isin(keep)].to_csv(index=False, float_format=_FLOAT_FORMAT)

    return ReportBundle(
        table_csv=table.to_csv(index=False, float_format=_FLOAT_FORMAT),
        curves_csv=curves.to_csv(index=False, float_format=_FLOAT_FORMAT),
        summary_text=_summary_text(result, table, reductions),
        figure_curves_csv=figure_csv,
        reductions=reductions,
    )


def rows_frame(result: SweepResult) -> pd.DataFrame:
    """Every sweep row with its breakdown flattened (empty cells when absent)."""
    records = []
    for row in result.rows:
        record: dict[str, object] = {
            "fav_pct": row.fav_pct,
            "seed": row.seed,
            "policy": row.policy.value,
            "total_usd": row.total_usd,
        }
        b = row.breakdown
        if b is not None:
            record.update(
                storage_usd=b.storage_usd,
                compute_usd=b.compute_usd,
                stored_gops=b.stored_gops,
                transcoded_views=b.transcoded_views,
            )
            record.update({f"{tier}_usd": cost for tier, cost in b.per_tier_usd.items()})
            record.update({f"C{label + 1}": cost for label, cost in b.per_cluster_usd.items()})
        records.append(record)
    frame = pd.DataFrame(records, columns=ROW_COLUMNS)
    return frame.astype({"stored_gops": "Int64", "transcoded_views": "Int64"})


def _optional(value: object) -> float | None:
    return None if pd.isna(value) else float(value)


def _breakdown_from_record(record: dict[str, object], policy: PolicyId) -> CostBreakdown | None:
    storage = _optional(record.get("storage_usd"))
    compute = _optional(record.get("compute_usd"))
    if storage is None or compute is None:
        return None
    per_tier = {
        tier: float(record[f"{tier}_usd"])
        for tier in ALL_TIER_IDS
        if _optional(record.get(f"{tier}_usd")) is not None
    }
    per_cluster = {
        label: float(record[column])
        for label, column in enumerate(CLUSTER_COLUMNS)
        if _optional(record.get(column)) is not None
    }
    return CostBreakdown(
        policy=policy,
        storage_usd=storage,
        compute_usd=compute,
        total_usd=float(record["total_usd"]),
        per_tier_usd=per_tier,
        per_cluster_usd=per_cluster,
        stored_gops=int(_optional(record.get("stored_gops")) or 0),
        transcoded_views=int(_optional(record.get("transcoded_views")) or 0),
    )


def load_rows_csv(path: Path | str) -> list[SweepRow]:
    """
    Read a rows.csv (or a totals-only fixture) back into SweepRows.

    Required columns: fav_pct, policy, total_usd. Optional: seed (default 0)
    and the breakdown columns; when present, each breakdown is re-validated.

    Raises:
        FileNotFoundError: path does not exist
        EmptyResult: file has no rows
        MalformedCostRows: missing columns, unknown policy, or broken invariants
    """
    frame = pd.read_csv(path, float_precision="round_trip")
    missing = {"fav_pct", "policy", "total_usd"} - set(frame.columns)
    if missing:
        raise MalformedCostRows(f"{path}: missing column(s) {', '.join(sorted(missing))}")
    if frame.empty:
        raise EmptyResult(f"{path}: no cost rows")

    rows: list[SweepRow] = []
    for lineno, record in enumerate(frame.to_dict(orient="records"), start=2):
        try:
            policy = PolicyId.from_cli_name(str(record["policy"]).strip())
            seed = record.get("seed", 0)
            rows.append(
                SweepRow(
                    fav_pct=float(record["fav_pct"]),
                    seed=0 if pd.isna(seed) else int(seed),
                    policy=policy,
                    total_usd=float(record["total_usd"]),
                    breakdown=_breakdown_from_record(record, policy),
                )
            )
        except ValueError as e:
            raise MalformedCostRows(f"{path}:{lineno}: {e}") from e
    logger.debug("Loaded %d cost rows from %s", len(rows), path)
    return rows


def write_report(bundle: ReportBundle, output_dir: Path | str) -> list[Path]:
    """Write table.csv, curves.csv, summary.txt (and curves_hybrid.csv if rendered)."""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    files = {
        "table.csv": bundle.table_csv,
        "curves.csv": bundle.curves_csv,
        "summary.txt": bundle.summary_text,
    }
    if bundle.figure_curves_csv is not None:
        files["curves_hybrid.csv"] = bundle.figure_curves_csv

    written = []
    for name, text in files.items():
        path = output_dir / name
        path.write_text(text, encoding="utf-8")
        written.append(path)
    return written


def write_rows_csv(result: SweepResult, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows_frame(result).to_csv(path, index=False)
    return path


def write_cluster_dump(rows: list[dict[str, object]], path: Path | str) -> Path:
    """Write the clusters.csv scatter dump (header only when there are no rows)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows, columns=CLUSTER_DUMP_COLUMNS).to_csv(path, index=False)
    return path


def format_percent(fraction: float) -> str:
    """0.1875 -> '18.75%'"""
    if math.isnan(fraction):
        return "n/a"
    return f"{fraction * 100:.2f}%"


__all__ = [
    "ROW_COLUMNS",
    "CURVE_COLUMNS",
    "render_report",
    "rows_frame",
    "load_rows_csv",
    "write_report",
    "write_rows_csv",
    "write_cluster_dump",
    "format_percent",
]
