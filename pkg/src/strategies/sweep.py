"""
FAV-percentage Sweep Harness for the GOP tiering simulator

WHAT: Prices every policy over a grid of FAV percentages and seeds
WHY: The placement comparison is only meaningful across many FAV levels
     and more than one synthetic repository
ARCHITECTURE: Layer 2 of 3-layer type-safe architecture

GRID:
    for seed in seeds:                      # one repository per seed
        repo = synthesize(synth with seed)  # or read repository_path
        for fav_pct in fav_percentages:     # one FAV selection per level
            favs = select_favs(repo, fav_pct, threshold)
            for policy in policies:         # one SweepRow per policy
                evaluate_policy(...)

Seeds are independent, so they run in worker processes when jobs > 1.
Rows are sorted by (fav_pct, seed, policy order) before the result is
assembled, so output never depends on worker scheduling.

Used by: `storage-sim sweep`, the trend acceptance tests
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any

import pandas as pd
from pydantic import ValidationError

from src.config import SimConfig
from src.models.cost_inputs import ALL_POLICIES, PolicyId
from src.models.pricing_inputs import PricingCatalog
from src.models.repository_inputs import Repository
from src.models.sweep_inputs import (
    FailedCell,
    SweepAggregate,
    SweepResult,
    SweepRow,
    SweepSpec,
)
from src.analysis.clustering import cluster_dump_rows, cluster_fav_gops
from src.analysis.cost_engine import GopTable, evaluate_all
from src.analysis.pricing import default_catalog
from src.analysis.repository import read_repository, select_favs
from src.analysis.synth import synthesize
from src.utils.errors import (
    DivisionByZero,
    EmptyResult,
    InvalidSpec,
    PartialFailure,
    describe_validation_error,
)

logger = logging.getLogger(__name__)


def compute_reduction(cost_a: float, cost_b: float) -> float:
    """
    Saving of cost_a relative to cost_b, as a fraction.

    FORMULA:
        (cost_b - cost_a) / cost_b

    Example:
        compute_reduction(390, 480) -> 0.1875  (18.75% cheaper)

    Raises:
        DivisionByZero: cost_b <= 0
    """
    if cost_b <= 0:
        raise DivisionByZero(f"Reference cost must be positive, got {cost_b}")
    return (cost_b - cost_a) / cost_b


def load_sweep_spec(
    source: dict[str, Any] | Path | str, overrides: dict[str, Any] | None = None
) -> SweepSpec:
    """
    Build a SweepSpec from a YAML document (or parsed mapping) plus overrides.

    Policies may be written with CLI names (gop-clustering) or enum values
    (GopClustering). Override keys replace document keys, except that
    mapping overrides (synth, clustering) are merged into the matching section.

    Raises:
        InvalidSpec: document or overrides violate the SweepSpec invariants
        FileNotFoundError: source path is missing
    """
    document = dict(SimConfig.load_document(source)) if isinstance(source, (str, Path)) else dict(source)
    for key, value in (overrides or {}).items():
        if isinstance(value, dict) and isinstance(document.get(key), dict):
            document[key] = {**document[key], **value}
        else:
            document[key] = value

    for key in ("policies", "figure_policies"):
        if key in document and document[key] is not None:
            try:
                document[key] = [PolicyId.from_cli_name(str(name)) for name in document[key]]
            except ValueError as e:
                raise InvalidSpec(str(e)) from e

    try:
        return SweepSpec.model_validate(document)
    except ValidationError as e:
        raise InvalidSpec(f"Invalid sweep spec: {describe_validation_error(e)}") from e


def _repository_for_seed(spec: SweepSpec, seed: int) -> Repository:
    if spec.repository_path is not None:
        return read_repository(spec.repository_path)
    return synthesize(spec.synth.model_copy(update={"seed": seed}))


def _run_seed(
    spec: SweepSpec, seed: int, catalog: PricingCatalog, dump_clusters: bool
) -> tuple[list[SweepRow], list[FailedCell], list[dict[str, object]] | None]:
    """Evaluate every FAV level of one seed (runs in a worker process)."""
    rows: list[SweepRow] = []
    failures: list[FailedCell] = []
    dump: list[dict[str, object]] | None = None

    try:
        repo = _repository_for_seed(spec, seed)
        table = GopTable.from_repository(repo)
    except Exception as e:
        message = f"{type(e).__name__}: {e}"
        return [], [FailedCell(fav_pct=p, seed=seed, message=message) for p in spec.fav_percentages], None

    for fav_pct in spec.fav_percentages:
        try:
            favs = select_favs(repo, fav_pct, spec.gop_hotness_threshold)
            breakdowns = evaluate_all(
                repo, favs, catalog, spec.clustering, spec.policies, table=table
            )
        except Exception as e:
            logger.warning("Cell fav=%g seed=%d failed: %s", fav_pct, seed, e)
            failures.append(FailedCell(fav_pct=fav_pct, seed=seed, message=f"{type(e).__name__}: {e}"))
            continue

        rows.extend(
            SweepRow(
                fav_pct=fav_pct,
                seed=seed,
                policy=policy,
                total_usd=breakdown.total_usd,
                breakdown=breakdown,
            )
            for policy, breakdown in breakdowns.items()
        )
        if dump_clusters and fav_pct == spec.fav_percentages[-1]:
            dump = cluster_dump_rows(cluster_fav_gops(repo, favs, spec.clustering, catalog))

    return rows, failures, dump


def aggregate_rows(
    rows: list[SweepRow], fav_percentages: list[float], policies: list[PolicyId]
) -> list[SweepAggregate]:
    """
    Mean and sample standard deviation of total_usd per (fav_pct, policy).

    A single seed has no spread, so its std is reported as 0.
    """
    if not rows:
        return []
    frame = pd.DataFrame(
        {
            "fav_pct": [r.fav_pct for r in rows],
            "policy": [r.policy.value for r in rows],
            "total_usd": [r.total_usd for r in rows],
        }
    )
    stats = frame.groupby(["fav_pct", "policy"])["total_usd"].agg(["mean", "std", "count"])
    stats["std"] = stats["std"].fillna(0.0)

    aggregates: list[SweepAggregate] = []
    for fav_pct in fav_percentages:
        for policy in policies:
            if (fav_pct, policy.value) not in stats.index:
                continue
            mean, std, count = stats.loc[(fav_pct, policy.value)]
            aggregates.append(
                SweepAggregate(
                    fav_pct=fav_pct,
                    policy=policy,
                    mean_usd=float(mean),
                    std_usd=float(std),
                    n_seeds=int(count),
                )
            )
    return aggregates


def assemble_result(
    fav_percentages: list[float],
    seeds: list[int],
    policies: list[PolicyId],
    rows: list[SweepRow],
    failures: list[FailedCell] | None = None,
) -> SweepResult:
    """Sort rows canonically and attach aggregates."""
    ordered = sorted(rows, key=SweepRow.sort_key)
    return SweepResult(
        fav_percentages=list(fav_percentages),
        seeds=list(seeds),
        policies=list(policies),
        rows=ordered,
        aggregates=aggregate_rows(ordered, list(fav_percentages), list(policies)),
        failures=sorted(failures or [], key=lambda f: (f.fav_pct, f.seed)),
    )


def result_from_rows(rows: list[SweepRow]) -> SweepResult:
    """
    Wrap externally supplied rows (fixture injection) as a SweepResult.

    The grid is inferred from the rows and must be complete.

    Raises:
        EmptyResult: no rows
        InvalidSpec: rows do not cover every (fav_pct, seed, policy) combination
    """
    if not rows:
        raise EmptyResult("No cost rows to report")
    present = {row.policy for row in rows}
    try:
        return assemble_result(
            sorted({row.fav_pct for row in rows}),
            sorted({row.seed for row in rows}),
            [policy for policy in ALL_POLICIES if policy in present],
            rows,
        )
    except ValidationError as e:
        raise InvalidSpec(f"Cost rows do not form a complete grid: {describe_validation_error(e)}") from e


class SweepRunner:
    """
    WHAT: Runs a SweepSpec over its whole grid
    WHY: One object owns the catalog, the worker count and the cluster dump
    HOW: One task per seed; seeds fan out to a process pool when jobs > 1

    EDUCATIONAL NOTE:
    A seed is the unit of parallel work rather than a grid cell, because
    the repository (the expensive part) is shared by all FAV levels of a seed.
    """

    def __init__(self, spec: SweepSpec, catalog: PricingCatalog | None = None, jobs: int | None = None):
        self.spec = spec
        self.catalog = catalog or default_catalog()
        self.jobs = max(1, min(jobs or os.cpu_count() or 1, len(spec.seeds)))
        self.cluster_rows: list[dict[str, object]] = []

    def run(self) -> SweepResult:
        """
        Execute the sweep.

        Returns:
            SweepResult with rows sorted canonically and aggregates filled

        Raises:
            PartialFailure: some cells failed; .result holds the completed ones
        """
        spec = self.spec
        first_seed = spec.seeds[0]
        logger.info(
            "Sweeping %d FAV levels × %d seeds × %d policies with %d job(s)",
            len(spec.fav_percentages), len(spec.seeds), len(spec.policies), self.jobs,
        )

        if self.jobs == 1:
            outcomes = [
                _run_seed(spec, seed, self.catalog, seed == first_seed) for seed in spec.seeds
            ]
        else:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                futures = [
                    pool.submit(_run_seed, spec, seed, self.catalog, seed == first_seed)
                    for seed in spec.seeds
                ]
                outcomes = [future.result() for future in futures]

        rows: list[SweepRow] = []
        failures: list[FailedCell] = []
        for seed_rows, seed_failures, dump in outcomes:
            rows.extend(seed_rows)
            failures.extend(seed_failures)
            if dump is not None:
                self.cluster_rows = dump

        result = assemble_result(spec.fav_percentages, spec.seeds, spec.policies, rows, failures)
        if failures:
            raise PartialFailure(result, [(f.fav_pct, f.seed, f.message) for f in result.failures])
        return result


def run_sweep(
    spec: SweepSpec, catalog: PricingCatalog | None = None, jobs: int | None = 1
) -> SweepResult:
    """Run a sweep in one call (sequential unless jobs > 1)."""
    return SweepRunner(spec, catalog, jobs).run()


__all__ = [
    "compute_reduction",
    "load_sweep_spec",
    "aggregate_rows",
    "assemble_result",
    "result_from_rows",
    "SweepRunner",
    "run_sweep",
]
