"""
Pricing catalog loader for the GOP tiering simulator

WHAT: Builds, loads, dumps, and rescales the storage-tier catalog
WHY: Every policy is priced from the same validated catalog
ARCHITECTURE: Layer 2 of 3-layer type-safe architecture

Catalog document layout (YAML):

    vm_hourly_rate: 0.20
    tiers:
      - {id: Standard,   price_per_gb_month: 0.023,  rank: 1}
      - {id: StandardIA, price_per_gb_month: 0.0125, rank: 2}
      - {id: OneZoneIA,  price_per_gb_month: 0.01,   rank: 3}
      - {id: Glacier,    price_per_gb_month: 0.001,  rank: 4}

The rates are the Amazon S3 list prices the placement study was run with.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from src.config import SimConfig
from src.models.pricing_inputs import PricingCatalog, StorageTier
from src.utils.errors import MalformedCatalog, describe_validation_error

logger = logging.getLogger(__name__)

S3_LIST_PRICES: dict[str, float] = {
    "Standard": 0.023,
    "StandardIA": 0.0125,
    "OneZoneIA": 0.01,
    "Glacier": 0.001,
}


def default_catalog(vm_hourly_rate: float | None = None) -> PricingCatalog:
    """
    Return the default S3 list-price catalog.

    Args:
        vm_hourly_rate: Override for the VM rate (default: SimConfig.vm_hourly_rate())

    Returns:
        PricingCatalog with Standard=0.023, StandardIA=0.0125, OneZoneIA=0.01,
        Glacier=0.001 USD/GB-month at ranks 1..4
    """
    rate = SimConfig.vm_hourly_rate() if vm_hourly_rate is None else vm_hourly_rate
    tiers = [
        StorageTier(id=tier_id, price_per_gb_month=price, rank=rank)
        for rank, (tier_id, price) in enumerate(S3_LIST_PRICES.items(), start=1)
    ]
    return PricingCatalog(tiers=tiers, vm_hourly_rate=rate)


def load_catalog(source: dict[str, Any] | Path | str) -> PricingCatalog:
    """
    Validate a catalog document (already-parsed mapping or a YAML file path).

    Raises:
        MalformedCatalog: missing tier, duplicate id, non-positive price,
            or prices not strictly decreasing by rank
    """
    if isinstance(source, (str, Path)):
        try:
            document = SimConfig.load_document(source)
        except yaml.YAMLError as e:
            raise MalformedCatalog(f"{source}: not valid YAML: {e}") from e
        except ValueError as e:
            raise MalformedCatalog(str(e)) from e
    else:
        document = source

    try:
        catalog = PricingCatalog.model_validate(document)
    except ValidationError as e:
        raise MalformedCatalog(
            f"Invalid pricing catalog: {describe_validation_error(e, root='catalog')}"
        ) from e

    logger.debug("Loaded catalog with prices %s", catalog.prices_by_rank())
    return catalog


def dump_catalog(catalog: PricingCatalog) -> str:
    """Serialize a catalog back to the YAML document layout."""
    document = {
        "vm_hourly_rate": catalog.vm_hourly_rate,
        "tiers": [tier.model_dump() for tier in catalog.tiers],
    }
    return yaml.safe_dump(document, sort_keys=False)


def scale_catalog(catalog: PricingCatalog, factor: float) -> PricingCatalog:
    """
    Multiply every tier price and the VM rate by `factor`.

    Every policy total is linear in these prices, so totals scale by the same factor.
    """
    if factor <= 0:
        raise MalformedCatalog(f"Scale factor must be positive, got {factor}")
    return PricingCatalog(
        tiers=[
            tier.model_copy(update={"price_per_gb_month": tier.price_per_gb_month * factor})
            for tier in catalog.tiers
        ],
        vm_hourly_rate=catalog.vm_hourly_rate * factor,
    )


def resolve_catalog(path: Path | str | None = None) -> PricingCatalog:
    """Catalog from an explicit path, else STORAGE_SIM_CATALOG, else the S3 list prices."""
    chosen = Path(path) if path is not None else SimConfig.catalog_path()
    if chosen is None:
        return default_catalog()
    return load_catalog(chosen)


__all__ = [
    "S3_LIST_PRICES",
    "default_catalog",
    "load_catalog",
    "dump_catalog",
    "scale_catalog",
    "resolve_catalog",
]
