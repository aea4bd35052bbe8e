"""
GOP Tiering Simulator Configuration Module

WHAT: Central configuration for paths, defaults, and environment overrides
WHY: No hard-coded output paths or prices scattered through calculators
ARCHITECTURE: Configuration layer shared by calculators and the CLI

Environment variables (a `.env` file in the working directory is honored):
    STORAGE_SIM_OUTPUT_DIR      default output directory (default: ./results)
    STORAGE_SIM_CATALOG         default pricing catalog YAML (default: S3 list prices)
    STORAGE_SIM_VM_HOURLY_RATE  VM USD/hour used by the default catalog (default: 0.20)
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any

import yaml
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


class SimConfig:
    """
    Central configuration for the simulator.

    Provides paths and numeric defaults with safe fallbacks.
    """

    PROJECT_ROOT = Path(__file__).parent.parent
    DATA_DIR = PROJECT_ROOT / "data"

    DEFAULT_VM_HOURLY_RATE = 0.20
    DEFAULT_PERIOD_DAYS = 30
    DEFAULT_GOP_HOTNESS_THRESHOLD = 0.05
    DEFAULT_K = 4
    DEFAULT_SEEDS = [1, 2, 3, 4, 5]
    DEFAULT_FAV_PERCENTAGES = [0.05, 0.10, 0.15, 0.20, 0.25, 0.30]

    # 1 GB = 2^10 MB, the divisor of the per-cluster storage formula
    MB_PER_GB = 1024.0
    SECONDS_PER_HOUR = 3600.0

    @classmethod
    def output_dir(cls) -> Path:
        """Default output directory, overridable by STORAGE_SIM_OUTPUT_DIR."""
        return Path(os.getenv("STORAGE_SIM_OUTPUT_DIR", "results"))

    @classmethod
    def catalog_path(cls) -> Path | None:
        """Catalog file named by STORAGE_SIM_CATALOG, or None for the S3 list-price defaults."""
        value = os.getenv("STORAGE_SIM_CATALOG")
        return Path(value) if value else None

    @classmethod
    def vm_hourly_rate(cls) -> float:
        """
        VM rate for the default catalog.

        Falls back to 0.20 USD/hour when the variable is unset or unparsable.
        """
        raw = os.getenv("STORAGE_SIM_VM_HOURLY_RATE")
        if raw is None:
            return cls.DEFAULT_VM_HOURLY_RATE
        try:
            rate = float(raw)
        except ValueError:
            logger.warning("Ignoring non-numeric STORAGE_SIM_VM_HOURLY_RATE=%r", raw)
            return cls.DEFAULT_VM_HOURLY_RATE
        if rate <= 0:
            logger.warning("Ignoring non-positive STORAGE_SIM_VM_HOURLY_RATE=%r", raw)
            return cls.DEFAULT_VM_HOURLY_RATE
        return rate

    @classmethod
    def load_document(cls, path: Path | str) -> dict[str, Any]:
        """
        Read a YAML config document into a dict.

        Raises:
            FileNotFoundError: if the file is missing
            ValueError: if the document is not a mapping
        """
        with open(path) as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ValueError(f"{path}: expected a mapping at the top level, got {type(data).__name__}")
        return data
