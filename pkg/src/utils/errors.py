"""
Error types for the GOP tiering simulator.

WHAT: One named exception per failure the simulator reports
WHY: Callers (and the CLI) can tell a malformed catalog from an empty
     repository without parsing messages
ARCHITECTURE: Shared by all layers

Every error derives from ValueError, so code that already guards
calculations with `except ValueError` keeps working.
"""

from __future__ import annotations

from typing import Any

from pydantic import ValidationError


class StorageSimError(ValueError):
    """Base class for every simulator error."""


class MalformedCatalog(StorageSimError):
    """Pricing catalog document is missing tiers or breaks rank/price order."""


class EmptyRepository(StorageSimError):
    """Operation needs at least one video."""


class RepositoryFormatError(StorageSimError):
    """A repository file line could not be parsed."""


class InvalidSpec(StorageSimError):
    """Synthesis or sweep specification violates its range invariants."""


class BadK(StorageSimError):
    """Cluster count outside 1..len(values)."""


class EmptyInput(StorageSimError):
    """Operation needs a non-empty input list."""


class ClusterCountMismatch(StorageSimError):
    """Number of clusters differs from the number of storage tiers."""


class EmptyCluster(StorageSimError):
    """A cluster holds no values, so it cannot be given a tier."""


class NegativeSize(StorageSimError):
    """A GOP size or a tier price is not positive."""


class InconsistentSelection(StorageSimError):
    """FAV selection was not derived from the repository being priced."""


class DivisionByZero(StorageSimError, ZeroDivisionError):
    """Reduction against a zero (or negative) reference cost."""


class EmptyResult(StorageSimError):
    """Report requested for a sweep result without rows."""


class MalformedCostRows(StorageSimError):
    """A cost-rows CSV is missing columns or breaks the breakdown invariants."""


class PartialFailure(StorageSimError):
    """
    Some sweep cells failed; completed cells are kept.

    Attributes:
        result: SweepResult assembled from the cells that succeeded
        failures: list of (fav_pct, seed, message) for the cells that did not
    """

    def __init__(self, result: Any, failures: list[tuple[float, int, str]]):
        self.result = result
        self.failures = failures
        cells = ", ".join(f"fav={pct:g}/seed={seed}" for pct, seed, _ in failures)
        super().__init__(f"{len(failures)} sweep cell(s) failed: {cells}")


def describe_validation_error(error: ValidationError, root: str = "spec") -> str:
    """One "field.path: message" entry per problem, joined with "; "."""
    return "; ".join(
        f"{'.'.join(str(p) for p in err['loc']) or root}: {err['msg']}" for err in error.errors()
    )


__all__ = [
    "describe_validation_error",
    "StorageSimError",
    "MalformedCatalog",
    "EmptyRepository",
    "RepositoryFormatError",
    "InvalidSpec",
    "BadK",
    "EmptyInput",
    "ClusterCountMismatch",
    "EmptyCluster",
    "NegativeSize",
    "InconsistentSelection",
    "DivisionByZero",
    "EmptyResult",
    "MalformedCostRows",
    "PartialFailure",
]
