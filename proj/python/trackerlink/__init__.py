"""Python access to the trackerlink core."""

from ._trackerlink import (
    coverage_percent,
    dimension_stats,
    extract_hits,
    extract_identities,
    normalize_id,
    project_networks,
    run_cli,
)

__all__ = [
    "coverage_percent",
    "dimension_stats",
    "extract_hits",
    "extract_identities",
    "normalize_id",
    "project_networks",
    "run_cli",
]
