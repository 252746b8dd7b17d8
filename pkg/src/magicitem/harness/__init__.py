"""Scenario harness: conformance suite over the whole pipeline."""

from .predicates import PREDICATES
from .runner import (
    DEFAULT_SEED,
    REQUIRED_CATEGORIES,
    bundled_scenarios_dir,
    format_table,
    load_scenario,
    packaged_fixtures_dir,
    run_scenario,
    run_scenario_file,
    run_suite,
    suite_digest,
)

__all__ = [
    "DEFAULT_SEED",
    "PREDICATES",
    "REQUIRED_CATEGORIES",
    "bundled_scenarios_dir",
    "format_table",
    "load_scenario",
    "packaged_fixtures_dir",
    "run_scenario",
    "run_scenario_file",
    "run_suite",
    "suite_digest",
]
