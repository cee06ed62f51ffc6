"""Batch verification, tables and output formatting behind the command line."""
from .config import CONFIG_ENV, RunConfig
from .suites import DEFAULT_COUNTS, SUITES, random_rational, run_all, run_suite
from .tables import eval_command, table_command

__all__ = [
    "CONFIG_ENV",
    "DEFAULT_COUNTS",
    "RunConfig",
    "SUITES",
    "eval_command",
    "random_rational",
    "run_all",
    "run_suite",
    "table_command",
]
