"""Environment-driven configuration for budgets and seeds."""

import os
from dataclasses import dataclass, field
from typing import Optional

DEFAULT_WORK_BUDGET = 100_000_000
DEFAULT_SPLIT_MAX_VERTICES = 30
DEFAULT_MEMO_LIMIT = 200_000
DEFAULT_HYPEREDGE_LIMIT = 5_000_000
DEFAULT_REALIZE_LIMIT = 5_000
DEFAULT_TRANSITIVE_BUDGET = 1_000_000
DEFAULT_MAX_WORKERS = 1


def _positive_int_env(name: str, default: int) -> int:
    """Read a positive integer from the environment, falling back to `default`."""
    try:
        value = int(os.getenv(name, str(default)))
    except ValueError:
        return default
    return value if value > 0 else default


def get_seed(default: int = 0) -> int:
    """Return HJ_SEED when set to an integer, else `default`."""
    raw = os.getenv("HJ_SEED")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


def get_work_budget() -> int:
    """Labeling-extension budget for the exhaustive oracles."""
    return _positive_int_env("HJ_WORK_BUDGET", DEFAULT_WORK_BUDGET)


def get_split_max_vertices() -> int:
    return _positive_int_env("HJ_SPLIT_MAX_VERTICES", DEFAULT_SPLIT_MAX_VERTICES)


def get_memo_limit() -> int:
    return _positive_int_env("HJ_MEMO_LIMIT", DEFAULT_MEMO_LIMIT)


def get_hyperedge_limit() -> int:
    return _positive_int_env("HJ_HYPEREDGE_LIMIT", DEFAULT_HYPEREDGE_LIMIT)


def get_realize_limit() -> int:
    return _positive_int_env("HJ_REALIZE_LIMIT", DEFAULT_REALIZE_LIMIT)


def get_transitive_budget() -> int:
    return _positive_int_env("HJ_TRANSITIVE_BUDGET", DEFAULT_TRANSITIVE_BUDGET)


def get_max_workers() -> int:
    return _positive_int_env("HJ_MAX_WORKERS", DEFAULT_MAX_WORKERS)


@dataclass
class Budgets:
    """Work limits shared by the exhaustive searches.

    Args:
        work: Maximum labeling extensions for exists_partition / universality checks.
        split_max_vertices: Largest host accepted by is_split.
        memo_limit: Maximum cached pieces in the partition recursion.
        hyperedge_limit: Maximum expected hyperedges per sampled piece.
        realize_limit: Maximum vertices when realizing a cotree into a Graph.
        transitive_budget: Search nodes allowed for an exact transitive partition.
        max_workers: Thread pool size for sampled audits (1 runs inline).
    """

    work: int = field(default_factory=get_work_budget)
    split_max_vertices: int = field(default_factory=get_split_max_vertices)
    memo_limit: int = field(default_factory=get_memo_limit)
    hyperedge_limit: int = field(default_factory=get_hyperedge_limit)
    realize_limit: int = field(default_factory=get_realize_limit)
    transitive_budget: int = field(default_factory=get_transitive_budget)
    max_workers: int = field(default_factory=get_max_workers)

    @classmethod
    def from_env(cls) -> "Budgets":
        """Build budgets from the HJ_* environment variables."""
        return cls()


def resolve_budgets(budgets: Optional[Budgets]) -> Budgets:
    return budgets if budgets is not None else Budgets.from_env()
