"""pytest configuration for hj-partition tests."""

import os
import sys
from functools import lru_cache

import networkx as nx
import pytest

# Pin budgets so that test outcomes do not depend on the caller's environment
for _name in (
    "HJ_SEED",
    "HJ_WORK_BUDGET",
    "HJ_SPLIT_MAX_VERTICES",
    "HJ_MEMO_LIMIT",
    "HJ_HYPEREDGE_LIMIT",
    "HJ_REALIZE_LIMIT",
    "HJ_TRANSITIVE_BUDGET",
    "HJ_MAX_WORKERS",
):
    os.environ.pop(_name, None)

# Ensure the src directories are in the Python path
root = os.path.dirname(os.path.dirname(__file__))
for src_path in (os.path.join(root, "src"), os.path.join(root, "cli", "src")):
    if src_path not in sys.path:
        sys.path.insert(0, src_path)

from hj_partition.graph import Graph, from_networkx  # noqa: E402


@lru_cache(maxsize=1)
def _atlas() -> tuple[Graph, ...]:
    # every graph on at most 7 vertices, one per isomorphism class
    return tuple(from_networkx(g) for g in nx.graph_atlas_g())


@pytest.fixture(scope="session")
def atlas() -> tuple[Graph, ...]:
    return _atlas()


@pytest.fixture(autouse=True)
def clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep per-test environment overrides from leaking."""
    for name in ("HJ_SEED", "HJ_MAX_WORKERS"):
        monkeypatch.delenv(name, raising=False)
