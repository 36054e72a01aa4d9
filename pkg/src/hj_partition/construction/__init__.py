"""Randomized locally-split graphs without bounded partitions, and their audits."""

from .audit import SubsetAudit, audit_coverage, audit_density, audit_local_split
from .builder import ConstructionAudit, ConstructionReport, construct, tiny_has_partition
from .hypergraph import (
    BlockLibrary,
    ConstructionParams,
    Hyperedge,
    LabeledHypergraph,
    Pruned,
    Realization,
    Violations,
    block_library,
    edge_probability,
    find_violations,
    local_split,
    prune,
    realize_hypergraph,
    removal_set,
    sample_hypergraph,
)

__all__ = [
    "BlockLibrary",
    "ConstructionAudit",
    "ConstructionParams",
    "ConstructionReport",
    "Hyperedge",
    "LabeledHypergraph",
    "Pruned",
    "Realization",
    "SubsetAudit",
    "Violations",
    "audit_coverage",
    "audit_density",
    "audit_local_split",
    "block_library",
    "construct",
    "edge_probability",
    "find_violations",
    "local_split",
    "prune",
    "realize_hypergraph",
    "removal_set",
    "sample_hypergraph",
    "tiny_has_partition",
]
