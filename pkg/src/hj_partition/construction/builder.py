"""The full pipeline: sample, prune, realize, audit."""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import networkx as nx

from ..config import Budgets, resolve_budgets
from ..errors import InvariantViolation
from ..graph import Graph, VertexSet, complement, induced, is_isomorphic, to_networkx
from ..oracles import exists_partition
from .hypergraph import (
    BlockLibrary,
    ConstructionParams,
    LabeledHypergraph,
    block_library,
    find_violations,
    prune,
    realize_hypergraph,
    sample_hypergraph,
)

logger = logging.getLogger(__name__)

TINY_VERTICES = 12
TINY_K = 3


@dataclass(frozen=True)
class ConstructionAudit:
    """Checks run on every construction; counts are (multilabel, 2-cycles, longer cycles)."""

    hyperedges_sampled: int
    hyperedges_kept: int
    violations_before: tuple[int, int, int]
    violations_after: tuple[int, int, int]
    removed: int
    removal_ratio: Optional[float]
    rounds: int
    girth: Optional[int]
    blocks_faithful: bool
    tiny_has_partition: Optional[bool]


@dataclass(frozen=True)
class ConstructionReport:
    """The constructed graph and how it was obtained.

    G lives on the vertices outside R, relabelled densely; kept[i] is the
    original label of G's vertex i. The hypergraph and `removed` use original
    labels, provenance uses G's labels. With params.complemented, G is the
    complement of the realized graph and provenance describes the realized one.
    """

    G: Graph
    kept: tuple[int, ...]
    removed: VertexSet
    hypergraph: LabeledHypergraph
    provenance: dict[tuple[int, int], int]
    library: BlockLibrary
    params: ConstructionParams
    r_effective: int
    epsilon: float
    audit: ConstructionAudit


def _counts(violations) -> tuple[int, int, int]:
    return (len(violations.multilabel), len(violations.two_cycles), len(violations.cycles))


def _girth(G: Graph) -> Optional[int]:
    value = nx.girth(to_networkx(G))
    return None if math.isinf(value) else int(value)


def tiny_has_partition(G: Graph, L: Graph, M: Graph, k: int, budgets: Optional[Budgets] = None) -> Optional[bool]:
    """Whether G has an {L, M}-partition into k classes; None when G or k is too large to decide."""
    if G.n > TINY_VERTICES or k > TINY_K:
        return None
    return exists_partition(G, [L, M], k, budgets=budgets) is not None


def construct(L: Graph, M: Graph, params: ConstructionParams, budgets: Optional[Budgets] = None) -> ConstructionReport:
    """Build a graph whose small induced subgraphs are {L, M}-split.

    Raises:
        HypothesisViolation: L or M (or their complements, when complemented) has no edge.
        BudgetExceeded: A piece would need too many hyperedges.
    """
    budget = resolve_budgets(budgets)
    base_L, base_M = (complement(L), complement(M)) if params.complemented else (L, M)
    lib = block_library(base_L, base_M)
    r_eff = params.effective_r(L, M)
    eps = params.effective_epsilon(L, M)

    sampled = sample_hypergraph(lib, params, eps, budget)
    pruned = prune(sampled, r_eff)
    if pruned.after:
        raise InvariantViolation("pruned hypergraph still has violations")
    realized = realize_hypergraph(pruned.hypergraph, lib, params.seed)

    keep_mask = realized.G.vertices & ~pruned.removed
    built, kept = induced(realized.G, keep_mask)
    position = {v: i for i, v in enumerate(kept)}
    provenance = {(position[u], position[v]): index for (u, v), index in realized.provenance.items()}
    if len(provenance) != built.edge_count():
        raise InvariantViolation("an edge of the realized graph has no unique hyperedge")

    pieces = lib.pieces
    faithful = all(
        is_isomorphic(induced(realized.G, edge.vertices)[0], pieces[next(iter(edge.labels))])
        for edge in pruned.hypergraph.hyperedges
    )
    if not faithful:
        raise InvariantViolation("a hyperedge does not induce its block")

    girth = _girth(built)
    G = complement(built) if params.complemented else built

    tiny = tiny_has_partition(G, L, M, params.k, budget)

    n = params.n
    audit = ConstructionAudit(
        hyperedges_sampled=len(sampled.hyperedges),
        hyperedges_kept=len(pruned.hypergraph.hyperedges),
        violations_before=_counts(pruned.before),
        violations_after=_counts(find_violations(pruned.hypergraph, r_eff)),
        removed=pruned.removed.bit_count(),
        removal_ratio=pruned.removed.bit_count() / (n / math.log(n)) if n > 1 else None,
        rounds=pruned.rounds,
        girth=girth,
        blocks_faithful=faithful,
        tiny_has_partition=tiny,
    )
    logger.info(
        "constructed graph on %d vertices (%d removed, girth %s)", G.n, audit.removed, "none" if girth is None else girth
    )
    return ConstructionReport(
        G, kept, pruned.removed, pruned.hypergraph, provenance, lib, params, r_eff, eps, audit
    )
