"""Labeled random hypergraphs, short-cycle removal and realization into a graph."""

import itertools
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx
import numpy as np

from ..config import Budgets, resolve_budgets
from ..errors import BudgetExceeded, HypothesisViolation, InputError
from ..graph import Graph, VertexSet, bits, blocks, induced, mask_of
from ..oracles import SplitWitness
from ..seeding import derive_rng, sample_subset

logger = logging.getLogger(__name__)

MAX_BLOCK_SIZE = 8


@dataclass(frozen=True)
class BlockLibrary:
    """Blocks of L and M, largest block first on the L side.

    Piece i < len(L_blocks) is L_blocks[i]; the remaining pieces are the M blocks.
    """

    L: Graph
    M: Graph
    L_blocks: tuple[Graph, ...]
    M_blocks: tuple[Graph, ...]
    L_isolated: VertexSet
    M_isolated: VertexSet
    swapped: bool = False

    @property
    def maxblock(self) -> int:
        return self.L_blocks[0].n

    @property
    def pieces(self) -> tuple[Graph, ...]:
        return self.L_blocks + self.M_blocks

    def piece_name(self, index: int) -> str:
        if index < len(self.L_blocks):
            return f"L{index + 1}"
        return f"M{index - len(self.L_blocks) + 1}"


def _blocks_of(G: Graph) -> tuple[tuple[Graph, ...], VertexSet]:
    found = blocks(G)
    covered = mask_of(v for block in found for v in bits(block))
    graphs = sorted((induced(G, block)[0] for block in found), key=lambda g: -g.n)
    return tuple(graphs), G.vertices & ~covered


def block_library(L: Graph, M: Graph) -> BlockLibrary:
    """Decompose L and M into blocks; swap them if M holds the largest block.

    Raises:
        HypothesisViolation: L or M has no edge.
    """
    for name, graph in (("L", L), ("M", M)):
        if graph.edge_count() == 0:
            raise HypothesisViolation(f"{name} must have at least one edge")
    L_blocks, L_isolated = _blocks_of(L)
    M_blocks, M_isolated = _blocks_of(M)
    swapped = M_blocks[0].n > L_blocks[0].n
    if swapped:
        L, M, L_blocks, M_blocks, L_isolated, M_isolated = M, L, M_blocks, L_blocks, M_isolated, L_isolated
    if L_blocks[0].n > MAX_BLOCK_SIZE:
        raise InputError(f"blocks larger than {MAX_BLOCK_SIZE} vertices are not supported")
    return BlockLibrary(L, M, L_blocks, M_blocks, L_isolated, M_isolated, swapped)


@dataclass
class ConstructionParams:
    """Parameters of the randomized construction.

    Args:
        n: Number of vertices before removal.
        r: Every induced subgraph on at most r vertices should be {L, M}-split.
        k: Target number of classes that must not suffice.
        epsilon: Exponent slack in n^-(b-1)+epsilon; None means 1/(r_eff+2).
        seed: Root of every random stream.
        complemented: Build for (L^c, M^c) and complement the final graph.
    """

    n: int
    r: int
    k: int
    epsilon: Optional[float] = None
    seed: int = 0
    complemented: bool = False

    def __post_init__(self) -> None:
        if self.n < 1 or self.r < 1 or self.k < 1:
            raise InputError("n, r and k must be positive")
        if self.epsilon is not None and not 0 < self.epsilon < 1:
            raise InputError(f"epsilon must lie in (0, 1), got {self.epsilon}")

    def effective_r(self, L: Graph, M: Graph) -> int:
        """r raised to at least max(3|L|, 3|M|); a larger r only strengthens the removal."""
        return max(self.r, 3 * L.n, 3 * M.n)

    def effective_epsilon(self, L: Graph, M: Graph) -> float:
        if self.epsilon is not None:
            return self.epsilon
        return 1.0 / (self.effective_r(L, M) + 2)


@dataclass(frozen=True)
class Hyperedge:
    vertices: VertexSet
    labels: frozenset[int]

    @property
    def size(self) -> int:
        return self.vertices.bit_count()


@dataclass(frozen=True)
class LabeledHypergraph:
    """Distinct hyperedges over 0..n-1, sorted by vertex tuple."""

    n: int
    hyperedges: tuple[Hyperedge, ...]

    def __post_init__(self) -> None:
        seen = set()
        for edge in self.hyperedges:
            if edge.size < 2 or edge.vertices >> self.n:
                raise InputError(f"hyperedge {tuple(bits(edge.vertices))} is invalid for n={self.n}")
            if edge.vertices in seen:
                raise InputError(f"hyperedge {tuple(bits(edge.vertices))} appears twice")
            seen.add(edge.vertices)

    @classmethod
    def build(cls, n: int, labelled: dict[VertexSet, set[int]]) -> "LabeledHypergraph":
        ordered = sorted(labelled, key=lambda mask: tuple(bits(mask)))
        return cls(n, tuple(Hyperedge(mask, frozenset(labelled[mask])) for mask in ordered))

    def without(self, R: VertexSet) -> "LabeledHypergraph":
        """H minus R: the hyperedges disjoint from R."""
        return LabeledHypergraph(self.n, tuple(e for e in self.hyperedges if not e.vertices & R))

    def count_by_label(self) -> dict[int, int]:
        counts: dict[int, int] = defaultdict(int)
        for edge in self.hyperedges:
            for label in edge.labels:
                counts[label] += 1
        return dict(counts)


def edge_probability(n: int, size: int, epsilon: float) -> float:
    return min(1.0, float(n) ** (-(size - 1) + epsilon))


def _draw_piece(n: int, size: int, p: float, rng: np.random.Generator, limit: int) -> list[VertexSet]:
    possible = math.comb(n, size)
    if possible == 0:
        return []
    expected = possible * p
    if expected > limit:
        raise BudgetExceeded(f"sampling {size}-uniform hyperedges on {n} vertices", expected, limit)
    count = int(rng.binomial(possible, p))
    if count * 2 > possible:
        everything = list(itertools.combinations(range(n), size))
        chosen = rng.choice(possible, size=count, replace=False)
        return [mask_of(everything[int(i)]) for i in np.sort(chosen)]
    drawn: set[VertexSet] = set()
    while len(drawn) < count:
        drawn.add(mask_of(sample_subset(rng, n, size)))
    return sorted(drawn, key=lambda mask: tuple(bits(mask)))


def sample_hypergraph(
    lib: BlockLibrary,
    params: ConstructionParams,
    epsilon: Optional[float] = None,
    budgets: Optional[Budgets] = None,
) -> LabeledHypergraph:
    """One independent uniform random hypergraph per piece, merged with label sets.

    Piece i draws from its own stream derive_rng(seed, "piece", i).
    """
    eps = epsilon if epsilon is not None else params.effective_epsilon(lib.L, lib.M)
    limit = resolve_budgets(budgets).hyperedge_limit
    labelled: dict[VertexSet, set[int]] = defaultdict(set)
    for index, block in enumerate(lib.pieces):
        p = edge_probability(params.n, block.n, eps)
        rng = derive_rng(params.seed, "piece", index)
        for mask in _draw_piece(params.n, block.n, p, rng, limit):
            labelled[mask].add(index)
    hypergraph = LabeledHypergraph.build(params.n, labelled)
    logger.info("sampled %d hyperedges on %d vertices (epsilon=%.4f)", len(hypergraph.hyperedges), params.n, eps)
    return hypergraph


# ---------------------------------------------------------------------------
# Violations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violations:
    multilabel: tuple[VertexSet, ...] = ()
    two_cycles: tuple[tuple[int, int], ...] = ()
    cycles: tuple[tuple[int, ...], ...] = ()

    @property
    def total(self) -> int:
        return len(self.multilabel) + len(self.two_cycles) + len(self.cycles)

    def __bool__(self) -> bool:
        return self.total > 0


def _canonical_cycle(cycle: list[int]) -> tuple[int, ...]:
    start = cycle.index(min(cycle))
    rotated = cycle[start:] + cycle[:start]
    if rotated[-1] < rotated[1]:
        rotated = [rotated[0]] + rotated[:0:-1]
    return tuple(rotated)


def _pair_index(hypergraph: LabeledHypergraph) -> dict[tuple[int, int], list[VertexSet]]:
    index: dict[tuple[int, int], list[VertexSet]] = defaultdict(list)
    for edge in hypergraph.hyperedges:
        for u, v in itertools.combinations(bits(edge.vertices), 2):
            index[(u, v)].append(edge.vertices)
    return index


def find_violations(hypergraph: LabeledHypergraph, r: int) -> Violations:
    """Multi-labelled hyperedges, 2-cycles and t-cycles for 3 <= t <= r.

    A t-cycle v1..vt needs, for every consecutive pair, a hyperedge meeting
    {v1..vt} in exactly that pair. Cycles are reported once, starting at their
    lowest vertex.
    """
    if r < 2:
        raise InputError("r must be at least 2")
    multilabel = tuple(e.vertices for e in hypergraph.hyperedges if len(e.labels) > 1)
    pairs = _pair_index(hypergraph)
    two_cycles = tuple(sorted(pair for pair, holders in pairs.items() if len(holders) > 1))

    cycles: list[tuple[int, ...]] = []
    if r >= 3:
        section = nx.Graph()
        section.add_edges_from(pairs)
        found = set()
        for raw in nx.simple_cycles(section, length_bound=r):
            if len(raw) < 3:
                continue
            cycle = _canonical_cycle(list(raw))
            if cycle in found:
                continue
            found.add(cycle)
            members = mask_of(cycle)
            exact = True
            for i, u in enumerate(cycle):
                v = cycle[(i + 1) % len(cycle)]
                pair = (min(u, v), max(u, v))
                wanted = (1 << u) | (1 << v)
                if not any(holder & members == wanted for holder in pairs[pair]):
                    exact = False
                    break
            if exact:
                cycles.append(cycle)
        cycles.sort(key=lambda c: (len(c), c))
    return Violations(multilabel, two_cycles, tuple(cycles))


def removal_set(violations: Violations) -> VertexSet:
    """The lowest vertex of every violating hyperedge, pair and cycle."""
    R = 0
    for mask in violations.multilabel:
        R |= mask & -mask
    for u, _ in violations.two_cycles:
        R |= 1 << u
    for cycle in violations.cycles:
        R |= 1 << min(cycle)
    return R


@dataclass(frozen=True)
class Pruned:
    hypergraph: LabeledHypergraph
    removed: VertexSet
    rounds: int
    before: Violations
    after: Violations = field(default_factory=Violations)


def prune(hypergraph: LabeledHypergraph, r: int) -> Pruned:
    """Remove violation vertices until H minus R has no violations of length <= r."""
    before = find_violations(hypergraph, r)
    current, violations, R, rounds = hypergraph, before, 0, 0
    while violations:
        R |= removal_set(violations)
        current = hypergraph.without(R)
        violations = find_violations(current, r)
        rounds += 1
    logger.info("pruned %d vertices in %d rounds", R.bit_count(), rounds)
    return Pruned(current, R, rounds, before, violations)


# ---------------------------------------------------------------------------
# Realization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Realization:
    """The realized graph; provenance maps each edge (u < v) to its hyperedge index."""

    G: Graph
    provenance: dict[tuple[int, int], int]


def realize_hypergraph(hypergraph: LabeledHypergraph, lib: BlockLibrary, seed: int) -> Realization:
    """Place a copy of each hyperedge's block on its vertices in a seeded order.

    Raises:
        InputError: A hyperedge is multi-labelled or two hyperedges share a pair.
    """
    if find_violations(hypergraph, 2):
        raise InputError("cannot realize a hypergraph with multi-labelled hyperedges or 2-cycles")
    edges: list[tuple[int, int]] = []
    provenance: dict[tuple[int, int], int] = {}
    pieces = lib.pieces
    for index, edge in enumerate(hypergraph.hyperedges):
        (label,) = edge.labels
        block = pieces[label]
        members = list(bits(edge.vertices))
        order = derive_rng(seed, "realize", index).permutation(block.n)
        place = [members[int(i)] for i in order]
        for a, b in block.edges():
            u, v = sorted((place[a], place[b]))
            edges.append((u, v))
            provenance[(u, v)] = index
    return Realization(Graph.from_edges(hypergraph.n, edges), provenance)


# ---------------------------------------------------------------------------
# Constructive local split
# ---------------------------------------------------------------------------


def local_split(hypergraph: LabeledHypergraph, S: VertexSet) -> SplitWitness:
    """Split S so that every trace A ∩ S with at least two vertices has exactly one vertex in Y.

    Traces are taken from a pruned hypergraph; they must form a hyperforest
    (checked on the vertex/trace incidence graph).

    Raises:
        HypothesisViolation: The traces on S contain a cycle.
    """
    traces = [edge.vertices & S for edge in hypergraph.hyperedges if (edge.vertices & S).bit_count() >= 2]
    incidence = nx.Graph()
    incidence.add_nodes_from(("v", v) for v in bits(S))
    for index, trace in enumerate(traces):
        incidence.add_edges_from((("e", index), ("v", v)) for v in bits(trace))
    if not nx.is_forest(incidence):
        raise HypothesisViolation("the hyperedge traces on S contain a cycle")

    Y = 0
    for v in bits(S):
        root = ("v", v)
        if incidence.nodes[root].get("seen"):
            continue
        incidence.nodes[root]["seen"] = True
        for parent, child in nx.bfs_edges(incidence, root):
            incidence.nodes[child]["seen"] = True
            if child[0] != "e":
                continue
            _, p = parent
            members = sorted(u for kind, u in incidence[child] if kind == "v" and u != p)
            if not Y >> p & 1:
                Y |= 1 << members[0]
    return SplitWitness(S & ~Y, Y)
