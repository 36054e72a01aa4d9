"""Sampled audits of the conditions the construction is meant to satisfy.

Each audit draws vertex subsets in chunks; chunk j uses its own stream
derive_rng(seed, purpose, j), so results are identical for any worker count.
Chunks merge by summing counts and keeping the lexicographically first failure.
"""

import itertools
import logging
import math
from collections.abc import Callable, Iterator
from concurrent import futures
from dataclasses import dataclass
from typing import Optional

from ..config import Budgets, resolve_budgets
from ..graph import Graph, VertexSet, find_embedding, induced, mask_of
from ..oracles import is_split
from ..seeding import derive_rng, sample_subset
from .hypergraph import LabeledHypergraph

logger = logging.getLogger(__name__)

CHUNK = 64


@dataclass(frozen=True)
class SubsetAudit:
    """Outcome of checking a property on many vertex subsets of one size."""

    kind: str
    subset_size: int
    checked: int
    failures: int
    exhaustive: bool
    first_failure: Optional[tuple[int, ...]] = None

    @property
    def failure_rate(self) -> float:
        return self.failures / self.checked if self.checked else 0.0


Chunk = Callable[[], Iterator[tuple[int, ...]]]


def _chunks(n: int, size: int, samples: int, seed: int, purpose: str) -> tuple[list[Chunk], bool]:
    total = math.comb(n, size)
    if total <= samples:
        everything = list(itertools.combinations(range(n), size))
        parts = [everything[i : i + CHUNK] for i in range(0, len(everything), CHUNK)]
        return [lambda part=part: iter(part) for part in parts], True

    def sampled(index: int, count: int) -> Iterator[tuple[int, ...]]:
        rng = derive_rng(seed, purpose, index)
        for _ in range(count):
            yield sample_subset(rng, n, size)

    chunks = []
    for index, start in enumerate(range(0, samples, CHUNK)):
        count = min(CHUNK, samples - start)
        chunks.append(lambda index=index, count=count: sampled(index, count))
    return chunks, False


def _run(
    kind: str,
    n: int,
    size: int,
    samples: int,
    seed: int,
    passes: Callable[[VertexSet], bool],
    max_workers: int,
) -> SubsetAudit:
    chunks, exhaustive = _chunks(n, size, samples, seed, kind)

    def evaluate(chunk: Chunk) -> tuple[int, int, Optional[tuple[int, ...]]]:
        checked = failures = 0
        first = None
        for subset in chunk():
            checked += 1
            if not passes(mask_of(subset)):
                failures += 1
                if first is None or subset < first:
                    first = subset
        return checked, failures, first

    if max_workers > 1 and len(chunks) > 1:
        with futures.ThreadPoolExecutor(max_workers) as pool:
            results = list(pool.map(evaluate, chunks))
    else:
        results = [evaluate(chunk) for chunk in chunks]

    failures = [first for _, _, first in results if first is not None]
    audit = SubsetAudit(
        kind,
        size,
        sum(r[0] for r in results),
        sum(r[1] for r in results),
        exhaustive,
        min(failures) if failures else None,
    )
    logger.info("%s audit: %d/%d subsets failed", kind, audit.failures, audit.checked)
    return audit


def audit_local_split(
    G: Graph, L: Graph, M: Graph, r: int, samples: int, seed: int, budgets: Optional[Budgets] = None
) -> SubsetAudit:
    """Check that G|S is {L, M}-split for subsets S of size min(r, n).

    Splitness is inherited by induced subgraphs, so the largest allowed size
    dominates every smaller one.
    """
    budget = resolve_budgets(budgets)
    size = min(r, G.n)

    def passes(mask: VertexSet) -> bool:
        sub, _ = induced(G, mask)
        return is_split(sub, L, M, budget) is not None

    return _run("local", G.n, size, samples, seed, passes, budget.max_workers)


def audit_density(
    G: Graph, L: Graph, M: Graph, k: int, samples: int, seed: int, budgets: Optional[Budgets] = None
) -> SubsetAudit:
    """Check that subsets of size ceil(n/2k) contain both L and M."""
    budget = resolve_budgets(budgets)
    size = min(G.n, math.ceil(G.n / (2 * k)))

    def passes(mask: VertexSet) -> bool:
        return find_embedding(L, G, mask) is not None and find_embedding(M, G, mask) is not None

    return _run("density", G.n, size, samples, seed, passes, budget.max_workers)


def audit_coverage(
    hypergraph: LabeledHypergraph, pieces: int, samples: int, seed: int, budgets: Optional[Budgets] = None
) -> SubsetAudit:
    """Check that subsets of size ceil(n / ln n) contain a hyperedge of every piece."""
    budget = resolve_budgets(budgets)
    n = hypergraph.n
    size = n if n < 3 else min(n, math.ceil(n / math.log(n)))
    by_label: list[list[VertexSet]] = [[] for _ in range(pieces)]
    for edge in hypergraph.hyperedges:
        for label in edge.labels:
            by_label[label].append(edge.vertices)

    def passes(mask: VertexSet) -> bool:
        return all(any(edge & ~mask == 0 for edge in edges) for edges in by_label)

    return _run("coverage", n, size, samples, seed, passes, budget.max_workers)
