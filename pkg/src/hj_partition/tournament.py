"""Tournaments: the H1 => H2 partition recursion and hero colorings.

Arc direction plays the role of adjacency, so the partition recursion from
`engine` runs unchanged on tournaments.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Optional

from numpy.random import Generator

from .config import Budgets, resolve_budgets
from .engine import BlockerRule, PieceRecursion, pair_bound
from .errors import BudgetExceeded, HeroBudgetExceeded, HypothesisViolation, InputError, InvariantViolation, Witness
from .graph import Embedding, VertexSet, bits, find_embedding, full_mask, mask_of
from .oracles import Certificate, FPartition, PartitionClass, PartitionReport, verify_partition

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Tournament:
    """Complete orientation on 0..n-1; out[u] is the set of vertices u beats."""

    n: int
    out: tuple[int, ...]
    inn: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.out) != self.n:
            raise InputError(f"tournament needs exactly n={self.n} rows, got {len(self.out)}")
        everything = full_mask(self.n)
        rows = [0] * self.n
        for u, row in enumerate(self.out):
            if row & ~everything or row >> u & 1:
                raise InputError(f"row {u} has a self-loop or out-of-range vertex")
            for v in bits(row):
                rows[v] |= 1 << u
        for u in range(self.n):
            if self.out[u] & rows[u] or (self.out[u] | rows[u]) != everything & ~(1 << u):
                raise InputError(f"vertex {u} does not meet every other vertex by exactly one arc")
        object.__setattr__(self, "inn", tuple(rows))

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Sequence[int]]) -> "Tournament":
        """Build from (u, v) pairs meaning u beats v."""
        rows = [0] * n
        for arc in arcs:
            u, v = arc
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise InputError(f"arc ({u}, {v}) is invalid for n={n}")
            if rows[u] >> v & 1 or rows[v] >> u & 1:
                raise InputError(f"pair ({u}, {v}) is oriented twice")
            rows[u] |= 1 << v
        return cls(n, tuple(rows))

    @property
    def out_rows(self) -> tuple[int, ...]:
        return self.out

    @property
    def in_rows(self) -> tuple[int, ...]:
        return self.inn

    @property
    def vertices(self) -> VertexSet:
        return full_mask(self.n)

    def beats(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.out[u])]

    def __repr__(self) -> str:
        return f"Tournament(n={self.n}, arcs={self.arcs()})"


def transitive(n: int) -> Tournament:
    """The transitive tournament where u beats v iff u < v."""
    everything = full_mask(n)
    return Tournament(n, tuple(everything & ~full_mask(u + 1) for u in range(n)))


def cyclic_triangle() -> Tournament:
    return Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


def random_tournament(n: int, rng: Generator) -> Tournament:
    """Each pair oriented by an independent fair coin from `rng`."""
    rows = [0] * n
    flips = rng.integers(0, 2, size=n * (n - 1) // 2)
    index = 0
    for u in range(n):
        for v in range(u + 1, n):
            if flips[index]:
                rows[u] |= 1 << v
            else:
                rows[v] |= 1 << u
            index += 1
    return Tournament(n, tuple(rows))


def subtournament(G: Tournament, S: VertexSet) -> tuple[Tournament, tuple[int, ...]]:
    """G|S relabelled to 0..|S|-1, plus the map new index -> original vertex."""
    if S < 0 or S & ~G.vertices:
        raise InputError(f"vertex set {S:#x} is not contained in 0..{G.n - 1}")
    order = tuple(bits(S))
    position = {v: i for i, v in enumerate(order)}
    rows = tuple(mask_of(position[w] for w in bits(G.out[v] & S)) for v in order)
    return Tournament(len(order), rows), order


def compose(H1: Tournament, H2: Tournament) -> Tournament:
    """H1 => H2: H1 on 0..n1-1, H2 shifted after it, every H1 vertex beats every H2 vertex."""
    shift = H1.n
    right = full_mask(H2.n) << shift
    return Tournament(H1.n + H2.n, tuple(row | right for row in H1.out) + tuple(row << shift for row in H2.out))


def reverse(G: Tournament) -> Tournament:
    return Tournament(G.n, G.inn)


def contains_subtournament(G: Tournament, H: Tournament, within: Optional[VertexSet] = None) -> Optional[Embedding]:
    """A direction-preserving injective map H -> G (restricted to `within`), or None."""
    return find_embedding(H, G, within)


def is_transitive(G: Tournament, mask: Optional[VertexSet] = None) -> bool:
    """A tournament is transitive iff its score sequence has no repeats."""
    if mask is None:
        mask = G.vertices
    scores = [(G.out[v] & mask).bit_count() for v in bits(mask)]
    return len(set(scores)) == len(scores)


def verify_tournament_partition(G: Tournament, F: Sequence[Tournament], p: FPartition) -> PartitionReport:
    return verify_partition(G, F, p, transitive=lambda mask: is_transitive(G, mask))


# ---------------------------------------------------------------------------
# Partition of (H1 => H2)-free tournaments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TournamentPartition:
    """Classes certified against [H1, H2] in the caller's order."""

    partition: FPartition
    reversed: bool
    bound: int


def _tournament_blocker(anchored: Tournament, H: Tournament):
    def rule(r: int, s: int) -> BlockerRule:
        if anchored.beats(s, r):
            return BlockerRule(1, 0, H, False)
        return BlockerRule(0, 1, H, True)

    return rule


def two_tourn_partition(
    G: Tournament, H1: Tournament, H2: Tournament, budgets: Optional[Budgets] = None
) -> TournamentPartition:
    """An ({H1, H2}, 2(m+1)^m)-partition of an (H1 => H2)-free tournament G."""
    if H1.n == 0 or H2.n == 0:
        raise InputError("H1 and H2 must be non-null")
    budget = resolve_budgets(budgets)
    H = compose(H1, H2)
    found = contains_subtournament(G, H)
    if found is not None:
        raise HypothesisViolation("G contains H1 => H2", Witness(H, found.mapping, "H"))

    flipped = H2.n > H1.n
    if flipped:
        host, P1, P2, cmap = reverse(G), reverse(H2), reverse(H1), (1, 0)
    else:
        host, P1, P2, cmap = G, H1, H2, (0, 1)
    m = P1.n
    bound = pair_bound(m)

    if host.n == 0:
        classes: tuple[PartitionClass, ...] = ()
    elif contains_subtournament(host, P1) is None:
        cert = Certificate.singleton() if host.n == 1 else Certificate.avoids(0)
        classes = (PartitionClass(host.vertices, cert),)
    else:
        composed = compose(P1, P2)
        anchored, _ = subtournament(composed, full_mask(m) | (1 << m))
        engine = PieceRecursion(
            host,
            anchored,
            m,
            (P1, P2),
            _tournament_blocker(anchored, composed),
            composed,
            memo_limit=budget.memo_limit,
        )
        try:
            classes = engine.root().classes
        except HypothesisViolation as exc:
            if flipped and exc.witness is not None:
                w = exc.witness
                raise HypothesisViolation(str(exc), Witness(reverse(w.pattern), w.mapping, w.note)) from exc
            raise
    partition = FPartition(classes).relabel_patterns(cmap)
    if len(partition) > bound:
        raise InvariantViolation(f"{len(partition)} classes exceed the bound {bound}")
    logger.debug("tournament partition: %d classes, reversed=%s", len(partition), flipped)
    return TournamentPartition(partition, flipped, bound)


# ---------------------------------------------------------------------------
# Transitive partitions and hero colorings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransitivePartition:
    classes: tuple[VertexSet, ...]
    optimal: bool


def _greedy_transitive(G: Tournament, within: VertexSet) -> list[VertexSet]:
    classes: list[VertexSet] = []
    for v in bits(within):
        for index, cls in enumerate(classes):
            if is_transitive(G, cls | (1 << v)):
                classes[index] = cls | (1 << v)
                break
        else:
            classes.append(1 << v)
    return classes


def _exact_transitive(G: Tournament, within: VertexSet, k: int, budget: int, spent: list[int]) -> Optional[list[VertexSet]]:
    order = list(bits(within))
    classes = [0] * k

    def place(i: int, used: int) -> bool:
        if i == len(order):
            return True
        bit = 1 << order[i]
        for label in range(min(used + 1, k)):
            spent[0] += 1
            if spent[0] > budget:
                raise BudgetExceeded("exact transitive partition", spent[0], budget)
            grown = classes[label] | bit
            if not is_transitive(G, grown):
                continue
            classes[label] = grown
            if place(i + 1, max(used, label + 1)):
                return True
            classes[label] = grown & ~bit
        return False

    return [c for c in classes if c] if place(0, 0) else None


def transitive_partition(
    G: Tournament, exact_budget: Optional[int] = None, within: Optional[VertexSet] = None
) -> TransitivePartition:
    """Fewest transitive classes covering G|within.

    The exhaustive search runs under `exact_budget` search nodes; when it runs
    out, the greedy cover is returned with optimal=False.
    """
    if within is None:
        within = G.vertices
    if not within:
        return TransitivePartition((), True)
    budget = exact_budget if exact_budget is not None else resolve_budgets(None).transitive_budget
    greedy = _greedy_transitive(G, within)
    spent = [0]
    try:
        for k in range(1, len(greedy)):
            found = _exact_transitive(G, within, k, budget, spent)
            if found is not None:
                return TransitivePartition(tuple(found), True)
    except BudgetExceeded:
        logger.info("transitive partition fell back to greedy after %d nodes", spent[0])
        return TransitivePartition(tuple(greedy), False)
    return TransitivePartition(tuple(greedy), True)


@dataclass(frozen=True)
class HeroColoring:
    classes: tuple[VertexSet, ...]
    partition: TournamentPartition
    per_class: tuple[int, ...]
    optimal: bool

    @property
    def bound(self) -> int:
        return self.partition.bound * max(self.per_class, default=1)


def hero_color(
    G: Tournament, H1: Tournament, H2: Tournament, c: int, budgets: Optional[Budgets] = None
) -> HeroColoring:
    """Partition G into at most 2(m+1)^m * c transitive sets.

    Raises:
        HeroBudgetExceeded: Some class of the H1/H2 partition needs more than c
            transitive sets (exactly, or by the greedy fallback when optimal is False).
    """
    if c < 1:
        raise InputError("c must be at least 1")
    budget = resolve_budgets(budgets)
    parts = two_tourn_partition(G, H1, H2, budget)
    classes: list[VertexSet] = []
    counts: list[int] = []
    optimal = True
    for index, cls in enumerate(parts.partition):
        colored = transitive_partition(G, budget.transitive_budget, cls.vertices)
        if len(colored.classes) > c:
            qualifier = "" if colored.optimal else " (greedy upper bound)"
            raise HeroBudgetExceeded(
                f"class {index} needs {len(colored.classes)} transitive sets{qualifier}, budget c={c}",
                index,
                len(colored.classes),
                c,
            )
        optimal = optimal and colored.optimal
        counts.append(len(colored.classes))
        classes.extend(colored.classes)
    for cls in classes:
        if not is_transitive(G, cls):
            raise InvariantViolation("hero coloring produced a non-transitive class")
    return HeroColoring(tuple(classes), parts, tuple(counts), optimal)
