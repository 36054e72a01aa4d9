"""Constructive (F, P)-partitions of {H, J}-free graphs.

The recursion works on *pieces*: induced embeddings g of a subgraph T of a
fixed anchored pattern into the host. For a piece and a one-vertex extension S of T,
its corresponding set is the set of host vertices that extend g to an
embedding of S. `PieceRecursion.solve` returns, for some extension S, a
partition of that corresponding set into at most phi(|T|, m) admissible classes.

`PieceRecursion` only talks to its host and patterns through out/in bitrows,
so the tournament module reuses it with arc direction in place of adjacency.
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional

from .config import Budgets, resolve_budgets
from .errors import HypothesisViolation, InputError, InvariantViolation, Witness
from .graph import (
    Graph,
    Relational,
    VertexSet,
    anticomponents,
    bits,
    complement,
    complete,
    components,
    disjoint_union,
    find_embedding,
    full_mask,
    induced,
    join,
    lowest,
)
from .oracles import Certificate, CertificateKind, FPartition, PartitionClass

logger = logging.getLogger(__name__)


def phi(t: int, m: int) -> int:
    """Class budget for pieces of size t: 2(m+1)^(m-t) below m, and 1 at t = m."""
    if m < 0 or not 0 <= t <= m:
        raise InputError(f"phi needs 0 <= t <= m, got t={t}, m={m}")
    if t == m:
        return 1
    return 2 * (m + 1) ** (m - t)


def pair_bound(m: int) -> int:
    """2(m+1)^m, the class budget of a whole {H, J}-free graph."""
    return phi(0, m)


# ---------------------------------------------------------------------------
# Pieces
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PieceState:
    """A T-piece: T as a vertex mask of the anchored pattern, images aligned with bits(T)."""

    T: VertexSet
    images: tuple[int, ...]

    @property
    def t(self) -> int:
        return self.T.bit_count()

    @property
    def image(self) -> VertexSet:
        mask = 0
        for y in self.images:
            mask |= 1 << y
        return mask

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(bits(self.T), self.images))

    def extend(self, s: int, v: int) -> "PieceState":
        mapping = dict(self.pairs())
        mapping[s] = v
        ordered = sorted(mapping)
        return PieceState(self.T | (1 << s), tuple(mapping[x] for x in ordered))


def _relation_mask(host: Relational, anchored: Relational, y: int, x: int, s: int) -> VertexSet:
    """Host vertices u that relate to y exactly as anchored-pattern vertex s relates to x."""
    h_out, h_in = host.out_rows, host.in_rows
    p_out, p_in = anchored.out_rows, anchored.in_rows
    mask = h_out[y] if p_out[x] >> s & 1 else ~h_out[y]
    if not (h_out is h_in and p_out is p_in):
        mask &= h_in[y] if p_in[x] >> s & 1 else ~h_in[y]
    return mask


def _corresponding(host: Relational, anchored: Relational, ps: PieceState, s: int) -> VertexSet:
    cand = full_mask(host.n) & ~ps.image
    for x, y in ps.pairs():
        cand &= _relation_mask(host, anchored, y, x, s)
        if not cand:
            break
    return cand


def corresponding_set(G: Relational, anchored: Relational, ps: PieceState, S: VertexSet) -> VertexSet:
    """Host vertices v outside g(T) such that g + (s -> v) embeds the anchored pattern restricted to S.

    S must be a one-vertex extension of ps.T inside the anchored pattern.
    """
    added = S & ~ps.T
    if S & ps.T != ps.T or added.bit_count() != 1 or S & ~full_mask(anchored.n):
        raise InputError(f"{S:#x} is not an anchored-pattern extension of {ps.T:#x}")
    return _corresponding(G, anchored, ps, lowest(added))


@dataclass(frozen=True)
class PieceResult:
    """Partition of the corresponding set for the chosen extension S = T + extension."""

    extension: int
    classes: tuple[PartitionClass, ...]

    @property
    def covered(self) -> VertexSet:
        mask = 0
        for cls in self.classes:
            mask |= cls.vertices
        return mask


@dataclass(frozen=True)
class BlockerRule:
    """How to split Y_R(g) once a type class Z_R contains every pattern.

    Args:
        b_pattern: Pattern that B induces inside Z_R.
        a0_pattern: Pattern the remainder A_0 is certified to avoid.
        forbidden: The forbidden structure formed by B and a copy of a0_pattern.
        b_first: Whether B's vertices come first in `forbidden`'s vertex order.
    """

    b_pattern: int
    a0_pattern: int
    forbidden: Relational
    b_first: bool


@dataclass
class RecursionStats:
    pieces: int = 0
    memo_hits: int = 0
    typed: int = 0
    blocked: int = 0
    max_types: dict[int, int] = field(default_factory=dict)


class PieceRecursion:
    """Partition a host piece by piece, by induction on m - t.

    Vertices 0..m-1 of the anchored pattern are pattern 0 (H_1) and vertex m is the anchor.
    Pattern 1 is the one certified at the base (H_2).
    """

    def __init__(
        self,
        host: Relational,
        anchored: Relational,
        m: int,
        patterns: Sequence[Relational],
        blocker: Callable[[int, int], BlockerRule],
        base_forbidden: Relational,
        *,
        memo_limit: int,
    ) -> None:
        if anchored.n != m + 1:
            raise InputError(f"the anchored pattern must have m+1={m + 1} vertices, got {anchored.n}")
        self.host = host
        self.anchored = anchored
        self.m = m
        self.patterns = tuple(patterns)
        self.blocker = blocker
        self.base_forbidden = base_forbidden
        self.memo_limit = memo_limit
        self.stats = RecursionStats()
        self._memo: dict[tuple[int, tuple[int, ...]], PieceResult] = {}
        self._contains: dict[tuple[int, int], bool] = {}

    def contains(self, index: int, mask: VertexSet) -> bool:
        key = (index, mask)
        hit = self._contains.get(key)
        if hit is None:
            hit = find_embedding(self.patterns[index], self.host, mask) is not None
            self._contains[key] = hit
        return hit

    def root(self) -> PieceResult:
        """Solve the null piece; the result partitions the whole host."""
        result = self.solve(PieceState(0, ()))
        if result.covered != full_mask(self.host.n):
            raise InvariantViolation("root partition does not cover the host")
        logger.debug(
            "piece recursion: %d pieces, %d memo hits, %d typed, %d blocked",
            self.stats.pieces,
            self.stats.memo_hits,
            self.stats.typed,
            self.stats.blocked,
        )
        return result

    def solve(self, piece: PieceState) -> PieceResult:
        key = (piece.T, piece.images)
        cached = self._memo.get(key)
        if cached is not None:
            self.stats.memo_hits += 1
            return cached
        self.stats.pieces += 1
        t = piece.t
        result = self._base(piece) if t == self.m else self._step(piece, t)
        if len(result.classes) > phi(t, self.m):
            raise InvariantViolation(
                f"{len(result.classes)} classes exceed phi({t})={phi(t, self.m)}"
            )
        if len(self._memo) < self.memo_limit:
            self._memo[key] = result
        return result

    def _base(self, piece: PieceState) -> PieceResult:
        anchor = self.m
        Y = _corresponding(self.host, self.anchored, piece, anchor)
        for x, y in piece.pairs():
            if Y & ~_relation_mask(self.host, self.anchored, y, x, anchor):
                raise InvariantViolation("Y(g) is not related to g(H1) as the anchor is to H1")
        if not Y:
            return PieceResult(anchor, ())
        copy = find_embedding(self.patterns[1], self.host, Y)
        if copy is not None:
            raise HypothesisViolation(
                "host contains the forbidden pattern (H1-piece plus a copy of H2)",
                Witness(self.base_forbidden, piece.images + copy.mapping, "H"),
            )
        return PieceResult(anchor, (PartitionClass(Y, Certificate.avoids(1)),))

    def _certify(self, mask: VertexSet) -> Optional[Certificate]:
        if mask.bit_count() == 1:
            return Certificate.singleton()
        for index in range(len(self.patterns)):
            if not self.contains(index, mask):
                return Certificate.avoids(index)
        return None

    def _step(self, piece: PieceState, t: int) -> PieceResult:
        # S inside H1: add the lowest H1 vertex not yet in T
        s = lowest(full_mask(self.m) & ~piece.T)
        Y_S = _corresponding(self.host, self.anchored, piece, s)

        types: dict[int, VertexSet] = {}
        sub: dict[int, PieceResult] = {}
        for v in bits(Y_S):
            child = self.solve(piece.extend(s, v))
            types[child.extension] = types.get(child.extension, 0) | (1 << v)
            sub[v] = child
        if len(types) > self.m - t:
            raise InvariantViolation(f"{len(types)} vertex types at level {t} exceed m-t={self.m - t}")
        self.stats.max_types[t] = max(self.stats.max_types.get(t, 0), len(types))

        typed = []
        blocked_r = None
        for r in sorted(types):
            cert = self._certify(types[r])
            if cert is None:
                blocked_r = r
                break
            typed.append(PartitionClass(types[r], cert))
        if blocked_r is None:
            self.stats.typed += 1
            return PieceResult(s, tuple(typed))

        self.stats.blocked += 1
        return self._blocked(piece, t, s, blocked_r, types[blocked_r], sub)

    def _blocked(
        self,
        piece: PieceState,
        t: int,
        s: int,
        r: int,
        Z: VertexSet,
        sub: dict[int, PieceResult],
    ) -> PieceResult:
        rule = self.blocker(r, s)
        B = find_embedding(self.patterns[rule.b_pattern], self.host, Z)
        if B is None:
            raise InvariantViolation("type class contains every pattern but no copy of B was found")
        A = _corresponding(self.host, self.anchored, piece, r)
        rest = A & ~B.image

        matches = {b: rest & _relation_mask(self.host, self.anchored, b, s, r) for b in B.mapping}
        A0 = rest & ~reduce(lambda acc, mask: acc | mask, matches.values(), 0)
        if A0:
            copy = find_embedding(self.patterns[rule.a0_pattern], self.host, A0)
            if copy is not None:
                mapping = B.mapping + copy.mapping if rule.b_first else copy.mapping + B.mapping
                raise HypothesisViolation(
                    "host contains the forbidden pattern (B plus a copy in A_0)",
                    Witness(rule.forbidden, mapping),
                )

        classes = [PartitionClass(1 << b, Certificate.singleton()) for b in B.mapping if A >> b & 1]
        if A0:
            classes.append(PartitionClass(A0, Certificate.avoids(rule.a0_pattern)))
        assigned = A0
        for b in B.mapping:
            A_b = matches[b] & ~assigned
            if not A_b:
                continue
            below = sub[b]
            if below.extension != r or A_b & ~below.covered:
                raise InvariantViolation("A_b is not inside the corresponding set of b's piece")
            for cls in below.classes:
                part = cls.vertices & A_b
                if part:
                    classes.append(PartitionClass(part, cls.certificate))
            assigned |= A_b
        if assigned | (A & B.image) != A:
            raise InvariantViolation("B, A_0 and the A_b do not cover Y_R(g)")
        return PieceResult(r, tuple(classes))


# ---------------------------------------------------------------------------
# Forbidden pairs and normalization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ForbiddenPair:
    """H = H1 ⊔ H2 and J = J1 join J2, with |H1| = m after normalization."""

    H: Graph
    J: Graph
    H1: Graph
    H2: Graph
    J1: Graph
    J2: Graph
    m: int
    anchored: Graph
    anchor: int

    @property
    def patterns(self) -> tuple[Graph, Graph, Graph, Graph]:
        return (self.H1, self.H2, self.J1, self.J2)


def forbidden_pair(H1: Graph, H2: Graph, J1: Graph, J2: Graph) -> ForbiddenPair:
    """Assemble H = H1 ⊔ H2, J = J1 join J2 and the anchored pattern: H1 plus the first vertex of H2 as anchor."""
    if min(H1.n, H2.n, J1.n, J2.n) == 0:
        raise InputError("H1, H2, J1 and J2 must be non-null")
    H = disjoint_union(H1, H2)
    J = join(J1, J2)
    m = max(H1.n, H2.n, J1.n, J2.n)
    anchor = H1.n
    anchored, _ = induced(H, full_mask(H1.n) | (1 << anchor))
    return ForbiddenPair(H, J, H1, H2, J1, J2, m, anchored, anchor)


@dataclass(frozen=True)
class SplitChoice:
    """Which components form H1 and which anticomponents form J1 (None: the largest)."""

    h1_components: Optional[tuple[int, ...]] = None
    j1_anticomponents: Optional[tuple[int, ...]] = None


@dataclass(frozen=True)
class NormalizationRecord:
    """How the caller's pair was transformed before running the recursion.

    certificate_map[i] is the caller's pattern index for engine pattern i, with
    the caller's patterns ordered [H1, H2, J1, J2].
    """

    complemented: bool
    side_swapped: bool
    component_choice: str
    certificate_map: tuple[int, int, int, int] = (0, 1, 2, 3)


def _largest(parts: Sequence[VertexSet]) -> int:
    return max(range(len(parts)), key=lambda i: (parts[i].bit_count(), -i))


def _pick(parts: Sequence[VertexSet], chosen: Optional[tuple[int, ...]], what: str) -> VertexSet:
    if chosen is None:
        return parts[_largest(parts)]
    if not chosen or any(not 0 <= i < len(parts) for i in chosen) or len(set(chosen)) == len(parts):
        raise InputError(f"{what} choice {chosen} must be a non-empty proper subset of 0..{len(parts) - 1}")
    mask = 0
    for i in chosen:
        mask |= parts[i]
    return mask


def split_pair(
    H: Graph, J: Graph, split_choice: Optional[SplitChoice] = None
) -> tuple[tuple[Graph, Graph, Graph, Graph], str]:
    """Cut H into H1 ⊔ H2 along components and J into J1 join J2 along anticomponents."""
    choice = split_choice or SplitChoice()
    h_parts = components(H)
    if len(h_parts) < 2:
        raise HypothesisViolation("H must be disconnected")
    j_parts = anticomponents(J)
    if len(j_parts) < 2:
        raise HypothesisViolation("the complement of J must be disconnected")
    h1 = _pick(h_parts, choice.h1_components, "component")
    j1 = _pick(j_parts, choice.j1_anticomponents, "anticomponent")
    H1, _ = induced(H, h1)
    H2, _ = induced(H, H.vertices & ~h1)
    J1, _ = induced(J, j1)
    J2, _ = induced(J, J.vertices & ~j1)
    description = (
        f"H1=components{choice.h1_components or 'largest'} ({H1.n} of {H.n} vertices), "
        f"J1=anticomponents{choice.j1_anticomponents or 'largest'} ({J1.n} of {J.n} vertices)"
    )
    return (H1, H2, J1, J2), description


def normalize_parts(
    H1: Graph, H2: Graph, J1: Graph, J2: Graph, description: str = ""
) -> tuple[ForbiddenPair, NormalizationRecord]:
    """Complement if the largest part is on the J side, then make |H1| = m."""
    cmap = [0, 1, 2, 3]
    complemented = max(J1.n, J2.n) > max(H1.n, H2.n)
    if complemented:
        H1, H2, J1, J2 = complement(J1), complement(J2), complement(H1), complement(H2)
        cmap = [2, 3, 0, 1]
    swapped = H2.n > H1.n
    if swapped:
        H1, H2 = H2, H1
        cmap[0], cmap[1] = cmap[1], cmap[0]
    pair = forbidden_pair(H1, H2, J1, J2)
    record = NormalizationRecord(complemented, swapped, description, tuple(cmap))  # type: ignore[arg-type]
    logger.debug("normalized pair: m=%d complemented=%s swapped=%s", pair.m, complemented, swapped)
    return pair, record


def normalize_pair(
    H: Graph, J: Graph, split_choice: Optional[SplitChoice] = None
) -> tuple[ForbiddenPair, NormalizationRecord]:
    parts, description = split_pair(H, J, split_choice)
    return normalize_parts(*parts, description=description)


# ---------------------------------------------------------------------------
# Drivers for disconnected H and J
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairPartition:
    """An (F, 2(m+1)^m)-partition with F = parts = [H1, H2, J1, J2]."""

    partition: FPartition
    record: NormalizationRecord
    bound: int
    parts: tuple[Graph, Graph, Graph, Graph]
    stats: Optional[RecursionStats] = None


def _require_free(G: Graph, pattern: Graph, name: str) -> None:
    found = find_embedding(pattern, G)
    if found is not None:
        raise HypothesisViolation(f"G contains {name}", Witness(pattern, found.mapping, name))


def _graph_blocker(pair: ForbiddenPair) -> Callable[[int, int], BlockerRule]:
    def rule(r: int, s: int) -> BlockerRule:
        if pair.anchored.has_edge(r, s):
            return BlockerRule(0, 1, pair.H, True)
        return BlockerRule(2, 3, pair.J, True)

    return rule


def _partition_parts(
    G: Graph,
    parts: tuple[Graph, Graph, Graph, Graph],
    description: str,
    budgets: Budgets,
) -> PairPartition:
    pair, record = normalize_parts(*parts, description=description)
    host = complement(G) if record.complemented else G
    bound = pair_bound(pair.m)
    stats = None
    if host.n == 0:
        classes: tuple[PartitionClass, ...] = ()
    elif find_embedding(pair.H1, host) is None:
        cert = Certificate.singleton() if host.n == 1 else Certificate.avoids(0)
        classes = (PartitionClass(host.vertices, cert),)
    else:
        engine = PieceRecursion(
            host,
            pair.anchored,
            pair.m,
            pair.patterns,
            _graph_blocker(pair),
            pair.H,
            memo_limit=budgets.memo_limit,
        )
        try:
            classes = engine.root().classes
        except HypothesisViolation as exc:
            if record.complemented and exc.witness is not None:
                w = exc.witness
                raise HypothesisViolation(str(exc), Witness(complement(w.pattern), w.mapping, w.note)) from exc
            raise
        stats = engine.stats
    partition = FPartition(classes).relabel_patterns(record.certificate_map)
    return PairPartition(partition, record, bound, parts, stats)


def partition_pair(
    G: Graph,
    H: Graph,
    J: Graph,
    split_choice: Optional[SplitChoice] = None,
    budgets: Optional[Budgets] = None,
) -> PairPartition:
    """Partition an {H, J}-free graph, returning the normalization record and bound too."""
    parts, description = split_pair(H, J, split_choice)
    _require_free(G, H, "H")
    _require_free(G, J, "J")
    return _partition_parts(G, parts, description, resolve_budgets(budgets))


def two_graphs_partition(
    G: Graph,
    H: Graph,
    J: Graph,
    split_choice: Optional[SplitChoice] = None,
    budgets: Optional[Budgets] = None,
) -> FPartition:
    """An ({H1,H2,J1,J2}, 2(m+1)^m)-partition of an {H, J}-free graph G."""
    return partition_pair(G, H, J, split_choice, budgets).partition


@dataclass(frozen=True)
class DrivenPartition:
    """A (c(H) ∪ ac(J), P)-partition; family = components of H then anticomponents of J."""

    partition: FPartition
    family: tuple[Graph, ...]
    h_count: int
    bound: int

    def on_h_side(self, cls: PartitionClass) -> bool:
        cert = cls.certificate
        return cert.kind is CertificateKind.AVOIDS and cert.pattern is not None and cert.pattern < self.h_count


def _union_of(graphs: Sequence[Graph]) -> Graph:
    return reduce(disjoint_union, graphs)


def _join_of(graphs: Sequence[Graph]) -> Graph:
    return reduce(join, graphs)


def _split_indices(sizes: Sequence[int], indices: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    first = max(indices, key=lambda i: (sizes[i], -i))
    return first, tuple(i for i in indices if i != first)


def driver_bound(h_sizes: Sequence[int], j_sizes: Sequence[int]) -> int:
    """Product of the per-level 2(m+1)^m bounds along the driver's recursion."""

    def bound(h: tuple[int, ...], j: tuple[int, ...]) -> int:
        if len(h) == 1 and len(j) == 1:
            return 1
        h1, h_rest = _split_indices(h_sizes, h)
        j1, j_rest = _split_indices(j_sizes, j)
        m = max(
            h_sizes[h1],
            sum(h_sizes[i] for i in h_rest) or 1,
            j_sizes[j1],
            sum(j_sizes[i] for i in j_rest) or 1,
        )
        below = [1]
        if len(h_rest) > 1:
            below.append(bound(h_rest, j))
        if len(j_rest) > 1:
            below.append(bound(h, j_rest))
        return pair_bound(m) * max(below)

    return bound(tuple(range(len(h_sizes))), tuple(range(len(j_sizes))))


def disconnected_partition(G: Graph, H: Graph, J: Graph, budgets: Optional[Budgets] = None) -> DrivenPartition:
    """Partition per component of H and anticomponent of J by repeated two-graph splits.

    At each level H1 is the largest remaining component of H and J1 the largest
    remaining anticomponent of J; a side with a single part left is padded with
    K_1. Classes certified by a single component/anticomponent are final; classes
    certified by a union of several are re-partitioned recursively.
    """
    if H.n == 0 or J.n == 0:
        raise InputError("H and J must be non-null")
    budget = resolve_budgets(budgets)
    _require_free(G, H, "H")
    _require_free(G, J, "J")

    h_sets = components(H)
    j_sets = anticomponents(J)
    family = tuple(induced(H, c)[0] for c in h_sets) + tuple(induced(J, c)[0] for c in j_sets)
    h_count = len(h_sets)
    h_sizes = [g.n for g in family[:h_count]]
    j_sizes = [g.n for g in family[h_count:]]
    pad = complete(1)

    def drive(X: VertexSet, h: tuple[int, ...], j: tuple[int, ...]) -> list[PartitionClass]:
        if len(h) == 1 and len(j) == 1:
            cert = Certificate.singleton() if X.bit_count() == 1 else Certificate.avoids(h[0])
            return [PartitionClass(X, cert)]
        h1, h_rest = _split_indices(h_sizes, h)
        j1, j_rest = _split_indices(j_sizes, j)
        H1 = family[h1]
        H2 = _union_of([family[i] for i in h_rest]) if h_rest else pad
        J1 = family[h_count + j1]
        J2 = _join_of([family[h_count + i] for i in j_rest]) if j_rest else pad
        sub, order = induced(G, X)
        level = _partition_parts(sub, (H1, H2, J1, J2), f"driver level h={h} j={j}", budget)

        out: list[PartitionClass] = []
        for cls in level.partition.lift(order):
            cert = cls.certificate
            if cert.kind is not CertificateKind.AVOIDS:
                out.append(cls)
                continue
            if cert.pattern == 0:
                out.append(PartitionClass(cls.vertices, Certificate.avoids(h1)))
            elif cert.pattern == 2:
                out.append(PartitionClass(cls.vertices, Certificate.avoids(h_count + j1)))
            elif cert.pattern == 1:
                if not h_rest:
                    raise InvariantViolation("a non-empty class avoids the K_1 padding")
                if len(h_rest) == 1:
                    out.append(PartitionClass(cls.vertices, Certificate.avoids(h_rest[0])))
                else:
                    out.extend(drive(cls.vertices, h_rest, j))
            else:
                if not j_rest:
                    raise InvariantViolation("a non-empty class avoids the K_1 padding")
                if len(j_rest) == 1:
                    out.append(PartitionClass(cls.vertices, Certificate.avoids(h_count + j_rest[0])))
                else:
                    out.extend(drive(cls.vertices, h, j_rest))
        return out

    if G.n == 0:
        classes: list[PartitionClass] = []
    else:
        classes = drive(G.vertices, tuple(range(h_count)), tuple(range(len(j_sets))))
    bound = driver_bound(h_sizes, j_sizes)
    logger.info("driver produced %d classes (reported bound %d)", len(classes), bound)
    return DrivenPartition(FPartition(tuple(classes)), family, h_count, bound)
