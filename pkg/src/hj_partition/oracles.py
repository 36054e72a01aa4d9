"""Brute-force ground truth for splits and (F, P)-partitions.

These searches are exponential and guarded by explicit budgets; they exist to
validate the constructive algorithms, not to replace them.
"""

import enum
import logging
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass
from typing import Optional

from .config import Budgets, resolve_budgets
from .errors import BudgetExceeded, InputError
from .graph import Embedding, Relational, VertexSet, bits, find_embedding, full_mask

logger = logging.getLogger(__name__)


class CertificateKind(enum.Enum):
    """Why a class of a partition is acceptable."""

    SINGLETON = "singleton"
    AVOIDS = "avoids"
    TRANSITIVE = "transitive"


@dataclass(frozen=True, slots=True)
class Certificate:
    kind: CertificateKind
    pattern: Optional[int] = None

    @classmethod
    def singleton(cls) -> "Certificate":
        return cls(CertificateKind.SINGLETON)

    @classmethod
    def avoids(cls, pattern: int) -> "Certificate":
        return cls(CertificateKind.AVOIDS, pattern)

    @classmethod
    def transitive(cls) -> "Certificate":
        return cls(CertificateKind.TRANSITIVE)

    def __str__(self) -> str:
        if self.kind is CertificateKind.AVOIDS:
            return f"avoids[{self.pattern}]"
        return self.kind.value


@dataclass(frozen=True, slots=True)
class PartitionClass:
    vertices: VertexSet
    certificate: Certificate

    @property
    def size(self) -> int:
        return self.vertices.bit_count()


@dataclass(frozen=True)
class FPartition:
    """Ordered classes, each carrying the certificate that makes it admissible."""

    classes: tuple[PartitionClass, ...]

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self) -> Iterator[PartitionClass]:
        return iter(self.classes)

    @property
    def covered(self) -> VertexSet:
        mask = 0
        for cls in self.classes:
            mask |= cls.vertices
        return mask

    def masks(self) -> list[VertexSet]:
        return [cls.vertices for cls in self.classes]

    def relabel_patterns(self, mapping: Sequence[int]) -> "FPartition":
        """Rewrite AVOIDS(i) as AVOIDS(mapping[i])."""
        return FPartition(
            tuple(
                PartitionClass(cls.vertices, Certificate.avoids(mapping[cls.certificate.pattern]))
                if cls.certificate.kind is CertificateKind.AVOIDS
                else cls
                for cls in self.classes
            )
        )

    def lift(self, order: Sequence[int]) -> "FPartition":
        """Map classes of an induced subgraph back to host vertices (order[i] = host vertex)."""
        lifted = []
        for cls in self.classes:
            mask = 0
            for v in bits(cls.vertices):
                mask |= 1 << order[v]
            lifted.append(PartitionClass(mask, cls.certificate))
        return FPartition(tuple(lifted))


@dataclass(frozen=True)
class Violation:
    class_index: Optional[int]
    reason: str
    witness: Optional[Embedding] = None


@dataclass(frozen=True)
class PartitionReport:
    valid: bool
    first_violation: Optional[Violation] = None


@dataclass(frozen=True)
class SplitWitness:
    X: VertexSet
    Y: VertexSet


def verify_partition(
    G: Relational,
    F: Sequence[Relational],
    p: FPartition,
    *,
    transitive: Optional[Callable[[VertexSet], bool]] = None,
) -> PartitionReport:
    """Check every FPartition invariant of `p` against host G and pattern list F.

    Raises InputError when a class references a pattern index outside F (or a
    transitive certificate is used without a `transitive` checker).
    """
    for index, cls in enumerate(p.classes):
        cert = cls.certificate
        if cert.kind is CertificateKind.AVOIDS and not (
            cert.pattern is not None and 0 <= cert.pattern < len(F)
        ):
            raise InputError(f"class {index} references unknown pattern index {cert.pattern}")
        if cert.kind is CertificateKind.TRANSITIVE and transitive is None:
            raise InputError(f"class {index} claims transitivity but the host is not a tournament")

    seen = 0
    everything = full_mask(G.n)
    for index, cls in enumerate(p.classes):
        if cls.vertices <= 0 or cls.vertices & ~everything:
            return PartitionReport(False, Violation(index, "class is empty or out of range"))
        if cls.vertices & seen:
            return PartitionReport(False, Violation(index, "class overlaps an earlier class"))
        seen |= cls.vertices
        cert = cls.certificate
        if cert.kind is CertificateKind.SINGLETON:
            if cls.size != 1:
                return PartitionReport(False, Violation(index, f"singleton class has {cls.size} vertices"))
        elif cert.kind is CertificateKind.TRANSITIVE:
            assert transitive is not None
            if not transitive(cls.vertices):
                return PartitionReport(False, Violation(index, "class is not transitive"))
        else:
            assert cert.pattern is not None
            found = find_embedding(F[cert.pattern], G, cls.vertices)
            if found is not None:
                return PartitionReport(
                    False, Violation(index, f"class contains pattern {cert.pattern}", found)
                )
    if seen != everything:
        missing = sorted(bits(everything & ~seen))
        return PartitionReport(False, Violation(None, f"vertices {missing} are not covered"))
    return PartitionReport(True)


def verify_split(G: Relational, H1: Relational, H2: Relational, witness: SplitWitness) -> bool:
    if witness.X | witness.Y != full_mask(G.n):
        return False
    return find_embedding(H1, G, witness.X) is None and find_embedding(H2, G, witness.Y) is None


def is_split(
    G: Relational, H1: Relational, H2: Relational, budgets: Optional[Budgets] = None
) -> Optional[SplitWitness]:
    """A partition V = X ∪ Y with G|X H1-free and G|Y H2-free, or None.

    Labelings are explored in lexicographic order (X before Y per vertex), so the
    first witness is deterministic.
    """
    limit = resolve_budgets(budgets).split_max_vertices
    if G.n > limit:
        raise BudgetExceeded(f"is_split on {G.n} vertices", G.n, limit)

    n = G.n

    def place(v: int, X: int, Y: int) -> Optional[SplitWitness]:
        if v == n:
            if find_embedding(H1, G, X) is None and find_embedding(H2, G, Y) is None:
                return SplitWitness(X, Y)
            return None
        bit = 1 << v
        if find_embedding(H1, G, X | bit) is None:
            found = place(v + 1, X | bit, Y)
            if found is not None:
                return found
        if find_embedding(H2, G, Y | bit) is None:
            return place(v + 1, X, Y | bit)
        return None

    # null patterns are contained even in the empty set
    if find_embedding(H1, G, 0) is not None or find_embedding(H2, G, 0) is not None:
        return None
    return place(0, 0, 0)


def exists_partition(
    G: Relational,
    F: Sequence[Relational],
    k: int,
    *,
    class_patterns: Optional[Sequence[int]] = None,
    singletons: bool = True,
    budgets: Optional[Budgets] = None,
) -> Optional[FPartition]:
    """Exact search for an (F, k)-partition of G.

    Args:
        G: Host graph or tournament.
        F: Pattern list.
        k: Maximum number of classes.
        class_patterns: When given, class i must avoid F[class_patterns[i]] regardless
            of its size (the restricted form used to cross-check `is_split`).
        singletons: Whether a one-vertex class is admissible without a pattern.
        budgets: Work budget override.

    Returns:
        The first valid FPartition in lexicographic labeling order, or None.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    if class_patterns is not None:
        if len(class_patterns) != k or any(not 0 <= i < len(F) for i in class_patterns):
            raise InputError("class_patterns must name one valid pattern index per class")

    n = G.n
    budget = resolve_budgets(budgets).work
    if float(k) ** n > budget:
        raise BudgetExceeded(f"exists_partition with k={k} on {n} vertices", float(k) ** n, budget)

    avoided: dict[int, int] = {}

    def first_avoided(mask: int) -> int:
        hit = avoided.get(mask)
        if hit is None:
            hit = -1
            for index, pattern in enumerate(F):
                if find_embedding(pattern, G, mask) is None:
                    hit = index
                    break
            avoided[mask] = hit
        return hit

    def admissible(mask: int, label: int) -> bool:
        if class_patterns is not None:
            return find_embedding(F[class_patterns[label]], G, mask) is None
        if singletons and mask.bit_count() == 1:
            return True
        return first_avoided(mask) >= 0

    classes = [0] * k
    work = 0

    def place(v: int, used: int) -> bool:
        nonlocal work
        if v == n:
            return True
        top = k if class_patterns is not None else min(used + 1, k)
        for label in range(top):
            work += 1
            if work > budget:
                raise BudgetExceeded("exists_partition search", work, budget)
            grown = classes[label] | (1 << v)
            if not admissible(grown, label):
                continue
            previous = classes[label]
            classes[label] = grown
            if place(v + 1, max(used, label + 1)):
                return True
            classes[label] = previous
        return False

    if not place(0, 0):
        logger.debug("no (F,%d)-partition of a %d-vertex host", k, n)
        return None

    result = []
    for label, mask in enumerate(classes):
        if not mask:
            continue
        if class_patterns is not None:
            cert = Certificate.avoids(class_patterns[label])
        elif singletons and mask.bit_count() == 1:
            cert = Certificate.singleton()
        else:
            cert = Certificate.avoids(first_avoided(mask))
        result.append(PartitionClass(mask, cert))
    return FPartition(tuple(result))
