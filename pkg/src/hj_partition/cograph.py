"""Cotrees, universal cographs and {H~, J~}-splits of {H, J}-free graphs."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Optional, Union

from .config import Budgets, resolve_budgets
from .engine import DrivenPartition, disconnected_partition
from .errors import BudgetExceeded, HypothesisViolation, InputError, InvariantViolation
from .graph import Graph, VertexSet, anticomponents, complete, components, disjoint_union, find_embedding, join
from .oracles import CertificateKind, exists_partition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Empty:
    """The null cograph; it never appears below a union or join node."""

    @property
    def height(self) -> int:
        return 0

    @property
    def leaf_count(self) -> int:
        return 0


@dataclass(frozen=True)
class Leaf:
    @property
    def height(self) -> int:
        return 0

    @property
    def leaf_count(self) -> int:
        return 1


@dataclass(frozen=True)
class DisjointUnion:
    """Union node: its children are the components of the realized graph."""

    children: tuple["Cotree", ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2 or any(isinstance(c, (DisjointUnion, Empty)) for c in self.children):
            raise InputError("a union node needs at least two children, none a union or null")

    @cached_property
    def height(self) -> int:
        return 1 + max(child.height for child in self.children)

    @cached_property
    def leaf_count(self) -> int:
        return sum(child.leaf_count for child in self.children)


@dataclass(frozen=True)
class Join:
    """Join node: its children are the anticomponents of the realized graph."""

    children: tuple["Cotree", ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2 or any(isinstance(c, (Join, Empty)) for c in self.children):
            raise InputError("a join node needs at least two children, none a join or null")

    @cached_property
    def height(self) -> int:
        return 1 + max(child.height for child in self.children)

    @cached_property
    def leaf_count(self) -> int:
        return sum(child.leaf_count for child in self.children)


Cotree = Union[Empty, Leaf, DisjointUnion, Join]

EMPTY = Empty()
LEAF = Leaf()


def union_of(*children: Cotree) -> Cotree:
    """Normalized union: nested unions are flattened, null children dropped, a single child returned as is."""
    flat: list[Cotree] = []
    for child in children:
        if not isinstance(child, Empty):
            flat.extend(child.children if isinstance(child, DisjointUnion) else (child,))
    if not flat:
        return EMPTY
    return flat[0] if len(flat) == 1 else DisjointUnion(tuple(flat))


def join_of(*children: Cotree) -> Cotree:
    """Normalized join: nested joins are flattened, null children dropped, a single child returned as is."""
    flat: list[Cotree] = []
    for child in children:
        if not isinstance(child, Empty):
            flat.extend(child.children if isinstance(child, Join) else (child,))
    if not flat:
        return EMPTY
    return flat[0] if len(flat) == 1 else Join(tuple(flat))


def height(t: Cotree) -> int:
    return t.height


def complement_cotree(t: Cotree) -> Cotree:
    """The cotree of the complement: union and join nodes swap."""
    if isinstance(t, (Empty, Leaf)):
        return t
    flipped = tuple(complement_cotree(c) for c in t.children)
    return Join(flipped) if isinstance(t, DisjointUnion) else DisjointUnion(flipped)


def canonical(t: Cotree) -> tuple:
    """Isomorphism invariant: two cographs are isomorphic iff their canonical forms agree."""
    if isinstance(t, Empty):
        return ("empty",)
    if isinstance(t, Leaf):
        return ("leaf",)
    tag = "union" if isinstance(t, DisjointUnion) else "join"
    return (tag, tuple(sorted(canonical(c) for c in t.children)))


def is_connected_cotree(t: Cotree) -> bool:
    return not isinstance(t, DisjointUnion)


def is_anticonnected_cotree(t: Cotree) -> bool:
    return not isinstance(t, Join)


def realize(t: Cotree, budgets: Optional[Budgets] = None) -> Graph:
    """Build the graph bottom-up; leaves are numbered left to right."""
    limit = resolve_budgets(budgets).realize_limit
    if t.leaf_count > limit:
        raise BudgetExceeded("realizing a cotree", t.leaf_count, limit)

    if isinstance(t, Empty):
        return Graph.null()

    def build(node: Cotree) -> Graph:
        if isinstance(node, Leaf):
            return complete(1)
        parts = [build(c) for c in node.children]
        return reduce(disjoint_union if isinstance(node, DisjointUnion) else join, parts)

    return build(t)


def is_cograph(G: Graph) -> Optional[Cotree]:
    """A cotree realizing a graph isomorphic to G, or None if G contains an induced P_4.

    The null graph is a cograph; its cotree is EMPTY.
    """

    def decompose(mask: VertexSet) -> Optional[Cotree]:
        if mask.bit_count() == 1:
            return LEAF
        parts = components(G, mask)
        build = union_of
        if len(parts) == 1:
            parts = anticomponents(G, mask)
            build = join_of
            if len(parts) == 1:
                return None
        children = []
        for part in parts:
            child = decompose(part)
            if child is None:
                return None
            children.append(child)
        return build(*children)

    if G.n == 0:
        return EMPTY
    return decompose(G.vertices)


def cotree_of(G: Graph) -> Cotree:
    """Like is_cograph, but a non-cograph is an input error."""
    t = is_cograph(G)
    if t is None:
        raise InputError("graph is not a cograph (it contains an induced P_4)")
    return t


def _anticomponents_of(t: Cotree) -> tuple[Cotree, ...]:
    return t.children if isinstance(t, Join) else (t,)


def _dedup(trees: Sequence[Cotree]) -> list[Cotree]:
    seen: dict[tuple, Cotree] = {}
    for t in trees:
        seen.setdefault(canonical(t), t)
    return list(seen.values())


def universal_cograph(F: Sequence[Cotree], P: int, k: int) -> Cotree:
    """A connected cograph of height exactly k that is (F, P)-universal.

    Raises:
        HypothesisViolation: A member of F is disconnected or taller than k.
    """
    if P < 1 or k < 1:
        raise InputError(f"P and k must be positive, got P={P}, k={k}")
    if not F:
        raise InputError("F must not be empty")
    for index, member in enumerate(F):
        if not is_connected_cotree(member):
            raise HypothesisViolation(f"member {index} of F is disconnected")
        if member.height > k:
            raise HypothesisViolation(f"member {index} of F has height {member.height} > {k}")

    if k == 1:
        m = max(member.leaf_count for member in F)
        return Join((LEAF,) * max(m * P, 2))

    A = _dedup([a for member in F for a in _anticomponents_of(member)])
    inner = universal_cograph([complement_cotree(a) for a in A], P, k - 1)
    C = complement_cotree(inner)
    s = max(len(_anticomponents_of(member)) for member in F)
    K = (s - 1) * P + 2
    logger.debug("universal cograph level k=%d: |A|=%d s=%d K=%d", k, len(A), s, K)
    return Join((C,) * K)


def is_universal_bruteforce(C: Graph, F: Sequence[Graph], P: int, budgets: Optional[Budgets] = None) -> bool:
    """True iff every partition of V(C) into P classes has a class containing all of F."""
    if P < 1:
        raise InputError("P must be positive")
    return exists_partition(C, F, P, singletons=False, budgets=budgets) is None


@dataclass(frozen=True)
class CoSplit:
    """X ∪ Y = V(G) with G|X Htilde-free and G|Y Jtilde-free."""

    X: VertexSet
    Y: VertexSet
    Htilde: Cotree
    Jtilde: Cotree
    driven: DrivenPartition

    @property
    def P(self) -> int:
        return max(1, len(self.driven.partition))


def _check_shapes(H: Cotree, J: Cotree) -> int:
    if not isinstance(H, DisjointUnion):
        raise HypothesisViolation("H must be an anticonnected cograph with at least two components")
    if not isinstance(J, Join):
        raise HypothesisViolation("J must be a connected cograph with at least two anticomponents")
    if H.height != J.height or H.height < 2:
        raise HypothesisViolation(f"H and J need equal height k+1 >= 2, got {H.height} and {J.height}")
    return H.height - 1


def cograph_split(G: Graph, H: Cotree, J: Cotree, budgets: Optional[Budgets] = None) -> CoSplit:
    """Split an {H, J}-free graph into an Htilde-free side X and a Jtilde-free side Y.

    Singleton classes go to X. P is the number of classes the driver produced.
    """
    k = _check_shapes(H, J)
    budget = resolve_budgets(budgets)
    H_graph = realize(H, budget)
    J_graph = realize(J, budget)
    driven = disconnected_partition(G, H_graph, J_graph, budget)

    X = Y = 0
    for cls in driven.partition:
        if cls.certificate.kind is CertificateKind.SINGLETON or driven.on_h_side(cls):
            X |= cls.vertices
        else:
            Y |= cls.vertices
    P = max(1, len(driven.partition))
    Htilde = universal_cograph(_dedup(H.children), P, k)
    Jtilde = complement_cotree(universal_cograph(_dedup([complement_cotree(b) for b in J.children]), P, k))

    for side, tilde, name in ((X, Htilde, "Htilde"), (Y, Jtilde, "Jtilde")):
        if tilde.leaf_count <= side.bit_count():
            if find_embedding(realize(tilde, budget), G, side) is not None:
                raise InvariantViolation(f"the {name} side of the split contains {name}")
    logger.info("cograph split: |X|=%d |Y|=%d P=%d k=%d", X.bit_count(), Y.bit_count(), P, k)
    return CoSplit(X, Y, Htilde, Jtilde, driven)
