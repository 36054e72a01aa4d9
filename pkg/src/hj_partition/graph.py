"""Simple undirected graphs on 0..n-1 stored as adjacency bitrows.

A vertex set is an ``int`` bitmask over the ambient graph. Graphs are
immutable; every function here is pure.
"""

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import Optional, Protocol

import networkx as nx

from .errors import InputError

VertexSet = int


def bits(mask: VertexSet) -> Iterator[int]:
    """Yield the members of a bitmask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> VertexSet:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def full_mask(n: int) -> VertexSet:
    return (1 << n) - 1


def lowest(mask: VertexSet) -> int:
    """Lowest member of a non-empty mask."""
    return (mask & -mask).bit_length() - 1


class Relational(Protocol):
    """Anything with out/in neighbourhood bitrows: graphs and tournaments."""

    @property
    def n(self) -> int: ...

    @property
    def out_rows(self) -> tuple[int, ...]: ...

    @property
    def in_rows(self) -> tuple[int, ...]: ...


@dataclass(frozen=True, slots=True)
class Graph:
    """Simple undirected graph; adj[v] is the neighbourhood bitmask of v."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adj) != self.n:
            raise InputError(f"graph needs exactly n={self.n} rows, got {len(self.adj)}")
        everything = full_mask(self.n)
        for u, row in enumerate(self.adj):
            if row & ~everything:
                raise InputError(f"row {u} refers to vertices outside 0..{self.n - 1}")
            if row >> u & 1:
                raise InputError(f"self-loop at vertex {u}")
            for v in bits(row):
                if not self.adj[v] >> u & 1:
                    raise InputError(f"adjacency is not symmetric at ({u}, {v})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        rows = [0] * n
        for edge in edges:
            u, v = edge
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def null(cls) -> "Graph":
        return cls(0, ())

    @property
    def out_rows(self) -> tuple[int, ...]:
        return self.adj

    @property
    def in_rows(self) -> tuple[int, ...]:
        return self.adj

    @property
    def vertices(self) -> VertexSet:
        return full_mask(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int, within: Optional[VertexSet] = None) -> int:
        row = self.adj[v] if within is None else self.adj[v] & within
        return row.bit_count()

    def edges(self) -> list[tuple[int, int]]:
        """Edges (u, v) with u < v in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


@dataclass(frozen=True)
class Embedding:
    """An induced embedding: mapping[i] is the host image of pattern vertex i."""

    pattern: Relational
    host: Relational
    mapping: tuple[int, ...]

    @property
    def image(self) -> VertexSet:
        return mask_of(self.mapping)

    def is_induced(self) -> bool:
        """Re-check injectivity and preservation of (non-)adjacency / direction."""
        if len(self.mapping) != self.pattern.n or len(set(self.mapping)) != len(self.mapping):
            return False
        p_out, h_out = self.pattern.out_rows, self.host.out_rows
        for i, x in enumerate(self.mapping):
            for j, y in enumerate(self.mapping):
                if i != j and bool(p_out[i] >> j & 1) != bool(h_out[x] >> y & 1):
                    return False
        return True


# ---------------------------------------------------------------------------
# Basic operations
# ---------------------------------------------------------------------------


def complement(G: Graph) -> Graph:
    everything = full_mask(G.n)
    return Graph(G.n, tuple(everything & ~row & ~(1 << v) for v, row in enumerate(G.adj)))


def induced(G: Graph, S: VertexSet) -> tuple[Graph, tuple[int, ...]]:
    """G|S relabelled to 0..|S|-1, plus the map new index -> original vertex."""
    if S < 0 or S & ~G.vertices:
        raise InputError(f"vertex set {S:#x} is not contained in 0..{G.n - 1}")
    order = tuple(bits(S))
    position = {v: i for i, v in enumerate(order)}
    rows = tuple(mask_of(position[w] for w in bits(G.adj[v] & S)) for v in order)
    return Graph(len(order), rows), order


def disjoint_union(G1: Graph, G2: Graph) -> Graph:
    """G1 on 0..n1-1 followed by G2 on n1..n1+n2-1, no cross edges."""
    shift = G1.n
    return Graph(G1.n + G2.n, G1.adj + tuple(row << shift for row in G2.adj))


def join(G1: Graph, G2: Graph) -> Graph:
    """Disjoint union plus every edge between the two sides."""
    shift = G1.n
    left = full_mask(G1.n)
    right = full_mask(G2.n) << shift
    return Graph(
        G1.n + G2.n,
        tuple(row | right for row in G1.adj) + tuple((row << shift) | left for row in G2.adj),
    )


def _reach(rows: Sequence[int], start: int, allowed: VertexSet, anti: bool) -> VertexSet:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= (~rows[v] if anti else rows[v]) & allowed
        nxt &= ~seen
        seen |= nxt
        frontier = nxt
    return seen


def _split(G: Graph, within: Optional[VertexSet], anti: bool) -> list[VertexSet]:
    remaining = G.vertices if within is None else within
    classes = []
    while remaining:
        start = lowest(remaining)
        part = _reach(G.adj, start, remaining, anti)
        classes.append(part)
        remaining &= ~part
    return classes


def components(G: Graph, within: Optional[VertexSet] = None) -> list[VertexSet]:
    """Vertex sets of the components of G (or G|within), ordered by minimum vertex."""
    return _split(G, within, anti=False)


def anticomponents(G: Graph, within: Optional[VertexSet] = None) -> list[VertexSet]:
    """Vertex sets of the components of the complement, ordered by minimum vertex."""
    return _split(G, within, anti=True)


def is_connected(G: Graph) -> bool:
    return len(components(G)) == 1


def is_anticonnected(G: Graph) -> bool:
    return len(anticomponents(G)) == 1


# ---------------------------------------------------------------------------
# Induced subgraph matching
# ---------------------------------------------------------------------------


def _match(pattern: Relational, host: Relational, within: VertexSet) -> Optional[tuple[int, ...]]:
    k = pattern.n
    if k == 0:
        return ()
    size = within.bit_count()
    if size < k:
        return None

    p_out, p_in = pattern.out_rows, pattern.in_rows
    h_out, h_in = host.out_rows, host.in_rows
    symmetric = p_out is p_in and h_out is h_in

    host_out_deg = {c: (h_out[c] & within).bit_count() for c in bits(within)}
    host_in_deg = host_out_deg if symmetric else {c: (h_in[c] & within).bit_count() for c in bits(within)}

    # ascending pattern degree, then vertex id
    order = sorted(range(k), key=lambda v: (p_out[v].bit_count() + p_in[v].bit_count(), v))
    allowed = [0] * k
    for p in range(k):
        need_out, need_in = p_out[p].bit_count(), p_in[p].bit_count()
        miss_out, miss_in = k - 1 - need_out, k - 1 - need_in
        ok = 0
        for c in bits(within):
            do, di = host_out_deg[c], host_in_deg[c]
            if do >= need_out and di >= need_in and size - 1 - do >= miss_out and size - 1 - di >= miss_in:
                ok |= 1 << c
        if not ok:
            return None
        allowed[p] = ok

    earlier = [order[:depth] for depth in range(k)]
    assign = [-1] * k

    def extend(depth: int, used: int) -> bool:
        if depth == k:
            return True
        p = order[depth]
        cand = allowed[p] & ~used
        for q in earlier[depth]:
            y = assign[q]
            cand &= h_out[y] if p_out[q] >> p & 1 else ~h_out[y]
            if not symmetric:
                cand &= h_in[y] if p_in[q] >> p & 1 else ~h_in[y]
            if not cand:
                return False
        for c in bits(cand):
            assign[p] = c
            if extend(depth + 1, used | (1 << c)):
                return True
        assign[p] = -1
        return False

    if extend(0, 0):
        return tuple(assign)
    return None


def find_embedding(
    pattern: Relational, host: Relational, within: Optional[VertexSet] = None
) -> Optional[Embedding]:
    """First induced embedding of `pattern` into host|within, or None.

    Works for any pair of structures exposing out/in bitrows, so graphs and
    tournaments share the same deterministic search.
    """
    if within is None:
        within = full_mask(host.n)
    mapping = _match(pattern, host, within)
    if mapping is None:
        return None
    return Embedding(pattern, host, mapping)


def contains_induced(G: Graph, H: Graph, within: Optional[VertexSet] = None) -> Optional[Embedding]:
    """An induced copy of H in G (restricted to `within` when given), or None."""
    if within is not None and within & ~G.vertices:
        raise InputError(f"vertex set {within:#x} is not contained in 0..{G.n - 1}")
    return find_embedding(H, G, within)


def is_isomorphic(G: Graph, H: Graph) -> bool:
    if G.n != H.n or G.edge_count() != H.edge_count():
        return False
    return contains_induced(G, H) is not None and contains_induced(H, G) is not None


# ---------------------------------------------------------------------------
# Blocks and networkx interop
# ---------------------------------------------------------------------------


def to_networkx(G: Graph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(G.n))
    graph.add_edges_from(G.edges())
    return graph


def from_networkx(graph: nx.Graph) -> Graph:
    """Relabel nodes 0..n-1 in sorted order and build a Graph."""
    nodes = sorted(graph.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    return Graph.from_edges(len(nodes), ((index[u], index[v]) for u, v in graph.edges()))


def blocks(G: Graph) -> list[VertexSet]:
    """Vertex sets of the blocks (maximal 2-connected subgraphs or bridges).

    Isolated vertices lie in no block. Ordered by the sorted vertex tuple.
    """
    found = [mask_of(block) for block in nx.biconnected_components(to_networkx(G))]
    return sorted(found, key=lambda m: tuple(bits(m)))


# ---------------------------------------------------------------------------
# Named graphs
# ---------------------------------------------------------------------------


def complete(n: int) -> Graph:
    everything = full_mask(n)
    return Graph(n, tuple(everything & ~(1 << v) for v in range(n)))


def edgeless(n: int) -> Graph:
    """S_n, the complement of K_n."""
    return Graph(n, (0,) * n)


def path(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


_PALETTE = ("lightblue", "salmon", "palegreen", "khaki", "plum", "lightgray", "orange", "cyan")


def to_dot(G: Graph, classes: Optional[Sequence[VertexSet]] = None, name: str = "G") -> str:
    """Graphviz DOT text; vertices of the same class share a fill colour."""
    colour = {}
    for index, cls in enumerate(classes or ()):
        for v in bits(cls):
            colour[v] = index
    lines = [f"graph {name} {{", "  node [style=filled];"]
    for v in range(G.n):
        if v in colour:
            fill = _PALETTE[colour[v] % len(_PALETTE)]
            lines.append(f'  {v} [fillcolor="{fill}", class="{colour[v]}"];')
        else:
            lines.append(f"  {v};")
    lines.extend(f"  {u} -- {v};" for u, v in G.edges())
    lines.append("}")
    return "\n".join(lines) + "\n"
