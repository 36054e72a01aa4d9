"""Tests for the graph primitives."""

import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hj_partition.errors import InputError
from hj_partition.graph import (
    Graph,
    anticomponents,
    bits,
    blocks,
    complement,
    complete,
    components,
    contains_induced,
    cycle,
    disjoint_union,
    edgeless,
    full_mask,
    induced,
    is_isomorphic,
    join,
    mask_of,
    path,
    to_dot,
    to_networkx,
)


@st.composite
def graphs(draw, max_n: int = 7) -> Graph:
    n = draw(st.integers(min_value=0, max_value=max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def naive_contains(G: Graph, H: Graph) -> bool:
    for subset in itertools.combinations(range(G.n), H.n):
        for perm in itertools.permutations(subset):
            if all(
                G.has_edge(perm[i], perm[j]) == H.has_edge(i, j)
                for i in range(H.n)
                for j in range(i + 1, H.n)
            ):
                return True
    return False


class TestConstruction:
    """Test building and validating graphs."""

    def test_from_edges(self):
        """Test that edges are symmetric and listed in order."""
        G = Graph.from_edges(3, [(2, 0), (0, 1)])
        assert G.edges() == [(0, 1), (0, 2)]
        assert G.has_edge(2, 0)
        assert G.edge_count() == 2

    def test_invalid_rows_rejected(self):
        """Test that asymmetric rows and self-loops are input errors."""
        with pytest.raises(InputError):
            Graph(2, (0b10, 0))
        with pytest.raises(InputError):
            Graph(1, (0b1,))
        with pytest.raises(InputError):
            Graph.from_edges(2, [(0, 2)])

    def test_null_graph(self):
        """Test that the null graph is a valid graph."""
        G = Graph.null()
        assert G.n == 0
        assert complement(G) == G
        assert components(G) == []

    def test_named_families(self):
        """Test the named graph constructors."""
        assert complete(4).edge_count() == 6
        assert edgeless(3).edge_count() == 0
        assert path(4).edges() == [(0, 1), (1, 2), (2, 3)]
        assert cycle(5).edge_count() == 5
        with pytest.raises(InputError):
            cycle(2)


class TestComplement:
    """Test graph complementation."""

    def test_complete_to_edgeless(self):
        """Test that K_3 complements to S_3."""
        assert complement(complete(3)) == edgeless(3)

    def test_c4_to_2k2(self):
        """Test that C_4 complements to 2K_2."""
        assert is_isomorphic(complement(cycle(4)), disjoint_union(complete(2), complete(2)))

    @given(graphs(max_n=10))
    def test_involution(self, G):
        """Test that complementing twice gives the graph back."""
        assert complement(complement(G)) == G


class TestInduced:
    """Test induced subgraphs."""

    def test_c5_four_vertices_is_p4(self):
        """Test that every 4 vertices of C_5 induce P_4."""
        C5 = cycle(5)
        for subset in itertools.combinations(range(5), 4):
            sub, order = induced(C5, mask_of(subset))
            assert order == subset
            assert is_isomorphic(sub, path(4))

    def test_identity_and_empty(self):
        """Test the whole vertex set and the empty set."""
        G = cycle(5)
        assert induced(G, G.vertices)[0] == G
        assert induced(G, 0) == (Graph.null(), ())

    def test_out_of_range(self):
        """Test that a vertex set outside the graph is rejected."""
        with pytest.raises(InputError):
            induced(complete(3), 1 << 3)


class TestComponents:
    """Test components and anticomponents."""

    def test_components(self):
        """Test components of standard graphs."""
        two_k2 = disjoint_union(complete(2), complete(2))
        assert components(two_k2) == [0b0011, 0b1100]
        assert components(complete(4)) == [0b1111]
        assert components(edgeless(3)) == [0b001, 0b010, 0b100]

    def test_anticomponents(self):
        """Test anticomponents of standard graphs."""
        assert sorted(c.bit_count() for c in anticomponents(cycle(4))) == [2, 2]
        assert anticomponents(edgeless(4)) == [0b1111]
        assert anticomponents(complete(3)) == [0b001, 0b010, 0b100]

    def test_within(self):
        """Test components restricted to a vertex subset."""
        assert components(path(4), 0b1011) == [0b0011, 0b1000]

    @given(graphs())
    def test_partition_and_dichotomy(self, G):
        """Test that both are partitions and one of them is trivial."""
        for parts in (components(G), anticomponents(G)):
            union = 0
            for part in parts:
                assert not part & union
                union |= part
            assert union == G.vertices
        assert anticomponents(G) == components(complement(G))
        if G.n:
            assert len(components(G)) == 1 or len(anticomponents(G)) == 1


class TestContainsInduced:
    """Test the induced subgraph matcher."""

    def test_examples(self):
        """Test containment examples."""
        found = contains_induced(cycle(5), path(4))
        assert found is not None and found.is_induced()
        assert contains_induced(complete(3), edgeless(2)) is None
        empty = contains_induced(cycle(5), Graph.null())
        assert empty is not None and empty.mapping == ()

    def test_within(self):
        """Test matching inside a vertex subset."""
        G = path(4)
        assert contains_induced(G, path(3), 0b0111) is not None
        assert contains_induced(G, path(3), 0b1011) is None

    def test_deterministic(self):
        """Test that the same inputs give the same embedding."""
        G = cycle(7)
        assert contains_induced(G, path(3)) == contains_induced(G, path(3))

    @settings(max_examples=300)
    @given(graphs(max_n=7), graphs(max_n=4))
    def test_agrees_with_naive_search(self, G, H):
        """Test agreement with an all-subsets search."""
        found = contains_induced(G, H)
        assert (found is not None) == naive_contains(G, H)
        if found is not None:
            assert found.is_induced()

    @pytest.mark.slow
    def test_agrees_with_naive_search_exhaustively(self, atlas):
        """Test agreement on every host with at most 7 vertices and every pattern with 1 to 4."""
        patterns = [H for H in atlas if 1 <= H.n <= 4]
        assert len(patterns) == 18
        for G in atlas:
            for H in patterns:
                found = contains_induced(G, H)
                assert (found is not None) == naive_contains(G, H), (G.edges(), H.edges())
                if found is not None:
                    assert found.is_induced()


class TestIsomorphism:
    """Test the isomorphism check."""

    def test_examples(self):
        """Test isomorphism examples."""
        assert is_isomorphic(cycle(4), join(edgeless(2), edgeless(2)))
        assert not is_isomorphic(complete(3), path(3))
        assert is_isomorphic(Graph.null(), Graph.null())

    @settings(max_examples=100)
    @given(graphs(max_n=6), graphs(max_n=6))
    def test_agrees_with_networkx(self, G, H):
        """Test agreement with networkx."""
        assert is_isomorphic(G, H) == nx.is_isomorphic(to_networkx(G), to_networkx(H))


class TestBlocks:
    """Test block decomposition."""

    def test_bowtie(self):
        """Test two triangles sharing one vertex."""
        bowtie = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
        assert blocks(bowtie) == [0b00111, 0b11100]

    def test_path_and_cycle(self):
        """Test trees and 2-connected graphs."""
        assert blocks(path(4)) == [0b0011, 0b0110, 0b1100]
        assert blocks(cycle(5)) == [0b11111]

    def test_isolated_vertices(self):
        """Test that isolated vertices lie in no block."""
        assert blocks(edgeless(3)) == []

    @given(graphs())
    def test_edges_covered_once(self, G):
        """Test that every edge lies in exactly one block and blocks share at most one vertex."""
        found = blocks(G)
        for u, v in G.edges():
            edge = (1 << u) | (1 << v)
            assert sum(1 for b in found if b & edge == edge) == 1
        for a, b in itertools.combinations(found, 2):
            assert (a & b).bit_count() <= 1


class TestDot:
    def test_to_dot(self):
        """Test that DOT export lists edges and class colours."""
        text = to_dot(path(3), [0b001, 0b110])
        assert text.startswith("graph G {")
        assert "0 -- 1;" in text
        assert 'class="1"' in text
        assert list(bits(full_mask(3))) == [0, 1, 2]
