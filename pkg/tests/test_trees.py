import itertools

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from fqtrees.trees import FREE_TREE_COUNTS, ColoredTree, enumerate_colored_trees, free_trees


def nx_colored_classes(n, t, permute_colors):
    """Independent oracle: networkx trees, every coloring, dedupe by colored isomorphism."""
    if n == 1:
        return 1
    reps = []
    match = lambda a, b: a["c"] == b["c"]
    for g in nx.nonisomorphic_trees(n):
        edges = list(g.edges())
        for coloring in itertools.product(range(t), repeat=len(edges)):
            perms = itertools.permutations(range(t)) if permute_colors else [tuple(range(t))]
            variants = []
            for perm in perms:
                h = nx.Graph()
                h.add_edges_from((u, v, {"c": perm[c]}) for (u, v), c in zip(edges, coloring))
                variants.append(h)
            if not any(nx.is_isomorphic(v, r, edge_match=match) for r in reps for v in variants):
                reps.append(variants[0])
    return len(reps)


def test_free_tree_counts_against_networkx():
    assert [len(free_trees(n)) for n in range(1, 9)] == list(FREE_TREE_COUNTS)
    for n in range(2, 9):
        assert len(free_trees(n)) == sum(1 for _ in nx.nonisomorphic_trees(n))


@pytest.mark.parametrize("t", [1, 2, 3])
@pytest.mark.parametrize("permute", [True, False])
def test_colored_counts_against_networkx(t, permute):
    for n in range(1, 6 if t < 3 else 5):
        ours = sum(1 for tr in enumerate_colored_trees(n, t, permute) if tr.vertices == n)
        assert ours == nx_colored_classes(n, t, permute), (n, t, permute)


def test_small_examples():
    by_size = lambda n: [tr for tr in enumerate_colored_trees(n, 1) if tr.vertices == n]
    assert len(by_size(2)) == 1 and len(by_size(3)) == 1 and len(by_size(4)) == 2
    with pytest.raises(ValueError):
        list(enumerate_colored_trees(9, 1))
    with pytest.raises(ValueError):
        list(enumerate_colored_trees(3, 0))


def test_validation():
    with pytest.raises(ValueError):
        ColoredTree(0, ())
    with pytest.raises(ValueError):
        ColoredTree(3, ((0, 1, 0),))
    with pytest.raises(ValueError):
        ColoredTree(4, ((0, 1, 0), (1, 0, 0), (2, 3, 0)))
    with pytest.raises(ValueError):
        ColoredTree(2, ((0, 0, 0),))
    with pytest.raises(ValueError):
        ColoredTree(2, ((0, 1, -1),))


def test_degrees_and_json():
    tr = ColoredTree(5, ((0, 1, 0), (0, 2, 0), (0, 3, 1), (3, 4, 1)))
    assert tr.r_degree(0, 0) == 2 and tr.r_degree(3, 1) == 2
    assert tr.max_r_degree(0) == 2 and tr.max_color_degree() == 2
    assert ColoredTree.from_json(tr.to_json()) == tr


@st.composite
def random_tree(draw):
    n = draw(st.integers(1, 8))
    edges = tuple((draw(st.integers(0, v - 1)), v, draw(st.integers(0, 2))) for v in range(1, n))
    return ColoredTree(n, edges)


@given(random_tree(), st.randoms())
def test_canonical_key_invariant_under_relabelling(tree, rnd):
    perm = list(range(tree.vertices))
    rnd.shuffle(perm)
    other = ColoredTree(tree.vertices, tuple((perm[u], perm[v], c) for u, v, c in tree.edges))
    assert tree.canonical_key() == other.canonical_key()
    cperm = [0, 1, 2]
    rnd.shuffle(cperm)
    recolored = ColoredTree(tree.vertices, tuple((u, v, cperm[c]) for u, v, c in tree.edges))
    assert tree.canonical_key(True) == recolored.canonical_key(True)


@given(random_tree())
def test_bfs_order_adds_leaves(tree):
    order = tree.bfs_order()
    assert order[0] == (0, None, None)
    seen = {0}
    for v, parent, color in order[1:]:
        assert parent in seen and v not in seen
        assert (v, color) in tree.adjacency[parent]
        seen.add(v)
    assert len(seen) == tree.vertices
