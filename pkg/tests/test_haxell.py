import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fqtrees.distgraph import DistanceGraphFamily
from fqtrees.expander import DistanceColoredFamily, ExplicitColoredFamily, complete_family, random_dense_family
from fqtrees.haxell import (
    EmbeddingError, GoodnessParams, PairTable, PartialEmbedding, Verdict, _combos, _embed_backtrack,
    check_hypotheses, distance_tree_parameters, embed_tree, extend_leaf, is_s_good, residual_R,
    validate_tree_embedding,
)
from fqtrees.trees import ColoredTree, enumerate_colored_trees


def q3_family():
    return DistanceColoredFamily(DistanceGraphFamily.build(3, 1, 2, "all"))


def isolated_family():
    # vertex 3 has no color-0 edges
    return ExplicitColoredFamily.from_edges(4, 1, [(0, 1, 0), (1, 2, 0), (0, 2, 0)])


def random_phi(fam, tree, rng):
    """Embed ``tree`` by backtracking from a random root order (no goodness requirement)."""
    res = _embed_backtrack(fam, tree)
    if not res.success:
        return None
    phi = PartialEmbedding(fam.t)
    order = tree.bfs_order()
    phi = phi.place_root(0, res.embedding[0])
    for v, parent, color in order[1:]:
        phi = phi.extend(v, parent, color, res.embedding[v])
    return phi


def test_residual_examples():
    fam = q3_family()
    empty = PartialEmbedding(fam.t)
    assert residual_R(fam, empty, 2, []) == 0
    # origin, r = 1 (color 0): sphere of size 4
    assert residual_R(fam, empty, 2, [(0, 0)]) == 2
    with pytest.raises(ValueError):
        residual_R(fam, empty, 2, [(0, 0), (0, 0)])


def test_partial_embedding_bookkeeping():
    phi = PartialEmbedding(2).place_root(0, 5).extend(1, 0, 1, 7)
    assert phi.image == {5, 7}
    assert phi.degree_at(5, 1) == 1 and phi.degree_at(7, 1) == 1 and phi.degree_at(5, 0) == 0
    assert phi.degree_at(9, 0) == 0
    with pytest.raises(EmbeddingError):
        phi.extend(2, 0, 0, 7)
    with pytest.raises(EmbeddingError):
        phi.extend(1, 0, 0, 8)
    with pytest.raises(EmbeddingError):
        phi.extend(2, 4, 0, 8)


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_table_residuals_match_direct(seed):
    rng = np.random.default_rng(seed)
    fam = random_dense_family(9, 2, 0.5, seed)
    tree = ColoredTree(3, ((0, 1, int(rng.integers(2))), (1, 2, int(rng.integers(2)))))
    phi = random_phi(fam, tree, rng) or PartialEmbedding(2)
    table = PairTable(fam)
    for combos, R in table.residuals(2, phi, 2):
        for i in rng.choice(len(combos), size=min(20, len(combos)), replace=False):
            assert R[i] == residual_R(fam, phi, 2, table.pairs(combos[i]))


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_submodularity_random(seed):
    rng = np.random.default_rng(seed)
    fam = random_dense_family(10, 2, 0.4, seed)
    tree = ColoredTree(3, ((0, 1, 0), (1, 2, 1)))
    phi = random_phi(fam, tree, rng) or PartialEmbedding(2)
    pairs = [(v, c) for v in range(10) for c in range(2)]
    for _ in range(20):
        X1 = {pairs[i] for i in rng.choice(20, int(rng.integers(0, 7)), replace=False)}
        X2 = {pairs[i] for i in rng.choice(20, int(rng.integers(0, 7)), replace=False)}
        lhs = residual_R(fam, phi, 2, X1 | X2) + residual_R(fam, phi, 2, X1 & X2)
        assert lhs <= residual_R(fam, phi, 2, X1) + residual_R(fam, phi, 2, X2)


def test_goodness_examples():
    fam = complete_family(6)
    empty = PartialEmbedding(1)
    assert is_s_good(fam, empty, 3, 0).verdict is Verdict.GOOD
    assert is_s_good(fam, empty, 4, 1)
    g = is_s_good(isolated_family(), empty, 1, 1)
    assert g.verdict is Verdict.BAD and g.witness == [(3, 0)] and g.value == -1
    capped = is_s_good(complete_family(20, 2), empty, 2, 4, cap=1000)
    assert capped.verdict is Verdict.CAPPED and not capped


def test_goodness_matches_direct_enumeration():
    fam = random_dense_family(7, 2, 0.5, 11)
    phi = PartialEmbedding(2)
    for Delta in (1, 2, 3):
        direct = min(residual_R(fam, phi, Delta, X)
                     for s in (1, 2) for X in itertools.combinations(
                         [(v, c) for v in range(7) for c in range(2)], s))
        assert bool(is_s_good(fam, phi, Delta, 2)) == (direct >= 0)


def test_check_hypotheses_examples():
    n = 7
    rep = check_hypotheses(complete_family(n), 1, 1, n - 2)
    assert rep["verdict"] == "pass" and rep["k_max"] == n - 2
    rep = check_hypotheses(complete_family(n), 1, 1, n - 1)
    assert rep["verdict"] == "fail" and not rep["hyp2_ok"] and rep["hyp2_witness"]
    bad = check_hypotheses(isolated_family(), 1, 1, 1)
    assert not bad["hyp1_ok"] and bad["hyp1_witness"] == [(3, 0)]
    zero = check_hypotheses(complete_family(5), 1, 0, None)
    assert zero["hyp1_ok"] and zero["hyp1_slack"] is None and zero["k_max"] is None
    assert check_hypotheses(complete_family(30, 2), 2, 3, cap=10)["verdict"] == "capped"


def test_goodness_params():
    assert GoodnessParams(2, 2, 5).s_cap == 4
    with pytest.raises(ValueError):
        GoodnessParams(2, 1, 0)
    with pytest.raises(ValueError):
        GoodnessParams(2, 1, 3, s_cap=5)


def test_extend_leaf_examples():
    fam = complete_family(5)
    tree = ColoredTree(5, tuple((0, v, 0) for v in range(1, 5)))
    phi = PartialEmbedding(1).place_root(0, 0)
    for v in range(1, 5):
        res = extend_leaf(fam, phi, tree, v, 0, 0, 4, strategy="greedy")
        assert res.phi is not None
        phi = res.phi
    # star center has used every neighbour
    big = ColoredTree(6, tree.edges + ((0, 5, 0),))
    with pytest.raises(EmbeddingError):
        extend_leaf(fam, phi, big, 5, 0, 0, 4)
    assert extend_leaf(fam, phi, big, 5, 0, 0, 5, strategy="greedy").phi is None
    assert extend_leaf(fam, phi, big, 5, 0, 0, 5, s_cap=1).phi is None


def test_exact_good_on_complete_host_within_hypotheses():
    # K_8, Delta = 2, m = 1: |Gamma| = 7 >= 3 for one pair, 8 >= 4 + k for two, so k = 4
    fam = complete_family(8)
    assert check_hypotheses(fam, 2, 1, 4)["verdict"] == "pass"
    for tree in enumerate_colored_trees(4, 1):
        if tree.max_color_degree() <= 2:
            assert embed_tree(fam, tree, GoodnessParams(2, 1, 4)).success


def test_extend_leaf_second_color_on_q3():
    fam = q3_family()
    space = fam.host.space
    tree = ColoredTree(3, ((0, 1, 0), (1, 2, 1)))
    phi = PartialEmbedding(2).place_root(0, 0)
    phi = extend_leaf(fam, phi, tree, 1, 0, 0, 2, strategy="greedy").phi
    res = extend_leaf(fam, phi, tree, 2, 1, 1, 2, strategy="greedy")
    w, u = res.phi.phi[2], phi.phi[1]
    assert space.norm(space.sub(space.coords_of(w), space.coords_of(u))) == 2
    with pytest.raises(ValueError):
        extend_leaf(fam, phi, tree, 2, 1, 1, 2, strategy="magic")
    with pytest.raises(EmbeddingError):
        extend_leaf(fam, phi, tree, 2, 7, 1, 2)


def test_embed_tree_small_cases():
    fam = complete_family(6)
    params = GoodnessParams(5, 1, 6)
    single = ColoredTree(1, ())
    assert embed_tree(fam, single, params, "greedy").success
    assert embed_tree(fam, single, GoodnessParams(1, 1, 1)).success
    empty_host = ExplicitColoredFamily([np.zeros((3, 3), dtype=bool)], members=np.zeros(3, dtype=bool))
    assert not embed_tree(empty_host, single, GoodnessParams(1, 1, 1), strategy="greedy").success
    for tree in enumerate_colored_trees(6, 1):
        for strategy in ("greedy", "backtrack"):
            res = embed_tree(fam, tree, params, strategy)
            assert res.success and validate_tree_embedding(fam, tree, res.embedding)
    with pytest.raises(ValueError):
        embed_tree(fam, ColoredTree(2, ((0, 1, 1),)), params)
    with pytest.raises(ValueError):
        embed_tree(fam, ColoredTree(3, ((0, 1, 0), (0, 2, 0))), GoodnessParams(1, 1, 3))
    with pytest.raises(ValueError):
        embed_tree(fam, single, params, strategy="dfs")


def test_exact_good_failure_reports_witness():
    fam = ExplicitColoredFamily.from_edges(4, 1, [(0, 1, 0), (2, 3, 0)])
    tree = ColoredTree(3, ((0, 1, 0), (1, 2, 0)))
    res = embed_tree(fam, tree, GoodnessParams(2, 1, 3))
    assert not res.success and res.witness
    assert not embed_tree(fam, tree, GoodnessParams(2, 1, 3), "backtrack").success


@settings(max_examples=25)
@given(st.integers(0, 10**6), st.integers(1, 2))
def test_exact_good_success_implies_backtrack_success(seed, t):
    fam = random_dense_family(8, t, 0.35, seed)
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    edges = tuple((int(rng.integers(0, v)), v, int(rng.integers(0, t))) for v in range(1, n))
    tree = ColoredTree(n, edges)
    if tree.max_color_degree() > 2:
        return
    params = GoodnessParams(2, 1, n)
    exact = embed_tree(fam, tree, params)
    back = embed_tree(fam, tree, params, "backtrack")
    if exact.success:
        assert back.success
        assert validate_tree_embedding(fam, tree, exact.embedding)
    if back.success:
        assert validate_tree_embedding(fam, tree, back.embedding)


def passing_hosts(limit):
    out = []
    for seed in range(200):
        fam = random_dense_family(9, 2, 0.75, seed)
        table = PairTable(fam)
        rep = check_hypotheses(fam, 2, 1, table=table)
        if rep["hyp1_ok"] and rep["k_max"] and rep["k_max"] >= 2:
            out.append((fam, table, rep["k_max"]))
        if len(out) == limit:
            break
    return out


def test_single_vertex_is_2m_good_under_hypotheses():
    for fam, table, k in passing_hosts(4):
        for v in fam.universe.tolist():
            phi = PartialEmbedding(fam.t).place_root(0, v)
            assert is_s_good(fam, phi, 2, 2, table=table)


def test_zero_set_closure_and_small_zero_sets():
    m = 1
    for fam, table, k in passing_hosts(3):
        tree = ColoredTree(2, ((0, 1, 0),)) if k >= 3 else ColoredTree(1, ())
        res = embed_tree(fam, tree, GoodnessParams(2, m, k), table=table)
        assert res.success
        phi = PartialEmbedding(fam.t).place_root(0, res.embedding[0])
        if tree.vertices == 2:
            phi = phi.extend(1, 0, 0, res.embedding[1])
        assert is_s_good(fam, phi, 2, 2 * m, table=table)
        zeros = []
        for combos, R in table.residuals(2 * m, phi, 2):
            for row in combos[R == 0]:
                X = frozenset(table.pairs(row))
                assert len(X) <= m
                zeros.append(X)
        for X1, X2 in itertools.combinations(zeros, 2):
            U = X1 | X2
            assert len(U) <= m and residual_R(fam, phi, 2, U) == 0


def test_distance_parameters_vacuous_at_desk_scale():
    fam = DistanceColoredFamily(DistanceGraphFamily.build(5, 1, 3, [1, 2]))
    dp = distance_tree_parameters(fam, 125, 2)
    assert dp["k_distance"] < 0 and dp["k_induced"] < 125
    assert dp["m_induced"] > 0


def test_combo_cache_shape():
    c = _combos(5, 2)
    assert c.shape == (10, 2) and c[0].tolist() == [0, 1]
