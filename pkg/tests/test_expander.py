import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from fqtrees.distgraph import DistanceGraphFamily
from fqtrees.expander import (
    DistanceColoredFamily, ExplicitColoredFamily, complete_family, dense_certificate, edge_count,
    gamma, induce, min_color_degrees, mixing_check, mixing_sweep, peel, peel_threshold,
    probe_min_degree_conjecture, random_dense_family, random_regular_family, star_report, vertex_set,
)


def dist_family(q, d, radii="all", p=None, k=1):
    return DistanceColoredFamily(DistanceGraphFamily.build(p or q, k, d, radii))


def test_vertex_set_rejects_duplicates():
    assert vertex_set([3, 1, 2]).tolist() == [1, 2, 3]
    with pytest.raises(ValueError):
        vertex_set([1, 1])


def test_explicit_family_validation():
    A = np.zeros((3, 3), dtype=bool)
    A[0, 1] = True
    with pytest.raises(ValueError):
        ExplicitColoredFamily([A])
    B = np.eye(3, dtype=bool)
    with pytest.raises(ValueError):
        ExplicitColoredFamily([B])
    with pytest.raises(ValueError):
        ExplicitColoredFamily.from_edges(3, 1, [(1, 1, 0)])
    fam = ExplicitColoredFamily.from_edges(4, 2, [(0, 1, 0), (1, 2, 1), (2, 3, 0)])
    assert sorted(fam.edges()) == [(0, 1, 0), (1, 2, 1), (2, 3, 0)]


def test_edge_count_matches_matrix_oracle():
    fam = random_dense_family(15, 2, 0.4, seed=1)
    rng = np.random.default_rng(0)
    for _ in range(20):
        X = np.flatnonzero(rng.random(15) < 0.5)
        Y = np.flatnonzero(rng.random(15) < 0.5)
        for c in range(2):
            A = fam.adjacency[c].astype(int)
            assert edge_count(fam, c, X, Y) == int(A[np.ix_(X, Y)].sum())


def test_edge_count_distance_family_matches_dense():
    fam = dist_family(5, 2)
    host = fam.host
    rng = np.random.default_rng(1)
    for c, r in enumerate(host.radii):
        A = np.zeros((25, 25), dtype=int)
        for v in range(25):
            A[v, host.neighbors(v, r)] = 1
        X = np.flatnonzero(rng.random(25) < 0.5)
        Y = np.flatnonzero(rng.random(25) < 0.3)
        assert edge_count(fam, c, X, Y) == int(A[np.ix_(X, Y)].sum())


def test_dense_certificate_complete_graph():
    cert = dense_certificate(~np.eye(6, dtype=bool))
    assert cert.D == 5 and abs(cert.lam - 1) < 1e-9
    A = np.zeros((4, 4), dtype=bool)
    A[0, 1] = A[1, 0] = True
    assert dense_certificate(A) is None


def test_mixing_on_random_regular():
    fam = random_regular_family(30, 6, 2, seed=3)
    rng = np.random.default_rng(5)
    for _ in range(50):
        X = np.flatnonzero(rng.random(30) < rng.random())
        Y = np.flatnonzero(rng.random(30) < rng.random())
        for c in range(2):
            assert mixing_check(fam, c, X, Y)["pass"]


def test_mixing_sweep_agrees_with_pointwise():
    fam = dist_family(5, 3)
    res = mixing_sweep(fam, 0, np.random.default_rng(9), 50)
    assert res["failures"] == 0
    # replay the same draws pointwise
    rng = np.random.default_rng(9)
    dens = rng.random((50, 2))
    Xm = rng.random((50, 125)) < dens[:, :1]
    Ym = rng.random((50, 125)) < dens[:, 1:]
    slacks = [mixing_check(fam, 0, np.flatnonzero(x), np.flatnonzero(y))["slack"] for x, y in zip(Xm, Ym)]
    assert math.isclose(min(slacks), res["min_slack"], abs_tol=1e-9)


def test_mixing_sweep_catches_a_wrong_certificate():
    fam = random_regular_family(20, 4, 1, seed=0)
    cert = fam.certificates[0]
    fam.certificates = [type(cert)(cert.n, cert.D, 0.0, 0.0)]
    assert mixing_sweep(fam, 0, np.random.default_rng(0), 100)["failures"] > 0


def test_gamma_union():
    fam = ExplicitColoredFamily.from_edges(5, 2, [(0, 1, 0), (0, 2, 1), (3, 4, 0)])
    assert gamma(fam, [(0, 0), (0, 1)]).tolist() == [1, 2]
    assert gamma(fam, [(0, 0), (4, 0)]).tolist() == [1, 3]
    assert gamma(fam, []).tolist() == []


def test_induce_restricts_neighbourhoods():
    fam = complete_family(6, 2)
    sub = induce(fam, [0, 2, 4])
    assert sub.neighbors(0, 1).tolist() == [2, 4]
    with pytest.raises(ValueError):
        induce(fam, [])
    dsub = induce(dist_family(3, 2), [0, 1, 2, 4])
    assert set(dsub.neighbors(0, 0).tolist()) <= {1, 2, 4}


def test_peel_is_k_core_single_color():
    # the fixed point of degree peeling is the k-core (independent oracle: networkx)
    for seed in range(5):
        fam = random_dense_family(40, 1, 0.15, seed)
        g = nx.from_numpy_array(fam.adjacency[0].astype(int))
        for k in (2, 3, 4):
            W, _ = peel_threshold(fam, np.arange(40), k)
            assert sorted(W.tolist()) == sorted(nx.k_core(g, k).nodes())


@given(st.integers(0, 2**32 - 1), st.floats(1.0, 6.0))
def test_peel_fixed_point_order_independent(seed, tau):
    fam = random_dense_family(30, 2, 0.25, seed % 1000)
    S = np.arange(30)
    W1, rem1 = peel_threshold(fam, S, tau)
    W2, rem2 = peel_threshold(fam, S, tau, rng=np.random.default_rng(seed))
    assert np.array_equal(W1, W2)
    assert len(rem1) == len(rem2) == 30 - len(W1)
    if len(W1):
        assert min(min_color_degrees(fam, W1)) >= tau
    # every removal was below threshold at its time
    assert all(deg < tau for _, _, deg in rem1)


def test_peel_smallest_index_first():
    fam = ExplicitColoredFamily.from_edges(4, 1, [(0, 1, 0), (1, 2, 0), (2, 3, 0)])
    _, rem = peel_threshold(fam, np.arange(4), 2)
    assert [v for v, _, _ in rem] == [0, 1, 2, 3]


def test_peel_lemma_instance_q9():
    fam = dist_family(9, 3, [1], p=3, k=2)
    n, D, lam = fam.peel_parameters()
    size = math.ceil(4 * n * lam / D)
    S = np.sort(np.random.default_rng(0).choice(n, size, replace=False))
    rep = peel(fam, S, 4)
    assert rep.lemma_applies and not rep.violation
    assert rep.removed <= len(S) / 2
    assert min(rep.min_degrees) >= rep.tau
    d = rep.to_dict(include_sets=True)
    assert d["size_W"] == len(d["W"])


def test_peel_reports_inapplicable():
    fam = dist_family(5, 2, [1])
    rep = peel(fam, np.arange(10), 4)
    assert not rep.lemma_applies and not rep.violation
    with pytest.raises(ValueError):
        peel(fam, np.arange(10), -1)
    with pytest.raises(ValueError):
        peel(random_dense_family(10, 1, 0.5, 0), np.arange(10))


def test_star_report_and_probe():
    fam = dist_family(7, 3, [1])
    S = np.arange(343)
    W, _ = peel_threshold(fam, S, len(S) / (6 * 7))
    rep = star_report(fam, W, len(S))
    assert rep["degrees_ok"] and rep["size_ok"]
    assert not rep["hypothesis_ok"]  # 12 q^2 > q^3 at q = 7
    probe = probe_min_degree_conjecture(dist_family(5, 3), np.arange(125))
    assert probe["hypothesis_ok"] is False and probe["C"] < 50
    with pytest.raises(ValueError):
        probe_min_degree_conjecture(dist_family(5, 3, [1]), np.arange(125))
