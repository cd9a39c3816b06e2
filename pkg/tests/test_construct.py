"""Constructions: four-point basis, Rademacher, duality lift, pipeline,
direct search, evaluation embeddings."""

from fractions import Fraction
from itertools import product

import pytest

from lipcert import certify, construct, freespace
from lipcert.lipschitz import lip_norm
from lipcert.metric import PointedMetricSpace, random_space

from helpers import equilateral, random_coeffs

F = Fraction


def test_four_point_equilateral():
    f1, f2, cert = construct.four_point_basis(equilateral(4))
    assert f1.values == (F(0), F(1), F(0), F(1))
    assert f2.values == (F(0), F(1), F(1), F(0))
    assert cert.valid
    assert [(w.epsilon, w.x, w.y) for w in cert.sign_witnesses] == [
        ((1, 1), 1, 0),
        ((1, -1), 3, 2),
    ]


def test_four_point_long_edge_tie_break():
    rows = [[0, 1, 2, 2], [1, 0, 2, 2], [2, 2, 0, 3], [2, 2, 3, 0]]
    space = PointedMetricSpace.from_matrix(rows)
    f1, f2, cert = construct.four_point_basis(space)
    assert f1.values == (F(0), F(1), F(-1), F(2))
    assert f2.values == (F(0), F(1), F(2), F(-1))
    assert cert.valid


def test_four_point_1000_random_spaces():
    for seed in range(1000):
        space = random_space(4, seed, "range")
        f1, f2, cert = construct.four_point_basis(space)
        assert cert.valid
        for f in (f1, f2):
            norm, witnesses = lip_norm(f)
            assert norm == 1 and witnesses


def test_four_point_scaling_homogeneity():
    for seed in range(50):
        space = random_space(4, seed, "range")
        c = F(seed % 5 + 1, 3)
        scaled = PointedMetricSpace.from_matrix(
            [[c * x for x in row] for row in space.dist], labels=space.labels
        )
        f1, f2, cert1 = construct.four_point_basis(space)
        g1, g2, cert2 = construct.four_point_basis(scaled)
        assert g1.values == tuple(c * v for v in f1.values)
        assert g2.values == tuple(c * v for v in f2.values)
        assert cert2.valid


def test_four_point_rejects_wrong_size():
    with pytest.raises(ValueError):
        construct.four_point_basis(equilateral(5))


def test_rademacher_small_cases():
    assert construct.rademacher_embedding(1) == ((1,),)
    assert construct.rademacher_embedding(2) == ((1, 1), (1, -1))
    rows = construct.rademacher_embedding(3)
    assert len(rows) == 4 and all(len(r) == 3 for r in rows)
    assert all(r[0] == 1 for r in rows)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_rademacher_corner_identity_exhaustive(n):
    rows = construct.rademacher_embedding(n)
    assert len(rows) == 2 ** (n - 1)
    for eps in product((1, -1), repeat=n):
        best = max(abs(sum(e * r for e, r in zip(eps, row))) for row in rows)
        assert best == n
    for coeffs_seed in range(20):
        coeffs = random_coeffs(f"rademacher:{n}:{coeffs_seed}", n)
        best = max(abs(sum(c * r for c, r in zip(coeffs, row))) for row in rows)
        assert best == sum(abs(c) for c in coeffs)


def test_duality_lift_single_molecule():
    space = random_space(4, 11, "range")
    u = freespace.canonical_molecules(space)[0].as_free_vector()
    g_values = [space.rho(x, 0) for x in range(space.n)]
    matrix = [
        [u.coeffs[p] * g_values[q + 1] for q in range(space.n - 1)]
        for p in range(space.n - 1)
    ]
    proj = freespace.FreeOperator.from_matrix(space, matrix)
    cert = freespace.verify_one_complemented(space, [u], proj)
    assert cert.valid
    g, linf_cert = construct.duality_lift(cert)
    assert linf_cert.valid
    assert g[0].values == tuple(g_values)  # the lift recovers the dual functional


def test_duality_lift_equilateral_m2():
    space = equilateral(4)
    search = freespace.search_one_complemented(space, 2)
    assert search.found
    g, linf_cert = construct.duality_lift(search.certificate)
    assert linf_cert.valid
    for j, gj in enumerate(g):
        norm, _ = lip_norm(gj)
        assert norm == 1
        for i, u in enumerate(search.basis):
            assert freespace.pairing(gj, u) == (1 if i == j else 0)


def test_duality_lift_rejects_invalid():
    space = equilateral(4)
    u = freespace.canonical_molecules(space)[0].as_free_vector()
    bad = freespace.FreeOperator.from_matrix(space, [[2, 0, 0], [0, 0, 0], [0, 0, 0]])
    cert = freespace.verify_one_complemented(space, [u], bad)
    with pytest.raises(ValueError):
        construct.duality_lift(cert)


def test_compose_l1_in_linf_cases():
    space = equilateral(4)
    search = freespace.search_one_complemented(space, 2)
    g, linf_cert = construct.duality_lift(search.certificate)
    basis, cert = construct.compose_l1_in_linf(g, linf_cert, construct.rademacher_embedding(2))
    assert cert.valid
    assert basis[0].values == (g[0] + g[1]).values
    assert basis[1].values == (g[0] - g[1]).values
    # m = 1: composition with [[1]] is the identity
    single = construct.compose_l1_in_linf(
        (g[0],), certify.linf_isometry_lip([g[0]]), construct.rademacher_embedding(1)
    )
    assert single[0][0].values == g[0].values
    with pytest.raises(ValueError):
        construct.compose_l1_in_linf(g, linf_cert, construct.rademacher_embedding(3))


def test_pipeline_k1_trivial_case():
    for seed in range(5):
        space = random_space(3, seed, "range")
        result = construct.theorem_pipeline(space, 1)
        assert result.certificate.valid
        assert len(result.basis) == 1
        norm, witnesses = lip_norm(result.basis[0])
        assert norm == 1 and witnesses


def test_pipeline_k2_equilateral_six():
    result = construct.theorem_pipeline(equilateral(6), 2)
    assert result.certificate.valid
    members = set(result.subset_indices)
    assert len(members) == 4
    for w in result.certificate.sign_witnesses:
        assert w.x in members and w.y in members


def test_pipeline_refuses_small_space():
    with pytest.raises(ValueError):
        construct.theorem_pipeline(equilateral(3), 2)


def test_pipeline_exhaustion_is_reported():
    with pytest.raises(construct.SearchExhausted) as err:
        construct.theorem_pipeline(equilateral(4), 2, tuple_budget=1)
    assert err.value.stats.tuples_tried == 1


def test_direct_search_k1():
    space = random_space(3, 1, "range")
    result = construct.direct_search_l1(space, 1)
    assert result.found and result.certificate.valid


def test_direct_search_k2_on_four_points():
    for seed in range(50):
        space = random_space(4, seed, "range")
        result = construct.direct_search_l1(space, 2)
        assert result.found
        assert result.certificate.valid
        both = certify.l1_isometry_corner(result.basis)
        assert both.valid


def test_direct_search_budget():
    space = random_space(4, 0, "range")
    result = construct.direct_search_l1(space, 2, node_budget=1)
    assert not result.found
    assert result.budget_exhausted


def test_direct_search_agrees_with_four_point_verdict():
    for seed in range(25):
        space = random_space(4, seed, "euclidean")
        _, _, cert = construct.four_point_basis(space)
        result = construct.direct_search_l1(space, 2)
        assert cert.valid and result.found


def test_pipeline_and_direct_search_cross_valid():
    space = random_space(5, 3, "range")
    pipe = construct.theorem_pipeline(space, 2)
    direct = construct.direct_search_l1(space, 2)
    for basis in (pipe.basis, direct.basis):
        assert certify.l1_isometry_lip(basis).valid
        assert certify.l1_isometry_corner(basis).valid


def test_evaluation_embedding_l1_line():
    emb = construct.evaluation_embedding("l1", 1)
    assert emb.space.n == 3
    assert emb.certificate.valid
    assert emb.basis[0].values == (F(0), F(1), F(-1))


def test_evaluation_embedding_l1_square():
    emb = construct.evaluation_embedding("l1", 2)
    assert emb.space.n == 5
    assert emb.certificate.valid
    # all witnesses involve the origin
    for w in emb.certificate.sign_witnesses:
        assert 0 in (w.x, w.y)


def test_evaluation_embedding_linf_cross():
    emb = construct.evaluation_embedding("linf", 2)
    assert emb.space.n == 5
    assert emb.certificate.valid
    for w in emb.certificate.vertex_witnesses:
        assert 0 in (w.x, w.y)


def test_evaluation_embedding_rejects_bad_input():
    with pytest.raises(ValueError):
        construct.evaluation_embedding("l2", 2)
    with pytest.raises(ValueError):
        construct.evaluation_embedding("l1", 7)
    with pytest.raises(ValueError):
        construct.evaluation_embedding("l1", 0)


def test_direct_search_probe_below_theorem_bound():
    # n = k+1 points: k-dimensional subspaces exist, but the isometric-l1 form
    # is not asserted by the theory; success must still certify, failure is
    # reported as exhaustion
    for seed in range(10):
        space = random_space(3, seed, "range")
        result = construct.direct_search_l1(space, 2)
        if result.found:
            assert result.certificate.valid
        else:
            assert result.assignments_tried > 0
