import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fqtrees.gf import (
    FieldError, FqSpace, PointVec, arith, fast_value_distribution, field_build, field_from_q,
    form_value_distribution, is_irreducible, legendre, norm_form, quadratic_form_Q, select_mu,
)

FIELDS = [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (3, 2), (5, 2), (3, 3)]


def poly_eval(coeffs, x, p):
    return sum(c * x**i for i, c in enumerate(coeffs)) % p


def test_prime_field_tables_match_modular_arithmetic():
    for p in (3, 5, 7, 13):
        f = field_build(p)
        a, b = np.meshgrid(np.arange(p), np.arange(p), indexing="ij")
        assert np.array_equal(f.add_table, (a + b) % p)
        assert np.array_equal(f.mul_table, (a * b) % p)
        assert np.array_equal(f.neg_table, (-np.arange(p)) % p)


def test_moduli_are_smallest_irreducible():
    assert field_build(3, 2).modulus == (1, 0, 1)
    assert field_build(3, 3).modulus == (1, 0, 2, 1)
    assert field_build(5, 2).modulus == (1, 1, 1)
    # brute force: a degree-2 or 3 poly is irreducible iff it has no root
    for p in (3, 5):
        for k in (2, 3):
            for low in itertools.product(range(p), repeat=k):
                poly = list(low) + [1]
                rootless = all(poly_eval(poly, x, p) for x in range(p))
                assert is_irreducible(poly, p) == rootless


def test_field_from_q_and_errors():
    assert field_from_q(9) == field_build(3, 2)
    assert field_from_q(27).q == 27
    for bad in (6, 12, 1, 0):
        with pytest.raises(FieldError):
            field_from_q(bad)
    with pytest.raises(FieldError):
        field_build(2)
    with pytest.raises(FieldError):
        field_build(4)


@pytest.mark.parametrize("p,k", FIELDS)
def test_tables_agree_with_scalar_path(p, k):
    f = field_build(p, k)
    for a in range(f.q):
        for b in range(f.q):
            assert f.add_table[a, b] == f.add(a, b)
            assert f.mul_table[a, b] == f.mul(a, b)
        assert f.legendre_table[a] == f.legendre(a)
        assert f.trace_table[a] == f.trace(a)
        assert f.square_table[a] == f.mul(a, a)


@pytest.mark.parametrize("p,k", FIELDS)
def test_multiplicative_group_is_cyclic_and_inverses(p, k):
    f = field_build(p, k)
    for a in range(1, f.q):
        assert f.mul(a, f.inv(a)) == 1
        assert f.pow(a, f.q - 1) == 1
    with pytest.raises(FieldError):
        f.inv(0)


@pytest.mark.parametrize("p,k", FIELDS)
def test_legendre_is_euler_criterion_and_balanced(p, k):
    f = field_build(p, k)
    squares = {f.mul(a, a) for a in range(1, f.q)}
    assert len(squares) == (f.q - 1) // 2
    for a in range(f.q):
        expect = 0 if a == 0 else (1 if a in squares else -1)
        assert f.legendre(a) == expect
        if a:
            e = f.pow(a, (f.q - 1) // 2)
            assert e == (1 if expect == 1 else f.neg(1))


@pytest.mark.parametrize("p,k", FIELDS)
def test_trace_is_balanced_and_additive(p, k):
    f = field_build(p, k)
    counts = np.bincount(f.trace_table, minlength=p)
    assert (counts == f.q // p).all()
    for a, b in itertools.product(range(f.q), repeat=2):
        assert f.trace(f.add(a, b)) == (f.trace(a) + f.trace(b)) % p


def test_minus_one_square_iff_q_is_1_mod_4():
    for p, k in FIELDS:
        f = field_build(p, k)
        assert (f.legendre(f.neg(1)) == 1) == (f.q % 4 == 1)


@st.composite
def field_and_elements(draw, n=3):
    p, k = draw(st.sampled_from(FIELDS))
    f = field_build(p, k)
    return f, [f(draw(st.integers(0, f.q - 1))) for _ in range(n)]


@given(field_and_elements())
def test_field_axioms(fe):
    f, (a, b, c) = fe
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == f(0)
    assert arith(a, b, "sub") + b == a
    if b:
        assert arith(a, b, "div") * b == a
        assert arith(b, None, "inv") * b == f(1)
    assert legendre(a * a) in (0, 1)


@given(field_and_elements(2))
def test_legendre_multiplicative(fe):
    f, (a, b) = fe
    assert legendre(a * b) == legendre(a) * legendre(b)


def test_element_encoding_round_trip():
    f = field_build(3, 2)
    for a in f.elements():
        assert f(a.encode()) == a
    assert field_build(7)(3).encode() == 3
    with pytest.raises(FieldError):
        f(9)


def test_select_mu_character():
    # eta(mu) = -1 exactly for d = 3 mod 4 and q = 3 mod 4
    for p, k in FIELDS:
        f = field_build(p, k)
        for d in (3, 5, 7):
            mu = select_mu(d, f)
            want = -1 if (d % 4 == 3 and f.q % 4 == 3) else 1
            assert legendre(mu) == want
    with pytest.raises(FieldError):
        select_mu(4, field_build(3))


@pytest.mark.parametrize("q,d", [(3, 3), (5, 3), (7, 3), (9, 3), (3, 5), (5, 5)])
def test_form_distributions_equal(q, d):
    f = field_from_q(q)
    if q ** d <= 3**5:
        mu = select_mu(d, f)
        a = form_value_distribution(lambda x: quadratic_form_Q(x, mu), d, f)
        assert a == form_value_distribution(norm_form, d, f)
    space = FqSpace(f, d)
    mu = int(select_mu(d, f))
    assert fast_value_distribution(space, space.qform(space.points, mu)) == \
        fast_value_distribution(space, space.norm(space.points))


def test_wrong_mu_changes_distribution():
    # the other equivalence class must be distinguishable
    f = field_build(3)
    space = FqSpace(f, 3)
    mu = int(select_mu(3, f))
    other = f.mul(mu, 2)
    assert fast_value_distribution(space, space.qform(space.points, other)) != \
        fast_value_distribution(space, space.norm(space.points))


def test_vectorised_norm_and_qform_match_scalar():
    f = field_build(3, 2)
    space = FqSpace(f, 3)
    mu = select_mu(3, f)
    for idx in range(0, space.n, 37):
        x = space.to_point(idx)
        assert space.norm(space.coords_of(idx)) == norm_form(x).value
        assert space.qform(space.coords_of(idx), mu.value) == quadratic_form_Q(x, mu).value


def test_space_indexing_lexicographic():
    space = FqSpace(field_build(3), 2)
    assert space.points.tolist()[:4] == [[0, 0], [0, 1], [0, 2], [1, 0]]
    assert space.index(np.array([2, 1])) == 7
    for i in range(space.n):
        assert space.index(space.coords_of(i)) == i
        assert space.decode_point(space.encode_point(i)) == i


@given(st.integers(0, 80), st.integers(0, 80))
def test_space_add_sub_are_group_ops(i, j):
    space = FqSpace(field_build(3), 4)
    a, b = space.coords_of(i), space.coords_of(j)
    assert np.array_equal(space.sub(space.add(a, b), b), a)
    x, y = space.to_point(i), space.to_point(j)
    assert space.from_point(x + y) == space.index(space.add(a, b))
    assert space.from_point(-x) == space.index(space.neg(a))


def test_pointvec_rejects_mixed_fields():
    f, g = field_build(3), field_build(5)
    with pytest.raises(FieldError):
        PointVec((f(1), g(1)))
