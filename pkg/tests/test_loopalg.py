import random

import pytest
from hypothesis import given, strategies as st

from spinloop.errors import ContractError
from spinloop.loopalg import (
    LoopModel,
    bso_loop_model,
    degree_model,
    loop_basis,
    loop_series,
    loop_sq,
    sigma,
)
from spinloop.steenrod import sq
from spinloop.verify import association_orders, random_loop_element

from strategies import homogeneous

M3 = bso_loop_model(3)
B3 = M3.base
M5 = bso_loop_model(5)
B5 = M5.base


def test_sigma_examples():
    assert sigma(M3, B3.gen("w2")) == M3.sigma_gen("w2")
    assert str(sigma(M3, B3.parse("w2*w3"))) == "w2*s(w3) + w3*s(w2)"
    for g in B5.gens():
        assert not sigma(M5, g * g)


def test_squaring_examples():
    s2, s3 = M3.sigma_gen("w2"), M3.sigma_gen("w3")
    assert s2 * s2 == sigma(M3, B3.gen("w3"))
    assert str(s3 * s3) == "w2*s(w3) + w3*s(w2)"
    a = M3.lift(B3.parse("w2^2")) + s2 * s3
    assert M3.one() * a == a


def test_basis_examples():
    assert loop_basis(M3, 0).text() == ["1"]
    assert loop_basis(M3, 1).text() == ["s(w2)"]
    assert len(loop_basis(M3, 4)) == 3


def test_series_examples():
    assert loop_series(M3, 4).to_list() == [1, 1, 2, 3, 3]
    assert loop_series(degree_model([4]), 8).to_list() == [1, 0, 0, 1, 1, 0, 0, 1, 1]
    assert loop_series(degree_model([]), 5).to_list() == [1, 0, 0, 0, 0, 0]


@pytest.mark.parametrize("n", range(2, 8))
def test_basis_counts_match_series(n):
    m = bso_loop_model(n)
    s = loop_series(m, 16)
    assert [len(loop_basis(m, d)) for d in range(17)] == s.to_list()


def test_phi_table_validated():
    with pytest.raises(ContractError):
        LoopModel(B3, phi_table=[B3.gen("w2"), B3.gen("w3")])  # wrong degrees


def test_degree_only_model_has_no_squares():
    m = degree_model([2])
    s = m.sigma_gen(0)
    with pytest.raises(ContractError):
        s * s


@given(homogeneous(B5, 10), homogeneous(B5, 10))
def test_derivation_law(a, b):
    if (a and a.degree == 0) or (b and b.degree == 0) or not a or not b:
        return
    lhs = sigma(M5, a * b)
    rhs = M5.lift(a) * sigma(M5, b) + sigma(M5, a) * M5.lift(b)
    assert lhs == rhs


@given(homogeneous(B5, 12))
def test_sigma_lowers_degree(e):
    if not e or e.degree == 0:
        return
    s = sigma(M5, e)
    for t in s.terms:
        assert M5.term_degree(t) == e.degree - 1


@given(st.integers(0, 2**32))
def test_confluence(seed):
    rng = random.Random(seed)
    a, b, c = (random_loop_element(M5, rng, 10) for _ in range(3))
    products = association_orders(M5, a, b, c)
    assert all(p == products[0] for p in products)


@pytest.mark.parametrize("n", range(3, 7))
def test_sq1_commutes_with_sigma_on_generators(n):
    m = bso_loop_model(n)
    for g in m.base.gens():
        assert loop_sq(m, 1, sigma(m, g)) == sigma(m, sq(m.rule, 1, g))


@given(homogeneous(B5, 9), st.integers(0, 9))
def test_sq_commutes_with_sigma(e, i):
    if not e or e.degree == 0:
        return
    assert loop_sq(M5, i, sigma(M5, e)) == sigma(M5, sq(M5.rule, i, e))


@given(st.integers(0, 2**32))
def test_loop_instability(seed):
    rng = random.Random(seed)
    a = random_loop_element(M5, rng, 8)
    if not a:
        return
    d = a.degree
    assert loop_sq(M5, d, a) == a * a
    assert not loop_sq(M5, d + 1, a)


@given(st.integers(0, 2**32))
def test_loop_cartan(seed):
    rng = random.Random(seed)
    a, b = random_loop_element(M5, rng, 5), random_loop_element(M5, rng, 5)
    i = rng.randint(0, 8)
    rhs = M5.zero()
    for j in range(i + 1):
        rhs = rhs + loop_sq(M5, j, a) * loop_sq(M5, i - j, b)
    assert loop_sq(M5, i, a * b) == rhs


def test_degree_one_is_one_dimensional():
    for n in range(2, 10):
        assert len(loop_basis(bso_loop_model(n), 1)) == 1
