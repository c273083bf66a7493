import pytest
from hypothesis import given, strategies as st

from spinloop.errors import ContractError
from spinloop.f2core import F2Vector
from spinloop.polyalg import (
    GradedPolyAlgebra,
    alpha_map,
    apply_map,
    bso_algebra,
    closed_form_series,
    coords,
    monomials_of_degree,
    multiply,
    polynomial_generator_degrees,
    torus_algebra,
)

from strategies import homogeneous

W3 = bso_algebra(3)
X3 = torus_algebra(3)
W6 = bso_algebra(6)


def test_monomials_of_degree_examples():
    assert monomials_of_degree(W3, 0) == [(0, 0)]
    assert [str(W3.monomial(m)) for m in monomials_of_degree(W3, 6)] == ["w2^3", "w3^2"]
    assert [str(X3.monomial(m)) for m in monomials_of_degree(X3, 2)] == ["x1^2", "x1*x2", "x2^2"]


def test_multiply_examples():
    x = GradedPolyAlgebra([("x", 1)]).gen(0)
    assert str(x * x) == "x^2"
    x1, x2 = X3.gens()
    assert (x1 + x2) * (x1 + x2) == x1 * x1 + x2 * x2
    assert str(multiply(W3.gen("w2"), W3.gen("w3"))) == "w2*w3"


def test_alpha_examples():
    a = alpha_map(3)
    assert str(apply_map(a, W3.gen("w2"))) == "x1^2 + x1*x2 + x2^2"
    assert str(apply_map(a, W3.gen("w3"))) == "x1^2*x2 + x1*x2^2"


def test_coords_examples():
    assert coords(W3.zero(), monomials_of_degree(W3, 6)).is_zero()
    assert coords(W3.parse("w2^3 + w3^2"), monomials_of_degree(W3, 6)) == F2Vector.from_list([1, 1])
    assert coords(X3.parse("x1^2 + x1*x2"), monomials_of_degree(X3, 2)).to_list() == [1, 1, 0]
    with pytest.raises(ContractError):
        coords(X3.parse("x1^3"), monomials_of_degree(X3, 2))


def test_closed_form_examples():
    assert closed_form_series([2, 3], [], 6).to_list() == [1, 0, 1, 1, 1, 1, 2]
    assert closed_form_series([2, 3], [1, 2], 4).to_list() == [1, 1, 2, 3, 3]
    assert closed_form_series([4], [3], 8).to_list() == [1, 0, 0, 1, 1, 0, 0, 1, 1]


def test_generator_degree_peeling():
    s = closed_form_series([4, 6, 7, 8, 16], [], 30)
    assert polynomial_generator_degrees(s) == [4, 6, 7, 8, 16]
    with pytest.raises(ContractError):
        polynomial_generator_degrees(closed_form_series([], [1], 3))  # 1 + t is not polynomial


@pytest.mark.parametrize("degs", [(2, 3), (1, 1, 1), (2, 3, 4, 5, 6), (4, 6, 7, 8, 16)])
def test_basis_size_matches_series(degs):
    a = GradedPolyAlgebra([(f"g{i}", d) for i, d in enumerate(degs)])
    s = closed_form_series(degs, [], 20)
    assert a.series(20) == s


def test_canonical_text_round_trip():
    e = W6.parse("w2*w3 + w5 + w2^3*w6")
    assert str(e) == "w2^3*w6 + w2*w3 + w5"
    assert W6.parse(str(e)) == e
    assert str(W6.zero()) == "0" and str(W6.one()) == "1"


def test_constructor_contracts():
    with pytest.raises(ContractError):
        GradedPolyAlgebra([("a", 1), ("a", 2)])
    with pytest.raises(ContractError):
        GradedPolyAlgebra([("a", 0)])


def test_inhomogeneous_degree_rejected():
    with pytest.raises(ContractError):
        (W3.gen("w2") + W3.gen("w3")).degree


@given(homogeneous(W6), homogeneous(W6), homogeneous(W6))
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * W6.one() == a


@given(homogeneous(W6, 10), homogeneous(W6, 10))
def test_apply_map_is_multiplicative(a, b):
    f = alpha_map(6)
    assert f(a * b) == f(a) * f(b)
    assert f(a + b) == f(a) + f(b)


@given(st.integers(2, 7), st.integers(0, 12))
def test_alpha_images_are_homogeneous(n, d):
    f = alpha_map(n)
    w = bso_algebra(n)
    for key in w.keys_of_degree(d):
        img = f(w.from_keys([key]))
        assert not img or img.degree == d


def test_concurrent_first_fill():
    from concurrent.futures import ThreadPoolExecutor

    a = GradedPolyAlgebra([("a", 1), ("b", 2), ("c", 3)])
    with ThreadPoolExecutor(8) as pool:
        results = list(pool.map(lambda d: a.keys_of_degree(d % 15), range(120)))
    for d, keys in enumerate(results):
        assert keys is a.keys_of_degree(d % 15)
