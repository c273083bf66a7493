import pytest
from hypothesis import given, strategies as st

from spinloop.errors import ContractError, NotExpressibleError
from spinloop.polyalg import GradedPolyAlgebra, alpha_map, bso_algebra, torus_algebra
from spinloop.steenrod import (
    SteenrodRule,
    bso_rule,
    express_in_w,
    phi,
    sq,
    steenrod_table,
    torus_rule,
    wu_formula,
)

from strategies import homogeneous

X3 = torus_algebra(3)
X5 = torus_algebra(5)
W3 = bso_algebra(3)


def test_sq_examples():
    rule = torus_rule(3)
    x1, x2 = X3.gens()
    assert sq(rule, 1, x1) == x1 * x1
    assert sq(rule, 1, x1 * x2) == X3.parse("x1^2*x2 + x1*x2^2")
    assert sq(rule, 2, X3.parse("x1^2*x2 + x1*x2^2")) == X3.parse("x1^4*x2 + x1*x2^4")
    assert X3.parse("x1^4*x2 + x1*x2^4") == alpha_map(3)(W3.parse("w2*w3"))


def test_phi_examples():
    x1 = X3.gen(0)
    assert phi(torus_rule(3), x1) == x1
    assert phi(bso_rule(3), W3.gen("w2")) == W3.gen("w3")
    assert phi(bso_rule(3), W3.gen("w3")) == W3.parse("w2*w3")
    assert phi(bso_rule(6), bso_algebra(6).gen("w3")) == bso_algebra(6).parse("w2*w3 + w5")
    with pytest.raises(ContractError):
        phi(torus_rule(3), X3.one())


def test_express_examples():
    a = alpha_map(3)
    assert express_in_w(3, a(W3.gen("w2"))) == W3.gen("w2")
    assert express_in_w(3, X3.parse("x1^4*x2 + x1*x2^4")) == W3.parse("w2*w3")
    with pytest.raises(NotExpressibleError):
        express_in_w(3, X3.gen(0))


def test_express_rejects_symmetric_non_image():
    # x1^2 + x2^2 is symmetric in x1, x2 but not S_3-invariant
    with pytest.raises(NotExpressibleError):
        express_in_w(3, X3.parse("x1^2 + x2^2"))


def test_wu_examples():
    assert str(wu_formula(1, 2, 3)) == "w3"
    assert str(wu_formula(2, 3, 3)) == "w2*w3"
    assert str(wu_formula(2, 3, 6)) == "w2*w3 + w5"


@pytest.mark.parametrize("n", range(2, 9))
def test_wu_oracle(n):
    table = steenrod_table(n)
    for j in range(2, n + 1):
        for i in range(1, j + 1):
            assert table[(i, j)] == wu_formula(i, j, n), (i, j)


def test_axioms_on_generators():
    rule = bso_rule(5)
    w = bso_algebra(5)
    for g in w.gens():
        d = g.degree
        assert sq(rule, 0, g) == g
        assert sq(rule, d, g) == g * g
        assert not sq(rule, d + 1, g)


def test_rule_rejects_unstable_data():
    a = GradedPolyAlgebra([("y", 2)])
    y = a.gen(0)
    with pytest.raises(ContractError):
        SteenrodRule(a, {(0, 3): y})
    with pytest.raises(ContractError):
        SteenrodRule(a, {(0, 2): y})  # contradicts Sq^2 y = y^2


@given(homogeneous(X5, 5), homogeneous(X5, 5), st.integers(0, 10))
def test_cartan(a, b, i):
    rule = torus_rule(5)
    lhs = sq(rule, i, a * b)
    rhs = X5.zero()
    for j in range(i + 1):
        rhs = rhs + sq(rule, j, a) * sq(rule, i - j, b)
    assert lhs == rhs


@given(homogeneous(bso_algebra(6), 12), homogeneous(bso_algebra(6), 12), st.integers(0, 12))
def test_cartan_w_ring(a, b, i):
    rule = bso_rule(6)
    rhs = bso_algebra(6).zero()
    for j in range(i + 1):
        rhs = rhs + sq(rule, j, a) * sq(rule, i - j, b)
    assert sq(rule, i, a * b) == rhs


@given(homogeneous(bso_algebra(5), 10), st.integers(0, 12))
def test_squares_commute_with_alpha(e, i):
    a = alpha_map(5)
    assert a(sq(bso_rule(5), i, e)) == sq(torus_rule(5), i, a(e))


@given(homogeneous(X5, 6))
def test_instability(e):
    rule = torus_rule(5)
    if not e:
        return
    d = e.degree
    assert sq(rule, d, e) == e * e
    assert not sq(rule, d + 1, e)
