import pytest

from spinloop.errors import ContractError, UnsupportedSizeError
from spinloop.f2core import EchelonForm, kernel_basis
from spinloop.fibersq import (
    EXCEPTIONAL_DEGREES,
    VALIDATION_DEGREES,
    Presentation,
    TensorProduct,
    _identity_map,
    euler_matrix,
    freeness_series,
    gysin_assemble,
    ideal_membership,
    projection_map,
    spin_presentation,
    spin_tensor,
    tensor_over_base,
)
from spinloop.loopalg import bso_loop_model
from spinloop.polyalg import bso_algebra, closed_form_series


def test_presentation_examples():
    p3 = spin_presentation(3)
    assert [str(r) for r in p3.relations] == ["w2", "w3"]
    assert p3.extra_generators == (("z", 4),)
    assert p3.quotient_series(8).to_list() == [1, 0, 0, 0, 1, 0, 0, 0, 1]
    p5 = spin_presentation(5)
    assert [str(r) for r in p5.relations] == ["w2", "w3", "w5"]
    assert p5.extra_generators == (("z", 8),)
    assert p5.effective_degrees(16) == [4, 8]
    assert str(p5.z_steps[2]) == "w2*w3 + w5"
    assert spin_presentation(9).effective_degrees(24) == [4, 6, 7, 8, 16]


@pytest.mark.parametrize("n", range(3, 10))
def test_presentation_table(n):
    p = spin_presentation(n)
    degs = tuple(p.effective_degrees(24))
    assert degs == VALIDATION_DEGREES[n]
    if n in EXCEPTIONAL_DEGREES:
        assert degs == EXCEPTIONAL_DEGREES[n]
    # regular: the quotient really is polynomial on those degrees
    assert p.quotient_series(30) == closed_form_series(degs, [], 30)


def test_presentation_range():
    for n in (2, 10):
        with pytest.raises(UnsupportedSizeError):
            spin_presentation(n)


def test_last_theta_lies_in_ideal():
    for n in range(3, 10):
        p = spin_presentation(n)
        last = p.z_steps[-1]
        assert ideal_membership(p.relations, last, last.degree)
        assert 1 << len(p.relations) == p.extra_generators[0][1]


def test_ideal_membership_examples():
    w = bso_algebra(4)
    assert ideal_membership([w.gen("w2")], w.zero(), 3)
    assert ideal_membership([w.gen("w2")], w.parse("w2*w4"), 6)
    assert not ideal_membership([w.gen("w2"), w.gen("w3")], w.gen("w4"), 4)
    with pytest.raises(ContractError):
        ideal_membership([w.gen("w2")], w.gen("w4"), 5)


def test_quotient_basis_examples():
    p = spin_presentation(3)
    assert [str(p.full.from_keys([k])) for k in p.quotient_basis(4)] == ["z"]
    for d in (1, 2, 3):
        assert p.quotient_basis(d) == ()
    for n in range(3, 10):
        q = spin_presentation(n)
        assert q.quotient_basis(0) == (0,)
        assert [len(q.quotient_basis(d)) for d in range(13)] == q.quotient_series(12).to_list()


def test_projection_kills_w2():
    f = projection_map(3)
    w = bso_algebra(3)
    assert not f(w.gen("w2"))
    assert not f(w.parse("w2*w3"))


def test_presentation_json_round_trip():
    p = spin_presentation(7)
    q = Presentation.from_json(p.to_json())
    assert q.relations == p.relations
    assert q.extra_generators == p.extra_generators
    assert q.quotient_series(16) == p.quotient_series(16)
    with pytest.raises(ContractError):
        Presentation.from_json("{}")


def test_tensor_examples():
    e = spin_tensor(3)
    assert len(e.basis(0)) == 1
    assert e.basis(1).text() == ["1 (x) s(w2)"]
    assert len(e.basis(3)) == 1


def test_tensor_over_base_function():
    e = spin_tensor(4)
    tb = tensor_over_base(e.p, e.m, e.base_map, 5)
    assert len(tb) == len(e.basis(5))


@pytest.mark.parametrize("n", range(3, 7))
def test_tensor_size_is_pairs_minus_relator_rank(n):
    e = spin_tensor(n)
    for d in range(9):
        tb = e.basis(d)
        qm = tb.quotient_matrix
        assert qm.cols == tb.pair_count
        assert len(tb) == tb.pair_count - EchelonForm(qm.data).rank


@pytest.mark.parametrize("n", range(3, 10))
def test_freeness_witness(n):
    e = spin_tensor(n)
    assert [len(e.basis(d)) for d in range(21)] == freeness_series(n, 20).to_list()


def test_euler_examples():
    assert euler_matrix(3, 0).to_lists() == [[1]]
    assert euler_matrix(3, 3).to_lists() == [[0]]


def test_euler_matrix_empty_source():
    w = bso_algebra(3)
    p = Presentation(w, [w.gen("w2"), w.gen("w3")])  # no z: nothing in degree 4 and up
    m = bso_loop_model(3)
    t = TensorProduct(p, m, _identity_map(p, m))
    assert len(t.basis(4)) == 0
    mat = euler_matrix(3, 4, t)
    assert (mat.rows, mat.cols) == (0, 0)


def test_gysin_examples():
    g = gysin_assemble(3, 8)
    assert g.assembled_dims.to_list() == [1, 0, 0, 1, 1, 0, 0, 1, 1]
    assert (g.ker_dims[0], g.coker_dims[0], g.assembled_dims[0]) == (0, 1, 1)
    g5 = gysin_assemble(5, 16)
    assert g5.assembled_dims == closed_form_series([4, 8], [3, 7], 16)


@pytest.mark.parametrize("n", range(3, 10))
def test_gysin_bookkeeping(n):
    g = gysin_assemble(n, 16)
    for d in range(17):
        assert g.ker_dims[d] + g.ranks[d] == g.tensor_dims[d]
        prev = g.ranks[d - 1] if d else 0
        assert g.coker_dims[d] == g.tensor_dims[d] - prev
    assert g.agrees


def test_euler_rank_nullity_via_kernel():
    for d in range(12):
        m = euler_matrix(6, d)
        assert len(kernel_basis(m)) + EchelonForm(m.data).rank == m.cols


def test_gysin_range():
    with pytest.raises(UnsupportedSizeError):
        gysin_assemble(10, 4)
