"""Differential operator algebra: composition, adjoints, indicial data."""

import pytest
from hypothesis import given, settings, strategies as st

from ellop.rationals import Rat
from ellop.poly import MultiPoly
from ellop.elliptic import EllipticElement
from ellop.operators import (
    GlobalEllipticOperator,
    IndexData,
    InvalidGapsError,
    cyclic_L0,
    find_commuting,
    homogeneous_integrable,
    op_commutator,
    op_compose,
    op_order,
    third_order_from_gaps,
    third_order_indices,
)


def small_op(spec):
    """Operator dict {power: EllipticElement} from (power, p0, p1) triples."""
    out = {}
    for pw, p0, p1 in spec:
        out[pw] = EllipticElement(p0, p1)
    return out


ints = st.integers(-3, 3)
elems = st.tuples(
    st.lists(ints, max_size=3), st.lists(ints, max_size=2)
).map(lambda t: EllipticElement(*t))
opdicts = st.dictionaries(st.integers(0, 2), elems, max_size=3)


@given(opdicts, opdicts, opdicts)
@settings(max_examples=25, deadline=None)
def test_composition_is_associative(a, b, c):
    lhs = op_compose(op_compose(a, b), c)
    rhs = op_compose(a, op_compose(b, c))
    keys = set(lhs) | set(rhs)
    zero = EllipticElement.zero()
    for k in keys:
        assert (lhs.get(k, zero) - rhs.get(k, zero)).is_zero()


@given(opdicts, opdicts)
@settings(max_examples=25, deadline=None)
def test_commutator_antisymmetry(a, b):
    lhs = op_commutator(a, b)
    rhs = op_commutator(b, a)
    keys = set(lhs) | set(rhs)
    zero = EllipticElement.zero()
    for k in keys:
        assert (lhs.get(k, zero) + rhs.get(k, zero)).is_zero()


def test_op_order():
    assert op_order({}) == -1
    assert op_order(small_op([(0, [1], []), (2, [0, 1], [])])) == 2


def test_leibniz_on_a_function():
    # [D, f] = f' as multiplication operators
    f = EllipticElement([0, 2], [1])       # 2P + P'
    D = {1: EllipticElement.const(1)}
    comm = op_commutator(D, {0: f})
    assert set(comm) == {0}
    assert (comm[0] - f.derivative()).is_zero()


def test_index_data_sorting_and_gaps():
    idx = IndexData((3, -1, 1))
    assert idx.indices == (Rat(-1), Rat(1), Rat(3))
    assert idx.gaps == (Rat(2), Rat(2))
    assert idx.index_sum_ok()


def test_homogeneous_integrable():
    ok, _ = homogeneous_integrable(IndexData((-1, 1, 3)), 3)
    assert ok
    bad, reason = homogeneous_integrable(IndexData((0, 1, 3)), 3)
    assert not bad and "residue" in reason
    frac, reason = homogeneous_integrable(IndexData((Rat(1, 2), 1, 3)), 3)
    assert not frac and "integer" in reason


@pytest.mark.parametrize("q,r", [(1, 1), (2, 2), (4, 1), (5, 2), (7, 4)])
def test_third_order_indices_realize_gaps(q, r):
    idx = third_order_indices(q, r)
    m0, m1, m2 = idx.indices
    assert (m1 - m0, m2 - m1) == (Rat(q), Rat(r))
    assert m0 + m1 + m2 == Rat(3)


@pytest.mark.parametrize("q,r", [(3, 3), (1, 2), (2, 4), (0, 3)])
def test_invalid_gaps_rejected(q, r):
    with pytest.raises(InvalidGapsError):
        third_order_indices(q, r)


def test_third_order_operator_shape():
    L = third_order_from_gaps(2, 2)
    # D^3 + (aP + c)D + (bP' + eP) with a = -3, b = -3/2 for gaps (2,2)
    assert L.order == 3
    a2 = L.coeffs[2]
    a3 = L.coeffs[3]
    assert a2.part0[1] == MultiPoly.const(Rat(-3))
    assert a3.part1[0] == MultiPoly.const(Rat(-3, 2))


def test_third_order_indicial_roots_match():
    L = third_order_from_gaps(1, 1)
    idx, residual = L.localize(4).indices()
    assert residual is None
    assert idx.indices == (Rat(0), Rat(1), Rat(2))


def test_adjoint_is_an_involution():
    L = third_order_from_gaps(2, 2)
    A = L.adjoint().adjoint()
    for i, elem in L.coeffs.items():
        assert (A.coeffs.get(i, EllipticElement.zero()) - elem).is_zero()


def test_cyclic_operator_indices():
    idx = IndexData((-1, 1, 2, 4))
    L = cyclic_L0(4, idx)
    got, residual = L.localize(5).indices()
    assert residual is None
    assert got.indices == (Rat(-1), Rat(1), Rat(2), Rat(4))


def test_cyclic_rejects_bad_indices():
    with pytest.raises(ValueError):
        cyclic_L0(3, IndexData((0, 1, 3)))


def test_cyclic_order_five_warns():
    idx = IndexData((-1, 1, 2, 3, 5))
    with pytest.warns(UserWarning):
        cyclic_L0(5, idx)


def test_find_commuting_integrable_point():
    L = GlobalEllipticOperator(2, {2: EllipticElement([0, -2])})
    M = find_commuting(L, 3)
    assert M is not None
    comm = op_commutator(L.as_opdict(), M)
    assert all(c.is_zero() for c in comm.values())


def test_find_commuting_generic_point_fails():
    L = GlobalEllipticOperator(2, {2: EllipticElement([0, Rat(-5, 2)])})
    assert find_commuting(L, 3) is None


def test_find_commuting_requires_coprime_orders():
    L = GlobalEllipticOperator(2, {2: EllipticElement([0, -2])})
    with pytest.raises(ValueError):
        find_commuting(L, 4)
