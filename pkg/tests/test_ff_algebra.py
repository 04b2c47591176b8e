import itertools

import hypothesis as hp
import numpy as np
import pytest
from hypothesis import strategies as st

from errors import (
    ArityMismatch,
    DivisionByZero,
    DuplicateAbscissa,
    FieldMismatch,
    Inconsistent,
    NotPrime,
    ReducibleModulus,
    Singular,
    TooFewPoints,
    TooLarge,
)
from ff_algebra import (
    FieldElement,
    FieldSpec,
    FieldPoly,
    MatrixFq,
    MultiPoly,
    fe_add,
    fe_inv,
    fe_mul,
    fe_neg,
    field_make,
    field_of_order,
    lagrange_interpolate,
    mat_kernel_vector,
    mat_rank,
    mat_solve,
    monomial_value,
    poly_eval,
)

MAX_EXAMPLES = 50
SMALL_ORDERS = (2, 3, 4, 5, 7, 8, 9, 25, 27, 49)


def test_field_make_prime_field():
    f = field_make(2, 1)
    assert f.q == 2
    assert list(f.elements()) == [0, 1]


def test_field_make_f9_uses_x2_plus_1():
    f = field_make(3, 2)
    assert f.modulus == (1, 0, 1)
    # x is encoded as 3; x * x = -1 = 2
    assert f.mul(3, 3) == 2


def test_field_make_same_modulus_every_time():
    assert field_make(2, 4).modulus == field_make(2, 4).modulus


def test_field_make_errors():
    with pytest.raises(NotPrime):
        field_make(4, 1)
    with pytest.raises(TooLarge):
        field_make(2, 17)
    with pytest.raises(NotPrime):
        field_of_order(12)


def test_field_spec_rejects_reducible_moduli():
    with pytest.raises(ReducibleModulus):
        FieldSpec(2, 2, (1, 0, 1))
    with pytest.raises(ReducibleModulus):
        FieldSpec(3, 2, (2, 0, 1))
    with pytest.raises(ValueError):
        FieldSpec(3, 2, (1, 2))
    with pytest.raises(NotPrime):
        FieldSpec(4, 1, (0, 1))
    f = FieldSpec(2, 2, (1, 1, 1))
    assert f == field_make(2, 2)
    assert all(f.mul(a, f.inv(a)) == 1 for a in f.nonzero())


def test_inverse_in_f7():
    f = field_of_order(7)
    assert f.inv(6) == 6
    with pytest.raises(DivisionByZero):
        f.inv(0)


@pytest.mark.parametrize("q", SMALL_ORDERS)
def test_field_axioms_exhaustive(q):
    f = field_of_order(q)
    for a in f.elements():
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
    if q <= 9:
        for a, b, c in itertools.product(f.elements(), repeat=3):
            assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
            assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@pytest.mark.parametrize("q", SMALL_ORDERS)
def test_frobenius_is_additive(q):
    f = field_of_order(q)
    for a, b in itertools.product(f.elements(), repeat=2):
        assert f.pow(f.add(a, b), f.p) == f.add(f.pow(a, f.p), f.pow(b, f.p))


@hp.given(q=st.sampled_from([81, 121, 125, 256, 343]), data=st.data())
@hp.settings(max_examples=MAX_EXAMPLES, deadline=None)
def test_field_laws_random(q, data):
    f = field_of_order(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    if a:
        assert f.div(f.mul(a, b), a) == b


def test_vectorized_ops_match_scalar():
    f = field_of_order(9)
    xs = np.arange(9)
    for b in range(9):
        assert f.vmul(xs, b).tolist() == [f.mul(int(x), b) for x in xs]
        assert f.vadd(xs, b).tolist() == [f.add(int(x), b) for x in xs]


def test_field_element_operators():
    f = field_of_order(7)
    a, b = FieldElement(f, 3), FieldElement(f, 5)
    assert int(fe_add(a, b)) == 1
    assert int(fe_mul(a, b)) == 1
    assert int(fe_neg(a)) == 4
    assert int(fe_inv(b)) == 3
    assert int(a / b) == 2
    with pytest.raises(FieldMismatch):
        a + FieldElement(field_of_order(5), 1)


def test_poly_eval_examples():
    f = field_of_order(7)
    P = FieldPoly(f, (0, 1, 1))  # x^2 - 6x = x^2 + x over F_7
    assert poly_eval(P, 1) == 2
    assert poly_eval(FieldPoly.zero(f), 4) == 0
    assert monomial_value(f, (1, 2), (2, 3)) == 4
    with pytest.raises(ArityMismatch):
        poly_eval(MultiPoly(f, 2, {(1, 0): 1}), (1,))


def test_multipoly_reduces_exponents():
    f = field_of_order(3)
    # x^3 = x on F_3
    assert MultiPoly(f, 1, {(3,): 1}) == MultiPoly(f, 1, {(1,): 1})
    assert MultiPoly(f, 2, {(1, 1): 1, (0, 0): 0}).terms == {(1, 1): 1}


def test_multipoly_json_round_trip():
    f = field_of_order(5)
    P = MultiPoly(f, 2, {(2, 0): 1, (1, 1): 3})
    assert MultiPoly.from_json(P.to_json()) == P


def test_restrict_to_line():
    f = field_of_order(7)
    P = MultiPoly(f, 2, {(2, 0): 1, (0, 1): 1})
    line = P.restrict_to_line((2, 3))
    for x in f.elements():
        assert line(x) == P.evaluate((f.mul(2, x), f.mul(3, x)))


def test_mat_solve_identity():
    f = field_of_order(5)
    assert mat_solve(MatrixFq(f, np.eye(3, dtype=int)), [1, 2, 3]) == [1, 2, 3]


def test_mat_kernel_vector_of_zero_row():
    f = field_of_order(5)
    v = mat_kernel_vector(MatrixFq(f, [[0, 0]]))
    assert v is not None and any(v)


def test_mat_rank_vandermonde_rows():
    f = field_of_order(7)
    assert mat_rank(MatrixFq(f, [[1, 1], [2, 4]])) == 2


def test_mat_solve_errors():
    f = field_of_order(5)
    with pytest.raises(Inconsistent):
        mat_solve(MatrixFq(f, [[1, 1], [1, 1]]), [1, 2])
    with pytest.raises(Singular):
        mat_solve(MatrixFq(f, [[1, 1], [1, 1]]), [1, 1])
    assert mat_solve(MatrixFq(f, [[1, 1], [1, 1]]), [1, 1], unique=False) == [1, 0]


@hp.given(seed=st.integers(0, 2 ** 32 - 1), q=st.sampled_from([5, 8, 9]))
@hp.settings(max_examples=MAX_EXAMPLES, deadline=None)
def test_solve_and_kernel_satisfy_the_system(seed, q):
    f = field_of_order(q)
    rng = np.random.default_rng(seed)
    M = MatrixFq(f, rng.integers(0, q, size=(3, 4)))
    v = mat_kernel_vector(M)
    assert v is not None and any(v)
    assert M.apply(v) == [0, 0, 0]
    y = M.apply([int(x) for x in rng.integers(0, q, size=4)])
    z = mat_solve(M, y, unique=False)
    assert M.apply(z) == y


def test_lagrange_examples():
    f = field_of_order(7)
    assert lagrange_interpolate(f, [(0, 0), (1, 1), (2, 4)], 2) == FieldPoly(f, (0, 0, 1))
    assert lagrange_interpolate(f, [(0, 3), (1, 3), (5, 3)], 2) == FieldPoly(f, (3,))
    with pytest.raises(DuplicateAbscissa):
        lagrange_interpolate(f, [(0, 0), (0, 1)], 1)
    with pytest.raises(TooFewPoints):
        lagrange_interpolate(f, [(0, 0)], 2)


@hp.given(coeffs=st.lists(st.integers(0, 8), max_size=5))
@hp.settings(max_examples=MAX_EXAMPLES, deadline=None)
def test_interpolation_recovers_polynomial(coeffs):
    f = field_of_order(9)
    P = FieldPoly(f, tuple(coeffs))
    d = max(len(coeffs) - 1, 0)
    assert lagrange_interpolate(f, [(x, P(x)) for x in range(d + 1)], d) == P


def test_shift_is_translation():
    f = field_of_order(5)
    Q = FieldPoly(f, (0, 0, 1))
    shifted = Q.shift(1)
    for x in f.elements():
        assert shifted(x) == Q(f.sub(x, 1))
