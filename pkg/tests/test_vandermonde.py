import itertools

import hypothesis as hp
import numpy as np
import pytest
from hypothesis import strategies as st

from ff_algebra import MultiPoly, field_of_order, mat_rank
from oracle_kit import make_hpgp_oracle, random_graph_poly
from vandermonde import (
    build_vandermonde,
    count_monomials,
    exponent_set,
    information_ratio,
    reduce_hpgp_multivariate,
    system_to_json,
)

MAX_EXAMPLES = 15


def test_count_monomials_examples():
    assert count_monomials(2, 2, 2) == (3, "inclusion-exclusion")
    assert count_monomials(7, 2, 2) == (5, "binomial")
    assert count_monomials(3, 3, 2) == (9, "binomial")


def test_exponent_set_is_graded_lex():
    assert exponent_set(7, 2, 2).exponents == ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    assert exponent_set(2, 2, 2).exponents == ((1, 0), (0, 1), (1, 1))
    with pytest.raises(ValueError):
        exponent_set(5, 0, 2)


@pytest.mark.parametrize("q, j, d", list(itertools.product((2, 3, 4, 5, 7), (1, 2, 3), (1, 2, 3))))
def test_exponent_set_matches_closed_form(q, j, d):
    cap = min(d, q - 1)
    brute = [a for a in itertools.product(range(cap + 1), repeat=j) if 0 < sum(a) <= d]
    assert len(exponent_set(q, j, d)) == len(brute) == count_monomials(q, j, d)[0]


def test_base_points():
    assert build_vandermonde(7, 1, 3).points == ((1,), (2,), (3,))
    assert build_vandermonde(2, 1, 3).points == ((1,),)


def test_bivariate_quadratic_system_over_f7():
    system = build_vandermonde(7, 2, 2)
    assert system.matrix.shape == (5, 5)
    assert system.rank() == 5
    assert system.points[0] == (1, 1)


@pytest.mark.parametrize("q, j, d", list(itertools.product((2, 3, 4, 5, 7), (1, 2, 3), (1, 2, 3))))
def test_systems_are_square_and_full_rank(q, j, d):
    system = build_vandermonde(q, j, d)
    n = len(system.exponents)
    assert system.matrix.shape == (n, n)
    assert len(set(system.points)) == n
    assert system.rank() == n


def test_system_json():
    doc = system_to_json(build_vandermonde(2, 2, 2))
    assert doc["exponents"] == [[1, 0], [0, 1], [1, 1]]
    assert doc["rank"] == 3
    assert len(doc["points"]) == 3


def test_information_ratio_is_d():
    info = information_ratio(build_vandermonde(7, 2, 2))
    assert info["exponents"] == 5
    assert info["ratio"] == pytest.approx(2.0)


def test_reduce_bivariate(f5):
    Q = MultiPoly(f5, 2, {(2, 0): 1, (1, 1): 1, (0, 1): 3})
    inst = make_hpgp_oracle(f5, 2, Q, 2)
    red = reduce_hpgp_multivariate(inst)
    assert red.poly == Q
    assert red.solves == 5
    assert red.queries == inst.oracle.query_count
    assert red.to_json()["solves"] == 5


def test_reduce_drops_constant_and_runs_threaded(f5):
    Q = MultiPoly(f5, 2, {(0, 0): 2, (1, 1): 4})
    inst = make_hpgp_oracle(f5, 2, Q, 2)
    red = reduce_hpgp_multivariate(inst, jobs=3)
    assert red.poly == MultiPoly(f5, 2, {(1, 1): 4})


def test_reduce_trivariate():
    f3 = field_of_order(3)
    Q = MultiPoly(f3, 3, {(1, 1, 0): 1, (0, 0, 2): 2})
    red = reduce_hpgp_multivariate(make_hpgp_oracle(f3, 3, Q, 2))
    assert red.poly == Q
    assert red.solves == 9


def test_reduce_needs_enough_abscissas():
    f2 = field_of_order(2)
    inst = make_hpgp_oracle(f2, 2, MultiPoly(f2, 2, {(1, 1): 1}), 2)
    with pytest.raises(ValueError):
        reduce_hpgp_multivariate(inst)


@hp.given(seed=st.integers(0, 2 ** 32 - 1), q=st.sampled_from([3, 4, 5]), d=st.integers(1, 2))
@hp.settings(max_examples=MAX_EXAMPLES, deadline=None)
def test_reduce_random_polynomials(seed, q, d):
    f = field_of_order(q)
    Q = random_graph_poly(f, 2, d, np.random.default_rng(seed))
    red = reduce_hpgp_multivariate(make_hpgp_oracle(f, 2, Q, d), field=f, n=2, d=d)
    assert red.poly == Q
    assert mat_rank(red.system.matrix) == len(red.system.exponents)
