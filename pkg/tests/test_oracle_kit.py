import hypothesis as hp
import numpy as np
import pytest
from hypothesis import strategies as st

from errors import EvenCharacteristic, InvalidGroup, NotClosed, PromiseViolation
from ff_algebra import MultiPoly, field_of_order
from group_core import (
    AffineGroup,
    Partition,
    SubgroupGens,
    ZpmZpGroup,
    affine_action,
    regular_action,
)
from oracle_kit import (
    LevelSetOracle,
    check_promise,
    cube_index,
    cube_points,
    instance_to_json,
    make_grover_oracle,
    make_hpgp_oracle,
    make_hpp_oracle,
    make_hqpp_oracle,
    make_hsp_oracle,
    make_hssp_oracle,
    make_zpmzp_oracle,
    random_graph_poly,
    random_quadratic,
    restrict,
    scramble_labels,
)

MAX_EXAMPLES = 20


def partition_of(oracle):
    return Partition.from_labels(oracle.domain, oracle.peek)


def test_hqpp_level_sets(f7):
    inst = make_hqpp_oracle(f7, 3)
    pi = partition_of(inst.oracle)
    assert frozenset({3}) in pi.classes()
    assert frozenset({1, 5}) in pi.classes()
    assert pi.class_sizes() == [1, 2, 2, 2]
    assert inst.answer == 3


@pytest.mark.parametrize("q", [2, 4, 8])
def test_hqpp_rejects_even_characteristic(q):
    with pytest.raises(EvenCharacteristic):
        make_hqpp_oracle(field_of_order(q), 1)


def test_query_counts_and_peek(f5):
    oracle = make_hqpp_oracle(f5, 2).oracle
    oracle.peek(0)
    assert oracle.query_count == 0
    for x in range(5):
        oracle.query(x)
    assert oracle.query_count == 5
    oracle.reset_count()
    assert oracle.query_count == 0


def test_hsp_level_sets_are_right_cosets(aff7_pm1):
    H = SubgroupGens(aff7_pm1, [(6, 6)])
    inst = make_hsp_oracle(aff7_pm1, H)
    for g in aff7_pm1.elements:
        level = {x for x in aff7_pm1.elements if inst.oracle.peek(x) == inst.oracle.peek(g)}
        assert level == {aff7_pm1.mul(h, g) for h in H.elements}


def test_regular_hssp_agrees_with_hsp(aff7_pm1):
    H = SubgroupGens(aff7_pm1, [(6, 6)])
    hsp = make_hsp_oracle(aff7_pm1, H)
    hssp = make_hssp_oracle(regular_action(aff7_pm1), H)
    assert partition_of(hsp.oracle) == partition_of(hssp.oracle)


def test_hssp_requires_closed_subgroup(f5):
    G = AffineGroup(f5, range(1, 5))
    translations = SubgroupGens(G, [(1, 1)])
    with pytest.raises(NotClosed):
        make_hssp_oracle(affine_action(G), translations)


def test_check_promise_catches_a_wrong_oracle(f5):
    oracle = LevelSetOracle(f5.elements(), lambda x: x % 2)
    with pytest.raises(PromiseViolation):
        check_promise(oracle, lambda x: x)
    check_promise(oracle, lambda x: "even" if x % 2 == 0 else "odd")


def test_scrambled_oracle_keeps_partition(f7):
    inst = make_hqpp_oracle(f7, 4)
    scrambled = scramble_labels(inst.oracle, seed=11)
    assert partition_of(scrambled) == partition_of(inst.oracle)
    assert {scrambled.peek(x) for x in f7.elements()}.isdisjoint({inst.oracle.peek(x) for x in f7.elements()})
    scrambled.query(0)
    assert scrambled.query_count == 1
    assert inst.oracle.query_count == 1


def test_scramble_is_reproducible(f7):
    a = scramble_labels(make_hqpp_oracle(f7, 4).oracle, seed=5)
    b = scramble_labels(make_hqpp_oracle(f7, 4).oracle, seed=5)
    assert [a.peek(x) for x in range(7)] == [b.peek(x) for x in range(7)]


def test_restrict_costs_one_inner_query(f5):
    P = MultiPoly(f5, 2, {(2, 0): 1, (0, 1): 1})
    inst = make_hpp_oracle(f5, 2, P)
    line = restrict(inst.oracle, lambda x: (x, 0), f5.elements())
    for x in f5.elements():
        assert line.query(x) == P.evaluate((x, 0))
    assert line.query_count == 5
    assert inst.oracle.query_count == 5


def test_hpp_rejects_zero_polynomial(f5):
    with pytest.raises(PromiseViolation):
        make_hpp_oracle(f5, 2, MultiPoly(f5, 2))
    make_hpp_oracle(f5, 2, MultiPoly(f5, 2), allow_zero=True)


def test_hpgp_drops_constant_term(f5):
    Q = MultiPoly(f5, 1, {(0,): 3, (2,): 1})
    inst = make_hpgp_oracle(f5, 1, Q, 2)
    assert inst.answer == MultiPoly(f5, 1, {(2,): 1})
    o = inst.oracle
    # (x, y) and (x', y') share a level set iff y - Q(x) = y' - Q(x')
    assert o.peek(((2,), 4)) == o.peek(((0,), 0))
    assert o.peek(((1,), 0)) != o.peek(((0,), 0))


def test_grover_oracle(f5):
    inst = make_grover_oracle(f5, 2)
    assert [inst.oracle.peek(x) for x in range(5)] == [0, 0, 1, 0, 0]
    assert inst.params["stabilizer_order"] == 4


def test_zpmzp_level_sets_are_left_cosets():
    A = [[1, 1], [0, 1]]
    inst = make_zpmzp_oracle(3, 2, A, (1, 2), (2, 0))
    G = ZpmZpGroup(3, 2, A)
    H = SubgroupGens(G, [((1, 2), 1)])
    for g in G.elements:
        level = {x for x in G.elements if inst.oracle.peek(x) == inst.oracle.peek(g)}
        assert level == {G.mul(g, h) for h in H.elements}
    assert inst.params["d"] == 2


def test_zpmzp_rejects_element_of_wrong_order():
    with pytest.raises(InvalidGroup):
        make_zpmzp_oracle(2, 2, [[1, 1], [0, 1]], (0, 1))


def test_instance_json_separates_the_answer(f7):
    doc = instance_to_json(make_hqpp_oracle(f7, 3))
    assert doc["family"] == "HQPP"
    assert doc["params"] == {"field": {"p": 7, "k": 1}}
    assert doc["harness"] == {"answer": 3}


def test_cube_points_order():
    pts, arr = cube_points(3, 2)
    assert pts[:4] == ((0, 0), (0, 1), (0, 2), (1, 0))
    assert arr.shape == (9, 2)
    assert all(cube_index(x, 3) == i for i, x in enumerate(pts))


@hp.given(seed=st.integers(0, 2 ** 32 - 1), q=st.sampled_from([2, 3, 5, 9]), n=st.integers(1, 4))
@hp.settings(max_examples=MAX_EXAMPLES, deadline=None)
def test_random_quadratic_shape(seed, q, n):
    f = field_of_order(q)
    P = random_quadratic(f, n, np.random.default_rng(seed))
    assert not P.is_zero()
    assert P.constant == 0
    assert all(sum(e) <= 2 for e in P.terms)
    if q == 2:
        assert all(max(e) <= 1 for e in P.terms)


@hp.given(seed=st.integers(0, 2 ** 32 - 1), d=st.integers(1, 4))
@hp.settings(max_examples=MAX_EXAMPLES, deadline=None)
def test_random_graph_poly_shape(seed, d):
    f = field_of_order(3)
    Q = random_graph_poly(f, 2, d, np.random.default_rng(seed))
    assert Q.constant == 0
    assert all(0 < sum(e) <= d and max(e) <= 2 for e in Q.terms)
