import itertools

import hypothesis as hp
import pytest
from hypothesis import strategies as st

from errors import FieldTooSmall, NoPolynomialSizeBase, SharplyTwoTransitive
from ff_algebra import field_of_order
from group_core import AffineGroup, FrobeniusView, all_subgroups, conjugate, is_closed
from reduction_engine import pm1_group
from strong_base import (
    BaseSet,
    all_pairs_separated,
    base_length,
    count_separators,
    deterministic_base_pm1,
    fg_point_base,
    frobenius_base,
    random_base,
    random_base_trials,
    separates,
    separator_bound,
    verify_base,
    whole_domain_base,
)

MAX_EXAMPLES = 30


def test_separates_example(aff7_pm1):
    view = FrobeniusView(aff7_pm1)
    assert separates(0, 0, 1, view)
    with pytest.raises(ValueError):
        separates(0, 2, 2, view)


def test_separator_counts_aff7_pm1(aff7_pm1):
    view = FrobeniusView(aff7_pm1)
    assert separator_bound(view) == 6
    for u, v in itertools.permutations(view.kernel, 2):
        assert 6 <= count_separators(u, v, view) <= 7


@hp.given(data=st.data())
@hp.settings(max_examples=MAX_EXAMPLES, deadline=None)
def test_separator_bound_random_pairs(data):
    view = FrobeniusView(AffineGroup(field_of_order(13), (1, 3, 9)))
    u, v = data.draw(st.lists(st.sampled_from(view.kernel), min_size=2, max_size=2, unique=True))
    count = count_separators(u, v, view)
    assert count >= separator_bound(view)
    assert 2 * count > len(view.kernel)


def test_sharply_two_transitive_negative_control():
    view = FrobeniusView(AffineGroup(field_of_order(5), range(1, 5)))
    counts = {count_separators(u, v, view) for u, v in itertools.permutations(view.kernel, 2)}
    assert counts == {2}
    with pytest.raises(SharplyTwoTransitive):
        random_base(view, 0.25, seed=0)


@pytest.mark.parametrize("G, max_size", [(pm1_group(field_of_order(7)), 3), (AffineGroup(field_of_order(13), (1, 3, 9)), 2)])
def test_strong_base_iff_pairs_separated(G, max_size):
    view = FrobeniusView(G)
    for size in range(1, max_size + 1):
        for B in itertools.combinations(view.kernel, size):
            assert verify_base(frobenius_base(view, B)) == all_pairs_separated(B, view)


def test_base_length():
    assert base_length(7, 0.25) == 7
    assert base_length(9, 1 / 16) == 10


def test_random_base_is_seeded(f9):
    view = FrobeniusView(pm1_group(f9))
    a = random_base(view, 0.25, seed=3)
    b = random_base(view, 0.25, seed=3)
    assert a.points == b.points
    assert len(a) <= base_length(9, 0.25)


def test_random_base_failure_rate(f9):
    view = FrobeniusView(pm1_group(f9))
    outcomes = random_base_trials(view, 0.25, 40, seed=0)
    assert 1 - sum(outcomes) / 40 <= 0.25 + 3 * (0.25 * 0.75 / 40) ** 0.5


def test_deterministic_base_pm1():
    B = deterministic_base_pm1(pm1_group(field_of_order(7)))
    assert B.points == (0, 1)
    assert verify_base(B)
    B9 = deterministic_base_pm1(pm1_group(field_of_order(9)))
    assert len(B9) == 2 and verify_base(B9)


@pytest.mark.parametrize("q", [5, 7, 9])
def test_single_points_never_suffice(q):
    view = FrobeniusView(pm1_group(field_of_order(q)))
    assert not any(verify_base(frobenius_base(view, (z,))) for z in view.kernel)


def test_fg_point_base(f5):
    B = fg_point_base(f5, 2)
    assert B.points == (((0,), 0), ((1,), 0), ((2,), 0))
    assert verify_base(B)
    with pytest.raises(FieldTooSmall):
        fg_point_base(field_of_order(2), 2)
    with pytest.raises(NoPolynomialSizeBase):
        fg_point_base(f5, 1, n=2)


def test_fg_two_points_are_too_few_for_quadratics(f5):
    B = fg_point_base(f5, 2)
    short = BaseSet(B.action, B.points[:2], B.family)
    assert not verify_base(short)


def test_whole_domain_is_a_base_for_closed_subgroups(aff7_pm1):
    view = FrobeniusView(aff7_pm1)
    closed = [H for H in all_subgroups(aff7_pm1) if is_closed(H, view.action)]
    assert verify_base(whole_domain_base(view.action, closed))


def test_conjugation_stability(aff7_pm1):
    view = FrobeniusView(aff7_pm1)
    for x in aff7_pm1.elements:
        H = conjugate(view.complement, x)
        assert verify_base(BaseSet(view.action, (0, 1), (H,), conjugation_closed=False))


def test_base_set_invariants(aff7_pm1):
    view = FrobeniusView(aff7_pm1)
    with pytest.raises(ValueError):
        BaseSet(view.action, ())
    with pytest.raises(ValueError):
        BaseSet(view.action, (1, 1))
    assert frobenius_base(view, (0, 1)).to_json() == {"points": [0, 1], "family_size": 7}
