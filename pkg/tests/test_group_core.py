import itertools

import hypothesis as hp
import pytest
from hypothesis import strategies as st

from errors import DomainMismatch, InvalidGroup, NotAnAutomorphism, NotASubgroup, NotFrobenius
from ff_algebra import FieldPoly, field_of_order
from group_core import (
    AffineGroup,
    FrobeniusView,
    FunctionGraphGroup,
    Partition,
    SemidirectTableGroup,
    SubgroupGens,
    ZpmZpGroup,
    act,
    affine_action,
    all_subgroups,
    closure,
    conjugate,
    fg_conjugate_complement,
    group_from_descriptor,
    is_closed,
    is_frobenius,
    kernel_action,
    multiplicative_subgroup,
    natural_action,
    orbit,
    partition_star,
    regular_action,
    shifting_action,
    stabilizer,
    standard_complement,
    subgroup_star,
)

MAX_EXAMPLES = 25


def test_affine_action_example(f7):
    G = AffineGroup(f7, range(1, 7))
    action = affine_action(G)
    assert act((1, 2), 3, action) == 0
    assert act(G.identity(), 5, action) == 5
    with pytest.raises(DomainMismatch):
        act((1, 2), 7, action)


def test_shifting_action_example(f5):
    G = FunctionGraphGroup(f5, 1, 2)
    Q = G.table_of(FieldPoly(f5, (0, 0, 1)))
    assert act((Q, (1,)), ((2,), 0), shifting_action(G)) == ((3,), 4)


@pytest.mark.parametrize(
    "G",
    [
        AffineGroup(field_of_order(7), (1, 6)),
        AffineGroup(field_of_order(9), multiplicative_subgroup(field_of_order(9), 4)),
        SemidirectTableGroup.frobenius(7, 3),
        FunctionGraphGroup(field_of_order(3), 1, 1),
        ZpmZpGroup(3, 2, [[1, 1], [0, 1]]),
    ],
)
def test_group_axioms_and_natural_action(G):
    G.check_axioms()
    natural_action(G).verify()


def test_fg_multiplication_rule(f5):
    G = FunctionGraphGroup(f5, 1, 1)
    for (Q1, t1), (Q2, t2) in itertools.product(G.elements[::7], repeat=2):
        prod = G.mul((Q1, t1), (Q2, t2))
        expected = tuple(f5.add(a, b) for a, b in zip(Q1, G.shift(Q2, t1)))
        assert prod == (expected, ((t1[0] + t2[0]) % 5,))


def test_orbit_of_h3(aff7_pm1):
    H3 = SubgroupGens(aff7_pm1, [(6, 6)])
    action = affine_action(aff7_pm1)
    assert orbit(H3, 1, action) == {1, 5}
    assert orbit(SubgroupGens.trivial(aff7_pm1), 4, action) == {4}


def test_full_affine_group_is_transitive(f7):
    G = AffineGroup(f7, range(1, 7))
    assert orbit(SubgroupGens.whole(G), 0, affine_action(G)) == frozenset(range(7))


def test_stabilizer_of_zero_in_aff5(f5):
    G = AffineGroup(f5, range(1, 5))
    assert stabilizer(0, affine_action(G)).elements == {(0, a) for a in range(1, 5)}


def test_regular_action_has_trivial_stabilizers(aff7_pm1):
    action = regular_action(aff7_pm1)
    assert stabilizer(aff7_pm1.elements[3], action).order == 1


def test_subgroup_star_of_h_u(aff7_pm1):
    action = affine_action(aff7_pm1)
    pi = subgroup_star(SubgroupGens(aff7_pm1, [(6, 6)]), action)
    assert pi.class_sizes() == [1, 2, 2, 2]
    assert frozenset({3}) in pi.classes()
    assert subgroup_star(SubgroupGens.trivial(aff7_pm1), action) == Partition.discrete(action.domain)


def test_partition_star_recovers_closed_subgroup(aff7_pm1):
    action = affine_action(aff7_pm1)
    H3 = SubgroupGens(aff7_pm1, [(6, 6)])
    assert partition_star(subgroup_star(H3, action), action) == H3
    assert partition_star(Partition.discrete(action.domain), action).order == 1
    one_class = Partition.from_labels(action.domain, lambda m: 0)
    assert partition_star(one_class, action).order == aff7_pm1.order


def test_frobenius_complements_are_closed(aff13_cubic):
    view = FrobeniusView(aff13_cubic)
    view.verify()
    for H in view.complements:
        assert is_closed(H, view.action)
    assert closure(SubgroupGens.whole(aff13_cubic), view.action).order == aff13_cubic.order


def test_full_affine_group_is_sharply_two_transitive():
    G = AffineGroup(field_of_order(5), range(1, 5))
    view = FrobeniusView(G)
    view.verify()
    assert view.is_sharply_two_transitive


def test_semidirect_frobenius_example():
    G = group_from_descriptor({"kind": "frobenius", "p": 7, "r": 3})
    view = FrobeniusView(G)
    view.verify()
    assert len(view.kernel) == 7
    assert view.complement.order == 3
    assert len(set(view.complements)) == 7


def test_not_frobenius_when_complement_is_trivial():
    G = AffineGroup(field_of_order(5), (1,))
    with pytest.raises(NotFrobenius):
        FrobeniusView(G).verify()
    assert not is_frobenius(G)


def test_is_frobenius(aff7_pm1, aff13_cubic):
    assert is_frobenius(aff7_pm1)
    assert is_frobenius(aff13_cubic)
    assert is_frobenius(AffineGroup(field_of_order(5), range(1, 5)))


def test_conjugate_of_complement_is_a_complement(aff7_pm1):
    view = FrobeniusView(aff7_pm1)
    for x in aff7_pm1.elements:
        assert conjugate(view.complement, x) in view.complements


def test_all_subgroups_of_dihedral_group_of_order_10():
    G = AffineGroup(field_of_order(5), (1, 4))
    orders = sorted(H.order for H in all_subgroups(G))
    assert orders == [1, 2, 2, 2, 2, 2, 5, 10]


@pytest.mark.parametrize("q", [5, 7])
def test_galois_connection_is_order_reversing(q):
    f = field_of_order(q)
    G = AffineGroup(f, (1, f.neg(1)))
    action = affine_action(G)
    subs = all_subgroups(G)
    partitions = {subgroup_star(H, action) for H in subs}
    for H in subs:
        assert H <= closure(H, action)
        for pi in partitions:
            assert (H <= partition_star(pi, action)) == (pi <= subgroup_star(H, action))


@hp.given(data=st.data())
@hp.settings(max_examples=MAX_EXAMPLES, deadline=None)
def test_galois_connection_on_random_subgroups(data):
    G = FunctionGraphGroup(field_of_order(3), 1, 1)
    action = shifting_action(G)
    gens = data.draw(st.lists(st.sampled_from(G.elements), max_size=2))
    H = SubgroupGens(G, gens)
    H2 = closure(H, action)
    assert H <= H2
    assert closure(H2, action) == H2
    assert subgroup_star(H2, action) == subgroup_star(H, action)


def test_fg_conjugate_complement_generator(f5):
    G = FunctionGraphGroup(f5, 1, 2)
    A_Q = fg_conjugate_complement(G, FieldPoly(f5, (0, 0, 1)))
    two_x_minus_one = G.table_of(FieldPoly(f5, (4, 2)))
    assert A_Q.generators == ((two_x_minus_one, (1,)),)
    assert fg_conjugate_complement(G, None) == standard_complement(G)
    assert standard_complement(G).elements == {(G.zero, (t,)) for t in range(5)}


def test_fg_complement_group_law(f5):
    G = FunctionGraphGroup(f5, 1, 2)
    Q = G.table_of(FieldPoly(f5, (0, 3, 1)))

    def a(t):
        return (G.add_tables(Q, G.neg_table(G.shift(Q, (t,)))), (t,))

    for s, t in itertools.product(range(5), repeat=2):
        assert G.mul(a(s), a(t)) == a((s + t) % 5)


@pytest.mark.parametrize("coeffs", [(0,), (0, 1), (1, 2, 3), (0, 0, 4)])
def test_fg_complement_is_closed(f5, coeffs):
    G = FunctionGraphGroup(f5, 1, 2)
    A_Q = fg_conjugate_complement(G, FieldPoly(f5, coeffs))
    assert A_Q.order == 5
    assert is_closed(A_Q, shifting_action(G))


def test_group_from_descriptor_kinds():
    assert group_from_descriptor('{"kind":"affine","q":7,"H":[1,6]}').order == 14
    assert group_from_descriptor({"kind": "affine", "q": 13, "H_order": 3}).order == 39
    assert group_from_descriptor({"kind": "fg", "q": 3, "d": 1}).order == 27
    assert group_from_descriptor({"kind": "zpmzp", "p": 3, "m": 2, "A": [[1, 1], [0, 1]]}).order == 27
    G = group_from_descriptor({"kind": "frobenius", "p": 5, "r": 2})
    assert group_from_descriptor(G.describe()).order == 10
    with pytest.raises(InvalidGroup):
        group_from_descriptor({"kind": "lie"})


def test_invalid_groups():
    with pytest.raises(InvalidGroup):
        AffineGroup(field_of_order(7), (1, 3))
    with pytest.raises(InvalidGroup):
        ZpmZpGroup(3, 2, [[2, 0], [0, 1]])
    z2 = [[0, 1], [1, 0]]
    with pytest.raises(NotAnAutomorphism):
        SemidirectTableGroup(z2, z2, [[0, 1], [0, 0]])


def test_subgroup_from_elements_checks_closure(aff7_pm1):
    with pytest.raises(NotASubgroup):
        SubgroupGens.from_elements(aff7_pm1, [(0, 1), (1, 1)])


def test_zpmzp_q_v_and_nilpotency():
    G = ZpmZpGroup(3, 2, [[1, 1], [0, 1]])
    assert G.nilpotency_index == 2
    # Q_v(2) = v + A v
    assert G.q_v((0, 1), 2) == (1, 2)


def test_kernel_action_of_table_group():
    G = SemidirectTableGroup.frobenius(5, 4)
    action = kernel_action(G)
    action.verify()
    assert orbit(SubgroupGens.whole(G), 0, action) == frozenset(range(5))
