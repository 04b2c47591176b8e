#!/usr/bin/env python3
"""
Strong bases: sets B of points whose stabilizers pin down every subgroup of
a family, which is what lets the tuple lift turn an HSSP oracle into an HSP
oracle.

For Frobenius groups a base is strong exactly when it separates every pair
of kernel elements, and random bases of logarithmic size work with high
probability as long as the group is not sharply 2-transitive.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from errors import FieldTooSmall, InvalidGroup, NoPolynomialSizeBase, SharplyTwoTransitive
from ff_algebra import FieldSpec
from group_core import (
    ActionSpec,
    AffineGroup,
    FrobeniusView,
    FunctionGraphGroup,
    SubgroupGens,
    fg_conjugate_complement,
    shifting_action,
    stabilizer,
)


@dataclass(frozen=True)
class BaseSet:
    """Candidate strong base: ordered distinct points plus the family it targets."""

    action: ActionSpec
    points: tuple
    family: tuple = field(repr=False, default=())
    conjugation_closed: bool = True

    def __post_init__(self):
        if len(self.points) < 1:
            raise ValueError("a base needs at least one point")
        if len(set(self.points)) != len(self.points):
            raise ValueError(f"base points are not distinct: {self.points}")
        for m in self.points:
            if m not in self.action.point_index:
                raise ValueError(f"{m!r} is not in the domain of the {self.action.name} action")

    def __len__(self):
        return len(self.points)

    def to_json(self) -> dict:
        return {"points": [_point_json(m) for m in self.points], "family_size": len(self.family)}


def _point_json(m):
    if isinstance(m, tuple):
        return [_point_json(x) for x in m]
    return m


# --- separation ------------------------------------------------------------------------

def separates(z, u, v, view: FrobeniusView) -> bool:
    """True iff v o z lies outside the H-orbit of u o z."""
    if u == v:
        raise ValueError("separation is defined for u != v")
    act = view.action.apply
    uz = view.kernel_op(u, z)
    vz = view.kernel_op(v, z)
    return all(act(h, uz) != vz for h in view.complement.elements)


def count_separators(u, v, view: FrobeniusView) -> int:
    return sum(1 for z in view.kernel if separates(z, u, v, view))


def all_pairs_separated(points: Iterable, view: FrobeniusView) -> bool:
    pts = list(points)
    for u, v in itertools.combinations(view.kernel, 2):
        if not any(separates(z, u, v, view) for z in pts):
            return False
    return True


def separator_bound(view: FrobeniusView) -> int:
    """|K| - |H| + 1, the guaranteed separator count for every pair."""
    return len(view.kernel) - view.complement.order + 1


# --- verification ------------------------------------------------------------------------

def verify_base(B: BaseSet) -> bool:
    """
    Exhaustive check of the intersection condition.

    For a conjugation-closed family it suffices that the intersection of
    H * G_m over m in B is H for every H in the family; otherwise the
    condition is checked with the points moved by every g in G.
    """
    action = B.action
    G = action.group
    stabs: dict = {}

    def stab(m):
        s = stabs.get(m)
        if s is None:
            s = stabs[m] = stabilizer(m, action).elements
        return s

    def holds(H: SubgroupGens, points) -> bool:
        common = None
        for m in points:
            prod = {G.mul(h, s) for h in H.elements for s in stab(m)}
            common = prod if common is None else common & prod
            if len(common) == H.order:
                break
        return common == set(H.elements)

    for H in B.family:
        if B.conjugation_closed:
            if not holds(H, B.points):
                return False
        else:
            for g in G.elements:
                if not holds(H, [action.apply(g, m) for m in B.points]):
                    return False
    return True


# --- constructions ---------------------------------------------------------------------

def base_length(kernel_size: int, epsilon: float) -> int:
    """ceil(log2 C(|K|, 2) + log2(1/epsilon)), the union-bound sample count."""
    pairs = math.comb(kernel_size, 2)
    return max(1, math.ceil(math.log2(pairs) + math.log2(1 / epsilon))) if pairs else 1


def frobenius_base(view: FrobeniusView, points: Sequence) -> BaseSet:
    return BaseSet(view.action, tuple(points), tuple(view.complements), True)


def random_base(view: FrobeniusView, epsilon: float, seed: int | np.random.SeedSequence | None = None) -> BaseSet:
    """
    Random base targeting the Frobenius complements.

    Draws ``base_length`` independent uniform kernel elements; repeated
    draws collapse, so the base may be smaller than the sample count.
    """
    if view.is_sharply_two_transitive:
        raise SharplyTwoTransitive(
            f"|H| = {view.complement.order} = |K| - 1: no small strong base exists"
        )
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    rng = np.random.default_rng(seed)
    ell = base_length(len(view.kernel), epsilon)
    picks = rng.integers(0, len(view.kernel), size=ell)
    points = sorted({view.kernel[int(i)] for i in picks})
    return frobenius_base(view, points)


def random_base_trials(view: FrobeniusView, epsilon: float, trials: int, seed: int) -> list[bool]:
    """Outcome of verify_base for ``trials`` independently seeded random bases."""
    streams = np.random.SeedSequence(seed).spawn(trials)
    return [verify_base(random_base(view, epsilon, s)) for s in streams]


def deterministic_base_pm1(G: AffineGroup) -> BaseSet:
    """
    A verified two-point base for Aff_q({1, -1}), q odd.

    Pairs are tried in canonical order; the first one that passes
    verify_base is returned.
    """
    f = G.field
    if f.p == 2 or set(G.H) != {1, f.neg(1)}:
        raise InvalidGroup(f"expected Aff_q({{1,-1}}) with q odd, got {G.describe()}")
    view = FrobeniusView(G)
    for pair in itertools.combinations(view.kernel, 2):
        B = frobenius_base(view, pair)
        if verify_base(B):
            return B
    raise AssertionError(f"no two-point strong base for {G.describe()}")


def fg_point_base(field: FieldSpec, d: int, n: int = 1) -> BaseSet:
    """
    Points (x_i, 0) for the d+1 smallest abscissas; only the zero
    polynomial of degree <= d vanishes on all of them.
    """
    if n >= 2:
        raise NoPolynomialSizeBase(f"Fg over F_{field.q}^{n} has no polynomial-size base for n >= 2")
    if field.q < d + 1:
        raise FieldTooSmall(f"need {d + 1} distinct abscissas, F_{field.q} has {field.q}")
    G = FunctionGraphGroup(field, 1, d)
    action = shifting_action(G)
    points = tuple(((x,), 0) for x in range(d + 1))
    return BaseSet(action, points, tuple(fg_complements(G)), True)


def fg_complements(G: FunctionGraphGroup) -> list[SubgroupGens]:
    """The standard complements A_Q for every Q in K."""
    return [fg_conjugate_complement(G, Q) for Q in G.kernel_tables]


def whole_domain_base(action: ActionSpec, family: Sequence[SubgroupGens]) -> BaseSet:
    return BaseSet(action, tuple(action.domain), tuple(family), True)
