#!/usr/bin/env python3
"""
Desk-scale solvers that close the reductions.

Brute-force identification of hidden subgroups, a simulated abelian coset
sampler with its honest reconstructor, the univariate quotient procedure R,
the univariate HPGP solver and a classical Grover query counter.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

import numpy as np

from errors import (
    Ambiguous,
    DeskScaleExceeded,
    EvenCharacteristic,
    NoConsistentSubgroup,
    NotASubgroup,
    PromiseViolation,
)
from ff_algebra import (
    FieldPoly,
    FieldSpec,
    MatrixFq,
    field_make,
    field_of_order,
    lagrange_interpolate,
    mat_kernel_basis,
    row_reduce,
)
from group_core import ActionSpec, GroupSpec, Partition, SubgroupGens, partition_star, subgroup_star
from oracle_kit import LevelSetOracle, QueryOracle, cube_points
from reduction_engine import LiftedOracle, QuotientReport, recover_poly_from_complement
from strong_base import fg_point_base

MAX_BRUTE_FORCE_ORDER = 2000
SAMPLES_PER_BIT = 4


def _labels(oracle: QueryOracle, points: Sequence) -> dict:
    return {m: oracle.query(m) for m in points}


# --- brute force --------------------------------------------------------------------------

def brute_force_hsp(oracle: QueryOracle, G: GroupSpec, family: Sequence[SubgroupGens] | None = None) -> SubgroupGens:
    """
    The hidden subgroup, read as the level set of the identity.

    Every level set must then be a right coset Hg, and H must belong to
    ``family`` when one is given.
    """
    if G.order > MAX_BRUTE_FORCE_ORDER and family is None:
        raise DeskScaleExceeded(f"|G| = {G.order} exceeds the brute-force bound {MAX_BRUTE_FORCE_ORDER}")
    labels = _labels(oracle, G.elements)
    e = G.identity()
    try:
        H = SubgroupGens.from_elements(G, [g for g in G.elements if labels[g] == labels[e]])
    except NotASubgroup as exc:
        raise NoConsistentSubgroup(f"level set of the identity is not a subgroup: {exc}") from exc
    classes: dict = {}
    for g in G.elements:
        classes.setdefault(labels[g], set()).add(g)
    for cls in classes.values():
        g = next(iter(cls))
        if cls != {G.mul(h, g) for h in H.elements}:
            raise NoConsistentSubgroup(f"level set of {g} is not the coset Hg")
    if family is not None and H not in family:
        raise NoConsistentSubgroup(f"subgroup of order {H.order} is not in the family")
    return H


def brute_force_hssp(oracle: QueryOracle, action: ActionSpec, family: Sequence[SubgroupGens] | None = None) -> SubgroupGens:
    """pi_f* for the oracle partition pi_f, checked to be closed and in ``family``."""
    pi = Partition.from_labels(action.domain, oracle.query)
    if family is not None:
        matches = [K for K in family if subgroup_star(K, action) == pi]
        if not matches:
            raise NoConsistentSubgroup("no family member has the oracle's orbit partition")
        if len(set(matches)) > 1:
            raise Ambiguous(f"{len(set(matches))} family members share the oracle's orbit partition")
        return matches[0]
    H = partition_star(pi, action)
    if subgroup_star(H, action) != pi:
        raise NoConsistentSubgroup("oracle partition is not the orbit partition of any subgroup")
    return H


def brute_force_hqpp(oracle: QueryOracle, field: FieldSpec | None = None) -> int:
    """u is the only singleton level set of x^2 - 2ux."""
    field = field or field_of_order(len(oracle.domain))
    if field.p == 2:
        raise EvenCharacteristic(f"HQPP is undefined over F_{field.q}")
    classes: dict = {}
    for x in field.elements():
        classes.setdefault(oracle.query(x), []).append(x)
    singles = [c[0] for c in classes.values() if len(c) == 1]
    if len(singles) != 1:
        raise PromiseViolation(f"expected one singleton level set, found {len(singles)}")
    u = singles[0]
    two_u = field.add(u, u)
    for c in classes.values():
        if len(c) == 2 and field.add(c[0], c[1]) != two_u:
            raise PromiseViolation(f"pair {c} is not symmetric about {u}")
        if len(c) > 2:
            raise PromiseViolation(f"level set of size {len(c)}")
    return u


# --- abelian coset sampling ---------------------------------------------------------------------

def abelian_hsp_oracle(p: int, m: int, generators: Sequence[Sequence[int]]) -> LevelSetOracle:
    """Coset oracle on Z_p^m hiding the span of ``generators``; outputs the least coset member."""
    pts, _ = cube_points(p, m)
    gens = [tuple(int(x) % p for x in g) for g in generators]
    span = sorted({tuple(sum(c * g[i] for c, g in zip(cs, gens)) % p for i in range(m))
                   for cs in itertools.product(range(p), repeat=len(gens))}) if gens else [tuple([0] * m)]

    def canon(v):
        return min(tuple((a + b) % p for a, b in zip(v, h)) for h in span)

    return LevelSetOracle(pts, canon, hidden_tag=tuple(gens), name="abelian-hsp")


def simulated_coset_sampler(oracle: LevelSetOracle, p: int, m: int, seed: int | None = None) -> Iterator[tuple[int, ...]]:
    """
    Uniform samples from H-perp, the characters of Z_p^m trivial on H.

    Harness-side: this reads the hidden generators to produce the
    distribution Fourier sampling would. Never pass it to a solver.
    """
    f = field_make(p)
    gens = list(oracle._hidden_tag)
    perp = mat_kernel_basis(MatrixFq(f, gens)) if gens else [list(r) for r in np.eye(m, dtype=int)]
    rng = np.random.default_rng(seed)
    while True:
        if not perp:
            yield tuple([0] * m)
            continue
        coeffs = rng.integers(0, p, size=len(perp))
        yield tuple(int(sum(int(c) * row[i] for c, row in zip(coeffs, perp)) % p) for i in range(m))


def span_basis(vectors: Sequence[Sequence[int]], p: int, m: int) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon basis of the span; equal spans give equal bases."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return ()
    R, pivots = row_reduce(field_make(p), np.array(rows, dtype=np.int64).reshape(len(rows), m))
    return tuple(tuple(int(x) for x in R[i]) for i in range(len(pivots)))


def reconstruct_from_samples(samples: Sequence[Sequence[int]], p: int, m: int) -> tuple[tuple[int, ...], ...]:
    """Basis of H as the common kernel of the sampled characters; sees nothing but the samples."""
    rows = [list(s) for s in samples if any(s)]
    if not rows:
        return span_basis([[int(i == j) for i in range(m)] for j in range(m)], p, m)
    return span_basis(mat_kernel_basis(MatrixFq(field_make(p), rows)), p, m)


def samples_needed(p: int, m: int) -> int:
    return SAMPLES_PER_BIT * max(1, int(np.ceil(m * np.log2(p))))


# --- procedure R ------------------------------------------------------------------------------

def procedure_R(oracle: QueryOracle, field: FieldSpec | None = None) -> QuotientReport:
    """
    Decide a = 0 for the level sets of ax^2 + bx on F_q, and return b/a otherwise.

    For odd q a nonzero a gives one singleton class and (q-1)/2 pairs with
    x + y = -b/a; a = 0 gives a bijection (b != 0) or a single class.
    """
    field = field or field_of_order(len(oracle.domain))
    if field.p == 2:
        raise EvenCharacteristic(f"R needs odd q, got {field.q}")
    classes: dict = {}
    for x in field.elements():
        classes.setdefault(oracle.query(x), []).append(x)
    sizes = sorted(len(c) for c in classes.values())
    if len(classes) == 1:
        return QuotientReport(azero=True, constant=True)
    if len(classes) == field.q:
        return QuotientReport(azero=True)
    if sizes != [1] + [2] * ((field.q - 1) // 2):
        raise PromiseViolation(f"level set sizes {sizes} fit no univariate quadratic")
    sums = {field.add(*c) for c in classes.values() if len(c) == 2}
    if len(sums) != 1:
        raise PromiseViolation("collision pairs do not share a common sum")
    return QuotientReport(azero=False, ratio=field.neg(sums.pop()))


def find_linear_kernel(oracle: QueryOracle, field: FieldSpec, dim: int) -> list[int]:
    """
    Normal vector of a hidden linear form, from the level set of the origin.

    Queries all of F_q^dim; stands in for the abelian HSP over (F_q^dim, +).
    """
    pts, _ = cube_points(field.q, dim)
    labels = _labels(oracle, pts)
    origin = labels[tuple([0] * dim)]
    zeros = [list(x) for x in pts if labels[x] == origin]
    normals = mat_kernel_basis(MatrixFq(field, zeros))
    if len(normals) != 1:
        raise PromiseViolation(f"level set of the origin has codimension {len(normals)}, expected 1")
    vec = normals[0]
    lead = next(c for c in vec if c)
    return [field.div(c, lead) for c in vec]


# --- univariate HPGP ----------------------------------------------------------------------------

def _hpgp_path_b(oracle: QueryOracle, field: FieldSpec, d: int) -> FieldPoly:
    """Match (x, 0) against (0, y): the hit gives Q(x) - Q(0) = -y."""
    points = [(0, 0)]
    for x in range(1, d + 1):
        target = oracle.query(((x,), 0))
        y = next((y for y in field.elements() if oracle.query(((0,), y)) == target), None)
        if y is None:
            raise PromiseViolation(f"no level set through ((0,), y) matches abscissa {x}")
        points.append((x, field.neg(y)))
    return lagrange_interpolate(field, points, d)


def _hpgp_path_a(oracle: QueryOracle, field: FieldSpec, d: int) -> FieldPoly:
    """Lift over the point base, identify A_Q by brute force, then interpolate."""
    base = fg_point_base(field, d)
    lifted = LiftedOracle(oracle, base)
    H = brute_force_hsp(lifted, base.action.group, family=base.family)
    return recover_poly_from_complement(H, d)


def univariate_hpgp_solver(oracle: QueryOracle, field: FieldSpec, d: int, path: str = "B") -> FieldPoly:
    """
    Q - Q(0) for an HPGP(F_q, 1, d) oracle.

    Parameters
    ----------
    path : {"A", "B", "both"}
        A runs the reduction to HSP over Fg; B reads level sets directly;
        both runs the two and requires them to agree.
    """
    if field.q < d + 1:
        raise ValueError(f"F_{field.q} has fewer than {d + 1} abscissas")
    if path == "B":
        return _hpgp_path_b(oracle, field, d)
    if path == "A":
        return _hpgp_path_a(oracle, field, d)
    if path == "both":
        a = _hpgp_path_a(oracle, field, d)
        b = _hpgp_path_b(oracle, field, d)
        if a != b:
            raise PromiseViolation(f"paths disagree: A gave {a}, B gave {b}")
        return b
    raise ValueError(f"unknown path {path!r}")


# --- Grover -------------------------------------------------------------------------------------

GROVER_STRATEGIES = ("scan", "reverse", "random")


def grover_query_counter(oracle: QueryOracle, strategy: str = "scan", seed: int | None = None) -> tuple[int, int]:
    """
    Classical search for the marked point; returns (c, position of the hit).

    Only label equality is used. A label that differs from the first one
    marks the hit once the first class holds two points; when the hit falls
    on one of the first two points a third query decides which one is
    alone, and that confirming query is not part of the reported count.
    """
    domain = list(oracle.domain)
    if strategy == "reverse":
        domain.reverse()
    elif strategy == "random":
        np.random.default_rng(seed).shuffle(domain)
    elif strategy != "scan":
        raise ValueError(f"unknown strategy {strategy!r}, expected one of {GROVER_STRATEGIES}")
    if len(domain) < 3:
        raise Ambiguous(f"a domain of {len(domain)} points cannot single out the marked one")
    first = oracle.query(domain[0])
    for i, x in enumerate(domain[1:], start=2):
        label = oracle.query(x)
        if label == first:
            continue
        if i > 2:
            return x, i
        third = oracle.query(domain[2])
        if third == first:
            return x, 2
        if third == label:
            return domain[0], 1
        raise PromiseViolation("more than two level sets")
    raise PromiseViolation("no marked point")
