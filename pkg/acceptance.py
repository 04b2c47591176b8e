#!/usr/bin/env python3
"""
Acceptance battery: ten exhaustive or seeded checks at desk scale.

Each check returns a record with its name, pass flag, counts and wall
time. ``quick=True`` shrinks every grid so the whole battery runs in
seconds; the full grids are what `suite acceptance` runs by default.
"""

from __future__ import annotations

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pypeln as pl

from errors import AcceptanceFailure, DeskScaleExceeded
from ff_algebra import MultiPoly, field_of_order, row_reduce
from group_core import (
    AffineGroup,
    FrobeniusView,
    FunctionGraphGroup,
    Partition,
    SubgroupGens,
    affine_action,
    all_subgroups,
    closure,
    multiplicative_subgroup,
    natural_action,
    partition_star,
    subgroup_star,
)
from oracle_kit import (
    make_grover_oracle,
    make_hpgp_oracle,
    make_hpp_oracle,
    make_hqpp_oracle,
    make_hsp_oracle,
    make_hssp_oracle,
    random_graph_poly,
    random_quadratic,
)
from reduction_engine import (
    R_CALL_CONSTANT,
    affine_hsp_to_hqpp,
    grover_hssp_recover,
    h_u,
    hpgp1_to_hsp,
    hqpp_to_hssp,
    lift_hssp_to_hsp,
    pm1_group,
    quadratic_coefficients,
    solve_multivariate_quadratic,
    vertex_of,
)
from solver_suite import (
    brute_force_hqpp,
    brute_force_hsp,
    brute_force_hssp,
    grover_query_counter,
    univariate_hpgp_solver,
)
from strong_base import (
    BaseSet,
    count_separators,
    deterministic_base_pm1,
    frobenius_base,
    random_base,
    random_base_trials,
    separator_bound,
    verify_base,
)
from vandermonde import build_vandermonde, count_monomials, exponent_set, information_ratio, reduce_hpgp_multivariate

ALL_BRANCHES = (
    "n2.q2", "n2.A.a12", "n2.A.diag", "n2.A.shift", "n2.B.diag", "n2.B.alpha",
    "n2.B'.diag", "n2.B'.alpha", "n2.C.alpha", "n2.C.linear", "n2.zero",
    "nN.planes", "nN.diagonal_pair", "nN.offset_one", "nN.paired", "nN.q2",
)

GALOIS_ORDER_LIMIT = 200
PARTITION_SWEEP_LIMIT = 9

# (q, n, {exponent: coefficient}) chosen to reach the rarer branches.
DIRECTED_QUADRATICS = (
    (5, 2, {(2, 0): 1, (1, 1): 1, (0, 2): 1}),
    (5, 2, {(2, 0): 1, (0, 2): 2, (1, 0): 1}),
    (5, 2, {(2, 0): 1, (0, 2): 2}),
    (5, 2, {(2, 0): 1, (0, 2): 4}),
    (5, 2, {(2, 0): 1, (0, 1): 1}),
    (5, 2, {(2, 0): 1, (1, 1): 1}),
    (5, 2, {(0, 2): 1, (1, 0): 1}),
    (5, 2, {(0, 2): 1, (1, 1): 1}),
    (5, 2, {(1, 1): 1}),
    (5, 2, {(1, 0): 1, (0, 1): 2}),
    (5, 3, {(2, 0, 0): 1}),
    (5, 3, {(2, 0, 0): 1, (0, 1, 1): 1}),
    (5, 3, {(0, 1, 1): 1}),
    (5, 4, {(1, 1, 0, 0): 1, (0, 0, 1, 1): 1}),
    (2, 2, {(1, 1): 1, (1, 0): 1, (0, 1): 1}),
    (2, 3, {(1, 1, 0): 1, (0, 0, 1): 1}),
)


def frobenius_grid(qs) -> list[AffineGroup]:
    """Aff_q(H) for every proper nontrivial H < F_q*, 1 < |H| < q - 1."""
    groups = []
    for q in qs:
        f = field_of_order(q)
        for r in range(2, q - 1):
            if (q - 1) % r == 0:
                groups.append(AffineGroup(f, multiplicative_subgroup(f, r)))
    return groups


def strong_base_for(view: FrobeniusView, seed: int) -> BaseSet:
    """A seeded random base when it verifies, otherwise the whole kernel."""
    B = random_base(view, 1 / 16, seed)
    if verify_base(B):
        return B
    return frobenius_base(view, view.kernel)


def _record(name: str, passed: bool, start: float, **details) -> dict:
    return {"criterion": name, "passed": bool(passed), "seconds": round(time.perf_counter() - start, 3), **details}


# --- the ten criteria ---------------------------------------------------------------------

def check_lift_soundness(quick: bool = False, seed: int = 0) -> dict:
    start = time.perf_counter()
    qs = (5, 7) if quick else (5, 7, 9, 11, 13)
    instances = 0
    for G in frobenius_grid(qs):
        view = FrobeniusView(G)
        B = strong_base_for(view, seed)
        for H in view.complements:
            inst = make_hssp_oracle(view.action, H)
            lifted = lift_hssp_to_hsp(inst, B)
            labels = {g: lifted.oracle.peek(g) for g in G.elements}
            for g in G.elements:
                coset = {G.mul(h, g) for h in H.elements}
                for x in G.elements:
                    if (labels[x] == labels[g]) != (x in coset):
                        return _record("lift_soundness", False, start, group=G.describe(), failing=[list(g), list(x)])
            instances += 1
    return _record("lift_soundness", True, start, instances=instances)


def check_separator_bound(quick: bool = False, seed: int = 0) -> dict:
    start = time.perf_counter()
    qs = (5, 7) if quick else (5, 7, 9, 11, 13)
    pairs = 0
    for G in frobenius_grid(qs):
        view = FrobeniusView(G)
        bound = separator_bound(view)
        K = len(view.kernel)
        for u, v in itertools.permutations(view.kernel, 2):
            count = count_separators(u, v, view)
            if count < bound or 2 * count <= K:
                return _record("separator_bound", False, start, group=G.describe(), pair=[u, v], count=count)
            pairs += 1
    return _record("separator_bound", True, start, pairs=pairs)


def check_random_base(quick: bool = False, seed: int = 0) -> dict:
    start = time.perf_counter()
    trials = 40 if quick else 200
    f9, f13 = field_of_order(9), field_of_order(13)
    groups = [pm1_group(f9), AffineGroup(f13, multiplicative_subgroup(f13, 3))]
    rows = []
    ok = True
    for G in groups:
        view = FrobeniusView(G)
        for eps in (1 / 4, 1 / 16):
            outcomes = random_base_trials(view, eps, trials, seed)
            failure = 1 - sum(outcomes) / trials
            limit = eps + 3 * math.sqrt(eps * (1 - eps) / trials)
            ok &= failure <= limit
            rows.append({"group": G.describe(), "epsilon": eps, "failure": failure, "limit": round(limit, 6)})
    return _record("random_base", ok, start, trials=trials, rows=rows)


def check_hqpp_chain(quick: bool = False, seed: int = 0) -> dict:
    start = time.perf_counter()
    qs = (5, 7) if quick else (5, 7, 9, 27)
    solved = 0
    for q in qs:
        f = field_of_order(q)
        G = pm1_group(f)
        base = deterministic_base_pm1(G)
        family = FrobeniusView(G).complements
        for u in f.elements():
            hssp = hqpp_to_hssp(make_hqpp_oracle(f, u))
            hsp = lift_hssp_to_hsp(hssp, base)
            u1 = vertex_of(brute_force_hsp(hsp.oracle, G, family))
            folded = affine_hsp_to_hqpp(make_hsp_oracle(G, h_u(G, u)))
            u2 = brute_force_hqpp(folded.oracle, f)
            if u1 != u or u2 != u:
                return _record("hqpp_chain", False, start, q=q, u=u, routes=[u1, u2])
            solved += 1
    return _record("hqpp_chain", True, start, solved=solved)


def check_multivariate_quadratic(quick: bool = False, seed: int = 0) -> dict:
    start = time.perf_counter()
    per_point = 10 if quick else 500
    ns = (2, 3) if quick else (2, 3, 4, 5)
    qs = (2, 3, 5) if quick else (2, 3, 5, 7, 9)
    rng = np.random.default_rng(seed)
    branches: set = set()
    worst = 0.0

    def run(f, n, P):
        nonlocal worst
        inst = make_hpp_oracle(f, n, P)
        vec, trace = solve_multivariate_quadratic(inst.oracle, f, n)
        branches.update(trace.branches)
        worst = max(worst, trace.r_calls / (n * n))
        return vec == quadratic_coefficients(P, n) and trace.r_calls <= R_CALL_CONSTANT * n * n

    for n, q in itertools.product(ns, qs):
        f = field_of_order(q)
        for _ in range(per_point):
            P = random_quadratic(f, n, rng)
            if not run(f, n, P):
                return _record("multivariate_quadratic", False, start, n=n, q=q, hidden=P.to_json())
    for q, n, terms in DIRECTED_QUADRATICS:
        f = field_of_order(q)
        P = MultiPoly(f, n, terms)
        if not run(f, n, P):
            return _record("multivariate_quadratic", False, start, n=n, q=q, hidden=P.to_json())
    missing = sorted(set(ALL_BRANCHES) - branches)
    return _record(
        "multivariate_quadratic", not missing, start,
        branches=sorted(branches), missing=missing, max_r_calls_per_n2=worst, constant=R_CALL_CONSTANT,
    )


def check_vandermonde(quick: bool = False, seed: int = 0) -> dict:
    start = time.perf_counter()
    qs = (2, 3, 5, 7) if quick else (2, 3, 4, 5, 7, 9, 11, 13)
    dmax = 3 if quick else 4
    checked = 0
    for q, j, d in itertools.product(qs, (1, 2, 3), range(1, dmax + 1)):
        expected, branch = count_monomials(q, j, d)
        if expected > 400:
            continue
        I = exponent_set(q, j, d)
        system = build_vandermonde(q, j, d)
        f = system.field
        square = system.matrix.shape == (len(I), len(I))
        # rank of the transpose, reduced separately
        _, pivots = row_reduce(f, system.matrix.data.T.copy())
        if len(I) != expected or not square or len(pivots) != len(I):
            return _record("vandermonde", False, start, q=q, j=j, d=d, branch=branch)
        checked += 1
    return _record("vandermonde", True, start, systems=checked)


def check_hpgp_end_to_end(quick: bool = False, seed: int = 0, jobs: int = 1) -> dict:
    start = time.perf_counter()
    per_point = 10 if quick else 200
    grid = ((2, 2, 5), (2, 3, 7)) if quick else ((2, 2, 5), (2, 3, 7), (3, 2, 5), (3, 3, 7))
    rng = np.random.default_rng(seed)
    runs = 0
    for n, d, q in grid:
        f = field_of_order(q)
        size = len(exponent_set(q, n, d))
        for _ in range(per_point):
            Q = random_graph_poly(f, n, d, rng)
            inst = make_hpgp_oracle(f, n, Q, d)
            result = reduce_hpgp_multivariate(inst, jobs=jobs)
            bits = information_ratio(result.system)["learned_bits"]
            if result.poly != Q or result.solves != size or not math.isclose(bits, d * size * math.log2(q)):
                return _record("hpgp_end_to_end", False, start, n=n, d=d, q=q, hidden=Q.to_json())
            runs += 1
    return _record("hpgp_end_to_end", True, start, runs=runs)


def check_hpgp_to_hsp(quick: bool = False, seed: int = 0) -> dict:
    start = time.perf_counter()
    runs = 0
    for q, d in ((3, 1), (5, 1)):
        f = field_of_order(q)
        for c0, c1 in itertools.product(f.elements(), repeat=2):
            Q = MultiPoly(f, 1, {(0,): c0, (1,): c1})
            inst = make_hpgp_oracle(f, 1, Q, d)
            hsp = hpgp1_to_hsp(inst, d)
            truth = MultiPoly(f, 1, {(1,): c1}).to_univariate()
            found = univariate_hpgp_solver(inst.oracle, f, d, path="A")
            if found != truth or hsp.answer.order != q:
                return _record("hpgp_to_hsp", False, start, q=q, hidden=[c0, c1])
            runs += 1
    return _record("hpgp_to_hsp", True, start, runs=runs)


def check_grover(quick: bool = False, seed: int = 0) -> dict:
    start = time.perf_counter()
    rows = []
    for q in (5, 7, 9):
        f = field_of_order(q)
        G = AffineGroup(f, multiplicative_subgroup(f, q - 1))
        action = affine_action(G)
        total = 0
        for c in f.elements():
            inst = make_grover_oracle(f, c)
            H = brute_force_hssp(inst.oracle, action)
            for g in H.elements:
                if g != G.identity() and grover_hssp_recover(SubgroupGens(G, [g])) != c:
                    return _record("grover", False, start, q=q, c=c, generator=list(g))
            found, used = grover_query_counter(make_grover_oracle(f, c).oracle, "scan")
            if found != c:
                return _record("grover", False, start, q=q, c=c)
            total += used
        mean = Fraction(total, q)
        rows.append({"q": q, "mean_queries": float(mean)})
        if mean != Fraction(q + 1, 2):
            return _record("grover", False, start, rows=rows)
    return _record("grover", True, start, rows=rows)


def galois_suite(G) -> dict:
    """
    Galois-connection laws over every subgroup of G under its natural action.

    H <= H**, closure is idempotent, pi <= pi** on the orbit partitions,
    and H1 <= H2 implies H2* <= H1*. The adjunction H <= pi* <=> pi <= H*
    is swept over every partition of the domain when it has at most
    PARTITION_SWEEP_LIMIT points, and otherwise over the orbit partitions,
    their pairwise common refinements and the discrete partition.
    Returns a record with the first violation, if any.
    """
    if G.order > GALOIS_ORDER_LIMIT:
        raise DeskScaleExceeded(f"|G| = {G.order} exceeds the Galois-suite bound {GALOIS_ORDER_LIMIT}")
    action = natural_action(G).tabulated()
    subs = all_subgroups(G)
    stars = {H: subgroup_star(H, action) for H in subs}
    closures = {H: closure(H, action) for H in subs}
    out = {"group": G.describe(), "subgroups": len(subs), "closed": sum(closures[H] == H for H in subs)}
    for H in subs:
        if not H <= closures[H]:
            return {**out, "passed": False, "law": "extensive", "order": H.order}
        if closure(closures[H], action) != closures[H]:
            return {**out, "passed": False, "law": "idempotent", "order": H.order}
        pi = stars[H]
        if not pi <= subgroup_star(partition_star(pi, action), action):
            return {**out, "passed": False, "law": "partition_extensive", "order": H.order}
    for H1, H2 in itertools.permutations(subs, 2):
        if H1 <= H2 and not stars[H2] <= stars[H1]:
            return {**out, "passed": False, "law": "order_reversing", "orders": [H1.order, H2.order]}
    swept = 0
    for pi in _sweep_partitions(action.domain, set(stars.values())):
        pi_star = partition_star(pi, action)
        for H in subs:
            if (H <= pi_star) != (pi <= stars[H]):
                return {**out, "passed": False, "law": "adjunction", "order": H.order, "classes": len(pi)}
        swept += 1
    return {**out, "partitions": swept, "passed": True}


def set_partitions(domain: tuple):
    """Every partition of ``domain``, by restricted growth strings."""
    n = len(domain)
    codes = [0] * n

    def grow(i: int, top: int):
        if i == n:
            yield Partition.from_labels(domain, dict(zip(domain, codes)).__getitem__)
            return
        for c in range(top + 2):
            codes[i] = c
            yield from grow(i + 1, max(top, c))

    if n:
        yield from grow(1, 0)


def _sweep_partitions(domain: tuple, orbit_partitions: set):
    if len(domain) <= PARTITION_SWEEP_LIMIT:
        yield from set_partitions(domain)
        return
    seen = set(orbit_partitions) | {Partition.discrete(domain)}
    for a, b in itertools.combinations(list(orbit_partitions), 2):
        seen.add(Partition.from_labels(domain, lambda m: (a.classof[m], b.classof[m])))
    yield from seen


def check_galois(quick: bool = False, seed: int = 0) -> dict:
    start = time.perf_counter()
    groups = [pm1_group(field_of_order(5)), pm1_group(field_of_order(7)), FunctionGraphGroup(field_of_order(3), 1, 1)]
    checked = 0
    for G in groups:
        report = galois_suite(G)
        if not report["passed"]:
            return _record("galois", False, start, **report)
        checked += report["subgroups"]
    return _record("galois", True, start, subgroups=checked)


CRITERIA = (
    check_lift_soundness,
    check_separator_bound,
    check_random_base,
    check_hqpp_chain,
    check_multivariate_quadratic,
    check_vandermonde,
    check_hpgp_end_to_end,
    check_hpgp_to_hsp,
    check_grover,
    check_galois,
)


def run_acceptance(quick: bool = False, seed: int = 0, jobs: int = 1) -> list[dict]:
    """All criteria, in order; independent criteria run on ``jobs`` threads."""

    def run(i):
        return i, CRITERIA[i](quick=quick, seed=seed)

    if jobs > 1:
        stage = pl.thread.map(run, range(len(CRITERIA)), workers=jobs)
        results = [r for _, r in sorted(stage, key=lambda r: r[0])]
    else:
        results = [run(i)[1] for i in range(len(CRITERIA))]
    return results


def assert_passed(results: list[dict]) -> None:
    failed = [r["criterion"] for r in results if not r["passed"]]
    if failed:
        raise AcceptanceFailure(f"failed criteria: {', '.join(failed)}")
