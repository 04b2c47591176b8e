#!/usr/bin/env python3
"""
Generalized Vandermonde systems and the multivariate HPGP reduction.

An exponent set I^(j) holds the nonzero exponents of degree at most d with
every local degree at most min(d, q-1). build_vandermonde finds a point set
V^(j) of the same size whose monomial matrix M^(j) = [m_alpha(v)] has full
rank. With it an HPGP(F_q, n, d) instance reduces to |I^(n)| univariate
instances, one per point: restricting to the line x -> v x gives
P_v(x) = sum_l Q_l(v) x^l.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import pypeln as pl

from errors import Inconsistent, PromiseViolation, Singular
from ff_algebra import (
    FieldPoly,
    FieldSpec,
    MatrixFq,
    MultiPoly,
    field_from_json,
    field_of_order,
    mat_kernel_vector,
    mat_rank,
    mat_solve,
    monomial_value,
)
from oracle_kit import ProblemInstance, QueryOracle, restrict

MAX_EXPONENT_SET = 400


# --- exponent sets --------------------------------------------------------------------

def graded_lex_key(alpha: tuple[int, ...]) -> tuple:
    """Total degree first, then lex with x_1 highest."""
    return (sum(alpha), tuple(-a for a in alpha))


@dataclass(frozen=True)
class ExponentSet:
    q: int
    j: int
    d: int
    exponents: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    @property
    def cap(self) -> int:
        return min(self.d, self.q - 1)

    def of_degree(self, ell: int) -> list[int]:
        """Column positions of the exponents with total degree ell."""
        return [i for i, a in enumerate(self.exponents) if sum(a) == ell]


def count_monomials(q: int, j: int, d: int) -> tuple[int, str]:
    """
    |I^(j)| from its closed form, and which form applied.

    With q - 1 >= d the local cap never binds and the count is
    C(d + j, j) - 1; otherwise inclusion-exclusion over the coordinates
    that reach q, with C(n, j) = 0 for negative n.
    """
    if q - 1 >= d:
        return math.comb(d + j, j) - 1, "binomial"
    total = 0
    for i in range(j + 1):
        top = d - i * q + j
        if top < 0:
            break
        total += (-1) ** i * math.comb(j, i) * math.comb(top, j)
    return total - 1, "inclusion-exclusion"


@lru_cache(maxsize=256)
def exponent_set(q: int, j: int, d: int) -> ExponentSet:
    if j < 1 or d < 0:
        raise ValueError(f"need j >= 1 and d >= 0, got j={j}, d={d}")
    cap = min(d, q - 1)
    exps = [
        a for a in itertools.product(range(cap + 1), repeat=j)
        if 0 < sum(a) <= d
    ]
    exps.sort(key=graded_lex_key)
    expected, branch = count_monomials(q, j, d)
    if len(exps) != expected:
        raise AssertionError(f"|I^({j})| = {len(exps)} but the {branch} count gives {expected}")
    return ExponentSet(q, j, d, tuple(exps))


# --- construction -----------------------------------------------------------------------

@dataclass(frozen=True)
class VandermondeSystem:
    exponents: ExponentSet
    points: tuple[tuple[int, ...], ...]
    matrix: MatrixFq = field(repr=False)

    @property
    def field(self) -> FieldSpec:
        return self.matrix.field

    @property
    def size(self) -> int:
        return len(self.points)

    def rank(self) -> int:
        return mat_rank(self.matrix)


def _monomial_matrix(f: FieldSpec, exps, points) -> MatrixFq:
    return MatrixFq(f, [[monomial_value(f, a, v) for a in exps] for v in points])


def _split_last(f: FieldSpec, exps, c) -> dict[int, dict[tuple[int, ...], int]]:
    """G = sum_i F_i(x_1..x_{j-1}) x_j^i as {i: F_i terms}."""
    parts: dict = {}
    for a, coef in zip(exps, c):
        if coef:
            parts.setdefault(a[-1], {})[a[:-1]] = coef
    return parts


def _eval_terms(f: FieldSpec, terms: dict, point) -> int:
    return f.sum(f.mul(c, monomial_value(f, a, point)) for a, c in terms.items())


@lru_cache(maxsize=128)
def build_vandermonde(q: int, j: int, d: int) -> VandermondeSystem:
    """
    Points V^(j) with a square full-rank monomial matrix over I^(j).

    V^(1) is the smallest min(d, q-1) nonzero elements, 1 first. For j >= 2
    start from (1, ..., 1) and repeat: take a nonzero G supported on I^(j)
    that vanishes on the points so far, let F be its x_j-coefficient of
    least degree, pick v' with F(v') != 0 and then w with G(v', w) != 0,
    and add (v', w).
    """
    f = field_of_order(q)
    I = exponent_set(q, j, d)
    if len(I) > MAX_EXPONENT_SET:
        raise ValueError(f"|I^({j})| = {len(I)} exceeds {MAX_EXPONENT_SET}")
    if j == 1:
        points = tuple((v,) for v in range(1, I.cap + 1))
        system = VandermondeSystem(I, points, _monomial_matrix(f, I.exponents, points))
        if system.rank() != len(I):
            raise Singular(f"base matrix over F_{q} is not full rank")
        return system

    lower = build_vandermonde(q, j - 1, d)
    first = build_vandermonde(q, 1, d)
    rest_lower = [v for v in itertools.product(range(q), repeat=j - 1) if v not in set(lower.points)]
    rest_first = [w for w in range(q) if (w,) not in set(first.points)]
    witnesses_lower = list(lower.points) + rest_lower
    witnesses_first = [w for (w,) in first.points] + rest_first

    points = [tuple([1] * j)]
    for _ in range(len(I) + 1):
        M = _monomial_matrix(f, I.exponents, points)
        if mat_rank(M) == len(I):
            break
        c = mat_kernel_vector(M)
        parts = _split_last(f, I.exponents, c)
        low = min(parts)
        F = parts[low]
        v = next(v for v in witnesses_lower if _eval_terms(f, F, v) != 0)
        terms = dict(zip(I.exponents, c))
        w = next(w for w in witnesses_first if _eval_terms(f, terms, v + (w,)) != 0)
        points.append(v + (w,))
    else:
        raise Singular(f"no full-rank system for q={q}, j={j}, d={d} within {len(I) + 1} steps")
    if len(points) != len(I):
        raise Singular(f"found {len(points)} points for {len(I)} exponents")
    return VandermondeSystem(I, tuple(points), _monomial_matrix(f, I.exponents, points))


def system_to_json(system: VandermondeSystem) -> dict:
    return {
        "q": system.exponents.q,
        "j": system.exponents.j,
        "d": system.exponents.d,
        "exponents": [list(a) for a in system.exponents],
        "points": [list(v) for v in system.points],
        "matrix": system.matrix.tolist(),
        "rank": system.rank(),
    }


# --- multivariate HPGP -> univariate HPGP --------------------------------------------------

@dataclass
class HpgpReduction:
    poly: MultiPoly
    solves: int
    queries: int
    system: VandermondeSystem = field(repr=False)

    def to_json(self) -> dict:
        out = self.poly.to_json()
        out.update({"solves": self.solves, "queries": self.queries})
        out.update(information_ratio(self.system))
        return out


def line_view(oracle: QueryOracle, field: FieldSpec, v: tuple[int, ...]):
    """HPGP(F_q, 1, d) view ((x,), y) -> ((v_1 x, ..., v_n x), y)."""
    domain = tuple(((x,), y) for x in field.elements() for y in field.elements())

    def mapping(pt):
        (x,), y = pt
        return (tuple(field.mul(c, x) for c in v), y)

    return restrict(oracle, mapping, domain, name=f"line{v}")


def univariate_coefficients(poly: FieldPoly, d: int) -> list[int]:
    """(Q_1, ..., Q_d)."""
    return [poly.coefficient(ell) for ell in range(1, d + 1)]


def reduce_hpgp_multivariate(
    inst_or_oracle,
    univariate_solver: Callable | None = None,
    field: FieldSpec | None = None,
    n: int | None = None,
    d: int | None = None,
    jobs: int = 1,
) -> HpgpReduction:
    """
    Recover Q (no constant term) from an HPGP(F_q, n, d) oracle with
    |I^(n)| univariate solves.

    Each degree slice of M^(n) is solved on its own from the per-degree
    values Q_l(v); the full system M z = y with y_v = sum_l Q_l(v) is solved
    as well and both must agree.
    """
    if isinstance(inst_or_oracle, ProblemInstance):
        oracle = inst_or_oracle.oracle
        field = field or field_from_json(inst_or_oracle.params["field"])
        n = n or inst_or_oracle.params["n"]
        d = inst_or_oracle.params["d"] if d is None else d
    else:
        oracle = inst_or_oracle
    if field.q < d + 1:
        raise ValueError(f"F_{field.q} has fewer than {d + 1} abscissas")
    if univariate_solver is None:
        from solver_suite import univariate_hpgp_solver

        univariate_solver = univariate_hpgp_solver
    if d < 1:
        return HpgpReduction(MultiPoly(field, n), 0, 0, build_vandermonde(field.q, n, max(d, 1)))
    system = build_vandermonde(field.q, n, d)
    start = oracle.query_count

    def solve(v):
        return univariate_solver(line_view(oracle, field, v), field, d)

    if jobs > 1:
        stage = pl.thread.map(lambda iv: (iv[0], solve(iv[1])), enumerate(system.points), workers=jobs)
        polys = [p for _, p in sorted(stage, key=lambda r: r[0])]
    else:
        polys = [solve(v) for v in system.points]

    I = system.exponents
    f = field
    values = [univariate_coefficients(p, d) for p in polys]
    coeffs = [0] * len(I)
    for ell in range(1, d + 1):
        cols = I.of_degree(ell)
        if not cols:
            continue
        sub = MatrixFq(f, [[row[c] for c in cols] for row in system.matrix.tolist()])
        rhs = [row[ell - 1] for row in values]
        try:
            z = mat_solve(sub, rhs)
        except (Inconsistent, Singular) as exc:
            raise PromiseViolation(f"degree-{ell} values fit no polynomial: {exc}") from exc
        for c, value in zip(cols, z):
            coeffs[c] = value
    y = [f.sum(row) for row in values]
    try:
        full = mat_solve(system.matrix, y)
    except (Inconsistent, Singular) as exc:
        raise PromiseViolation(f"summed values fit no polynomial: {exc}") from exc
    if full != coeffs:
        raise PromiseViolation("per-degree and summed systems disagree")
    poly = MultiPoly(f, n, {a: c for a, c in zip(I.exponents, coeffs) if c})
    return HpgpReduction(poly, len(polys), oracle.query_count - start, system)


def information_ratio(system: VandermondeSystem) -> dict:
    """Bits learned by the univariate solves against the |I^(n)| log2 q needed."""
    I = system.exponents
    per_symbol = math.log2(I.q)
    learned = I.d * len(I) * per_symbol
    lower = len(I) * per_symbol
    return {
        "learned_bits": learned,
        "lower_bound_bits": lower,
        "ratio": learned / lower if lower else 0.0,
        "exponents": len(I),
    }
