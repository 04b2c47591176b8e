#!/usr/bin/env python3
"""
Reductions between hidden structure problems.

- HSSP -> HSP by lifting an oracle over a strong base.
- HQPP <-> HSSP over Aff_q({1,-1}) <-> HSP over Aff_q({1,-1}).
- HPP(F_q, n, 2) -> O(n^2) calls of the univariate quotient procedure R.
- HPGP(F_q, 1, d) -> HSP over Fg(F_q^(d)[x]), with interpolation recovery.
- HSP over Z_p^m x| Z_p -> the m-dimensional HPGP.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from errors import (
    BadBase,
    EvenCharacteristic,
    InvalidGroup,
    NotGenerating,
    PromiseViolation,
)
from ff_algebra import (
    FieldPoly,
    FieldSpec,
    MatrixFq,
    MultiPoly,
    field_from_json,
    field_make,
    lagrange_interpolate,
    mat_kernel_basis,
    mat_rank,
    mat_solve,
)
from group_core import (
    AffineGroup,
    FunctionGraphGroup,
    SubgroupGens,
    ZpmZpGroup,
    affine_action,
    fg_conjugate_complement,
    group_from_descriptor,
    orbit,
    shifting_action,
)
from oracle_kit import (
    LevelSetOracle,
    ProblemInstance,
    QueryOracle,
    check_promise,
    cube_points,
    restrict,
)
from strong_base import BaseSet, fg_point_base, verify_base


# --- HSSP -> HSP -----------------------------------------------------------------------

class LiftedOracle(LevelSetOracle):
    """f_HSP(g) = (f(g o m_1), ..., f(g o m_t)); t inner queries per query."""

    def __init__(self, inner: LevelSetOracle, base: BaseSet):
        super().__init__(base.action.group.elements, name=f"lifted({inner.name})")
        self.inner = inner
        self.base = base
        self._apply = base.action.apply

    def _evaluate(self, g, counting):
        ask = self.inner.query if counting else self.inner.peek
        return tuple(ask(self._apply(g, m)) for m in self.base.points)


def lift_hssp_to_hsp(inst: ProblemInstance, base: BaseSet, verify: bool = False) -> ProblemInstance:
    """
    Lift an HSSP instance to an HSP instance over the acting group.

    The coset promise of the lifted oracle is checked against the hidden
    subgroup; a weak base shows up as BadBase.
    """
    if verify and not verify_base(base):
        raise BadBase(f"{base.points} is not a strong base for the family")
    G = base.action.group
    H: SubgroupGens = inst.answer
    helems = tuple(H.elements)

    def reference(g):
        return frozenset(G.mul(h, g) for h in helems)

    lifted = LiftedOracle(inst.oracle, base)
    out = ProblemInstance("HSP", {"group": G.describe(), "base": base.to_json()["points"]}, lifted, H, reference)
    try:
        check_promise(lifted, reference)
    except PromiseViolation as exc:
        raise BadBase(f"lifted oracle breaks the coset promise: {exc}") from exc
    return out


# --- HQPP equivalences -----------------------------------------------------------------

def pm1_group(field: FieldSpec) -> AffineGroup:
    if field.p == 2:
        raise EvenCharacteristic(f"Aff_q({{1,-1}}) needs odd q, got {field.q}")
    return AffineGroup(field, (1, field.neg(1)))


def h_u(G: AffineGroup, u: int) -> SubgroupGens:
    """H_u = {(0, 1), (2u, -1)}, the stabilizer of u."""
    f = G.field
    return SubgroupGens(G, [(f.add(u, u), f.neg(1))])


def vertex_of(H: SubgroupGens) -> int:
    """u from H_u: the flip (2u, -1) is the only non-identity element."""
    f = H.group.field
    flips = [g for g in H.elements if g[1] == f.neg(1)]
    if H.order != 2 or len(flips) != 1:
        raise PromiseViolation(f"subgroup of order {H.order} is not some H_u")
    return f.div(flips[0][0], f.from_int(2))


def hqpp_to_hssp(inst: ProblemInstance) -> ProblemInstance:
    """The same oracle read as an HSSP over Aff_q({1,-1}) hiding H_u."""
    field = field_from_json(inst.params["field"])
    G = pm1_group(field)
    action = affine_action(G)
    H = h_u(G, inst.answer)

    def reference(x):
        return orbit(H, x, action)

    out = ProblemInstance("HSSP", {"group": G.describe(), "action": action.name}, inst.oracle, H, reference, inst.seed)
    check_promise(out.oracle, reference)
    return out


def hssp_to_hqpp(inst: ProblemInstance) -> ProblemInstance:
    """Inverse of hqpp_to_hssp: H_u determines u = (2u) / 2."""
    G = group_from_descriptor(inst.params["group"])
    f = G.field
    u = vertex_of(inst.answer)
    two_u = f.add(u, u)

    def reference(x):
        return f.sub(f.mul(x, x), f.mul(two_u, x))

    out = ProblemInstance("HQPP", {"field": f.describe()}, inst.oracle, u, reference, inst.seed)
    check_promise(out.oracle, reference)
    return out


class FoldedOracle(LevelSetOracle):
    """f'(b) = min(f(b, 1), f(b, -1)); two inner queries per query."""

    def __init__(self, inner: QueryOracle, field: FieldSpec):
        super().__init__(field.elements(), name="folded")
        self.inner = inner
        self.minus_one = field.neg(1)

    def _evaluate(self, b, counting):
        ask = self.inner.query if counting else self.inner.peek
        return min(ask((b, 1)), ask((b, self.minus_one)))


def affine_hsp_to_hqpp(inst: ProblemInstance) -> ProblemInstance:
    """HSP over Aff_q({1,-1}) hiding H_u -> HQPP oracle with level sets {b, 2u - b}."""
    G = group_from_descriptor(inst.params["group"])
    f = G.field
    if f.p == 2:
        raise EvenCharacteristic(f"q = {f.q} is even")
    u = vertex_of(inst.answer)
    two_u = f.add(u, u)

    def reference(x):
        return f.sub(f.mul(x, x), f.mul(two_u, x))

    folded = FoldedOracle(inst.oracle, f)
    out = ProblemInstance("HQPP", {"field": f.describe()}, folded, u, reference, inst.seed)
    check_promise(folded, reference)
    return out


def grover_hssp_recover(H: SubgroupGens) -> int:
    """c = (1 - a)^-1 b from any generator (b, a) of H_c with a != 1."""
    f = H.group.field
    for b, a in H.generators:
        if a != 1:
            return f.div(b, f.sub(1, a))
    raise NotGenerating("no generator of H_c moves the multiplier away from 1")


# --- quadratic HPP -> procedure R ---------------------------------------------------------

@dataclass(frozen=True)
class QuotientReport:
    """Answer of R on a univariate ax^2 + bx: whether a = 0, and b/a otherwise."""

    azero: bool
    ratio: int | None = None
    constant: bool = False

    def __post_init__(self):
        if self.azero == (self.ratio is not None):
            raise ValueError("ratio is present exactly when azero is false")


@dataclass
class QuadraticTrace:
    branches: list = field(default_factory=list)
    substitutions: list = field(default_factory=list)
    r_calls: int = 0
    kernel_calls: int = 0
    queries: int = 0
    r_call_bound: int = 0

    def to_json(self) -> dict:
        return {
            "branches": list(self.branches),
            "substitutions": list(self.substitutions),
            "r_calls": self.r_calls,
            "kernel_calls": self.kernel_calls,
            "queries": self.queries,
            "r_call_bound": self.r_call_bound,
        }


R_CALLS_PER_PLANE = 6
R_CALL_CONSTANT = 9


def quadratic_labels(n: int) -> list[str]:
    """Coefficient order a_11..a_nn, a_ij (i<j, lex), b_1..b_n."""
    labels = [f"a{i + 1}{i + 1}" for i in range(n)]
    labels += [f"a{i + 1}{j + 1}" for i, j in itertools.combinations(range(n), 2)]
    labels += [f"b{k + 1}" for k in range(n)]
    return labels


def normalize(field: FieldSpec, vec: Sequence[int]) -> list[int]:
    """Scale so the first nonzero entry is 1."""
    lead = next((c for c in vec if c), 0)
    if not lead:
        return [0] * len(vec)
    inv = field.inv(lead)
    return [field.mul(inv, c) for c in vec]


def quadratic_coefficients(P: MultiPoly, n: int | None = None) -> list[int]:
    """The normalized coefficient vector of a quadratic without constant term."""
    n = P.nvars if n is None else n
    f = P.field

    def e(*idx):
        a = [0] * n
        for i in idx:
            a[i] += 1
        return tuple(a)

    vec = [P.coefficient(e(i, i)) for i in range(n)]
    vec += [P.coefficient(e(i, j)) for i, j in itertools.combinations(range(n), 2)]
    vec += [P.coefficient(e(k)) for k in range(n)]
    return normalize(f, vec)


def _default_r():
    from solver_suite import procedure_R

    return procedure_R


def _default_kernel():
    from solver_suite import find_linear_kernel

    return find_linear_kernel


class _Plane:
    """The affine plane s + x u + y w inside F_q^n, with R and kernel calls traced."""

    def __init__(self, oracle, field, s, u, w, R, kernel, trace, tag):
        self.oracle = oracle
        self.field = field
        self.s, self.u, self.w = s, u, w
        self.R = R
        self.kernel = kernel
        self.trace = trace
        self.tag = tag

    def point(self, x, y):
        f = self.field
        return tuple(f.add(f.add(a, f.mul(x, b)), f.mul(y, c)) for a, b, c in zip(self.s, self.u, self.w))

    def line(self, x0, y0, dx, dy, label) -> QuotientReport:
        f = self.field
        view = restrict(
            self.oracle,
            lambda x: self.point(f.add(x0, f.mul(x, dx)), f.add(y0, f.mul(x, dy))),
            f.elements(),
            name=f"line{label}",
        )
        self.trace.r_calls += 1
        self.trace.substitutions.append({"plane": self.tag, "line": label})
        return self.R(view)

    def linear_normal(self) -> list[int]:
        f = self.field
        pts, _ = cube_points(f.q, 2)
        view = restrict(self.oracle, lambda xy: self.point(*xy), pts, name="plane")
        self.trace.kernel_calls += 1
        self.trace.substitutions.append({"plane": self.tag, "line": "kernel"})
        return self.kernel(view, f, 2)


def _smallest(field: FieldSpec, ok: Callable[[int], bool]) -> int:
    return next(a for a in field.elements() if ok(a))


def _bivariate_odd(plane: _Plane) -> tuple[list[int], str]:
    """Case analysis for ax^2 + ... over odd q; returns (vector up to scalar, branch)."""
    f = plane.field
    half = f.inv(f.from_int(2))
    L1 = plane.line(0, 0, 1, 0, "(x,0)")
    L2 = plane.line(0, 1, 1, 0, "(x,1)")
    L3 = plane.line(0, 0, 0, 1, "(0,x)")
    L4 = plane.line(1, 0, 0, 1, "(1,x)")
    if L1.azero != L2.azero or L3.azero != L4.azero:
        raise PromiseViolation("R answers disagree on a vanishing quadratic coefficient")

    if not L1.azero and not L3.azero:
        c1, c2 = L1.ratio, L3.ratio
        k1 = f.sub(L2.ratio, c1)
        k2 = f.sub(L4.ratio, c2)
        if (k1 == 0) != (k2 == 0):
            raise PromiseViolation("R answers disagree on the mixed coefficient")
        if k1:
            t = f.div(k1, k2)
            return [1, t, k1, c1, f.mul(c2, t)], "n2.A.a12"
        diag = plane.line(0, 0, 1, 1, "(x,x)")
        if diag.azero:
            t = f.neg(1)
            branch = "n2.A.diag"
        elif diag.ratio != c2:
            t = f.div(f.sub(c1, diag.ratio), f.sub(diag.ratio, c2))
            branch = "n2.A.diag"
        else:
            if diag.ratio != c1:
                raise PromiseViolation("R answers on the diagonal are inconsistent")
            x0 = f.mul(f.sub(1, c1), half)
            y0 = f.neg(f.mul(c2, half))
            shifted = plane.line(x0, y0, 1, 1, "(x0+x,y0+x)")
            if shifted.azero or shifted.ratio == 0:
                raise PromiseViolation("shifted diagonal gives no ratio")
            rho = shifted.ratio
            t = f.div(f.sub(1, rho), rho)
            branch = "n2.A.shift"
        if t == 0:
            raise PromiseViolation("diagonal ratio forces a vanishing coefficient")
        return [1, t, 0, c1, f.mul(c2, t)], branch

    if not L1.azero:
        c1 = L1.ratio
        k1 = f.sub(L2.ratio, c1)
        if k1 == 0:
            r = plane.line(0, 0, 1, 1, "(x,x)")
            if r.azero:
                raise PromiseViolation("diagonal lost its quadratic term")
            beta = f.sub(r.ratio, c1)
            branch = "n2.B.diag"
        else:
            alpha = _smallest(f, lambda a: a != 0 and f.add(1, f.mul(a, k1)) != 0)
            r = plane.line(0, 0, 1, alpha, f"(x,{alpha}x)")
            if r.azero:
                raise PromiseViolation("line lost its quadratic term")
            scale = f.add(1, f.mul(alpha, k1))
            beta = f.div(f.sub(f.mul(r.ratio, scale), c1), alpha)
            branch = "n2.B.alpha"
        if L3.constant != (beta == 0) or L4.constant != (f.add(k1, beta) == 0):
            raise PromiseViolation("R answers disagree on the linear coefficients")
        return [1, 0, k1, c1, beta], branch

    if not L3.azero:
        c2 = L3.ratio
        k2 = f.sub(L4.ratio, c2)
        if k2 == 0:
            r = plane.line(0, 0, 1, 1, "(x,x)")
            if r.azero:
                raise PromiseViolation("diagonal lost its quadratic term")
            gamma = f.sub(r.ratio, c2)
            branch = "n2.B'.diag"
        else:
            alpha = _smallest(f, lambda a: a != 0 and f.add(1, f.mul(a, k2)) != 0)
            r = plane.line(0, 0, alpha, 1, f"({alpha}x,x)")
            if r.azero:
                raise PromiseViolation("line lost its quadratic term")
            scale = f.add(1, f.mul(alpha, k2))
            gamma = f.div(f.sub(f.mul(r.ratio, scale), c2), alpha)
            branch = "n2.B'.alpha"
        if L1.constant != (gamma == 0) or L2.constant != (f.add(k2, gamma) == 0):
            raise PromiseViolation("R answers disagree on the linear coefficients")
        return [0, 1, k2, gamma, c2], branch

    diag = plane.line(0, 0, 1, 1, "(x,x)")
    if not diag.azero:
        r1 = diag.ratio
        alpha = _smallest(f, lambda a: a not in (0, 1))
        r2 = plane.line(0, 0, 1, alpha, f"(x,{alpha}x)")
        if r2.azero:
            raise PromiseViolation("line lost its quadratic term")
        beta2 = f.div(f.sub(f.mul(alpha, r2.ratio), r1), f.sub(alpha, 1))
        beta1 = f.sub(r1, beta2)
        return [0, 0, 1, beta1, beta2], "n2.C.alpha"
    if L1.constant and L3.constant:
        if not (L2.constant and L4.constant and diag.constant):
            raise PromiseViolation("R answers disagree on a vanishing restriction")
        return [0, 0, 0, 0, 0], "n2.zero"
    n1, n2 = plane.linear_normal()
    if (n1 == 0) != L1.constant or (n2 == 0) != L3.constant:
        raise PromiseViolation("kernel normal disagrees with R")
    return [0, 0, 0, n1, n2], "n2.C.linear"


def _evaluate_q2(oracle: QueryOracle, n: int) -> list[int]:
    """Over F_2 read P(x) as [f(x) != f(0)]: b_i = P(e_i), a_ij = P(e_i+e_j) - b_i - b_j."""
    zero = tuple([0] * n)
    base = oracle.query(zero)

    def value(*idx):
        x = [0] * n
        for i in idx:
            x[i] = 1
        return 0 if oracle.query(tuple(x)) == base else 1

    b = [value(k) for k in range(n)]
    a = [(value(i, j) - b[i] - b[j]) % 2 for i, j in itertools.combinations(range(n), 2)]
    return [0] * n + a + b


def solve_bivariate_quadratic(
    oracle: QueryOracle, field: FieldSpec, R: Callable | None = None, trace: QuadraticTrace | None = None
) -> tuple[list[int], QuadraticTrace]:
    """
    Recover (a11, a22, a12, b1, b2) up to a common factor from an
    HPP(F_q, 2, 2) oracle.
    """
    vec, trace = solve_multivariate_quadratic(oracle, field, 2, R, trace=trace)
    return vec, trace


class _Measurements:
    """Linear equations on the coefficient vector collected from plane solves."""

    def __init__(self, field: FieldSpec, n: int):
        self.field = field
        self.n = n
        self.pairs = list(itertools.combinations(range(n), 2))
        self.pair_index = {p: n + i for i, p in enumerate(self.pairs)}
        self.size = n + len(self.pairs) + n
        self.rows: list[list[int]] = []

    def _pair(self, i, j):
        return self.pair_index[(min(i, j), max(i, j))]

    def q_form(self, u):
        f = self.field
        row = [0] * self.size
        for i in range(self.n):
            row[i] = f.mul(u[i], u[i])
        for (i, j), col in zip(self.pairs, range(self.n, self.n + len(self.pairs))):
            row[col] = f.mul(u[i], u[j])
        return row

    def b_form(self, u, w):
        f = self.field
        row = [0] * self.size
        two = f.from_int(2)
        for i in range(self.n):
            row[i] = f.mul(two, f.mul(u[i], w[i]))
        for (i, j), col in zip(self.pairs, range(self.n, self.n + len(self.pairs))):
            row[col] = f.add(f.mul(u[i], w[j]), f.mul(u[j], w[i]))
        return row

    def l_form(self, u):
        row = [0] * self.size
        for k in range(self.n):
            row[self.n + len(self.pairs) + k] = u[k]
        return row

    def add_plane(self, s, u, w, vec):
        f = self.field
        forms = [
            self.q_form(u),
            self.q_form(w),
            self.b_form(u, w),
            [f.add(a, b) for a, b in zip(self.b_form(s, u), self.l_form(u))],
            [f.add(a, b) for a, b in zip(self.b_form(s, w), self.l_form(w))],
        ]
        if not any(vec):
            self.rows.extend(forms)
            return
        pivot = next(i for i, c in enumerate(vec) if c)
        for a, form in enumerate(forms):
            if a != pivot:
                self.rows.append([f.sub(x, f.mul(vec[a], y)) for x, y in zip(form, forms[pivot])])

    def kernel(self) -> list[list[int]]:
        return mat_kernel_basis(MatrixFq(self.field, self.rows))


def solve_multivariate_quadratic(
    oracle: QueryOracle,
    field: FieldSpec,
    n: int,
    R: Callable | None = None,
    kernel: Callable | None = None,
    trace: QuadraticTrace | None = None,
) -> tuple[list[int], QuadraticTrace]:
    """
    Recover the coefficient vector of a hidden quadratic in n variables,
    up to a common factor, with O(n^2) calls of R.

    Returns
    -------
    (vector, trace)
        vector follows quadratic_labels(n) and is normalized so its first
        nonzero entry is 1.
    """
    trace = trace or QuadraticTrace()
    trace.r_call_bound = R_CALL_CONSTANT * n * n
    start = oracle.query_count
    if field.q == 2:
        vec = _evaluate_q2(oracle, n)
        trace.branches.append("n2.q2" if n == 2 else "nN.q2")
        trace.queries = oracle.query_count - start
        if not any(vec):
            raise PromiseViolation("oracle is constant: no nonzero quadratic hides it")
        return normalize(field, vec), trace
    if field.p == 2:
        raise EvenCharacteristic(f"the quotient procedure needs odd q or q = 2, got {field.q}")
    R = R or _default_r()
    kernel = kernel or _default_kernel()

    def e(*idx):
        x = [0] * n
        for i in idx:
            x[i] = f.add(x[i], 1)
        return tuple(x)

    f = field
    origin = tuple([0] * n)

    if n == 1:
        rep = R(restrict(oracle, lambda x: (x,), f.elements(), name="line"))
        trace.r_calls += 1
        trace.branches.append("n1")
        trace.queries = oracle.query_count - start
        if rep.azero:
            if rep.constant:
                raise PromiseViolation("oracle is constant")
            return [0, 1], trace
        return [1, rep.ratio], trace

    eqs = _Measurements(f, n)
    planes: dict = {}

    def measure(s, u, w, tag):
        plane = _Plane(oracle, f, s, u, w, R, kernel, trace, tag)
        vec, branch = _bivariate_odd(plane)
        trace.branches.append(branch)
        eqs.add_plane(s, u, w, vec)
        return vec

    for i, j in eqs.pairs:
        planes[(i, j)] = measure(origin, e(i), e(j), f"e{i + 1},e{j + 1}")

    if n == 2:
        vec = normalize(f, planes[(0, 1)])
        if not any(vec):
            raise PromiseViolation("oracle is constant: no nonzero quadratic hides it")
        trace.queries = oracle.query_count - start
        return vec, trace

    trace.branches.append("nN.planes")
    active = set()
    edges = set()
    for (i, j), v in planes.items():
        if v[0] or v[3]:
            active.add(i)
        if v[1] or v[4]:
            active.add(j)
        if v[2]:
            edges.add((i, j))

    if active:
        pivot = min(active)
        for j, k in sorted(edges):
            if j not in active and k not in active:
                trace.branches.append("nN.diagonal_pair")
                measure(origin, e(pivot), e(j, k), f"e{pivot + 1},e{j + 1}+e{k + 1}")
    elif edges:
        nbrs = {v: sorted({b for a, b in edges if a == v} | {a for a, b in edges if b == v}) for v in range(n)}
        for j in range(n):
            if not nbrs[j]:
                continue
            first = nbrs[j][0]
            for other in range(n):
                if other in (j, first):
                    continue
                trace.branches.append("nN.offset_one")
                measure(e(j), e(first), e(other), f"e{j + 1}+(e{first + 1},e{other + 1})")
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b in edges:
            parent[find(a)] = find(b)
        reps: dict = {}
        for a, b in sorted(edges):
            reps.setdefault(find(a), (a, b))
        components = list(reps.values())
        for a, b in components[1:]:
            c, d = components[0]
            trace.branches.append("nN.paired")
            measure(origin, e(c, d), e(a, b), f"e{c + 1}+e{d + 1},e{a + 1}+e{b + 1}")

    basis = eqs.kernel()
    trace.queries = oracle.query_count - start
    if len(basis) != 1:
        raise PromiseViolation(f"measurements leave a solution space of dimension {len(basis)}")
    return normalize(f, basis[0]), trace


# --- HPGP(F_q, 1, d) -> HSP over Fg --------------------------------------------------------

def hpgp1_to_hssp(inst: ProblemInstance, G: FunctionGraphGroup) -> ProblemInstance:
    """The HPGP oracle read as an HSSP for the shifting action, hiding A_Q."""
    Q: MultiPoly = inst.answer
    action = shifting_action(G)
    A_Q = fg_conjugate_complement(G, Q)

    def reference(m):
        return orbit(A_Q, m, action)

    out = ProblemInstance("HSSP", {"group": G.describe(), "action": action.name}, inst.oracle, A_Q, reference, inst.seed)
    check_promise(out.oracle, reference)
    return out


def hpgp1_to_hsp(inst: ProblemInstance, d: int | None = None) -> ProblemInstance:
    """HPGP(F_q, 1, d) -> HSP over Fg(F_q^(d)[x]) through the point base."""
    field = field_from_json(inst.params["field"])
    if inst.params.get("n", 1) != 1:
        raise InvalidGroup("only the univariate HPGP lifts to a polynomial-size HSP")
    d = inst.params["d"] if d is None else d
    base = fg_point_base(field, max(d, 0))
    hssp = hpgp1_to_hssp(inst, base.action.group)
    return lift_hssp_to_hsp(hssp, base)


def recover_poly_from_complement(H: SubgroupGens, d: int) -> FieldPoly:
    """
    Q - Q(0) from any generating set of A_Q.

    For each s the element a_{Q,s} is assembled from the generators by
    writing s over F_p in their t-parts; evaluating its kernel part at s
    gives Q(s) - Q(0).
    """
    G: FunctionGraphGroup = H.group
    f = G.field
    if G.n != 1:
        raise InvalidGroup("recovery is implemented for univariate Fg")
    gens = list(H.generators)
    prime = field_make(f.p)
    cols = [[int(c) for c in f.digits[g[1][0]]] for g in gens]
    T = MatrixFq(prime, [[col[i] for col in cols] for i in range(f.k)]) if gens else None
    if T is None or mat_rank(T) < f.k:
        raise NotGenerating("generator t-parts do not span the additive group of F_q")
    if f.q < d + 1:
        raise ValueError(f"F_{f.q} has fewer than {d + 1} abscissas")
    points = []
    for s in range(d + 1):
        coeffs = mat_solve(T, [int(c) for c in f.digits[s]], unique=False)
        elem = G.identity()
        for g, c in zip(gens, coeffs):
            elem = G.mul(elem, G.power(g, c))
        if elem[1] != (s,) or elem not in H:
            raise PromiseViolation(f"generators do not form a complement: got t-part {elem[1]} for s={s}")
        points.append((s, G.evaluate(elem[0], (s,))))
    return lagrange_interpolate(f, points, d)


# --- Z_p^m x| Z_p -> m-dimensional HPGP ---------------------------------------------------

@dataclass
class ZpmZpSolution:
    v: tuple
    d: int
    coordinate_polys: list
    queries: int

    def to_json(self) -> dict:
        return {
            "v": list(self.v),
            "d": self.d,
            "coordinate_polys": [p.to_json()["terms"] for p in self.coordinate_polys],
            "queries": self.queries,
        }


def zpmzp_hpgp_view(oracle: QueryOracle, G: ZpmZpGroup) -> LevelSetOracle:
    """The oracle on F_p x F_p^m: ((t,), w) -> f(w, t), level sets w - Q_v(t) = c."""
    domain = tuple(((t,), w) for t in range(G.p) for w in itertools.product(range(G.p), repeat=G.m))
    return restrict(oracle, lambda pt: (pt[1], pt[0][0]), domain, name="zpmzp-hpgp")


def zpmzp_to_hpgp(inst_or_oracle, G: ZpmZpGroup | None = None) -> ZpmZpSolution:
    """
    Solve the Z_p^m x| Z_p instance through its HPGP view.

    For each abscissa t the class of ((t,), 0) is matched against
    ((0,), w) over w in F_p^m, which reads off -Q_v(t). Each coordinate
    is then one univariate interpolation of degree min(d, p - 1), since a
    function on Z_p has degree below p, and v = Q_v(1).
    """
    if isinstance(inst_or_oracle, ProblemInstance):
        oracle = inst_or_oracle.oracle
        G = group_from_descriptor(inst_or_oracle.params["group"])
    else:
        oracle = inst_or_oracle
    p, m = G.p, G.m
    d = G.nilpotency_index
    degree = min(d, p - 1)
    view = zpmzp_hpgp_view(oracle, G)
    fp = field_make(p)
    start = oracle.query_count
    zero = tuple([0] * m)
    values = {0: zero}
    for t in range(1, degree + 1):
        target = view.query(((t,), zero))
        hit = next(
            (w for w in itertools.product(range(p), repeat=m) if view.query(((0,), w)) == target),
            None,
        )
        if hit is None:
            raise PromiseViolation(f"no level set of the HPGP view matches abscissa {t}")
        values[t] = tuple(-x % p for x in hit)
    polys = [
        lagrange_interpolate(fp, [(t, values[t][i]) for t in range(degree + 1)], degree) for i in range(m)
    ]
    anchor = view.query(((0,), zero))
    for t in range(p):
        qt = tuple(poly(t) for poly in polys)
        if view.query(((t,), qt)) != anchor:
            raise PromiseViolation(f"recovered Q_v is off the level set at t={t}")
    return ZpmZpSolution(values[1], d, polys, oracle.query_count - start)
