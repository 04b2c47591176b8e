#!/usr/bin/env python3
"""
Level-set oracles with query accounting.

An oracle only tells a solver which points share a level set. Every factory
here builds a LevelSetOracle together with the hidden object it encodes,
checks the problem family's promise against that object, and returns both
as a ProblemInstance. Solvers receive the oracle alone.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Hashable, Protocol, Sequence

import numpy as np

from errors import EvenCharacteristic, InvalidGroup, NotClosed, PromiseViolation
from ff_algebra import FieldSpec, MultiPoly
from group_core import (
    ActionSpec,
    AffineGroup,
    GroupSpec,
    SubgroupGens,
    ZpmZpGroup,
    affine_action,
    closure,
    multiplicative_subgroup,
    orbit,
    stabilizer,
    subgroup_star,
)

EXHAUSTIVE_PROMISE_LIMIT = 4096
PROMISE_SAMPLE_POINTS = 256
TABULATE_LIMIT = 2 ** 17
LABEL_BITS = 63


class QueryOracle(Protocol):
    """What a solver may see of an oracle."""

    domain: tuple

    def query(self, m: Hashable) -> Hashable: ...

    @property
    def query_count(self) -> int: ...


class LevelSetOracle:
    """
    Query-counted black box M -> S defined by a canonical-representative map.

    ``query`` counts; ``peek`` is the harness-side evaluation used for
    promise checks and does not count.
    """

    def __init__(self, domain: Sequence, canon: Callable | None = None, hidden_tag: Any = None, name: str = "oracle"):
        self.domain = tuple(domain)
        self.name = name
        self._canon = canon
        self._hidden_tag = hidden_tag
        self._count = 0
        self._lock = threading.Lock()

    def _evaluate(self, m, counting: bool):
        return self._canon(m)

    def query(self, m):
        with self._lock:
            self._count += 1
        return self._evaluate(m, True)

    def peek(self, m):
        return self._evaluate(m, False)

    @property
    def query_count(self) -> int:
        return self._count

    def reset_count(self) -> None:
        with self._lock:
            self._count = 0

    def __repr__(self):
        return f"{type(self).__name__}({self.name}, |M|={len(self.domain)}, queries={self._count})"


class RestrictedOracle(LevelSetOracle):
    """Pull-back view x -> f(mapping(x)); one inner query per query."""

    def __init__(self, inner: LevelSetOracle, mapping: Callable, domain: Sequence, name: str = "restricted"):
        super().__init__(domain, name=name)
        self.inner = inner
        self.mapping = mapping

    def _evaluate(self, m, counting):
        x = self.mapping(m)
        return self.inner.query(x) if counting else self.inner.peek(x)


class ScrambledOracle(LevelSetOracle):
    """Relabels the inner oracle's outputs by a seeded random injection."""

    def __init__(self, inner: LevelSetOracle, seed: int):
        super().__init__(inner.domain, name=f"scrambled({inner.name})")
        self.inner = inner
        self.seed = seed
        self._rng = np.random.default_rng(seed)
        self._labels: dict = {}
        self._used: set = set()
        self._label_lock = threading.Lock()

    def _relabel(self, label):
        with self._label_lock:
            fresh = self._labels.get(label)
            if fresh is None:
                while True:
                    fresh = int(self._rng.integers(0, 2 ** LABEL_BITS))
                    if fresh not in self._used:
                        break
                self._used.add(fresh)
                self._labels[label] = fresh
            return fresh

    def _evaluate(self, m, counting):
        return self._relabel(self.inner.query(m) if counting else self.inner.peek(m))


def scramble_labels(oracle: LevelSetOracle, seed: int) -> ScrambledOracle:
    return ScrambledOracle(oracle, seed)


def restrict(oracle: LevelSetOracle, mapping: Callable, domain: Sequence, name: str = "restricted") -> RestrictedOracle:
    return RestrictedOracle(oracle, mapping, domain, name)


def query(o: QueryOracle, m):
    return o.query(m)


def query_count(o: QueryOracle) -> int:
    return o.query_count


# --- problem instances -------------------------------------------------------------

FAMILIES = ("HSP", "HSSP", "HPP", "HQPP", "HPGP", "GroverHSSP", "ZpmZpHSP")


@dataclass
class ProblemInstance:
    family: str
    params: dict
    oracle: LevelSetOracle
    answer: Any
    reference: Callable = field(repr=False, default=None)
    seed: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown problem family {self.family}")


def _answer_json(inst: ProblemInstance):
    a = inst.answer
    if isinstance(a, SubgroupGens):
        return {"order": a.order, "generators": [list(g) for g in a.generators]}
    if isinstance(a, MultiPoly):
        return a.to_json()
    if isinstance(a, tuple):
        return list(a)
    return a


def instance_to_json(inst: ProblemInstance) -> dict:
    """Public description plus a separate harness-only section."""
    return {
        "family": inst.family,
        "params": inst.params,
        "seed": inst.seed,
        "harness": {"answer": _answer_json(inst)},
    }


def check_promise(oracle: LevelSetOracle, reference: Callable, rng: np.random.Generator | None = None) -> None:
    """
    Check that oracle labels and reference keys induce the same partition.

    Small domains are checked completely: a consistent label <-> key
    bijection over all points is equivalent to the full pair scan. Larger
    domains are checked on every pair of a random point sample.
    """
    domain = oracle.domain
    if len(domain) <= EXHAUSTIVE_PROMISE_LIMIT:
        points = domain
    else:
        rng = rng or np.random.default_rng(0)
        picks = rng.choice(len(domain), size=PROMISE_SAMPLE_POINTS, replace=False)
        points = [domain[int(i)] for i in sorted(picks)]
    label_to_key: dict = {}
    key_to_label: dict = {}
    for m in points:
        label = oracle.peek(m)
        key = reference(m)
        if label_to_key.setdefault(label, key) != key or key_to_label.setdefault(key, label) != label:
            raise PromiseViolation(f"{oracle.name}: level sets disagree with the hidden object at {m!r}")


def _finish(inst: ProblemInstance) -> ProblemInstance:
    check_promise(inst.oracle, inst.reference)
    return inst


@lru_cache(maxsize=64)
def cube_points(q: int, n: int) -> tuple[tuple[tuple[int, ...], ...], np.ndarray]:
    """F_q^n in sorted order, as tuples and as an (q^n, n) array."""
    pts = tuple(itertools.product(range(q), repeat=n))
    return pts, np.array(pts, dtype=np.int64).reshape(len(pts), n)


def cube_index(x: Sequence[int], q: int) -> int:
    idx = 0
    for c in x:
        idx = idx * q + c
    return idx


def _tabulate(field: FieldSpec, n: int, P: MultiPoly) -> Callable[[tuple], int]:
    """Evaluator for P; tabulated when F_q^n is small enough."""
    q = field.q
    if q ** n <= TABULATE_LIMIT:
        _, arr = cube_points(q, n)
        values = P.evaluate_many(arr).tolist()
        return lambda x: values[cube_index(x, q)]
    return P.evaluate


def make_hsp_oracle(G: GroupSpec, H: SubgroupGens) -> ProblemInstance:
    """HSP: f(x) = f(y) iff Hx = Hy; outputs the least element of Hx."""
    helems = tuple(H.elements)
    mul = G.mul

    def canon(g):
        return min(mul(h, g) for h in helems)

    def reference(g):
        return frozenset(mul(h, g) for h in helems)

    oracle = LevelSetOracle(G.elements, canon, hidden_tag=H, name="hsp")
    params = {"group": G.describe()}
    return _finish(ProblemInstance("HSP", params, oracle, H, reference))


def make_hssp_oracle(action: ActionSpec, H: SubgroupGens) -> ProblemInstance:
    """HSSP: f(x) = f(y) iff H o x = H o y, for a closed H."""
    if closure(H, action) != H:
        raise NotClosed(f"subgroup of order {H.order} is not closed under the {action.name} action")
    reps = dict(subgroup_star(H, action).classof)

    def reference(m):
        return orbit(H, m, action)

    oracle = LevelSetOracle(action.domain, reps.__getitem__, hidden_tag=H, name="hssp")
    params = {"group": action.group.describe(), "action": action.name}
    return _finish(ProblemInstance("HSSP", params, oracle, H, reference))


def make_hqpp_oracle(field: FieldSpec, u: int) -> ProblemInstance:
    """HQPP for P_u(x) = x^2 - 2ux; outputs min(x, 2u - x)."""
    if field.p == 2:
        raise EvenCharacteristic(f"HQPP is undefined over F_{field.q}: P_u is a bijection in characteristic 2")
    two_u = field.add(u, u)

    def canon(x):
        return min(x, field.sub(two_u, x))

    def reference(x):
        return field.sub(field.mul(x, x), field.mul(two_u, x))

    oracle = LevelSetOracle(field.elements(), canon, hidden_tag=u, name="hqpp")
    params = {"field": field.describe()}
    return _finish(ProblemInstance("HQPP", params, oracle, u, reference))


def make_hpp_oracle(field: FieldSpec, n: int, P: MultiPoly, allow_zero: bool = False) -> ProblemInstance:
    """HPP: f(x) = f(y) iff P(x) = P(y); outputs P(x)."""
    if P.is_zero() and not allow_zero:
        raise PromiseViolation("the hidden polynomial of an HPP instance must be nonzero")
    pts, _ = cube_points(field.q, n)
    oracle = LevelSetOracle(pts, _tabulate(field, n, P), hidden_tag=P, name="hpp")
    params = {"field": field.describe(), "n": n, "d": P.degree}
    return _finish(ProblemInstance("HPP", params, oracle, P, P.evaluate))


def make_hpgp_oracle(field: FieldSpec, n: int, Q: MultiPoly, d: int | None = None) -> ProblemInstance:
    """
    HPGP: level sets {(x, y) : y - Q(x) = c} on F_q^n x F_q.

    Points are (x, y) with x a tuple of n encodings. A constant term of Q
    does not change the level sets and is dropped from the answer.
    """
    if Q.constant:
        Q = Q - MultiPoly(field, n, {(0,) * n: Q.constant})
    pts, _ = cube_points(field.q, n)
    domain = tuple((x, y) for x in pts for y in range(field.q))
    qvals = _tabulate(field, n, Q)

    def canon(pt):
        x, y = pt
        return field.sub(y, qvals(x))

    def reference(pt):
        x, y = pt
        return field.sub(y, Q.evaluate(x))

    oracle = LevelSetOracle(domain, canon, hidden_tag=Q, name="hpgp")
    params = {"field": field.describe(), "n": n, "d": Q.degree if d is None else d}
    return _finish(ProblemInstance("HPGP", params, oracle, Q, reference))


def make_grover_oracle(field: FieldSpec, c: int) -> ProblemInstance:
    """f_c(x) = [x == c]; hides the stabilizer H_c in Aff_q as symmetry subgroup."""
    G = AffineGroup(field, multiplicative_subgroup(field, field.q - 1))
    action = affine_action(G)
    H_c = stabilizer(c, action)

    def canon(x):
        return 1 if x == c else 0

    def reference(x):
        return orbit(H_c, x, action)

    oracle = LevelSetOracle(field.elements(), canon, hidden_tag=c, name="grover")
    params = {"field": field.describe(), "group": G.describe()}
    inst = ProblemInstance("GroverHSSP", params, oracle, c, reference)
    inst.params["stabilizer_order"] = H_c.order
    return _finish(inst)


def zpmzp_hidden_subgroup(G: ZpmZpGroup, v: Sequence[int]) -> SubgroupGens:
    return SubgroupGens(G, [(tuple(int(x) % G.p for x in v), 1)])


def make_zpmzp_oracle(
    p: int, m: int, A: Sequence[Sequence[int]], v: Sequence[int], y0: Sequence[int] | None = None
) -> ProblemInstance:
    """
    HSP on Z_p^m x| Z_p hiding H_v = <(v, 1)> through the cosets
    (y, 0) H_v = {(y + Q_v(t), t)}; outputs w - Q_v(t) + y0.
    """
    G = ZpmZpGroup(p, m, A)
    v = tuple(int(x) % p for x in v)
    if any(_q_v_full(G, v)):
        raise InvalidGroup(f"(v, 1) does not have order p for v={v}")
    H = zpmzp_hidden_subgroup(G, v)
    shift = tuple(int(x) % p for x in (y0 or [0] * m))
    table = [G.q_v(v, t) for t in range(p)]

    def canon(g):
        w, t = g
        return tuple((a - b + s) % p for a, b, s in zip(w, table[t], shift))

    helems = tuple(H.elements)

    def reference(g):
        return frozenset(G.mul(g, h) for h in helems)

    oracle = LevelSetOracle(G.elements, canon, hidden_tag=v, name="zpmzp")
    params = {"group": G.describe(), "d": G.nilpotency_index}
    return _finish(ProblemInstance("ZpmZpHSP", params, oracle, v, reference))


def _q_v_full(G: ZpmZpGroup, v) -> tuple[int, ...]:
    """Q_v(p) = sum_{j<p} A^j v, which must vanish for (v, 1) to have order p."""
    acc = np.zeros(G.m, dtype=np.int64)
    vec = np.array(v, dtype=np.int64)
    for j in range(G.p):
        acc = (acc + G.powers[j] @ vec) % G.p
    return tuple(int(x) for x in acc)


# --- random hidden objects -----------------------------------------------------------

def random_quadratic(field: FieldSpec, n: int, rng: np.random.Generator) -> MultiPoly:
    """Uniform nonzero quadratic without constant term; no x_i^2 terms over F_2."""
    while True:
        terms = {}
        for i in range(n):
            if field.q > 2:
                e = [0] * n
                e[i] = 2
                terms[tuple(e)] = int(rng.integers(0, field.q))
        for i, j in itertools.combinations(range(n), 2):
            e = [0] * n
            e[i] = e[j] = 1
            terms[tuple(e)] = int(rng.integers(0, field.q))
        for k in range(n):
            e = [0] * n
            e[k] = 1
            terms[tuple(e)] = int(rng.integers(0, field.q))
        P = MultiPoly(field, n, {e: c for e, c in terms.items() if c})
        if not P.is_zero():
            return P


def random_graph_poly(field: FieldSpec, n: int, d: int, rng: np.random.Generator) -> MultiPoly:
    """Uniform polynomial of degree <= d with local degrees <= q-1 and no constant term."""
    cap = min(d, field.q - 1)
    terms = {
        a: int(rng.integers(0, field.q))
        for a in itertools.product(range(cap + 1), repeat=n)
        if 0 < sum(a) <= d
    }
    return MultiPoly(field, n, {a: c for a, c in terms.items() if c})
