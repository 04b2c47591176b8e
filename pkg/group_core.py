#!/usr/bin/env python3
"""
Finite groups as semidirect products K x| H, their actions on finite sets,
orbits, stabilizers, and the Galois connection between subgroups and
partitions.

Group elements are hashable pairs (kpart, hpart). Each group enumerates its
elements once (desk scale) in sorted order; that order is the canonical
total order used for coset and orbit representatives.
"""

from __future__ import annotations

import itertools
import json
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from errors import DomainMismatch, InvalidGroup, NotAnAutomorphism, NotASubgroup, NotFrobenius
from ff_algebra import FieldPoly, FieldSpec, MultiPoly, field_of_order, is_prime

MAX_GROUP_ORDER = 10 ** 6
EXHAUSTIVE_ACTION_CHECK = 250_000

Element = tuple


class GroupSpec(ABC):
    """A finite group given by an explicit multiplication rule."""

    kind = "abstract"

    @abstractmethod
    def identity(self) -> Element: ...

    @abstractmethod
    def mul(self, g: Element, h: Element) -> Element: ...

    @abstractmethod
    def inv(self, g: Element) -> Element: ...

    @abstractmethod
    def _enumerate(self) -> Iterable[Element]: ...

    @abstractmethod
    def describe(self) -> dict: ...

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(sorted(self._enumerate()))

    @cached_property
    def index(self) -> dict[Element, int]:
        return {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def encode(self, g: Element) -> int:
        return self.index[g]

    def contains(self, g: Element) -> bool:
        return g in self.index

    def power(self, g: Element, n: int) -> Element:
        result = self.identity()
        base = g if n >= 0 else self.inv(g)
        for _ in range(abs(n)):
            result = self.mul(result, base)
        return result

    def element_order(self, g: Element) -> int:
        e = self.identity()
        x, n = g, 1
        while x != e:
            x = self.mul(x, g)
            n += 1
        return n

    def check_axioms(self) -> None:
        """Exhaustive associativity, identity and inverse check."""
        e = self.identity()
        elems = self.elements
        for g in elems:
            if self.mul(e, g) != g or self.mul(g, e) != g:
                raise InvalidGroup(f"{g} breaks the identity law")
            if self.mul(g, self.inv(g)) != e:
                raise InvalidGroup(f"{g} has a wrong inverse")
        for a, b, c in itertools.product(elems, repeat=3):
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise InvalidGroup(f"associativity fails at {a}, {b}, {c}")

    def __repr__(self):
        return json.dumps(self.describe(), sort_keys=True)


def multiplicative_subgroup(field: FieldSpec, order: int) -> tuple[int, ...]:
    """The unique subgroup of F_q* with the given order."""
    if order < 1 or (field.q - 1) % order:
        raise InvalidGroup(f"F_{field.q}* has no subgroup of order {order}")
    g = field.pow(field.primitive_element, (field.q - 1) // order)
    return tuple(sorted({field.pow(g, i) for i in range(order)}))


class AffineGroup(GroupSpec):
    """Aff_q(H) = F_q x| H acting on F_q by x -> a x + b; elements are (b, a)."""

    kind = "affine"

    def __init__(self, field: FieldSpec, H: Iterable[int]):
        self.field = field
        self.H = tuple(sorted(set(int(a) for a in H)))
        hs = set(self.H)
        if 1 not in hs or 0 in hs or any(not 0 < a < field.q for a in hs):
            raise InvalidGroup(f"{self.H} is not a subgroup of F_{field.q}*")
        if any(field.mul(a, b) not in hs for a in hs for b in hs):
            raise InvalidGroup(f"{self.H} is not closed under multiplication in F_{field.q}")

    def identity(self):
        return (0, 1)

    def mul(self, g, h):
        f = self.field
        b, a = g
        b2, a2 = h
        return (f.add(b, f.mul(a, b2)), f.mul(a, a2))

    def inv(self, g):
        f = self.field
        b, a = g
        ai = f.inv(a)
        return (f.neg(f.mul(ai, b)), ai)

    def _enumerate(self):
        return ((b, a) for b in range(self.field.q) for a in self.H)

    def describe(self):
        return {"kind": "affine", "q": self.field.q, "H": list(self.H)}

    @property
    def minus_one(self) -> int:
        return self.field.neg(1)


class FunctionGraphGroup(GroupSpec):
    """
    Fg(K) for K = polynomials F_q^n -> F_q of total degree at most d.

    A polynomial is stored by its value table over F_q^n (points in sorted
    order), so the shift (a_t Q)(x) = Q(x - t) is a permutation of the table.
    Elements are (values, t) with t a point of F_q^n.
    """

    kind = "fg"

    def __init__(self, field: FieldSpec, n: int, d: int):
        if n < 1 or d < 0:
            raise InvalidGroup(f"need n >= 1 and d >= 0, got n={n}, d={d}")
        self.field = field
        self.n = n
        self.d = d
        q = field.q
        cap = min(d, q - 1)
        self.monomials = tuple(
            sorted(
                (a for a in itertools.product(range(cap + 1), repeat=n) if sum(a) <= d),
                key=lambda a: (sum(a), tuple(-x for x in a)),
            )
        )
        size = q ** (len(self.monomials) + n)
        if size > MAX_GROUP_ORDER:
            raise InvalidGroup(f"|Fg| = {size} exceeds the desk-scale bound {MAX_GROUP_ORDER}")
        self.points = tuple(itertools.product(range(q), repeat=n))
        self.point_index = {x: i for i, x in enumerate(self.points)}
        self.zero = tuple([0] * len(self.points))

    @cached_property
    def _monomial_values(self) -> np.ndarray:
        f = self.field
        pts = np.array(self.points, dtype=np.int64).reshape(len(self.points), self.n)
        cols = []
        for a in self.monomials:
            col = np.ones(len(self.points), dtype=np.int64)
            for i, e in enumerate(a):
                col = f.vmul(col, f.vpow(pts[:, i], e))
            cols.append(col)
        return np.stack(cols, axis=1)

    @cached_property
    def kernel_tables(self) -> tuple[tuple[int, ...], ...]:
        f = self.field
        E = self._monomial_values
        tables = set()
        for coeffs in itertools.product(range(f.q), repeat=len(self.monomials)):
            acc = np.zeros(len(self.points), dtype=np.int64)
            for j, c in enumerate(coeffs):
                if c:
                    acc = f.vadd(acc, f.vmul(E[:, j], c))
            tables.add(tuple(int(v) for v in acc))
        return tuple(sorted(tables))

    @cached_property
    def _kernel_set(self) -> frozenset:
        return frozenset(self.kernel_tables)

    def table_of(self, Q: MultiPoly | FieldPoly) -> tuple[int, ...]:
        """Value table of a polynomial; it must lie in K."""
        if isinstance(Q, FieldPoly):
            Q = MultiPoly.from_univariate(Q)
        if Q.nvars != self.n:
            raise InvalidGroup(f"polynomial in {Q.nvars} variables, group has n={self.n}")
        table = tuple(int(v) for v in Q.evaluate_many(np.array(self.points, dtype=np.int64)))
        if table not in self._kernel_set:
            raise InvalidGroup(f"{Q} has degree above {self.d}")
        return table

    @cached_property
    def _shift_perms(self) -> dict[tuple[int, ...], tuple[int, ...]]:
        f = self.field
        perms = {}
        for t in self.points:
            perms[t] = tuple(
                self.point_index[tuple(f.sub(x, s) for x, s in zip(pt, t))] for pt in self.points
            )
        return perms

    def shift(self, values: tuple[int, ...], t: tuple[int, ...]) -> tuple[int, ...]:
        """The table of x -> Q(x - t)."""
        perm = self._shift_perms[t]
        return tuple(values[j] for j in perm)

    def add_tables(self, a, b):
        f = self.field
        return tuple(f.add(x, y) for x, y in zip(a, b))

    def neg_table(self, a):
        return tuple(self.field.neg(x) for x in a)

    def evaluate(self, values: tuple[int, ...], x: tuple[int, ...]) -> int:
        return values[self.point_index[x]]

    def add_points(self, x, t):
        f = self.field
        return tuple(f.add(a, b) for a, b in zip(x, t))

    def identity(self):
        return (self.zero, tuple([0] * self.n))

    def mul(self, g, h):
        Q1, t1 = g
        Q2, t2 = h
        return (self.add_tables(Q1, self.shift(Q2, t1)), self.add_points(t1, t2))

    def inv(self, g):
        Q, t = g
        neg_t = tuple(self.field.neg(x) for x in t)
        return (self.neg_table(self.shift(Q, neg_t)), neg_t)

    def _enumerate(self):
        return ((Q, t) for Q in self.kernel_tables for t in self.points)

    def describe(self):
        return {"kind": "fg", "q": self.field.q, "n": self.n, "d": self.d}

    def additive_generators(self) -> list[tuple[int, ...]]:
        """Unit vectors times power-basis units: a generating set of (F_q^n, +)."""
        f = self.field
        gens = []
        for i in range(self.n):
            for j in range(f.k):
                t = [0] * self.n
                t[i] = f.p ** j
                gens.append(tuple(t))
        return gens


class SemidirectTableGroup(GroupSpec):
    """
    K x|_phi H from Cayley tables; elements are (k, h) index pairs.

    ``phi[h][k]`` is phi_h(k). Index 0 must be the identity of both factors.
    """

    kind = "semidirect"

    def __init__(self, k_table: Sequence[Sequence[int]], h_table: Sequence[Sequence[int]], phi: Sequence[Sequence[int]]):
        self.k_table = tuple(tuple(int(x) for x in row) for row in k_table)
        self.h_table = tuple(tuple(int(x) for x in row) for row in h_table)
        self.phi = tuple(tuple(int(x) for x in row) for row in phi)
        self.nk = len(self.k_table)
        self.nh = len(self.h_table)
        self.k_inv = self._inverses(self.k_table, "K")
        self.h_inv = self._inverses(self.h_table, "H")
        self._check_phi()

    @staticmethod
    def _inverses(table, name):
        n = len(table)
        if any(len(row) != n for row in table) or any(table[0][i] != i or table[i][0] != i for i in range(n)):
            raise InvalidGroup(f"{name} table is not square with identity at index 0")
        inv = []
        for i in range(n):
            js = [j for j in range(n) if table[i][j] == 0]
            if len(js) != 1:
                raise InvalidGroup(f"{name} element {i} has no unique inverse")
            inv.append(js[0])
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise InvalidGroup(f"{name} table is not associative")
        return tuple(inv)

    def _check_phi(self):
        K, H = self.k_table, self.h_table
        if len(self.phi) != self.nh or any(sorted(row) != list(range(self.nk)) for row in self.phi):
            raise NotAnAutomorphism("phi rows must be permutations of K")
        for h in range(self.nh):
            ph = self.phi[h]
            for a in range(self.nk):
                for b in range(self.nk):
                    if ph[K[a][b]] != K[ph[a]][ph[b]]:
                        raise NotAnAutomorphism(f"phi_{h} is not a homomorphism of K")
        for h1 in range(self.nh):
            for h2 in range(self.nh):
                for k in range(self.nk):
                    if self.phi[H[h1][h2]][k] != self.phi[h1][self.phi[h2][k]]:
                        raise NotAnAutomorphism("phi is not a homomorphism H -> Aut(K)")

    @classmethod
    def frobenius(cls, p: int, r: int) -> "SemidirectTableGroup":
        """Z_p x| Z_r with Z_r acting by multiplication with an element of order r."""
        if not is_prime(p) or r < 1 or (p - 1) % r:
            raise InvalidGroup(f"Z_{p} x| Z_{r} needs p prime and r | p-1")
        f = field_of_order(p)
        w = f.pow(f.primitive_element, (p - 1) // r)
        k_table = [[(a + b) % p for b in range(p)] for a in range(p)]
        h_table = [[(a + b) % r for b in range(r)] for a in range(r)]
        phi = [[(pow(w, h, p) * k) % p for k in range(p)] for h in range(r)]
        return cls(k_table, h_table, phi)

    def identity(self):
        return (0, 0)

    def mul(self, g, h):
        k, a = g
        k2, a2 = h
        return (self.k_table[k][self.phi[a][k2]], self.h_table[a][a2])

    def inv(self, g):
        k, a = g
        ai = self.h_inv[a]
        return (self.phi[ai][self.k_inv[k]], ai)

    def _enumerate(self):
        return ((k, h) for k in range(self.nk) for h in range(self.nh))

    def describe(self):
        return {
            "kind": "semidirect",
            "K": [list(r) for r in self.k_table],
            "H": [list(r) for r in self.h_table],
            "phi": [list(r) for r in self.phi],
        }


class ZpmZpGroup(GroupSpec):
    """Z_p^m x| Z_p with t acting by A^t; elements are (v, t)."""

    kind = "zpmzp"

    def __init__(self, p: int, m: int, A: Sequence[Sequence[int]]):
        if not is_prime(p):
            raise InvalidGroup(f"{p} is not prime")
        self.p = p
        self.m = m
        self.A = np.array(A, dtype=np.int64) % p
        if self.A.shape != (m, m):
            raise InvalidGroup(f"A must be {m}x{m}")
        powers = [np.eye(m, dtype=np.int64)]
        for _ in range(p):
            powers.append(powers[-1] @ self.A % p)
        if not np.array_equal(powers[p], powers[0]):
            raise InvalidGroup("A^p != I")
        self.powers = powers[:p]
        if p ** (m + 1) > MAX_GROUP_ORDER:
            raise InvalidGroup(f"|G| = {p ** (m + 1)} exceeds the desk-scale bound")

    def apply_power(self, t: int, v: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(int(x) for x in self.powers[t % self.p] @ np.array(v, dtype=np.int64) % self.p)

    def identity(self):
        return (tuple([0] * self.m), 0)

    def mul(self, g, h):
        v, t = g
        v2, t2 = h
        w = self.apply_power(t, v2)
        return (tuple((a + b) % self.p for a, b in zip(v, w)), (t + t2) % self.p)

    def inv(self, g):
        v, t = g
        w = self.apply_power(-t, v)
        return (tuple(-x % self.p for x in w), -t % self.p)

    def _enumerate(self):
        return ((v, t) for v in itertools.product(range(self.p), repeat=self.m) for t in range(self.p))

    def describe(self):
        return {"kind": "zpmzp", "p": self.p, "m": self.m, "A": self.A.tolist()}

    def q_v(self, v: Sequence[int], t: int) -> tuple[int, ...]:
        """Q_v(t) = sum_{j<t} A^j v."""
        acc = np.zeros(self.m, dtype=np.int64)
        vec = np.array(v, dtype=np.int64)
        for j in range(t % self.p):
            acc = (acc + self.powers[j] @ vec) % self.p
        return tuple(int(x) for x in acc)

    @cached_property
    def nilpotency_index(self) -> int:
        """Smallest d >= 1 with (A - I)^d = 0."""
        N = (self.A - np.eye(self.m, dtype=np.int64)) % self.p
        P = N.copy()
        for d in range(1, self.m + 2):
            if not np.any(P):
                return d
            P = P @ N % self.p
        raise InvalidGroup("A - I is not nilpotent")


# --- actions ---------------------------------------------------------------------

@dataclass(frozen=True)
class ActionSpec:
    """A left action of ``group`` on the finite sorted set ``domain``."""

    group: GroupSpec
    domain: tuple
    apply: Callable[[Element, Hashable], Hashable] = field(compare=False)
    name: str = ""

    @cached_property
    def point_index(self) -> dict:
        return {m: i for i, m in enumerate(self.domain)}

    def tabulated(self) -> "ActionSpec":
        """The same action served from a precomputed table."""
        table = {(g, m): self.apply(g, m) for g in self.group.elements for m in self.domain}
        return ActionSpec(self.group, self.domain, lambda g, m: table[g, m], self.name)

    def act(self, g: Element, m):
        if m not in self.point_index:
            raise DomainMismatch(f"{m} is not in the domain of {self.name}")
        return self.apply(g, m)

    def verify(self) -> None:
        """Identity, compatibility and faithfulness (exhaustive at desk scale)."""
        G = self.group
        e = G.identity()
        for m in self.domain:
            if self.apply(e, m) != m:
                raise InvalidGroup(f"{self.name}: identity moves {m}")
        elems = G.elements
        pairs = itertools.product(elems, elems)
        if len(elems) ** 2 * len(self.domain) > EXHAUSTIVE_ACTION_CHECK:
            rng = np.random.default_rng(0)
            picks = rng.integers(0, len(elems), size=(EXHAUSTIVE_ACTION_CHECK // max(1, len(self.domain)), 2))
            pairs = ((elems[i], elems[j]) for i, j in picks)
        for g, h in pairs:
            gh = G.mul(g, h)
            for m in self.domain:
                if self.apply(g, self.apply(h, m)) != self.apply(gh, m):
                    raise InvalidGroup(f"{self.name}: compatibility fails for {g}, {h} at {m}")
        for g in elems:
            if g != e and all(self.apply(g, m) == m for m in self.domain):
                raise InvalidGroup(f"{self.name}: action is not faithful ({g} fixes everything)")


def affine_action(G: AffineGroup) -> ActionSpec:
    f = G.field

    def apply(g, x):
        b, a = g
        return f.add(f.mul(a, x), b)

    return ActionSpec(G, tuple(range(f.q)), apply, "affine")


def kernel_action(G: GroupSpec) -> ActionSpec:
    """The action on K, (y, h) o x = y * phi_h(x)."""
    if isinstance(G, AffineGroup):
        return affine_action(G)
    if isinstance(G, SemidirectTableGroup):

        def apply(g, x):
            y, h = g
            return G.k_table[y][G.phi[h][x]]

        return ActionSpec(G, tuple(range(G.nk)), apply, "kernel")
    raise InvalidGroup(f"no kernel action for {G.kind}")


def shifting_action(G: FunctionGraphGroup) -> ActionSpec:
    """(Q, t) o (x, y) = (x + t, y + Q(x + t)) on F_q^n x F_q."""
    f = G.field
    domain = tuple((x, y) for x in G.points for y in range(f.q))

    def apply(g, pt):
        Q, t = g
        x, y = pt
        xt = G.add_points(x, t)
        return (xt, f.add(y, G.evaluate(Q, xt)))

    return ActionSpec(G, domain, apply, "shifting")


def regular_action(G: GroupSpec) -> ActionSpec:
    """G acting on itself by left multiplication; its H-orbits are the cosets Hx."""

    return ActionSpec(G, G.elements, G.mul, "regular")


def natural_action(G: GroupSpec) -> ActionSpec:
    if isinstance(G, FunctionGraphGroup):
        return shifting_action(G)
    if isinstance(G, (AffineGroup, SemidirectTableGroup)):
        return kernel_action(G)
    return regular_action(G)


def act(g: Element, m, action: ActionSpec):
    return action.act(g, m)


# --- subgroups and partitions ------------------------------------------------------

def _close(group: GroupSpec, generators: Iterable[Element]) -> frozenset:
    gens = [g for g in generators]
    e = group.identity()
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


class SubgroupGens:
    """A subgroup given by generators, with its element set cached."""

    def __init__(self, group: GroupSpec, generators: Iterable[Element], elements: frozenset | None = None):
        self.group = group
        self.generators = tuple(generators)
        for g in self.generators:
            if not group.contains(g):
                raise NotASubgroup(f"{g} is not an element of the group")
        self.elements = elements if elements is not None else _close(group, self.generators)

    @classmethod
    def from_elements(cls, group: GroupSpec, elements: Iterable[Element], check: bool = True) -> "SubgroupGens":
        elems = frozenset(elements)
        if check:
            if group.identity() not in elems:
                raise NotASubgroup("identity missing")
            for a in elems:
                for b in elems:
                    if group.mul(a, b) not in elems:
                        raise NotASubgroup(f"{a} * {b} leaves the set")
        gens: list[Element] = []
        span = frozenset([group.identity()])
        for g in sorted(elems):
            if g not in span:
                gens.append(g)
                span = _close(group, gens)
        return cls(group, gens, elems)

    @classmethod
    def trivial(cls, group: GroupSpec) -> "SubgroupGens":
        return cls(group, (), frozenset([group.identity()]))

    @classmethod
    def whole(cls, group: GroupSpec) -> "SubgroupGens":
        return cls.from_elements(group, group.elements, check=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def sorted_elements(self) -> list[Element]:
        return sorted(self.elements)

    def __contains__(self, g):
        return g in self.elements

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, SubgroupGens) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __le__(self, other: "SubgroupGens") -> bool:
        return self.elements <= other.elements

    def __repr__(self):
        return f"SubgroupGens(order={self.order}, generators={list(self.generators)})"


@dataclass(frozen=True)
class Partition:
    """
    A partition of ``domain``; ``classof`` maps each point to the minimal
    member of its class (in domain order).

    ``pi <= rho`` means pi is coarser than or equal to rho.
    """

    domain: tuple
    classof: Mapping

    @classmethod
    def from_labels(cls, domain: Sequence, label: Callable) -> "Partition":
        first: dict = {}
        classof = {}
        for m in domain:
            key = label(m)
            rep = first.setdefault(key, m)
            classof[m] = rep
        return cls(tuple(domain), classof)

    @classmethod
    def discrete(cls, domain: Sequence) -> "Partition":
        return cls(tuple(domain), {m: m for m in domain})

    def classes(self) -> list[frozenset]:
        groups: dict = {}
        for m in self.domain:
            groups.setdefault(self.classof[m], []).append(m)
        return [frozenset(v) for v in groups.values()]

    def class_sizes(self) -> list[int]:
        return sorted(len(c) for c in self.classes())

    def __len__(self):
        return len(set(self.classof.values()))

    def __eq__(self, other):
        return isinstance(other, Partition) and dict(self.classof) == dict(other.classof)

    def __hash__(self):
        return hash(frozenset(self.classof.items()))

    def __le__(self, other: "Partition") -> bool:
        return all(self.classof[m] == self.classof[other.classof[m]] for m in self.domain)


def orbit(H: SubgroupGens, m, action: ActionSpec) -> frozenset:
    action.act(H.group.identity(), m)
    return frozenset(action.apply(h, m) for h in H.elements)


def stabilizer(m, action: ActionSpec) -> SubgroupGens:
    G = action.group
    action.act(G.identity(), m)
    fixed = [g for g in G.elements if action.apply(g, m) == m]
    return SubgroupGens.from_elements(G, fixed, check=False)


def subgroup_star(H: SubgroupGens, action: ActionSpec) -> Partition:
    """H*, the orbit partition of H."""
    classof: dict = {}
    for m in action.domain:
        if m in classof:
            continue
        orb = orbit(H, m, action)
        for x in orb:
            classof[x] = m
    return Partition(action.domain, classof)


def partition_star(pi: Partition, action: ActionSpec) -> SubgroupGens:
    """pi*, the elements mapping every class of pi onto itself."""
    G = action.group
    cls = pi.classof
    keep = [g for g in G.elements if all(cls[action.apply(g, m)] == cls[m] for m in action.domain)]
    return SubgroupGens.from_elements(G, keep, check=False)


def closure(H: SubgroupGens, action: ActionSpec) -> SubgroupGens:
    return partition_star(subgroup_star(H, action), action)


def is_closed(H: SubgroupGens, action: ActionSpec) -> bool:
    return closure(H, action) == H


def conjugate(H: SubgroupGens, x: Element) -> SubgroupGens:
    """x^-1 H x."""
    G = H.group
    xi = G.inv(x)
    elems = frozenset(G.mul(G.mul(xi, h), x) for h in H.elements)
    gens = [G.mul(G.mul(xi, g), x) for g in H.generators]
    return SubgroupGens(G, gens, elems)


def all_subgroups(G: GroupSpec) -> list[SubgroupGens]:
    """Every subgroup, built by joining cyclic subgroups until nothing new appears."""
    cyclic: dict[frozenset, Element] = {}
    for g in G.elements:
        c = _close(G, [g])
        cyclic.setdefault(c, g)
    found: dict[frozenset, tuple] = {c: (g,) for c, g in cyclic.items()}
    frontier = list(found.items())
    while frontier:
        nxt = []
        for elems, gens in frontier:
            for c, g in cyclic.items():
                if c <= elems:
                    continue
                joined = _close(G, gens + (g,))
                if joined not in found:
                    found[joined] = gens + (g,)
                    nxt.append((joined, gens + (g,)))
        frontier = nxt
    subs = [SubgroupGens(G, gens, elems) for elems, gens in found.items()]
    return sorted(subs, key=lambda s: (s.order, s.sorted_elements()))


# --- Frobenius groups ------------------------------------------------------------------

class FrobeniusView:
    """
    A Frobenius group seen through its kernel action on K.

    The complement is the stabilizer of the kernel identity; its conjugates
    (the point stabilizers) form the family of Frobenius complements.
    """

    def __init__(self, G: GroupSpec):
        self.group = G
        self.action = kernel_action(G)
        self.kernel = self.action.domain
        self.kernel_identity = 0
        self.complement = stabilizer(self.kernel_identity, self.action)

    def kernel_element(self, u) -> Element:
        if isinstance(self.group, AffineGroup):
            return (u, 1)
        return (u, 0)

    def kernel_op(self, u, z):
        """u o z with u read as the kernel element (u, e)."""
        return self.action.apply(self.kernel_element(u), z)

    def complement_at(self, x) -> SubgroupGens:
        return stabilizer(x, self.action)

    @cached_property
    def complements(self) -> list[SubgroupGens]:
        return [self.complement_at(x) for x in self.kernel]

    @property
    def is_sharply_two_transitive(self) -> bool:
        return self.complement.order == len(self.kernel) - 1

    def verify(self) -> None:
        G = self.group
        e = G.identity()
        if G.order != len(self.kernel) * self.complement.order:
            raise NotFrobenius("|G| != |K| * |H|")
        if self.complement.order < 2:
            raise NotFrobenius("complement is trivial")
        if len(orbit(SubgroupGens.whole(G), self.kernel_identity, self.action)) != len(self.kernel):
            raise NotFrobenius("action is not transitive")
        for g in G.elements:
            if g == e:
                continue
            fixed = sum(1 for m in self.kernel if self.action.apply(g, m) == m)
            if fixed > 1:
                raise NotFrobenius(f"{g} fixes {fixed} points")


def is_frobenius(G: GroupSpec) -> bool:
    try:
        FrobeniusView(G).verify()
    except NotFrobenius:
        return False
    return True


# --- function graph complements -------------------------------------------------------

def fg_conjugate_complement(G: FunctionGraphGroup, Q: MultiPoly | FieldPoly | tuple | None = None) -> SubgroupGens:
    """
    A_Q = {(Q - a_t Q, t)}, generated by a_{Q,t} for the additive generators t.
    """
    if Q is None:
        table = G.zero
    elif isinstance(Q, tuple):
        table = Q
    else:
        table = G.table_of(Q)
    gens = []
    for t in G.additive_generators():
        gens.append((G.add_tables(table, G.neg_table(G.shift(table, t))), t))
    return SubgroupGens(G, gens)


def standard_complement(G: FunctionGraphGroup) -> SubgroupGens:
    return fg_conjugate_complement(G, None)


# --- descriptors -------------------------------------------------------------------

def group_from_descriptor(desc: Mapping | str) -> GroupSpec:
    """
    Build a group from its JSON descriptor, e.g. {"kind":"affine","q":7,"H":[1,6]}.
    """
    if isinstance(desc, str):
        desc = json.loads(desc)
    kind = desc.get("kind")
    if kind == "affine":
        f = field_of_order(int(desc["q"]))
        if "H" in desc:
            H = desc["H"]
        else:
            H = multiplicative_subgroup(f, int(desc.get("H_order", f.q - 1)))
        return AffineGroup(f, H)
    if kind == "fg":
        return FunctionGraphGroup(field_of_order(int(desc["q"])), int(desc.get("n", 1)), int(desc["d"]))
    if kind == "zpmzp":
        return ZpmZpGroup(int(desc["p"]), int(desc["m"]), desc["A"])
    if kind == "semidirect":
        return SemidirectTableGroup(desc["K"], desc["H"], desc["phi"])
    if kind == "frobenius":
        return SemidirectTableGroup.frobenius(int(desc["p"]), int(desc["r"]))
    raise InvalidGroup(f"unknown group kind {kind!r}")
