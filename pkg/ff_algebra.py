#!/usr/bin/env python3
"""
Exact arithmetic over small finite fields F_q, q = p^k.

Elements are stored as plain integers: the element with power-basis
coordinates (c_0, ..., c_{k-1}) is encoded as sum c_i * p^i. That integer is
also the canonical total order used for every min-construction and every
canonical representative in the package.

Scalar operations work on ints; the vectorized ``v*`` operations work on
numpy integer arrays and back the dense linear algebra and the bulk
polynomial evaluation used to tabulate oracles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from errors import (
    ArityMismatch,
    DivisionByZero,
    DuplicateAbscissa,
    FieldMismatch,
    Inconsistent,
    NotPrime,
    ReducibleModulus,
    Singular,
    TooFewPoints,
    TooLarge,
)

MAX_FIELD_ORDER = 2 ** 16
ADD_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, k) with q = p^k, or raise NotPrime."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise NotPrime(f"{q} is not a prime power")
    return p, k


# --- polynomials over the prime field, used only to pick the modulus ------

def _strip(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_rem(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial b over F_p."""
    r = list(a)
    db = len(b) - 1
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] % p
        if c:
            for j in range(db + 1):
                r[i - db + j] = (r[i - db + j] - c * b[j]) % p
    return _strip([x % p for x in r[:db]])


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    k = len(modulus) - 1
    for deg in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if not _poly_rem(modulus, list(low) + [1], p):
                return False
    return True


def _smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        candidate = low + [1]
        if low[0] != 0 and _is_irreducible(candidate, p):
            return tuple(candidate)
    raise AssertionError(f"no irreducible polynomial of degree {k} over F_{p}")


class FieldSpec:
    """The finite field F_{p^k} with a fixed monic irreducible modulus."""

    def __init__(self, p: int, k: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ReducibleModulus(f"modulus {modulus} is not monic of degree {k}")
        if k > 1 and not _is_irreducible(modulus, p):
            raise ReducibleModulus(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = tuple(modulus)
        self._weights = np.array([p ** i for i in range(k)], dtype=np.int64)

    # identity and display

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"F_{self.q}" if self.k == 1 else f"F_{self.q}[{self.modulus}]"

    def describe(self) -> dict:
        return {"p": self.p, "k": self.k}

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    # tables

    @cached_property
    def digits(self) -> np.ndarray:
        codes = np.arange(self.q, dtype=np.int64)
        return (codes[:, None] // self._weights[None, :]) % self.p

    @cached_property
    def _add_table(self) -> np.ndarray | None:
        if self.k == 1 or self.q > ADD_TABLE_LIMIT:
            return None
        d = self.digits
        return ((d[:, None, :] + d[None, :, :]) % self.p) @ self._weights

    @cached_property
    def _neg_table(self) -> np.ndarray:
        return ((self.p - self.digits) % self.p) @ self._weights

    def _mul_slow(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da = [(a // p ** i) % p for i in range(k)]
        db = [(b // p ** i) % p for i in range(k)]
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        rem = _poly_rem(prod, self.modulus, p)
        return sum(c * p ** i for i, c in enumerate(rem))

    @cached_property
    def _exp_log(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.q
        for g in range(1, q):
            exp = np.zeros(q - 1, dtype=np.int64)
            x = 1
            seen = set()
            for i in range(q - 1):
                exp[i] = x
                seen.add(x)
                x = x * g % self.p if self.k == 1 else self._mul_slow(x, g)
            if len(seen) == q - 1:
                log = np.zeros(q, dtype=np.int64)
                log[exp] = np.arange(q - 1, dtype=np.int64)
                return exp, log
        raise AssertionError(f"{self} has no primitive element")

    @property
    def primitive_element(self) -> int:
        return int(self._exp_log[0][1]) if self.q > 2 else 1

    # scalar arithmetic on encodings

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return n % self.p

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        table = self._add_table
        if table is not None:
            return int(table[a, b])
        d = self.digits
        return int(((d[a] + d[b]) % self.p) @ self._weights)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        return int(self._neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        exp, log = self._exp_log
        return int(exp[(log[a] + log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in {self}")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        exp, log = self._exp_log
        return int(exp[(-log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.k == 1:
            return pow(a, e, self.p)
        exp, log = self._exp_log
        return int(exp[(int(log[a]) * e) % (self.q - 1)])

    def sum(self, values: Iterable[int]) -> int:
        acc = 0
        for v in values:
            acc = self.add(acc, v)
        return acc

    # vectorized arithmetic on integer arrays

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a + b) % self.p
        table = self._add_table
        if table is not None:
            return table[a, b]
        d = self.digits
        return ((d[a] + d[b]) % self.p) @ self._weights

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return (-a) % self.p
        return self._neg_table[a]

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a * b) % self.p
        exp, log = self._exp_log
        out = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        result = np.ones_like(a)
        base = a
        while e:
            if e & 1:
                result = self.vmul(result, base)
            base = self.vmul(base, base)
            e >>= 1
        return result

    def reduce_exponent(self, a: int) -> int:
        """Exponent of the monomial x^a after reduction modulo x^q - x."""
        if a == 0:
            return 0
        return (a - 1) % (self.q - 1) + 1


@lru_cache(maxsize=None)
def field_make(p: int, k: int = 1) -> FieldSpec:
    """
    Construct F_{p^k}.

    The modulus is the lexicographically smallest monic irreducible
    polynomial of degree k over F_p, so the same (p, k) always gives the
    same encoding.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1:
        raise ValueError(f"extension degree must be >= 1, got {k}")
    if p ** k > MAX_FIELD_ORDER:
        raise TooLarge(f"q = {p}^{k} exceeds the desk-scale bound q <= {MAX_FIELD_ORDER}")
    return FieldSpec(p, k, _smallest_irreducible(p, k))


def field_of_order(q: int) -> FieldSpec:
    p, k = prime_power(q)
    return field_make(p, k)


def field_from_json(obj: Mapping) -> FieldSpec:
    return field_make(int(obj["p"]), int(obj.get("k", 1)))


@dataclass(frozen=True)
class FieldElement:
    """An element of a FieldSpec with operator overloading."""

    field: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise ValueError(f"{self.value} is not an element encoding of {self.field}")

    def _check(self, other) -> "FieldElement":
        if isinstance(other, int):
            return FieldElement(self.field, self.field.from_int(other))
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.field.digits[self.value])

    def __add__(self, other):
        o = self._check(other)
        return FieldElement(self.field, self.field.add(self.value, o.value))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        return FieldElement(self.field, self.field.sub(self.value, o.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        o = self._check(other)
        return FieldElement(self.field, self.field.mul(self.value, o.value))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._check(other)
        return FieldElement(self.field, self.field.div(self.value, o.value))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __int__(self):
        return self.value

    def __lt__(self, other):
        return self.value < self._check(other).value

    def __repr__(self):
        return f"{self.value}@{self.field!r}"


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def fe_neg(a: FieldElement) -> FieldElement:
    return -a


def fe_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


# --- univariate polynomials ---------------------------------------------------

@dataclass(frozen=True)
class FieldPoly:
    """Univariate polynomial, coefficients lowest degree first, stripped."""

    field: FieldSpec
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = list(self.coeffs)
        _strip(c)
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def zero(cls, field: FieldSpec) -> "FieldPoly":
        return cls(field, ())

    @classmethod
    def monomial(cls, field: FieldSpec, degree: int, coef: int = 1) -> "FieldPoly":
        return cls(field, (0,) * degree + (coef,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> int:
        return self.coeffs[i] if i < len(self.coeffs) else 0

    def __call__(self, x: int) -> int:
        f = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def evaluate_many(self, xs) -> np.ndarray:
        f = self.field
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in reversed(self.coeffs):
            acc = f.vadd(f.vmul(acc, xs), c)
        return acc

    def _check(self, other: "FieldPoly"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "FieldPoly") -> "FieldPoly":
        self._check(other)
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return FieldPoly(f, tuple(f.add(self.coefficient(i), other.coefficient(i)) for i in range(n)))

    def __neg__(self) -> "FieldPoly":
        return FieldPoly(self.field, tuple(self.field.neg(c) for c in self.coeffs))

    def __sub__(self, other: "FieldPoly") -> "FieldPoly":
        return self + (-other)

    def __mul__(self, other: "FieldPoly") -> "FieldPoly":
        self._check(other)
        f = self.field
        if self.is_zero() or other.is_zero():
            return FieldPoly.zero(f)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = f.add(out[i + j], f.mul(a, b))
        return FieldPoly(f, tuple(out))

    def scale(self, c: int) -> "FieldPoly":
        return FieldPoly(self.field, tuple(self.field.mul(c, x) for x in self.coeffs))

    def shift(self, t: int) -> "FieldPoly":
        """The polynomial x -> P(x - t)."""
        f = self.field
        linear = FieldPoly(f, (f.neg(t), 1))
        acc = FieldPoly.zero(f)
        for c in reversed(self.coeffs):
            acc = acc * linear + FieldPoly(f, (c,))
        return acc

    def without_constant(self) -> "FieldPoly":
        if not self.coeffs:
            return self
        return FieldPoly(self.field, (0,) + self.coeffs[1:])

    def to_json(self) -> dict:
        return {
            "field": self.field.describe(),
            "terms": [{"exp": [i], "coef": c} for i, c in enumerate(self.coeffs) if c],
        }

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = [f"{c}" if i == 0 else f"{c}*x^{i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(parts)


def lagrange_interpolate(field: FieldSpec, points: Sequence[tuple[int, int]], d: int) -> FieldPoly:
    """
    Unique polynomial of degree at most d through the given points.

    Parameters
    ----------
    field : FieldSpec
    points : sequence of (x_i, y_i)
        At least d+1 points with pairwise distinct abscissas. Points beyond
        the first d+1 are checked against the fitted polynomial.
    d : int
        Degree bound.
    """
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa(f"abscissas are not distinct: {xs}")
    if len(points) < d + 1:
        raise TooFewPoints(f"need {d + 1} points for degree {d}, got {len(points)}")
    used = points[: d + 1]
    result = FieldPoly.zero(field)
    for i, (xi, yi) in enumerate(used):
        if yi == 0:
            continue
        basis = FieldPoly(field, (1,))
        denom = 1
        for j, (xj, _) in enumerate(used):
            if j != i:
                basis = basis * FieldPoly(field, (field.neg(xj), 1))
                denom = field.mul(denom, field.sub(xi, xj))
        result = result + basis.scale(field.div(yi, denom))
    for x, y in points[d + 1:]:
        if result(x) != y:
            raise Inconsistent(f"point ({x}, {y}) is off the degree-{d} interpolant")
    return result


# --- multivariate polynomials -------------------------------------------------

class MultiPoly:
    """
    Multivariate polynomial over F_q, reduced modulo x_i^q - x_i.

    Terms map exponent tuples to nonzero coefficients. Reduction happens at
    construction, so two MultiPoly objects are equal exactly when they
    define the same function on F_q^n.
    """

    __slots__ = ("field", "nvars", "_terms")

    def __init__(self, field: FieldSpec, nvars: int, terms: Mapping[tuple[int, ...], int] | None = None):
        self.field = field
        self.nvars = nvars
        reduced: dict[tuple[int, ...], int] = {}
        for exp, coef in (terms or {}).items():
            if len(exp) != nvars:
                raise ArityMismatch(f"exponent {exp} does not have {nvars} entries")
            if not 0 <= int(coef) < field.q:
                raise ValueError(f"coefficient {coef} is not an element encoding of {field}")
            key = tuple(field.reduce_exponent(int(a)) for a in exp)
            reduced[key] = field.add(reduced.get(key, 0), int(coef))
        self._terms = {e: c for e, c in reduced.items() if c}

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coefficient(self, exp: tuple[int, ...]) -> int:
        return self._terms.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    @property
    def constant(self) -> int:
        return self._terms.get((0,) * self.nvars, 0)

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.field == other.field
            and self.nvars == other.nvars
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.field, self.nvars, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*x^{e}" for e, c in self.items())

    def _check(self, other: "MultiPoly"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if other.nvars != self.nvars:
            raise ArityMismatch(f"{self.nvars} vs {other.nvars} variables")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        f = self.field
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = f.add(out.get(e, 0), c)
        return MultiPoly(f, self.nvars, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.field, self.nvars, {e: self.field.neg(c) for e, c in self._terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def scale(self, c: int) -> "MultiPoly":
        return MultiPoly(self.field, self.nvars, {e: self.field.mul(c, v) for e, v in self._terms.items()})

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.nvars:
            raise ArityMismatch(f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        f = self.field
        acc = 0
        for exp, coef in self._terms.items():
            term = coef
            for x, a in zip(point, exp):
                if a:
                    term = f.mul(term, f.pow(x, a))
            acc = f.add(acc, term)
        return acc

    __call__ = evaluate

    def evaluate_many(self, points) -> np.ndarray:
        """Evaluate at every row of an (N, nvars) integer array."""
        points = np.asarray(points, dtype=np.int64)
        if points.ndim != 2 or points.shape[1] != self.nvars:
            raise ArityMismatch(f"expected an (N, {self.nvars}) array, got shape {points.shape}")
        f = self.field
        acc = np.zeros(points.shape[0], dtype=np.int64)
        for exp, coef in self._terms.items():
            term = np.full(points.shape[0], coef, dtype=np.int64)
            for i, a in enumerate(exp):
                if a:
                    term = f.vmul(term, f.vpow(points[:, i], a))
            acc = f.vadd(acc, term)
        return acc

    def homogeneous_part(self, degree: int) -> "MultiPoly":
        return MultiPoly(self.field, self.nvars, {e: c for e, c in self._terms.items() if sum(e) == degree})

    def restrict_to_line(self, direction: Sequence[int]) -> FieldPoly:
        """The univariate polynomial x -> P(v_1 x, ..., v_n x)."""
        f = self.field
        coeffs: dict[int, int] = {}
        for exp, coef in self._terms.items():
            value = coef
            for v, a in zip(direction, exp):
                if a:
                    value = f.mul(value, f.pow(v, a))
            power = f.reduce_exponent(sum(exp))
            coeffs[power] = f.add(coeffs.get(power, 0), value)
        top = max(coeffs, default=-1)
        return FieldPoly(f, tuple(coeffs.get(i, 0) for i in range(top + 1)))

    def to_json(self) -> dict:
        return {
            "field": self.field.describe(),
            "nvars": self.nvars,
            "terms": [{"exp": list(e), "coef": c} for e, c in self.items()],
        }

    @classmethod
    def from_json(cls, obj: Mapping, field: FieldSpec | None = None, nvars: int | None = None) -> "MultiPoly":
        if field is None:
            field = field_from_json(obj["field"])
        terms = {tuple(t["exp"]): int(t["coef"]) for t in obj.get("terms", [])}
        if nvars is None:
            nvars = obj.get("nvars") or (len(next(iter(terms))) if terms else 1)
        return cls(field, nvars, terms)

    @classmethod
    def from_univariate(cls, poly: FieldPoly) -> "MultiPoly":
        return cls(poly.field, 1, {(i,): c for i, c in enumerate(poly.coeffs)})

    def to_univariate(self) -> FieldPoly:
        if self.nvars != 1:
            raise ArityMismatch("only a 1-variable polynomial converts to FieldPoly")
        top = self.degree
        return FieldPoly(self.field, tuple(self._terms.get((i,), 0) for i in range(top + 1)))


def monomial_value(field: FieldSpec, exp: Sequence[int], point: Sequence[int]) -> int:
    """m_alpha(v), the value of the monomial with exponent alpha at v."""
    if len(exp) != len(point):
        raise ArityMismatch(f"exponent {tuple(exp)} and point {tuple(point)} differ in length")
    acc = 1
    for x, a in zip(point, exp):
        acc = field.mul(acc, field.pow(x, a))
    return acc


def poly_eval(P: FieldPoly | MultiPoly, point) -> int:
    if isinstance(P, FieldPoly):
        if isinstance(point, (tuple, list)):
            if len(point) != 1:
                raise ArityMismatch(f"univariate polynomial evaluated at {point}")
            point = point[0]
        return P(int(point))
    return P.evaluate(tuple(point))


# --- dense linear algebra --------------------------------------------------------

class MatrixFq:
    """Dense matrix over F_q backed by an int64 numpy array."""

    def __init__(self, field: FieldSpec, data):
        arr = np.array(data, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
        self.field = field
        self.data = arr

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __eq__(self, other):
        return isinstance(other, MatrixFq) and self.field == other.field and np.array_equal(self.data, other.data)

    def __repr__(self):
        return f"MatrixFq({self.field!r}, {self.tolist()})"

    def apply(self, v: Sequence[int]) -> list[int]:
        """Matrix-vector product M v."""
        f = self.field
        acc = np.zeros(self.rows, dtype=np.int64)
        for j, x in enumerate(v):
            if x:
                acc = f.vadd(acc, f.vmul(self.data[:, j], x))
        return [int(a) for a in acc]

    def rank(self) -> int:
        return mat_rank(self)


def row_reduce(field: FieldSpec, data: np.ndarray, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """
    Reduced row echelon form over F_q.

    Parameters
    ----------
    data : (m, n) int array
    ncols : int, optional
        Only the first ``ncols`` columns are eligible as pivots; row
        operations still span the full width (used for augmented systems).

    Returns
    -------
    (R, pivot_cols)
    """
    R = np.array(data, dtype=np.int64, copy=True)
    m = R.shape[0]
    n = R.shape[1] if ncols is None else ncols
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        found = row + int(nz[0])
        if found != row:
            R[[row, found]] = R[[found, row]]
        R[row] = field.vmul(R[row], field.inv(int(R[row, col])))
        factors = R[:, col].copy()
        factors[row] = 0
        if np.any(factors):
            R = field.vsub(R, field.vmul(factors[:, None], R[row][None, :]))
        pivots.append(col)
        row += 1
    return R, pivots


def mat_rank(M: MatrixFq) -> int:
    if M.data.size == 0:
        return 0
    return len(row_reduce(M.field, M.data)[1])


def mat_kernel_basis(M: MatrixFq) -> list[list[int]]:
    f = M.field
    if M.rows == 0:
        return [[1 if i == j else 0 for i in range(M.cols)] for j in range(M.cols)]
    R, pivots = row_reduce(f, M.data)
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * M.cols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = f.neg(int(R[r, fc]))
        basis.append(v)
    return basis


def mat_kernel_vector(M: MatrixFq) -> list[int] | None:
    """A nonzero v with M v = 0, or None when M has full column rank."""
    basis = mat_kernel_basis(M)
    return basis[0] if basis else None


def mat_solve(M: MatrixFq, y: Sequence[int], unique: bool = True) -> list[int]:
    """
    Solve M z = y over F_q.

    With ``unique`` the system must have exactly one solution (Singular
    otherwise); without it a particular solution with free variables set to
    zero is returned.
    """
    f = M.field
    if len(y) != M.rows:
        raise ArityMismatch(f"right-hand side has {len(y)} entries, matrix has {M.rows} rows")
    aug = np.concatenate([M.data, np.asarray(y, dtype=np.int64).reshape(-1, 1)], axis=1)
    R, pivots = row_reduce(f, aug, ncols=M.cols)
    rank = len(pivots)
    if np.any(R[rank:, -1]):
        raise Inconsistent("linear system has no solution")
    if unique and rank < M.cols:
        raise Singular(f"rank {rank} < {M.cols} unknowns")
    z = [0] * M.cols
    for r, pc in enumerate(pivots):
        z[pc] = int(R[r, -1])
    return z
