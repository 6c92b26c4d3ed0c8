"""Exact arithmetic in GF(p^n).

Elements are stored as an integer index in ``0..q-1`` whose base-``p`` digits
are the polynomial coefficients (constant term first).  Every field carries
dense addition/multiplication tables over these indices so that the bulk
routines in :mod:`alg2d.algebra` and :mod:`alg2d.census` can work on plain
integers (or numpy arrays of them) without touching ``FieldElement``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np


class FieldError(ValueError):
    """Bad field parameters (non-prime p, reducible modulus, ...)."""


class MixedFieldError(TypeError):
    """Operands live in different fields."""


class FieldZeroDivisionError(ZeroDivisionError):
    """Inverse of zero requested."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


# --- polynomials over Z_p, coefficient lists constant-term first -------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    m = _trim([c % p for c in m])
    if not m:
        raise ZeroDivisionError("polynomial modulus is zero")
    lead_inv = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1] * lead_inv % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def poly_divmod(a: Sequence[int], m: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim([c % p for c in a])
    m = _trim([c % p for c in m])
    lead_inv = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    quot = [0] * max(len(a) - dm, 1)
    while a and len(a) - 1 >= dm:
        c = a[-1] * lead_inv % p
        shift = len(a) - 1 - dm
        quot[shift] = c
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return _trim(quot), a


def monic_polys(p: int, degree: int) -> Iterator[list[int]]:
    """All monic polynomials of the given degree, lexicographic constant-first."""
    for lower in itertools.product(range(p), repeat=degree):
        yield list(lower) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _trim([c % p for c in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for divisor in monic_polys(p, d):
            if not poly_mod(poly, divisor, p):
                return False
    return True


def smallest_irreducible(p: int, n: int) -> list[int]:
    for cand in monic_polys(p, n):
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {n} over Z_{p}")  # unreachable


# --- the field -----------------------------------------------------------------

class FieldSpec:
    """GF(p^n) realised as Z_p[t]/(modulus).

    Instances are immutable and interned by :func:`make_field`, so identity
    comparison is the normal case; ``==`` still compares ``(p, n, modulus)``.
    """

    __slots__ = ("p", "n", "modulus", "q", "add", "sub", "mul", "neg", "inv",
                 "_add_np", "_mul_np", "_neg_np", "_inv_np", "__weakref__")

    def __init__(self, p: int, n: int, modulus: Sequence[int]):
        self.p = p
        self.n = n
        self.modulus = tuple(int(c) % p for c in modulus)
        self.q = p ** n
        q = self.q
        digits = [self._digits(i) for i in range(q)]
        index = {tuple(d): i for i, d in enumerate(digits)}

        add = [[0] * q for _ in range(q)]
        mul = [[0] * q for _ in range(q)]
        for i in range(q):
            di = digits[i]
            for j in range(i, q):
                dj = digits[j]
                s = index[tuple((x + y) % p for x, y in zip(di, dj))]
                prod = poly_mod(poly_mul(_trim(list(di)), _trim(list(dj)), p), self.modulus, p)
                m = index[tuple(prod + [0] * (n - len(prod)))]
                add[i][j] = add[j][i] = s
                mul[i][j] = mul[j][i] = m
        neg = [index[tuple((-x) % p for x in d)] for d in digits]
        sub = [[add[i][neg[j]] for j in range(q)] for i in range(q)]
        if q <= 9:
            inv = _inverse_table_bruteforce(mul, q)
        else:
            inv = [0] + [self._inverse_euclid(i) for i in range(1, q)]

        self.add = tuple(tuple(r) for r in add)
        self.sub = tuple(tuple(r) for r in sub)
        self.mul = tuple(tuple(r) for r in mul)
        self.neg = tuple(neg)
        self.inv = tuple(inv)
        self._add_np = np.array(add, dtype=np.int64)
        self._mul_np = np.array(mul, dtype=np.int64)
        self._neg_np = np.array(neg, dtype=np.int64)
        self._inv_np = np.array(inv, dtype=np.int64)

    # numpy views for the vectorised paths
    @property
    def add_table(self) -> np.ndarray:
        return self._add_np

    @property
    def mul_table(self) -> np.ndarray:
        return self._mul_np

    @property
    def neg_table(self) -> np.ndarray:
        return self._neg_np

    @property
    def inv_table(self) -> np.ndarray:
        return self._inv_np

    def _digits(self, i: int) -> list[int]:
        out = []
        for _ in range(self.n):
            i, r = divmod(i, self.p)
            out.append(r)
        return out

    def coeffs(self, i: int) -> tuple[int, ...]:
        return tuple(self._digits(i))

    def index_of(self, coeffs: Sequence[int]) -> int:
        coeffs = poly_mod(list(coeffs), self.modulus, self.p) if len(coeffs) > self.n else list(coeffs)
        out = 0
        for c in reversed(list(coeffs) + [0] * (self.n - len(coeffs))):
            out = out * self.p + c % self.p
        return out

    def _inverse_euclid(self, i: int) -> int:
        """Extended Euclid in Z_p[t] against the modulus."""
        if i == 0:
            raise FieldZeroDivisionError("0 has no inverse")
        p = self.p
        r0, r1 = list(self.modulus), _trim(list(self._digits(i)))
        s0, s1 = [], [1]
        while r1:
            quot, rem = poly_divmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, poly_sub(s0, poly_mul(quot, s1, p), p)
        # r0 is a nonzero constant
        c = pow(r0[0], p - 2, p)
        return self.index_of([x * c % p for x in s0])

    # element-level conveniences
    def __call__(self, value: int | Sequence[int]) -> "FieldElement":
        """``F(3)`` reduces an integer into the prime subfield; ``F([c0, c1])`` takes coefficients."""
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, self.from_int(int(value)))
        return FieldElement(self, self.index_of(value))

    def from_int(self, k: int) -> int:
        """Index of the image of the integer ``k`` (lies in the prime subfield)."""
        return k % self.p

    def element(self, index: int) -> "FieldElement":
        if not 0 <= index < self.q:
            raise FieldError(f"index {index} out of range for GF({self.q})")
        return FieldElement(self, index)

    def elements(self) -> Iterator["FieldElement"]:
        for i in range(self.q):
            yield FieldElement(self, i)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def pow(self, i: int, k: int) -> int:
        """Index-level exponentiation; negative exponents invert first."""
        if k < 0:
            i, k = self.inverse(i), -k
        out, base = 1, i
        while k:
            if k & 1:
                out = self.mul[out][base]
            base = self.mul[base][base]
            k >>= 1
        return out

    def inverse(self, i: int) -> int:
        if i == 0:
            raise FieldZeroDivisionError("0 has no inverse")
        return self.inv[i]

    def div(self, i: int, j: int) -> int:
        return self.mul[i][self.inverse(j)]

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    @property
    def char_case(self) -> str:
        """``"2"``, ``"3"`` or ``"generic"`` (characteristic other than 2, 3)."""
        return {2: "2", 3: "3"}.get(self.p, "generic")

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.modulus))

    def __repr__(self) -> str:
        if self.n == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.n}, modulus={list(self.modulus)})"


def _inverse_table_bruteforce(mul, q: int) -> list[int]:
    inv = [0] * q
    for i in range(1, q):
        inv[i] = next(j for j in range(1, q) if mul[i][j] == 1)
    return inv


@lru_cache(maxsize=None)
def _make_field(p: int, n: int, modulus: tuple[int, ...]) -> FieldSpec:
    return FieldSpec(p, n, modulus)


def make_field(p: int, n: int = 1, modulus_override: Sequence[int] | None = None) -> FieldSpec:
    """Build (or fetch the interned) GF(p^n).

    The default modulus is the lexicographically smallest monic irreducible
    of degree ``n``, comparing coefficient lists constant term first.
    """
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise FieldError(f"p={p} is not prime")
    if n < 1:
        raise FieldError(f"extension degree must be >= 1, got {n}")
    mod = None
    if modulus_override is not None:
        mod = tuple(int(c) % p for c in modulus_override)
        if len(mod) != n + 1 or mod[-1] != 1:
            raise FieldError(f"modulus override must be monic of degree {n}: {list(modulus_override)}")
        if not is_irreducible(mod, p):
            raise FieldError(f"modulus {list(mod)} is reducible over Z_{p}")
    else:
        mod = tuple(smallest_irreducible(int(p), int(n)))
    return _make_field(int(p), int(n), mod)


def field_from_json(d: dict) -> FieldSpec:
    return make_field(d["p"], d["n"], d.get("modulus"))


@dataclass(frozen=True, eq=False)
class FieldElement:
    """A value in a :class:`FieldSpec`, ordered and hashed by its index."""

    field: FieldSpec
    index: int

    def _check(self, other: "FieldElement | int") -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise MixedFieldError(f"{self.field!r} vs {other.field!r}")
            return other.index
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented  # type: ignore[return-value]

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.index)

    def __add__(self, other):
        j = self._check(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add[self.index][j])

    __radd__ = __add__

    def __sub__(self, other):
        j = self._check(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub[self.index][j])

    def __rsub__(self, other):
        j = self._check(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub[j][self.index])

    def __mul__(self, other):
        j = self._check(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul[self.index][j])

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg[self.index])

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inverse(self.index))

    def __truediv__(self, other):
        j = self._check(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.index, j))

    def __rtruediv__(self, other):
        j = self._check(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(j, self.index))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.index, k))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.index == other.index
        if isinstance(other, (int, np.integer)):
            return self.index == self.field.from_int(int(other))
        return NotImplemented

    def __lt__(self, other: "FieldElement") -> bool:
        return self.index < self._check(other)

    def __hash__(self) -> int:
        return hash((self.field.q, self.index))

    def __bool__(self) -> bool:
        return self.index != 0

    def __int__(self) -> int:
        return self.index

    def __repr__(self) -> str:
        if self.field.n == 1:
            return str(self.index)
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
                terms.append(f"{c if (c != 1 or k == 0) else ''}{mono}")
        return " + ".join(reversed(terms)) or "0"


# --- multiplicative structure ----------------------------------------------------

def arithmetic(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Dispatch form of the four basic operations (``neg`` ignores ``b``)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown op {op!r}")


def invert(a: FieldElement) -> FieldElement:
    return a.inverse()


def multiplicative_order(spec: FieldSpec, i: int) -> int:
    if i == 0:
        raise FieldZeroDivisionError("0 has no multiplicative order")
    k, x = 1, i
    while x != 1:
        x = spec.mul[x][i]
        k += 1
    return k


def generator(spec: FieldSpec) -> FieldElement:
    """Smallest-index element of multiplicative order ``q - 1``."""
    for i in range(1, spec.q):
        if multiplicative_order(spec, i) == spec.q - 1:
            return spec.element(i)
    raise FieldError("no generator")  # unreachable: F* is cyclic


@dataclass(frozen=True)
class PowerCosets:
    """Cosets of ``F*`` modulo k-th powers, plus the zero class.

    ``reps[0]`` is zero; ``reps[1 + i]`` is ``s**i`` for the generator ``s``.
    ``member[x]`` is the position in ``reps`` of the class containing index ``x``.
    """

    k: int
    reps: tuple[int, ...]
    member: tuple[int, ...] = field(repr=False)

    @property
    def nonzero_count(self) -> int:
        return len(self.reps) - 1

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.reps]
        for x, c in enumerate(self.member):
            out[c].append(x)
        return out


def power_cosets(spec: FieldSpec, k: int) -> PowerCosets:
    if k not in (2, 3):
        raise ValueError(f"power_cosets supports k in {{2, 3}}, got {k}")
    s = generator(spec).index
    powers = {spec.pow(x, k) for x in range(1, spec.q)}
    m = math.gcd(k, spec.q - 1)
    reps = [0] + [spec.pow(s, i) for i in range(m)]
    member = [0] * spec.q
    for x in range(1, spec.q):
        # x lies in s^i * H  iff  x / s^i is a k-th power
        member[x] = next(1 + i for i in range(m) if spec.div(x, reps[1 + i]) in powers)
    return PowerCosets(k, tuple(reps), tuple(member))
