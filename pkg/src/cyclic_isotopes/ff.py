"""Exact arithmetic in GF(p^d).

Elements are stored as their canonical integer encoding ``enc(a) = sum a_i p^i``
(little-endian base-p digits of the coefficient vector of ``a`` modulo the
defining polynomial).  All hot-path arithmetic works on these integers through
methods of :class:`FieldSpec`; :class:`FieldElement` wraps an integer for the
public, operator-overloaded API.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FieldError",
    "NotPrime",
    "ReducibleModulus",
    "DivisionByZero",
    "FieldMismatch",
    "FieldSpec",
    "FieldElement",
    "make_field",
    "is_prime",
]

# full log/antilog tables up to this order; an explicit addition table up to
# ADD_TABLE_LIMIT (odd characteristic only, p = 2 uses xor)
TABLE_LIMIT = 1 << 16
ADD_TABLE_LIMIT = 1024


class FieldError(ValueError):
    pass


class NotPrime(FieldError):
    pass


class ReducibleModulus(FieldError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class FieldMismatch(FieldError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomials over GF(p): little-endian coefficient lists, no trailing zeros


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _poly_mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_mod(out, m, p)


def _poly_powmod(a: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, m, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, m, p)
        e >>= 1
        if e:
            base = _poly_mulmod(base, base, m, p)
    return result


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _is_irreducible(m: Sequence[int], p: int) -> bool:
    """Ben-Or: m (monic, degree d) is irreducible iff gcd(x^(p^i) - x, m) = 1 for i <= d/2."""
    d = len(m) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    xp = [0, 1]
    for _ in range(d // 2):
        xp = _poly_powmod(xp, p, m, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_poly_gcd(m, diff, p)) > 1:
            return False
    return True


def _digits(a: int, p: int, d: int) -> list[int]:
    out = []
    for _ in range(d):
        a, r = divmod(a, p)
        out.append(r)
    return out


class FieldSpec:
    """GF(p^d) as GF(p)[x]/(modulus) with precomputed tables.

    Use :func:`make_field` rather than constructing directly; it validates the
    input and caches instances so that tables are built once per field.
    """

    def __init__(self, p: int, d: int, modulus: Sequence[int]):
        self.p = p
        self.d = d
        self.modulus = tuple(int(c) for c in modulus)
        self.order = p**d
        self._pows = [p**i for i in range(d + 1)]

        n1 = self.order - 1
        self.generator = self._find_generator()
        self._tables = self.order <= TABLE_LIMIT
        if self._tables:
            exp = [0] * (2 * n1 + 1)
            log = [0] * self.order
            x = 1
            for k in range(n1):
                exp[k] = x
                log[x] = k
                x = self._mul_slow(x, self.generator)
            for k in range(n1, 2 * n1 + 1):
                exp[k] = exp[k - n1]
            self._exp = exp
            self._log = log

        self._add_table = None
        self._neg = None
        if p != 2:
            digits = np.array([_digits(a, p, d) for a in range(self.order)], dtype=np.int64)
            w = np.array(self._pows[:d], dtype=np.int64)
            self._neg = (((-digits) % p) @ w).tolist()
            if self.order <= ADD_TABLE_LIMIT:
                s = (digits[:, None, :] + digits[None, :, :]) % p
                self._add_table = (s @ w).tolist()
            else:
                self._digits = digits.tolist()

    # --- encoding

    def encode(self, coeffs: Sequence[int]) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.d:
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        return sum((int(c) % self.p) * self._pows[i] for i, c in enumerate(coeffs))

    def decode(self, a: int) -> list[int]:
        return _digits(a, self.p, self.d)

    def elements(self) -> range:
        return range(self.order)

    def __call__(self, a: int | Sequence[int]) -> "FieldElement":
        if isinstance(a, (list, tuple)):
            return FieldElement(self.encode(a), self)
        a = int(a)
        if not 0 <= a < self.order:
            raise ValueError(f"encoding {a} out of range for GF({self.order})")
        return FieldElement(a, self)

    # --- integer-level arithmetic

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        da, db = self._digits[a], self._digits[b]
        p = self.p
        return sum(((x + y) % p) * w for x, y, w in zip(da, db, self._pows))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._tables:
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_slow(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self._tables:
            return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]
        return self._pow_slow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivisionByZero("negative power of zero")
            return 1 if e == 0 else 0
        if self._tables:
            return self._exp[(self._log[a] * e) % (self.order - 1)]
        if e < 0:
            a, e = self.inv(a), -e
        return self._pow_slow(a, e)

    def log(self, a: int) -> int:
        """Discrete log to base :attr:`generator`."""
        if a == 0:
            raise DivisionByZero("log of zero")
        if self._tables:
            return self._log[a]
        x, k = 1, 0
        while x != a:
            x = self._mul_slow(x, self.generator)
            k += 1
        return k

    def frobenius(self, a: int, q: int) -> int:
        """a -> a^q for q a power of p whose exponent divides d."""
        self._check_frobenius_power(q)
        return self.pow(a, q)

    def _check_frobenius_power(self, q: int) -> int:
        m, t = 0, q
        while t > 1 and t % self.p == 0:
            t //= self.p
            m += 1
        if t != 1 or (m and self.d % m) or (m == 0 and q != 1):
            raise FieldError(f"{q} is not p^m with m | {self.d} (p = {self.p})")
        return m

    def sum(self, items: Iterable[int]) -> int:
        s = 0
        for x in items:
            s = self.add(s, x)
        return s

    # --- schoolbook path (also the oracle for the tables)

    def _mul_slow(self, a: int, b: int) -> int:
        prod = _poly_mulmod(self.decode(a), self.decode(b), self.modulus, self.p)
        return self.encode(prod)

    def _pow_slow(self, a: int, e: int) -> int:
        return self.encode(_poly_powmod(self.decode(a), e, self.modulus, self.p))

    def _find_generator(self) -> int:
        n1 = self.order - 1
        if n1 == 1:
            return 1
        factors = _prime_factors(n1)
        for g in range(2, self.order):
            if all(self._pow_slow(g, n1 // r) != 1 for r in factors):
                return g
        raise AssertionError("multiplicative group is not cyclic")  # pragma: no cover

    # --- identity / serialization

    def _key(self):
        return (self.p, self.d, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FieldSpec(p={self.p}, d={self.d}, modulus={list(self.modulus)})"

    def __reduce__(self):
        return (make_field, (self.p, self.d, self.modulus))

    def to_json(self) -> dict:
        return {"p": self.p, "d": self.d, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        return make_field(int(obj["p"]), int(obj["d"]), obj.get("modulus"))


@lru_cache(maxsize=None)
def _smallest_irreducible(p: int, d: int) -> tuple[int, ...]:
    for k in range(p**d):
        m = _digits(k, p, d) + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@lru_cache(maxsize=None)
def _cached_field(p: int, d: int, modulus: tuple[int, ...]) -> FieldSpec:
    return FieldSpec(p, d, modulus)


def make_field(p: int, d: int, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Validated GF(p^d).

    Without ``modulus`` the lexicographically smallest monic irreducible of
    degree d is used (smallest by the integer encoding of its coefficients).
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if d < 1:
        raise FieldError("degree must be positive")
    if modulus is None:
        modulus = _smallest_irreducible(p, d)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != d + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {d}")
        if not _is_irreducible(list(modulus), p):
            raise ReducibleModulus(f"{list(modulus)} is reducible over GF({p})")
    return _cached_field(p, d, tuple(modulus))


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: FieldSpec

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch("elements belong to different fields")
            return other.value
        if isinstance(other, int):
            return self.field.encode([other])
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field.add(self.value, b), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field.sub(self.value, b), self.field)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElement(self.field.neg(self.value), self.field)

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field.mul(self.value, b), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field.div(self.value, b), self.field)

    def __pow__(self, e: int):
        return FieldElement(self.field.pow(self.value, e), self.field)

    def inv(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def frobenius(self, q: int) -> "FieldElement":
        return FieldElement(self.field.frobenius(self.value, q), self.field)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch("elements belong to different fields")
            return self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.encode([other])
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"GF({self.field.order})[{self.value}]"
