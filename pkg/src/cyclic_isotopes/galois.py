"""The cyclic extension GF(q^n)/GF(q) with its relative Frobenius.

Everything lives in one field ``K = GF(p^(m n))``; the base field ``F = GF(q)``,
``q = p^m``, is the fixed set of ``tau: x -> x^q``.  Elements are passed around
as integer encodings (see :mod:`cyclic_isotopes.ff`); F-elements keep their
K-encoding.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import gcd
from typing import Iterator

from . import linalg
from .ff import FieldError, FieldSpec, make_field

__all__ = [
    "NormNotOne",
    "NotInvertible",
    "NonGeneratingPower",
    "CyclicExtension",
    "build_extension",
]


class NormNotOne(FieldError):
    pass


class NotInvertible(FieldError):
    pass


class NonGeneratingPower(FieldError):
    pass


class CyclicExtension:
    """K/F of degree n with generator tau, norm/trace tables, S(K) and M.

    The F-basis of K is ``1, g, ..., g^(n-1)`` for the encoding-smallest
    primitive root ``g`` of K; coordinates of elements are taken in that basis.
    """

    def __init__(self, p: int, m: int, n: int):
        if m < 1 or n < 1:
            raise FieldError("m and n must be positive")
        self.p, self.m, self.n = p, m, n
        self.q = p**m
        self.K: FieldSpec = make_field(p, m * n)
        K = self.K
        self.order = K.order
        self.primitive_root = K.generator

        # tau^i as lookup tables, i = 0..n-1
        tau = [K.pow(x, self.q) for x in range(self.order)]
        self.tau_pow = [list(range(self.order))]
        for _ in range(1, n):
            prev = self.tau_pow[-1]
            self.tau_pow.append([tau[x] for x in prev])

        self.F_elems = [x for x in range(self.order) if tau[x] == x]
        if len(self.F_elems) != self.q:
            raise AssertionError("fixed field has the wrong size")  # pragma: no cover
        self.F_index = {x: i for i, x in enumerate(self.F_elems)}
        self.F_units = self.F_elems[1:]

        mul, add = K.mul, K.add
        self.norm_table = []
        self.trace_table = []
        for x in range(self.order):
            nx, tx = 1, 0
            for t in self.tau_pow:
                nx = mul(nx, t[x])
                tx = add(tx, t[x])
            self.norm_table.append(nx)
            self.trace_table.append(tx)

        self.S = frozenset(x for x in range(1, self.order) if self.norm_table[x] == 1)
        reps = {}
        for x in range(1, self.order):
            reps.setdefault(self.norm_table[x], x)
        self.M = sorted(reps.values())
        self._rep_by_norm = reps

        g = self.primitive_root
        self.basis = [K.pow(g, k) for k in range(n)]
        self.coords_table: list[tuple[int, ...]] = [()] * self.order
        seen = 0
        for cs in product(self.F_elems, repeat=n):
            x = 0
            for c, b in zip(cs, self.basis):
                if c:
                    x = add(x, mul(c, b))
            if self.coords_table[x] == ():
                seen += 1
            self.coords_table[x] = cs
        if seen != self.order:
            raise AssertionError("basis is not F-linearly independent")  # pragma: no cover

        # W[j][i] = tau^i(b_j); f(b_j) = sum_i y_i tau^i(b_j) recovers twisted coefficients
        W = [[self.tau_pow[i][b] for i in range(n)] for b in self.basis]
        self.moore_inverse = linalg.inverse(K, W)

    # --- identity

    def _key(self):
        return (self.p, self.m, self.n)

    def __eq__(self, other):
        return isinstance(other, CyclicExtension) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"CyclicExtension(GF({self.q}^{self.n}) / GF({self.q}))"

    def __reduce__(self):
        return (build_extension, self._key())

    # --- elementary maps

    def tau(self, x: int, i: int = 1) -> int:
        return self.tau_pow[i % self.n][x]

    def norm(self, x: int) -> int:
        return self.norm_table[x]

    def trace(self, x: int) -> int:
        return self.trace_table[x]

    def in_base_field(self, x: int) -> bool:
        return self.tau_pow[1 % self.n][x] == x if self.n > 1 else True

    def units(self) -> Iterator[int]:
        return iter(range(1, self.order))

    def coords(self, x: int) -> tuple[int, ...]:
        return self.coords_table[x]

    def from_coords(self, cs) -> int:
        mul, add = self.K.mul, self.K.add
        x = 0
        for c, b in zip(cs, self.basis):
            if c:
                x = add(x, mul(c, b))
        return x

    # --- Hilbert 90 and the transversal M

    def reduce(self, y: int) -> int:
        """The element of M in the S(K)-coset of y."""
        if y == 0:
            raise NotInvertible("zero has no norm class")
        return self._rep_by_norm[self.norm_table[y]]

    def hilbert90_solve(self, s: int, power: int = 1) -> int:
        """Encoding-smallest v with tau^power(v) / v = s.

        ``power`` must be coprime to n so that tau^power generates the group.
        """
        if self.n > 1 and gcd(power, self.n) != 1:
            raise NonGeneratingPower(f"tau^{power} does not generate Gal(K/F)")
        if s == 0 or self.norm_table[s] != 1:
            raise NormNotOne("element does not have norm one")
        t = self.tau_pow[power % self.n]
        mul = self.K.mul
        for v in range(1, self.order):
            if t[v] == mul(s, v):
                return v
        raise AssertionError("Hilbert 90 failed")  # pragma: no cover

    def scale_to_M(self, y: int, i: int) -> tuple[int, int]:
        """(m, v) with m in M and m = tau^i(v) v^-1 y."""
        if not 1 <= i < self.n or gcd(i, self.n) != 1:
            raise NonGeneratingPower(f"tau^{i} does not generate Gal(K/F)")
        if y == 0:
            raise NotInvertible("cannot scale zero into M")
        rep = self.reduce(y)
        v = self.hilbert90_solve(self.K.div(rep, y), i)
        return rep, v

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "n": self.n,
            "modulus": list(self.K.modulus),
            "primitive_root": self.primitive_root,
            "M": list(self.M),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CyclicExtension":
        ext = build_extension(int(obj["p"]), int(obj["m"]), int(obj["n"]))
        if "modulus" in obj and list(obj["modulus"]) != list(ext.K.modulus):
            raise FieldError("extension was serialized with a different modulus")
        return ext


@lru_cache(maxsize=None)
def build_extension(p: int, m: int, n: int) -> CyclicExtension:
    return CyclicExtension(p, m, n)


def representatives(ext: CyclicExtension) -> list[int]:
    return list(ext.M)


def norm_one_set(ext: CyclicExtension) -> frozenset[int]:
    return ext.S
