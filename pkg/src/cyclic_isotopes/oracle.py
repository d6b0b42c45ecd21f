"""Brute-force isomorphism testing over GL(n, F).

This module only uses structure tensors and plain linear algebra over F; it
never looks at twisted coefficients, so it is an independent check on the
critical-relations machinery.

F-elements are handled here as indices ``0..q-1`` (``ext.F_elems[i]`` is the
K-encoding of index i).  For prime q the index is the residue itself.
"""
from __future__ import annotations

from collections import OrderedDict
from functools import lru_cache
from itertools import product
from typing import Optional

import numpy as np

from . import linalg
from .algebra import AlgebraStructure
from .galois import CyclicExtension

__all__ = ["BudgetExceeded", "gl_order", "gl_matrices", "BruteForceOracle", "iso_bruteforce", "oracle_for", "fingerprint"]

GL_LIMIT = 2_000_000
CACHE_BYTES = 256 * 2**20


class BudgetExceeded(RuntimeError):
    pass


def gl_order(q: int, n: int) -> int:
    out = 1
    for k in range(n):
        out *= q**n - q**k
    return out


class _Arith:
    """Vectorized F arithmetic on index arrays."""

    def __init__(self, ext: CyclicExtension):
        self.q = ext.q
        self.prime = ext.m == 1
        if not self.prime:
            K, E, idx = ext.K, ext.F_elems, ext.F_index
            self.add_t = np.array([[idx[K.add(a, b)] for b in E] for a in E], dtype=np.int64)
            self.mul_t = np.array([[idx[K.mul(a, b)] for b in E] for a in E], dtype=np.int64)

    def add(self, a, b):
        return (a + b) % self.q if self.prime else self.add_t[a, b]

    def mul(self, a, b):
        return (a * b) % self.q if self.prime else self.mul_t[a, b]


def _vector_codes(q: int, n: int) -> list[tuple[int, ...]]:
    # vectors ordered by sum v_k q^k
    return [tuple(reversed(v)) for v in product(range(q), repeat=n)]


@lru_cache(maxsize=8)
def gl_matrices(ext: CyclicExtension) -> np.ndarray:
    """All invertible n x n matrices over F, shape (G, n, n), as F-indices.

    Enumeration order: the first column runs over nonzero vectors, each later
    column over vectors outside the span of the earlier ones; vectors are
    ordered by ``sum v_k q^k``.  The identity comes first.
    """
    q, n = ext.q, ext.n
    size = gl_order(q, n)
    if size > GL_LIMIT:
        raise BudgetExceeded(f"|GL({n}, {q})| = {size} exceeds the brute-force limit")
    ar = _Arith(ext)
    vecs = _vector_codes(q, n)
    code = {v: i for i, v in enumerate(vecs)}
    scal = [[tuple(int(ar.mul(a, x)) for x in v) for v in vecs] for a in range(q)]

    def vadd(x, y):
        return tuple(int(ar.add(a, b)) for a, b in zip(x, y))

    out = np.empty((size, n, n), dtype=np.int8)
    k = 0
    cols: list[tuple[int, ...]] = []

    def rec(span: set[int]):
        nonlocal k
        if len(cols) == n:
            out[k] = np.array(cols, dtype=np.int8).T
            k += 1
            return
        for idx, v in enumerate(vecs):
            if idx in span:
                continue
            new_span = set()
            for s in span:
                for a in range(q):
                    new_span.add(code[vadd(vecs[s], scal[a][idx])])
            cols.append(v)
            rec(new_span)
            cols.pop()

    rec({0})
    assert k == size
    return out


class BruteForceOracle:
    """phi: A -> B is an isomorphism iff phi(A(e_i, e_j)) = B(phi e_i, phi e_j) for all i, j.

    For each algebra the two sides are tabulated over the whole of GL(n, F)
    and cached, so a pair test is a single array comparison.
    """

    def __init__(self, ext: CyclicExtension, cache_size: int = 2048):
        self.ext = ext
        self.gl = gl_matrices(ext).astype(np.int64)
        self.ar = _Arith(ext)
        self._lhs: OrderedDict = OrderedDict()
        self._rhs: OrderedDict = OrderedDict()
        per_entry = len(self.gl) * ext.n**3
        self.cache_size = max(4, min(cache_size, CACHE_BYTES // per_entry))

    def _cached(self, store: OrderedDict, key, fn):
        if key in store:
            store.move_to_end(key)
            return store[key]
        val = fn()
        store[key] = val
        if len(store) > self.cache_size:
            store.popitem(last=False)
        return val

    def lhs(self, A: AlgebraStructure) -> np.ndarray:
        """phi(e_i e_j) for every phi, shape (G, n, n, n)."""

        def build():
            a = A.array()
            if self.ar.prime:
                return (np.einsum("gkl,ijl->gijk", self.gl, a) % self.ext.q).astype(np.int8)
            G, n = len(self.gl), self.ext.n
            out = np.zeros((G, n, n, n), dtype=np.int64)
            for i, j, k, l in product(range(n), repeat=4):
                out[:, i, j, k] = self.ar.add(out[:, i, j, k], self.ar.mul(self.gl[:, k, l], a[i, j, l]))
            return out.astype(np.int8)

        return self._cached(self._lhs, A.c, build)

    def rhs(self, B: AlgebraStructure) -> np.ndarray:
        """phi(e_i) phi(e_j) in B for every phi, shape (G, n, n, n)."""

        def build():
            b = B.array()
            phi = self.gl
            if self.ar.prime:
                t = np.einsum("gsi,stk->gitk", phi, b)
                return (np.einsum("gtj,gitk->gijk", phi, t) % self.ext.q).astype(np.int8)
            G, n = len(phi), self.ext.n
            out = np.zeros((G, n, n, n), dtype=np.int64)
            ar = self.ar
            for i, j, k, s, t in product(range(n), repeat=5):
                term = ar.mul(ar.mul(phi[:, s, i], phi[:, t, j]), b[s, t, k])
                out[:, i, j, k] = ar.add(out[:, i, j, k], term)
            return out.astype(np.int8)

        return self._cached(self._rhs, B.c, build)

    def find(self, A: AlgebraStructure, B: AlgebraStructure) -> Optional[np.ndarray]:
        """First isomorphism A -> B in enumeration order, as an index matrix."""
        if A.ext != self.ext or B.ext != self.ext:
            raise ValueError("algebras over a different extension")
        ok = np.all(self.lhs(A) == self.rhs(B), axis=(1, 2, 3))
        hits = np.flatnonzero(ok)
        if len(hits) == 0:
            return None
        return self.gl[hits[0]]

    def is_isomorphic(self, A: AlgebraStructure, B: AlgebraStructure) -> bool:
        return self.find(A, B) is not None

    def partition(self, algebras: list[AlgebraStructure]) -> list[list[int]]:
        """Isomorphism classes as lists of indices, each headed by its first member.

        Only algebras with equal :func:`fingerprint` are compared.
        """
        buckets: dict = {}
        classes: list[list[int]] = []
        for idx, A in enumerate(algebras):
            bucket = buckets.setdefault(fingerprint(A), [])
            for cl in bucket:
                if self.is_isomorphic(algebras[cl[0]], A):
                    cl.append(idx)
                    break
            else:
                cl = [idx]
                bucket.append(cl)
                classes.append(cl)
        return classes

    def to_matrix(self, phi_idx: np.ndarray) -> list[list[int]]:
        E = self.ext.F_elems
        return [[E[int(x)] for x in row] for row in phi_idx]


def fingerprint(A: AlgebraStructure) -> tuple:
    """An isomorphism invariant computed from the tensor alone.

    An isomorphism phi: A -> B conjugates left and right multiplications,
    ``L_B(phi x) = phi L_A(x) phi^-1``, so the multiset over x != 0 of
    ``det L(x)``, ``det R(x)`` and ``det(L(x) - c R(x))`` for c in F is invariant.
    """
    ext = A.ext
    K = ext.K
    out = []
    for x in range(1, ext.order):
        lx, rx = A.left_matrix(x), A.right_matrix(x)
        row = [linalg.det(K, lx), linalg.det(K, rx)]
        for c in ext.F_units:
            row.append(linalg.det(K, [[K.sub(a, K.mul(c, b)) for a, b in zip(ra, rb)] for ra, rb in zip(lx, rx)]))
        out.append(tuple(row))
    return tuple(sorted(out))


@lru_cache(maxsize=8)
def oracle_for(ext: CyclicExtension) -> BruteForceOracle:
    return BruteForceOracle(ext)


def iso_bruteforce(A: AlgebraStructure, B: AlgebraStructure) -> Optional[list[list[int]]]:
    """First phi in GL(n, F) with phi(x A y) = phi(x) B phi(y), as a matrix of K-encodings."""
    if A.ext != B.ext:
        raise ValueError("algebras over different extensions")
    oracle = oracle_for(A.ext)
    phi = oracle.find(A, B)
    return None if phi is None else oracle.to_matrix(phi)
