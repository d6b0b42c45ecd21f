"""Nonassociative algebra structures on V = K (as an F-space), isotopes and hearts.

An :class:`AlgebraStructure` stores its structure tensor ``c[i][j][k]`` in the
F-basis ``b_0..b_{n-1}`` of the extension; ``b_i b_j = sum_k c[i][j][k] b_k``.
Algebra elements are identified with elements of K through that basis, so an
element is again a K-encoding.  Linear maps are F-matrices in the same basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .galois import CyclicExtension, build_extension
from .twistop import (
    SingularOperator,
    TwistedOperator,
    from_matrix,
    identity,
    is_invertible,
)

__all__ = [
    "SingularMap",
    "SingularAlgebra",
    "NotAField",
    "AlgebraStructure",
    "IsotopePresentation",
    "HeartDecomposition",
    "make_presentation",
    "field_algebra",
    "isotope",
    "transport",
    "from_presentation",
    "is_regular",
    "kaplansky_heart",
    "recognize_field_heart",
    "heart_decomposition",
    "decompose_as_presentation",
]

Tensor = tuple[tuple[tuple[int, ...], ...], ...]

EXHAUSTIVE_PAIR_LIMIT = 512


class SingularMap(ArithmeticError):
    pass


class SingularAlgebra(ArithmeticError):
    pass


class NotAField(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraStructure:
    ext: CyclicExtension
    c: Tensor
    tag: Optional[dict] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        n = self.ext.n
        c = tuple(tuple(tuple(int(x) for x in cell) for cell in row) for row in self.c)
        if len(c) != n or any(len(r) != n or any(len(cell) != n for cell in r) for r in c):
            raise ValueError(f"structure tensor must be {n}x{n}x{n}")
        F = self.ext.F_index
        if any(x not in F for r in c for cell in r for x in cell):
            raise ValueError("structure constants must lie in the base field")
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return self.ext.n

    # --- arithmetic on coordinate vectors

    def mul_coords(self, x: Sequence[int], y: Sequence[int]) -> list[int]:
        K = self.ext.K
        mul, add = K.mul, K.add
        out = [0] * self.n
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.c[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                s = mul(xi, yj)
                for k, ck in enumerate(row[j]):
                    if ck:
                        out[k] = add(out[k], mul(s, ck))
        return out

    def mul(self, x: int, y: int) -> int:
        ext = self.ext
        return ext.from_coords(self.mul_coords(ext.coords(x), ext.coords(y)))

    def left_matrix(self, u: int) -> linalg.Matrix:
        """Matrix of x -> u x."""
        cu = self.ext.coords(u)
        e = linalg.identity(self.n)
        return linalg.transpose([self.mul_coords(cu, e[j]) for j in range(self.n)])

    def right_matrix(self, v: int) -> linalg.Matrix:
        """Matrix of x -> x v."""
        cv = self.ext.coords(v)
        e = linalg.identity(self.n)
        return linalg.transpose([self.mul_coords(e[j], cv) for j in range(self.n)])

    # --- structural predicates (checked on basis vectors, which suffices by bilinearity)

    def is_commutative(self) -> bool:
        n = self.n
        return all(self.c[i][j] == self.c[j][i] for i in range(n) for j in range(n))

    def is_associative(self) -> bool:
        e = linalg.identity(self.n)
        for i, j, k in product(range(self.n), repeat=3):
            left = self.mul_coords(self.mul_coords(e[i], e[j]), e[k])
            right = self.mul_coords(e[i], self.mul_coords(e[j], e[k]))
            if left != right:
                return False
        return True

    def unit(self) -> Optional[int]:
        """The two-sided identity element, if any."""
        K = self.ext.K
        n = self.n
        # sum_i e_i c[i][j][k] = delta_jk  and  sum_i e_i c[j][i][k] = delta_jk
        rows, rhs = [], []
        for j in range(n):
            for k in range(n):
                rows.append([self.c[i][j][k] for i in range(n)])
                rhs.append(1 if j == k else 0)
                rows.append([self.c[j][i][k] for i in range(n)])
                rhs.append(1 if j == k else 0)
        aug = [r + [b] for r, b in zip(rows, rhs)]
        red, pivots = linalg.rref(K, aug)
        if n in pivots:
            return None
        sol = [0] * n
        for r, pc in enumerate(pivots):
            sol[pc] = red[r][n]
        e = self.ext.from_coords(sol)
        return e if self.left_matrix(e) == linalg.identity(n) else None

    def zero_divisor_pair(self, exhaustive: Optional[bool] = None) -> Optional[tuple[int, int]]:
        """First (a, b), both nonzero, with a b = 0, or None.

        Pairs are scanned exhaustively when q^n is small; otherwise the exact
        criterion "L(a) singular" is used and b is read off its kernel.
        """
        ext = self.ext
        if exhaustive is None:
            exhaustive = ext.order <= EXHAUSTIVE_PAIR_LIMIT
        K = ext.K
        for a in range(1, ext.order):
            la = self.left_matrix(a)
            if exhaustive:
                for b in range(1, ext.order):
                    if not any(linalg.matvec(K, la, ext.coords(b))):
                        return a, b
            elif linalg.det(K, la) == 0:
                ker = linalg.kernel(K, la)
                return a, ext.from_coords(ker[0])
        return None

    def is_division(self) -> bool:
        return self.zero_divisor_pair() is None

    def opposite(self) -> "AlgebraStructure":
        n = self.n
        c = tuple(tuple(self.c[j][i] for j in range(n)) for i in range(n))
        return AlgebraStructure(self.ext, c)

    # --- views

    def array(self) -> np.ndarray:
        """Structure constants as F-indices, shape (n, n, n)."""
        idx = self.ext.F_index
        return np.array([[[idx[x] for x in cell] for cell in row] for row in self.c], dtype=np.int64)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q_spec": {"p": self.ext.p, "m": self.ext.m},
            "c": [[list(cell) for cell in row] for row in self.c],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AlgebraStructure":
        q = obj["q_spec"]
        ext = build_extension(int(q["p"]), int(q["m"]), int(obj["n"]))
        return cls(ext, obj["c"])


@dataclass(frozen=True)
class IsotopePresentation:
    """K^(f,g): x * y = f(x) g(y)."""

    ext: CyclicExtension
    f: TwistedOperator
    g: TwistedOperator

    def to_json(self) -> dict:
        return {"ext": self.ext.to_json(), "f": self.f.to_json(), "g": self.g.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "IsotopePresentation":
        ext = CyclicExtension.from_json(obj["ext"])
        return make_presentation(ext, obj["f"], obj["g"])

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.f.coeffs, self.g.coeffs


def make_presentation(ext: CyclicExtension, f, g) -> IsotopePresentation:
    """Validated presentation; f and g may be operators or coefficient sequences."""
    ops = []
    for name, op in (("f", f), ("g", g)):
        if not isinstance(op, TwistedOperator):
            op = TwistedOperator(ext, tuple(op))
        if not is_invertible(op):
            raise SingularOperator(f"{name} = {list(op.coeffs)} is not invertible")
        ops.append(op)
    return IsotopePresentation(ext, ops[0], ops[1])


def field_algebra(ext: CyclicExtension) -> AlgebraStructure:
    """The tensor of K itself."""
    return from_presentation(IsotopePresentation(ext, identity(ext), identity(ext)))


def isotope(
    A: AlgebraStructure,
    f: Sequence[Sequence[int]],
    g: Sequence[Sequence[int]],
    h: Optional[Sequence[Sequence[int]]] = None,
) -> AlgebraStructure:
    """A^(f,g,h): x * y = h(f(x) A g(y)); h defaults to the identity."""
    K = A.ext.K
    n = A.n
    mats = [f, g] + ([h] if h is not None else [])
    for mx in mats:
        if len(mx) != n or any(len(r) != n for r in mx):
            raise ValueError("dimension mismatch")
        if linalg.det(K, mx) == 0:
            raise SingularMap("isotope requires invertible maps")
    fc = linalg.transpose(f)
    gc = linalg.transpose(g)
    c = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = A.mul_coords(fc[i], gc[j])
            if h is not None:
                prod = linalg.matvec(K, h, prod)
            row.append(tuple(prod))
        c.append(tuple(row))
    return AlgebraStructure(A.ext, tuple(c))


def transport(A: AlgebraStructure, phi: Sequence[Sequence[int]]) -> AlgebraStructure:
    """The algebra making phi: A -> phi.A an isomorphism."""
    phi_inv = linalg.inverse(A.ext.K, phi)
    return isotope(A, phi_inv, phi_inv, phi)


def from_presentation(P: IsotopePresentation) -> AlgebraStructure:
    ext = P.ext
    K = ext.K
    fb = [P.f(b) for b in ext.basis]
    gb = [P.g(b) for b in ext.basis]
    c = tuple(tuple(ext.coords(K.mul(x, y)) for y in gb) for x in fb)
    return AlgebraStructure(ext, c, tag={"f": P.f.to_json(), "g": P.g.to_json()})


def is_regular(A: AlgebraStructure) -> Optional[tuple[int, int]]:
    """First u (encoding order) with L(u) invertible and first v with R(v) invertible."""
    K = A.ext.K
    u = next((x for x in range(A.ext.order) if linalg.det(K, A.left_matrix(x))), None)
    if u is None:
        return None
    v = next((x for x in range(A.ext.order) if linalg.det(K, A.right_matrix(x))), None)
    if v is None:
        return None
    return u, v


@dataclass(frozen=True)
class Heart:
    """Kaplansky data: A = B^(f,g) with f = R_A(v), g = L_A(u), unit e = u v."""

    B: AlgebraStructure
    f: linalg.Matrix
    g: linalg.Matrix
    u: int
    v: int
    unit: int


def kaplansky_heart(A: AlgebraStructure, uv: Optional[tuple[int, int]] = None) -> Heart:
    if uv is None:
        uv = is_regular(A)
        if uv is None:
            raise SingularAlgebra("algebra is not regular")
    u, v = uv
    K = A.ext.K
    f = A.right_matrix(v)
    g = A.left_matrix(u)
    try:
        f_inv = linalg.inverse(K, f)
        g_inv = linalg.inverse(K, g)
    except linalg.SingularMatrix:
        raise SingularAlgebra(f"R({v}) or L({u}) is not invertible") from None
    B = isotope(A, f_inv, g_inv)
    return Heart(B, f, g, u, v, A.mul(u, v))


def _minimal_relation(B: AlgebraStructure, b: int, one: int) -> Optional[list[int]]:
    """Coefficients c_0..c_{n-1} with b^n = sum c_i b^i if 1, b, .., b^(n-1) are independent."""
    ext = B.ext
    n = B.n
    powers = [ext.coords(one)]
    cb = ext.coords(b)
    for _ in range(n):
        powers.append(B.mul_coords(powers[-1], cb))
    basis = linalg.transpose(powers[:n])
    if linalg.rank(ext.K, basis) < n:
        return None
    return linalg.solve(ext.K, basis, powers[n])


def recognize_field_heart(B: AlgebraStructure, ext: Optional[CyclicExtension] = None) -> linalg.Matrix:
    """An F-algebra isomorphism B -> K (as a matrix), for B a field of order q^n.

    Raises NotAField when B is not unital, commutative, associative and
    zero-divisor free.
    """
    ext = ext or B.ext
    K = ext.K
    n = ext.n
    one = B.unit()
    if one is None:
        raise NotAField("algebra is not unital")
    if not B.is_commutative():
        raise NotAField("algebra is not commutative")
    if not B.is_associative():
        raise NotAField("algebra is not associative")
    if B.zero_divisor_pair(exhaustive=False) is not None:
        raise NotAField("algebra has zero divisors")

    for b in range(ext.order):
        rel = _minimal_relation(B, b, one)
        if rel is not None:
            break
    else:  # pragma: no cover - a finite field always has a primitive element
        raise AssertionError("no element of full degree")

    def minpoly_at(r: int) -> int:
        # r^n - sum c_i r^i
        rk, out = 1, 0
        for c in rel:
            if c:
                out = K.add(out, K.mul(c, rk))
            rk = K.mul(rk, r)
        return K.sub(rk, out)

    root = next((r for r in range(ext.order) if minpoly_at(r) == 0), None)
    if root is None:
        raise AssertionError("minimal polynomial has no root in K")  # NoRoot

    src_cols, dst_cols = [], []
    cb = ext.coords(b)
    x = ext.coords(one)
    rk = 1
    for _ in range(n):
        src_cols.append(x)
        dst_cols.append(list(ext.coords(rk)))
        x = B.mul_coords(x, cb)
        rk = K.mul(rk, root)
    phi = linalg.matmul(K, linalg.transpose(dst_cols), linalg.inverse(K, linalg.transpose(src_cols)))

    e = linalg.identity(n)
    phi_cols = [ext.from_coords(col) for col in linalg.transpose(phi)]
    for i in range(n):
        for j in range(n):
            lhs = ext.from_coords(linalg.matvec(K, phi, B.mul_coords(e[i], e[j])))
            if lhs != K.mul(phi_cols[i], phi_cols[j]):
                raise AssertionError("recognition map is not multiplicative")
    return phi


@dataclass(frozen=True)
class HeartDecomposition:
    """phi: A -> K^(f,g) is an isomorphism; heart data from Kaplansky's trick."""

    presentation: IsotopePresentation
    phi: linalg.Matrix
    heart: Heart


def heart_decomposition(A: AlgebraStructure, ext: Optional[CyclicExtension] = None) -> Optional[HeartDecomposition]:
    ext = ext or A.ext
    uv = is_regular(A)
    if uv is None:
        return None
    heart = kaplansky_heart(A, uv)
    try:
        phi = recognize_field_heart(heart.B, ext)
    except NotAField:
        return None
    K = ext.K
    phi_inv = linalg.inverse(K, phi)
    f = linalg.matmul(K, linalg.matmul(K, phi, heart.f), phi_inv)
    g = linalg.matmul(K, linalg.matmul(K, phi, heart.g), phi_inv)
    P = IsotopePresentation(ext, from_matrix(ext, f), from_matrix(ext, g))
    return HeartDecomposition(P, phi, heart)


def decompose_as_presentation(A: AlgebraStructure, ext: Optional[CyclicExtension] = None) -> Optional[IsotopePresentation]:
    d = heart_decomposition(A, ext)
    return None if d is None else d.presentation
