"""Twisted operators ``sum_i L(y_i) tau^i``, the K-coordinates of End_F(K).

Composition follows the cyclic algebra (K/F, tau, 1):
``(y_i t^i)(z_j t^j) = y_i tau^i(z_j) t^(i+j)`` with ``t^n = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .galois import CyclicExtension

__all__ = [
    "SingularOperator",
    "TwistedOperator",
    "apply",
    "compose",
    "to_matrix",
    "from_matrix",
    "reduced_norm",
    "right_mul_matrix",
    "is_invertible",
    "inverse",
    "left_mul",
    "identity",
    "tau_power",
]


class SingularOperator(ArithmeticError):
    pass


@dataclass(frozen=True)
class TwistedOperator:
    ext: CyclicExtension
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != self.ext.n:
            raise ValueError(f"expected {self.ext.n} coefficients, got {len(coeffs)}")
        if any(not 0 <= c < self.ext.order for c in coeffs):
            raise ValueError("coefficient encoding out of range")
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, x: int) -> int:
        return apply(self, x)

    def __matmul__(self, other: "TwistedOperator") -> "TwistedOperator":
        return compose(self, other)

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def is_identity(self) -> bool:
        return self.coeffs == (1,) + (0,) * (self.ext.n - 1)

    def scaled(self, a: int) -> "TwistedOperator":
        """L(a) composed with self."""
        mul = self.ext.K.mul
        return TwistedOperator(self.ext, tuple(mul(a, y) for y in self.coeffs))

    def conjugate(self, s: int) -> "TwistedOperator":
        """sigma f sigma^-1 for sigma = tau^s."""
        t = self.ext.tau_pow[s % self.ext.n]
        return TwistedOperator(self.ext, tuple(t[y] for y in self.coeffs))


def identity(ext: CyclicExtension) -> TwistedOperator:
    return TwistedOperator(ext, (1,) + (0,) * (ext.n - 1))


def left_mul(ext: CyclicExtension, u: int) -> TwistedOperator:
    return TwistedOperator(ext, (u,) + (0,) * (ext.n - 1))


def tau_power(ext: CyclicExtension, s: int) -> TwistedOperator:
    c = [0] * ext.n
    c[s % ext.n] = 1
    return TwistedOperator(ext, tuple(c))


def apply(f: TwistedOperator, x: int) -> int:
    ext = f.ext
    mul, add = ext.K.mul, ext.K.add
    out = 0
    for y, t in zip(f.coeffs, ext.tau_pow):
        if y:
            out = add(out, mul(y, t[x]))
    return out


def compose(f: TwistedOperator, g: TwistedOperator) -> TwistedOperator:
    """f after g."""
    ext = f.ext
    if g.ext != ext:
        raise ValueError("operators over different extensions")
    n = ext.n
    mul, add = ext.K.mul, ext.K.add
    out = [0] * n
    for i, y in enumerate(f.coeffs):
        if not y:
            continue
        t = ext.tau_pow[i]
        for j, z in enumerate(g.coeffs):
            if z:
                k = (i + j) % n
                out[k] = add(out[k], mul(y, t[z]))
    return TwistedOperator(ext, tuple(out))


def to_matrix(f: TwistedOperator) -> linalg.Matrix:
    """Matrix over F (K-encoded entries) in the basis 1, g, ..., g^(n-1).

    Column j holds the coordinates of f(b_j), so composition is matrix product.
    """
    ext = f.ext
    cols = [ext.coords(apply(f, b)) for b in ext.basis]
    return linalg.transpose(cols)


def from_matrix(ext: CyclicExtension, mx: Sequence[Sequence[int]]) -> TwistedOperator:
    """The unique twisted operator with matrix ``mx``.

    Solves ``sum_i y_i tau^i(b_j) = f(b_j)`` for all basis vectors b_j; the
    coefficient matrix ``[tau^i(b_j)]`` is invertible by Dedekind independence.
    """
    n = ext.n
    if len(mx) != n or any(len(row) != n for row in mx):
        raise ValueError(f"expected an {n}x{n} matrix")
    images = [ext.from_coords([mx[r][j] for r in range(n)]) for j in range(n)]
    y = linalg.matvec(ext.K, ext.moore_inverse, images)
    return TwistedOperator(ext, tuple(y))


def right_mul_matrix(f: TwistedOperator) -> linalg.Matrix:
    """R(y) for y = sum y_i t^i in (K/F, tau, 1): entry (i, j) is tau^j(y_{i-j})."""
    ext = f.ext
    n = ext.n
    y = f.coeffs
    return [[ext.tau_pow[j][y[(i - j) % n]] for j in range(n)] for i in range(n)]


def reduced_norm(f: TwistedOperator) -> int:
    """det_K R(y); lies in F and equals det_F of the operator."""
    return linalg.det(f.ext.K, right_mul_matrix(f))


def is_invertible(f: TwistedOperator) -> bool:
    return reduced_norm(f) != 0


def inverse(f: TwistedOperator) -> TwistedOperator:
    if not is_invertible(f):
        raise SingularOperator(f"operator {list(f.coeffs)} has reduced norm 0")
    mx = linalg.inverse(f.ext.K, to_matrix(f))
    return from_matrix(f.ext, mx)
