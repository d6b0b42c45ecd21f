"""Dense matrices over a finite field, entries as integer encodings.

Matrices are lists of rows.  Elimination always pivots on the first nonzero
entry in row order, so every routine is deterministic.
"""
from __future__ import annotations

from typing import Sequence

from .ff import FieldSpec

Matrix = list[list[int]]


class SingularMatrix(ArithmeticError):
    pass


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def copy(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(row) for row in a]


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(fld: FieldSpec, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    mul, add = fld.mul, fld.add
    out = []
    for row in a:
        new = []
        for col in bt:
            s = 0
            for x, y in zip(row, col):
                if x and y:
                    s = add(s, mul(x, y))
            new.append(s)
        out.append(new)
    return out


def matvec(fld: FieldSpec, a: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    mul, add = fld.mul, fld.add
    out = []
    for row in a:
        s = 0
        for r, v in zip(row, x):
            if r and v:
                s = add(s, mul(r, v))
        out.append(s)
    return out


def det(fld: FieldSpec, a: Sequence[Sequence[int]]) -> int:
    m = copy(a)
    n = len(m)
    mul, sub, inv = fld.mul, fld.sub, fld.inv
    result = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = fld.neg(result)
        pc = m[c][c]
        result = mul(result, pc)
        ip = inv(pc)
        row_c = m[c]
        for r in range(c + 1, n):
            if m[r][c]:
                factor = mul(m[r][c], ip)
                row_r = m[r]
                for k in range(c, n):
                    if row_c[k]:
                        row_r[k] = sub(row_r[k], mul(factor, row_c[k]))
    return result


def rref(fld: FieldSpec, a: Sequence[Sequence[int]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = copy(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    mul, sub, inv = fld.mul, fld.sub, fld.inv
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        ip = inv(m[r][c])
        m[r] = [mul(ip, x) for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                factor = m[i][c]
                m[i] = [sub(x, mul(factor, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(fld: FieldSpec, a: Sequence[Sequence[int]]) -> int:
    return len(rref(fld, a)[1])


def inverse(fld: FieldSpec, a: Sequence[Sequence[int]]) -> Matrix:
    n = len(a)
    aug = [list(row) + identity(n)[i] for i, row in enumerate(a)]
    red, pivots = rref(fld, aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is not invertible")
    return [row[n:] for row in red]


def solve(fld: FieldSpec, a: Sequence[Sequence[int]], b: Sequence[int]) -> list[int]:
    """Unique solution of a x = b for square invertible a."""
    n = len(a)
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    red, pivots = rref(fld, aug)
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        raise SingularMatrix("system has no unique solution")
    return [red[i][n] for i in range(n)]


def kernel(fld: FieldSpec, a: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of the right null space of a."""
    if not a:
        return []
    cols = len(a[0])
    red, pivots = rref(fld, a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * cols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = fld.neg(red[i][fc])
        basis.append(v)
    return basis
