"""Canonical forms and isomorphism decisions for isotopes K^(f,g).

Isomorphisms between two isotopes of K are parametrized by ``(u, v, sigma)``
with ``u, v`` in K^x and ``sigma = tau^s``.  Such a triple sends the
coefficients ``y`` of f and ``z`` of g to::

    y'_i = tau^i(u v) v^-1 sigma(y_i)
    z'_i = tau^i(u v) u^-1 sigma(z_i)

(the second line is ``g' = L(u^-1) sigma g sigma^-1 L(uv)`` in coefficients).
Witnesses compose like a group, which is how canonicalization tracks the map
from an input presentation to its normal form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Sequence, Union

from . import linalg
from .algebra import AlgebraStructure, IsotopePresentation, from_presentation
from .galois import CyclicExtension, NotInvertible
from .twistop import TwistedOperator, compose, is_invertible, left_mul, reduced_norm, to_matrix

__all__ = [
    "ExtensionMismatch",
    "TypeMismatch",
    "TypeTag",
    "CanonicalForm",
    "CriticalRelations",
    "ExplicitMap",
    "IsoWitness",
    "IDENTITY_SIGMA",
    "act",
    "act_presentation",
    "compose_witness",
    "invert_witness",
    "verify_witness",
    "type_partition",
    "type_tag",
    "canonicalize",
    "iso_critical",
    "iso_cubic_cases",
    "det_invariant",
    "witness_from_json",
]

IDENTITY_SIGMA = 0


class ExtensionMismatch(ValueError):
    pass


class TypeMismatch(ValueError):
    pass


# --- witnesses


@dataclass(frozen=True)
class CriticalRelations:
    """u, v in K^x and sigma = tau^sigma."""

    u: int
    v: int
    sigma: int

    def to_json(self) -> dict:
        return {"kind": "critical", "u": self.u, "v": self.v, "sigma": self.sigma}


@dataclass(frozen=True)
class ExplicitMap:
    phi: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(tuple(int(x) for x in row) for row in self.phi))

    def to_json(self) -> dict:
        return {"kind": "map", "phi": [list(r) for r in self.phi]}


IsoWitness = Union[CriticalRelations, ExplicitMap]


def witness_from_json(obj: dict) -> IsoWitness:
    if obj.get("kind") == "critical":
        return CriticalRelations(int(obj["u"]), int(obj["v"]), int(obj["sigma"]))
    if obj.get("kind") == "map":
        return ExplicitMap(obj["phi"])
    raise ValueError(f"unknown witness kind {obj.get('kind')!r}")


def _coeffs(P) -> tuple[CyclicExtension, tuple[int, ...], tuple[int, ...]]:
    if isinstance(P, CanonicalForm):
        P = P.presentation
    return P.ext, P.f.coeffs, P.g.coeffs


def act(ext: CyclicExtension, y: Sequence[int], z: Sequence[int], w: CriticalRelations):
    """Coefficients of the image presentation under w."""
    K = ext.K
    mul, inv = K.mul, K.inv
    uv = mul(w.u, w.v)
    s = ext.tau_pow[w.sigma % ext.n]
    vi, ui = inv(w.v), inv(w.u)
    y2, z2 = [], []
    for i in range(ext.n):
        t = ext.tau_pow[i][uv]
        y2.append(mul(mul(t, vi), s[y[i]]))
        z2.append(mul(mul(t, ui), s[z[i]]))
    return tuple(y2), tuple(z2)


def act_presentation(P: IsotopePresentation, w: CriticalRelations) -> IsotopePresentation:
    ext = P.ext
    y, z = act(ext, P.f.coeffs, P.g.coeffs, w)
    return IsotopePresentation(ext, TwistedOperator(ext, y), TwistedOperator(ext, z))


def compose_witness(ext: CyclicExtension, second: CriticalRelations, first: CriticalRelations) -> CriticalRelations:
    """The witness for applying ``first`` and then ``second``."""
    mul = ext.K.mul
    s = ext.tau_pow[second.sigma % ext.n]
    return CriticalRelations(
        mul(second.u, s[first.u]), mul(second.v, s[first.v]), (first.sigma + second.sigma) % ext.n
    )


def invert_witness(ext: CyclicExtension, w: CriticalRelations) -> CriticalRelations:
    back = (-w.sigma) % ext.n
    t = ext.tau_pow[back]
    return CriticalRelations(t[ext.K.inv(w.u)], t[ext.K.inv(w.v)], back)


def verify_witness(P, P2, w: IsoWitness) -> bool:
    """Re-check a witness by direct substitution.

    Critical relations are checked coefficientwise for f and as an operator
    identity for g; explicit maps on every pair of basis vectors.
    """
    ext, y, z = _coeffs(P)
    ext2, y2, z2 = _coeffs(P2)
    if ext != ext2:
        raise ExtensionMismatch("presentations over different extensions")
    if isinstance(w, ExplicitMap):
        A = from_presentation(P if isinstance(P, IsotopePresentation) else P.presentation)
        B = from_presentation(P2 if isinstance(P2, IsotopePresentation) else P2.presentation)
        return explicit_map_holds(A, B, w.phi)
    K = ext.K
    if w.u == 0 or w.v == 0:
        return False
    mul = K.mul
    s = ext.tau_pow[w.sigma % ext.n]
    vi = K.inv(w.v)
    for i in range(ext.n):
        t = ext.tau_pow[i]
        if y2[i] != mul(mul(mul(t[w.u], t[w.v]), vi), s[y[i]]):
            return False
    g = TwistedOperator(ext, z)
    sgs = g.conjugate(w.sigma)
    rhs = compose(compose(left_mul(ext, K.inv(w.u)), sgs), left_mul(ext, mul(w.u, w.v)))
    return rhs.coeffs == tuple(z2)


def explicit_map_holds(A: AlgebraStructure, B: AlgebraStructure, phi) -> bool:
    n = A.n
    fld = A.ext.K
    cols = [[phi[r][j] for r in range(n)] for j in range(n)]
    for i in range(n):
        for j in range(n):
            lhs = linalg.matvec(fld, phi, list(A.c[i][j]))
            if lhs != B.mul_coords(cols[i], cols[j]):
                return False
    return True


# --- types


def type_partition(f: TwistedOperator) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """(N0, N1, N2): indices of zero, nonzero non-invertible and invertible coefficients."""
    n0 = tuple(i for i, y in enumerate(f.coeffs) if y == 0)
    n2 = tuple(i for i, y in enumerate(f.coeffs) if y != 0)
    return n0, (), n2


CUBIC_TYPES = {
    1: "f = 1 + y1 t + y2 t^2, y1, y2 nonzero",
    2: "f = 1 + y2 t^2",
    3: "f = 1 + y1 t",
    4: "f = id, g without constant term",
    5: "f = id, g with constant term 1",
    6: "f = t + y2 t^2",
    7: "f = t^2",
    8: "f = t",
}

# zero coefficients of f in each cubic type
CUBIC_N0 = {1: (), 2: (1,), 3: (2,), 4: (1, 2), 5: (1, 2), 6: (0,), 7: (0, 1), 8: (0, 2)}

GENERIC_TYPES = {
    1: "f = 1 + ..., no zero coefficients",
    2: "f = 1 + ..., some zero coefficients, f != id",
    3: "f = id, g without constant term",
    4: "f = id, g with constant term 1",
    5: "f without constant term",
}


@dataclass(frozen=True)
class TypeTag:
    index: int
    n0: tuple[int, ...]
    n1: tuple[int, ...]
    n2: tuple[int, ...]
    cubic: bool

    @property
    def key(self) -> tuple:
        return (self.index, self.n0)

    def describe(self) -> str:
        return (CUBIC_TYPES if self.cubic else GENERIC_TYPES)[self.index]

    def to_json(self) -> dict:
        return {"index": self.index, "N0": list(self.n0), "N1": list(self.n1), "N2": list(self.n2), "cubic": self.cubic}


def type_tag(P) -> TypeTag:
    """Type of a presentation.  Only zero patterns matter, so P need not be canonical."""
    ext, y, z = _coeffs(P)
    n0, n1, n2 = type_partition(TwistedOperator(ext, y))
    only_const = all(c == 0 for c in y[1:])
    if ext.n == 3:
        if y[0]:
            if y[1] and y[2]:
                idx = 1
            elif y[2]:
                idx = 2
            elif y[1]:
                idx = 3
            else:
                idx = 5 if z[0] else 4
        else:
            idx = 6 if (y[1] and y[2]) else (7 if y[2] else 8)
        return TypeTag(idx, n0, n1, n2, True)
    if y[0]:
        if only_const:
            idx = 4 if z[0] else 3
        else:
            idx = 2 if n0 else 1
    else:
        idx = 5
    return TypeTag(idx, n0, n1, n2, False)


@dataclass(frozen=True)
class CanonicalForm:
    presentation: IsotopePresentation
    tag: TypeTag
    witness: CriticalRelations = field(compare=False)

    @property
    def ext(self) -> CyclicExtension:
        return self.presentation.ext

    @property
    def f(self) -> tuple[int, ...]:
        return self.presentation.f.coeffs

    @property
    def g(self) -> tuple[int, ...]:
        return self.presentation.g.coeffs

    def sort_key(self) -> tuple:
        return (self.tag.index, self.f, self.g)

    def to_json(self) -> dict:
        return {
            "f": list(self.f),
            "g": list(self.g),
            "type": self.tag.to_json(),
            "witness": self.witness.to_json(),
        }


def canonicalize(P: IsotopePresentation) -> CanonicalForm:
    """Normal form of P under the critical-relations action, with the witness P -> normal form.

    For n = 3 this produces the eight cubic types; otherwise only the constant
    term of f, one generating coefficient and (for f = id) the constant term of
    g are normalized.
    """
    if isinstance(P, CanonicalForm):
        P = P.presentation
    ext = P.ext
    K = ext.K
    inv, mul, tau = K.inv, K.mul, ext.tau
    y, z = P.f.coeffs, P.g.coeffs
    if not is_invertible(P.f) or not is_invertible(P.g):
        raise NotInvertible("presentation operators must be invertible")
    total = CriticalRelations(1, 1, 0)

    def step(w: CriticalRelations):
        nonlocal y, z, total
        y, z = act(ext, y, z, w)
        total = compose_witness(ext, w, total)

    n = ext.n
    if y[0]:
        if y[0] != 1:
            step(CriticalRelations(inv(y[0]), 1, 0))
        rest = [i for i in range(1, n) if y[i]]
        if not rest:
            if z[0] and z[0] != 1:
                step(CriticalRelations(1, inv(z[0]), 0))
        else:
            gen = [i for i in rest if gcd(i, n) == 1]
            if gen:
                i = gen[0]
                _, v = ext.scale_to_M(y[i], i)
                step(CriticalRelations(1, v, 0))
    elif n == 3:
        if y[1] and y[2]:
            if y[1] != 1:
                step(CriticalRelations(tau(inv(y[1]), 2), 1, 0))
            _, v = ext.scale_to_M(y[2], 1)
            step(CriticalRelations(K.div(tau(v, 2), v), v, 0))
        elif y[2]:
            if y[2] != 1:
                step(CriticalRelations(tau(inv(y[2]), 1), 1, 0))
        elif y[1] != 1:
            step(CriticalRelations(tau(inv(y[1]), 2), 1, 0))
    out = IsotopePresentation(ext, TwistedOperator(ext, y), TwistedOperator(ext, z))
    return CanonicalForm(out, type_tag(out), total)


# --- decision by critical relations


def _relations_hold(ext, y, z, y2, z2, u, v, s) -> bool:
    K = ext.K
    mul = K.mul
    st = ext.tau_pow[s]
    uv = mul(u, v)
    vi, ui = K.inv(v), K.inv(u)
    for i in range(ext.n):
        t = ext.tau_pow[i][uv]
        if y2[i] != mul(mul(t, vi), st[y[i]]):
            return False
        if z2[i] != mul(mul(t, ui), st[z[i]]):
            return False
    return True


def iso_critical(P, P2, *, exhaustive: bool = False) -> Optional[CriticalRelations]:
    """First (sigma, u, v) in lexicographic order carrying P to P2, or None.

    Because g is invertible some coefficient z_j is nonzero, and the relation
    for z'_j fixes v once sigma and u are chosen; likewise a nonzero y_0 fixes
    u.  ``exhaustive=True`` scans all of K^x x K^x instead (for testing).
    """
    ext, y, z = _coeffs(P)
    ext2, y2, z2 = _coeffs(P2)
    if ext != ext2:
        raise ExtensionMismatch("presentations over different extensions")
    n = ext.n
    K = ext.K
    mul, div = K.mul, K.div
    zero_y = tuple(c == 0 for c in y)
    zero_z = tuple(c == 0 for c in z)
    if zero_y != tuple(c == 0 for c in y2) or zero_z != tuple(c == 0 for c in z2):
        return None
    units = range(1, ext.order)
    j = next(i for i in range(n) if z[i])
    for s in range(n):
        st = ext.tau_pow[s]
        if exhaustive:
            for u in units:
                for v in units:
                    if _relations_hold(ext, y, z, y2, z2, u, v, s):
                        return CriticalRelations(u, v, s)
            continue
        if y[0]:
            us = [div(y2[0], st[y[0]])]
        else:
            us = units
        tj = ext.tau_pow[j]
        back = ext.tau_pow[(n - j) % n]
        szj = st[z[j]]
        for u in us:
            # z'_j = tau^j(u) tau^j(v) u^-1 sigma(z_j)
            v = back[div(mul(z2[j], u), mul(tj[u], szj))]
            if _relations_hold(ext, y, z, y2, z2, u, v, s):
                return CriticalRelations(u, v, s)
    return None


# --- closed forms for n = 3


def _f_scalar(ext: CyclicExtension, h: Sequence[int], target: Sequence[int]) -> Optional[int]:
    """a in F^x with target = a h coefficientwise, or None."""
    K = ext.K
    j = next((i for i, x in enumerate(h) if x), None)
    if j is None:
        return None
    a = K.div(target[j], h[j])
    if a == 0 or not ext.in_base_field(a):
        return None
    if all(t == K.mul(a, x) for t, x in zip(target, h)):
        return a
    return None


def _g_image(ext, z, u, v, s) -> list[int]:
    """Coefficients of L(u^-1) sigma g sigma^-1 L(uv)."""
    K = ext.K
    uv = K.mul(u, v)
    ui = K.inv(u)
    st = ext.tau_pow[s]
    return [K.mul(K.mul(ext.tau_pow[i][uv], ui), st[z[i]]) for i in range(ext.n)]


def iso_cubic_cases(C, C2, *, scalars_2iii: str = "F") -> Optional[CriticalRelations]:
    """Decide isomorphism of two canonical cubic forms of the same type by closed formulas.

    ``scalars_2iii`` selects where the free scalar of the (type 2, sigma = tau^2)
    subcase ranges: ``"F"`` (correct) or ``"K"`` (the literal alternative
    reading, kept so that it can be tested against the search).
    """
    if not isinstance(C, CanonicalForm):
        C = canonicalize(C)
    if not isinstance(C2, CanonicalForm):
        C2 = canonicalize(C2)
    ext = C.ext
    if ext != C2.ext:
        raise ExtensionMismatch("presentations over different extensions")
    if ext.n != 3:
        raise ValueError("closed forms exist only for n = 3")
    if C.tag.index != C2.tag.index:
        raise TypeMismatch(f"type {C.tag.index} vs type {C2.tag.index}")
    K = ext.K
    mul, inv, tau = K.mul, K.inv, ext.tau
    y, z = C.f, C.g
    y2, z2 = C2.f, C2.g
    t = C.tag.index

    def scaled(options):
        # options: (sigma, v0, predicted f) with u = 1; g' must be a * sigma g sigma^-1 L(v0)
        for s, v0, pred in options:
            if tuple(pred) != tuple(y2):
                continue
            a = _f_scalar(ext, _g_image(ext, z, 1, v0, s), z2)
            if a is not None:
                return CriticalRelations(1, mul(a, v0), s)
        return None

    if t in (1, 3):
        y1, yy2 = y[1], y[2]
        if y2[1] != y1:
            return None
        i1 = inv(y1)
        opts = [
            (0, 1, (1, y1, yy2)),
            (1, i1, (1, y1, mul(mul(tau(i1, 2), y1), tau(yy2, 1)))),
            (2, tau(y1, 2), (1, y1, mul(mul(tau(y1, 1), tau(i1, 2)), tau(yy2, 2)))),
        ]
        return scaled(opts)
    if t == 2:
        yy2 = y[2]
        if y2[2] != yy2:
            return None
        found = scaled([(0, 1, y), (1, tau(yy2, 1), y)])
        if found is not None:
            return found
        if scalars_2iii == "F":
            return scaled([(2, inv(yy2), y)])
        # literal K^x reading: g' = L(a) tau^2 g tau^-2 L(y2^-1) for some a in K^x
        h = _g_image(ext, z, 1, inv(yy2), 2)
        j = next(i for i, x in enumerate(h) if x)
        a = K.div(z2[j], h[j])
        if a and all(w == mul(a, x) for w, x in zip(z2, h)):
            return CriticalRelations(1, mul(a, inv(yy2)), 2)
        return None
    if t == 4:
        x1, x2 = z[1], z[2]
        w1, w2 = z2[1], z2[2]
        if x1 == 0:
            return iso_critical(C, C2)
        for s in range(3):
            sx1 = tau(x1, s)
            if w2 == mul(mul(tau(w1, 1), tau(inv(sx1), 1)), tau(x2, s)):
                v = tau(K.div(w1, sx1), 2)
                return CriticalRelations(1, v, s)
        return None
    if t == 5:
        for s in range(3):
            if z2[1] == tau(z[1], s) and z2[2] == tau(z[2], s):
                return CriticalRelations(1, 1, s)
        return None
    if t == 6:
        yy2 = y[2]
        if y2[2] != yy2:
            return None
        for s, v0 in ((0, 1), (1, inv(yy2)), (2, tau(yy2, 2))):
            if mul(K.div(tau(v0, 1), v0), tau(yy2, s)) != yy2:
                continue
            u = K.div(tau(v0, 2), v0)
            a = _f_scalar(ext, _g_image(ext, z, u, v0, s), z2)
            if a is not None:
                return CriticalRelations(u, mul(a, v0), s)
        return None
    # types 7 and 8: f = tau^i, u = tau^(3-i)(v) / v
    i = 2 if t == 7 else 1
    for s in range(3):
        for v in range(1, ext.order):
            u = K.div(tau(v, 3 - i), v)
            if tuple(_g_image(ext, z, u, v, s)) == tuple(z2):
                return CriticalRelations(u, v, s)
    return None


# --- determinant invariant


def det_invariant(P) -> tuple[int, int]:
    """Classes of det f and det g in F^x / N(K^x), as smallest coset members.

    The norm of a finite field extension is onto, so both labels are always 1.
    """
    ext, y, z = _coeffs(P)
    K = ext.K
    norms = {ext.norm_table[x] for x in range(1, ext.order)}
    if norms != set(ext.F_units):
        raise AssertionError("norm map is not onto F^x")  # pragma: no cover
    labels = []
    for c in (y, z):
        d = linalg.det(K, to_matrix(TwistedOperator(ext, c)))
        if d == 0:
            raise NotInvertible("operator is singular")
        labels.append(min(K.mul(d, x) for x in norms))
    return labels[0], labels[1]


def determinants(P) -> tuple[int, int]:
    ext, y, z = _coeffs(P)
    return reduced_norm(TwistedOperator(ext, y)), reduced_norm(TwistedOperator(ext, z))
