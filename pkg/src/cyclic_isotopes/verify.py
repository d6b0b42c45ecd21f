"""Named invariant checks, shared by the ``verify`` command and the test suite.

Each check returns a :class:`CheckResult`; a failing check carries the first
counterexample found.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Callable, Optional

from . import linalg
from .algebra import (
    IsotopePresentation,
    from_presentation,
    heart_decomposition,
    kaplansky_heart,
    recognize_field_heart,
    transport,
)
from .atlas import atlas, invertible_operators, random_operator
from .classify import (
    CriticalRelations,
    act_presentation,
    canonicalize,
    det_invariant,
    iso_critical,
    iso_cubic_cases,
    verify_witness,
)
from .galois import CyclicExtension
from .oracle import gl_order, oracle_for
from .twistop import TwistedOperator, from_matrix, reduced_norm, to_matrix

__all__ = ["CheckResult", "CHECKS", "run_suite", "random_gl", "random_pairs"]

# exhaustive sweeps are used when the operator space has at most this many elements
EXHAUSTIVE_OPERATORS = 4096


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int
    counterexample: Optional[dict] = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "checked": self.checked, "counterexample": self.counterexample}
        if self.details:
            out["details"] = self.details
        return out


def _operators(ext: CyclicExtension, exhaustive: bool, samples: int, rng: random.Random, invertible: bool = False):
    if exhaustive and ext.order**ext.n <= EXHAUSTIVE_OPERATORS:
        if invertible:
            return invertible_operators(ext)
        return [TwistedOperator(ext, c) for c in product(range(ext.order), repeat=ext.n)]
    if invertible:
        return [random_operator(ext, rng) for _ in range(samples)]
    return [TwistedOperator(ext, tuple(rng.randrange(ext.order) for _ in range(ext.n))) for _ in range(samples)]


def random_gl(ext: CyclicExtension, rng: random.Random) -> linalg.Matrix:
    """A uniformly random invertible matrix over F (K-encoded entries)."""
    while True:
        mx = [[rng.choice(ext.F_elems) for _ in range(ext.n)] for _ in range(ext.n)]
        if linalg.det(ext.K, mx):
            return mx


def random_pairs(ext: CyclicExtension, count: int, rng: random.Random):
    """Canonical-form pairs: half isomorphic by construction, a quarter same-type, a quarter arbitrary."""
    pairs = []
    for k in range(count):
        A = canonicalize(IsotopePresentation(ext, random_operator(ext, rng), random_operator(ext, rng)))
        if k % 4 in (0, 1):
            w = CriticalRelations(rng.randrange(1, ext.order), rng.randrange(1, ext.order), rng.randrange(ext.n))
            B = canonicalize(act_presentation(A.presentation, w))
        elif k % 4 == 2:
            while True:
                B = canonicalize(IsotopePresentation(ext, random_operator(ext, rng), random_operator(ext, rng)))
                if B.tag.index == A.tag.index or rng.random() < 0.05:
                    break
        else:
            B = canonicalize(IsotopePresentation(ext, random_operator(ext, rng), random_operator(ext, rng)))
        pairs.append((A, B))
    return pairs


def _pres_json(P) -> dict:
    return {"f": list(P.f.coeffs), "g": list(P.g.coeffs)}


# --- checks


def check_field_arithmetic(ext, exhaustive=True, samples=1000, rng=None) -> CheckResult:
    K = ext.K
    rng = rng or random.Random(0)
    if exhaustive and K.order <= 256:
        pairs = list(product(range(K.order), repeat=2))
    else:
        pairs = [(rng.randrange(K.order), rng.randrange(K.order)) for _ in range(samples)]
    for a, b in pairs:
        if K.mul(a, b) != K._mul_slow(a, b):
            return CheckResult("field_arithmetic", False, len(pairs), {"a": a, "b": b})
        if b and K.mul(K.div(a, b), b) != a:
            return CheckResult("field_arithmetic", False, len(pairs), {"a": a, "b": b, "op": "div"})
    return CheckResult("field_arithmetic", True, len(pairs))


def check_determinant_identity(ext, exhaustive=True, samples=1000, rng=None) -> CheckResult:
    """det over F of the operator matrix equals the reduced norm."""
    ops = _operators(ext, exhaustive, samples, rng or random.Random(0))
    for f in ops:
        if linalg.det(ext.K, to_matrix(f)) != reduced_norm(f):
            return CheckResult("determinant_identity", False, len(ops), {"f": list(f.coeffs)})
    return CheckResult("determinant_identity", True, len(ops))


def check_operator_matrices(ext, exhaustive=True, samples=200, rng=None) -> CheckResult:
    """Matrices and twisted coefficients determine each other; composition is matrix product."""
    rng = rng or random.Random(0)
    ops = _operators(ext, exhaustive, samples, rng)
    K = ext.K
    for f in ops:
        if from_matrix(ext, to_matrix(f)) != f:
            return CheckResult("operator_matrices", False, len(ops), {"f": list(f.coeffs)})
        g = ops[rng.randrange(len(ops))]
        if to_matrix(f @ g) != linalg.matmul(K, to_matrix(f), to_matrix(g)):
            return CheckResult("operator_matrices", False, len(ops), {"f": list(f.coeffs), "g": list(g.coeffs)})
    return CheckResult("operator_matrices", True, len(ops))


def check_hilbert90(ext, **_) -> CheckResult:
    """Norm-one elements are exactly the quotients tau(v)/v."""
    K = ext.K
    quotients = {K.div(ext.tau(v), v) for v in range(1, ext.order)}
    expected = (ext.order - 1) // (ext.q - 1)
    ok = set(ext.S) == quotients and len(ext.S) == expected
    cex = None if ok else {"|S|": len(ext.S), "|quotients|": len(quotients), "expected": expected}
    return CheckResult("hilbert90", ok, ext.order - 1, cex)


def check_transversal(ext, **_) -> CheckResult:
    """M contains 1, has one element per norm value, and scale_to_M lands in M."""
    K = ext.K
    norms = [ext.norm(x) for x in ext.M]
    ok = ext.M[0] == 1 and len(set(norms)) == len(ext.M) == ext.q - 1
    if not ok:
        return CheckResult("transversal", False, len(ext.M), {"M": list(ext.M)})
    for i in range(1, ext.n):
        if gcd(i, ext.n) != 1:
            continue
        for y in range(1, ext.order):
            m, v = ext.scale_to_M(y, i)
            if m not in ext.M or m != K.mul(K.div(ext.tau(v, i), v), y):
                return CheckResult("transversal", False, ext.order, {"y": y, "i": i})
    return CheckResult("transversal", True, ext.order - 1)


def check_opposite(ext, exhaustive=True, samples=200, rng=None) -> CheckResult:
    """The opposite of K^(f,g) is K^(g,f)."""
    rng = rng or random.Random(0)
    for k in range(samples):
        f, g = random_operator(ext, rng), random_operator(ext, rng)
        A = from_presentation(IsotopePresentation(ext, f, g))
        B = from_presentation(IsotopePresentation(ext, g, f))
        if A.opposite() != B:
            return CheckResult("opposite", False, k + 1, {"f": list(f.coeffs), "g": list(g.coeffs)})
    return CheckResult("opposite", True, samples)


def check_kaplansky(ext, exhaustive=True, samples=1000, rng=None, all_pairs_for: int = 3) -> CheckResult:
    """Hearts of random regular tensors are copies of K, and the decomposition transports back.

    For the first ``all_pairs_for`` tensors every admissible (u, v) is used and
    the resulting hearts are compared with the brute-force oracle.
    """
    rng = rng or random.Random(0)
    orc = oracle_for(ext)
    name = "kaplansky_round_trip"
    for k in range(samples):
        P = IsotopePresentation(ext, random_operator(ext, rng), random_operator(ext, rng))
        phi = random_gl(ext, rng)
        A = transport(from_presentation(P), phi)
        d = heart_decomposition(A)
        cex = {"presentation": _pres_json(P), "phi": phi}
        if d is None:
            return CheckResult(name, False, k + 1, cex | {"reason": "no decomposition"})
        B = d.heart.B
        if B.unit() != d.heart.unit or not B.is_commutative() or not B.is_associative() or not B.is_division():
            return CheckResult(name, False, k + 1, cex | {"reason": "heart is not a field"})
        if transport(A, d.phi) != from_presentation(d.presentation):
            return CheckResult(name, False, k + 1, cex | {"reason": "decomposition does not transport"})
        if k < all_pairs_for:
            first = None
            for u in range(1, ext.order):
                for v in range(1, ext.order):
                    H = kaplansky_heart(A, (u, v)).B
                    recognize_field_heart(H, ext)
                    if first is None:
                        first = H
                    elif not orc.is_isomorphic(first, H):
                        return CheckResult(name, False, k + 1, cex | {"reason": "hearts differ", "u": u, "v": v})
    return CheckResult(name, True, samples)


def check_division(ext, exhaustive=True, samples=1000, rng=None) -> CheckResult:
    """Isotopes with invertible f, g have no zero divisors."""
    rng = rng or random.Random(0)
    pres = []
    if exhaustive and gl_order(ext.q, ext.n) ** 2 <= 100_000:
        forms = {}
        ops = invertible_operators(ext)
        for f in ops:
            for g in ops:
                C = canonicalize(IsotopePresentation(ext, f, g))
                forms.setdefault((C.f, C.g), C.presentation)
        pres.extend(forms[k] for k in sorted(forms))
    pres.extend(IsotopePresentation(ext, random_operator(ext, rng), random_operator(ext, rng)) for _ in range(samples))
    for P in pres:
        zd = from_presentation(P).zero_divisor_pair(exhaustive=True)
        if zd is not None:
            return CheckResult("division_closure", False, len(pres), _pres_json(P) | {"pair": list(zd)})
    return CheckResult("division_closure", True, len(pres))


def check_canonical_forms(ext, exhaustive=True, samples=500, rng=None, oracle_samples: int = 50) -> CheckResult:
    """Normalizing witnesses verify, normal forms are stable and lie in the expected shape."""
    rng = rng or random.Random(0)
    orc = oracle_for(ext) if gl_order(ext.q, ext.n) <= 20000 else None
    name = "canonical_forms"
    for k in range(samples):
        P = IsotopePresentation(ext, random_operator(ext, rng), random_operator(ext, rng))
        C = canonicalize(P)
        cex = _pres_json(P)
        if not verify_witness(P, C, C.witness):
            return CheckResult(name, False, k + 1, cex | {"reason": "witness"})
        C2 = canonicalize(C.presentation)
        if C2.presentation != C.presentation or from_presentation(C2.presentation) != from_presentation(C.presentation):
            return CheckResult(name, False, k + 1, cex | {"reason": "not idempotent"})
        y = C.f
        if y[0] not in (0, 1):
            return CheckResult(name, False, k + 1, cex | {"reason": "constant term"})
        if ext.n == 3 and C.tag.index in (1, 3) and y[1] not in ext.M:
            return CheckResult(name, False, k + 1, cex | {"reason": "y1 not in M"})
        if ext.n == 3 and C.tag.index in (2, 6) and y[2] not in ext.M:
            return CheckResult(name, False, k + 1, cex | {"reason": "y2 not in M"})
        if ext.n == 3 and C.tag.index in (6, 7, 8) and not any(c == 1 for c in y):
            return CheckResult(name, False, k + 1, cex | {"reason": "leading coefficient"})
        if orc is not None and k < oracle_samples:
            if not orc.is_isomorphic(from_presentation(P), from_presentation(C.presentation)):
                return CheckResult(name, False, k + 1, cex | {"reason": "oracle"})
    return CheckResult(name, True, samples)


def _same_type_forms(ext) -> list:
    ops = invertible_operators(ext)
    forms = {}
    for f in ops:
        for g in ops:
            C = canonicalize(IsotopePresentation(ext, f, g))
            forms.setdefault((C.f, C.g), C)
    return [forms[k] for k in sorted(forms, key=lambda k: forms[k].sort_key())]


def oracle_sweep(ext, pairs, *, cubic: bool = True) -> dict:
    """Compare iso_critical with the oracle (and the closed forms, for n = 3) on canonical pairs."""
    orc = oracle_for(ext)
    algs = {}

    def alg(C):
        key = (C.f, C.g)
        if key not in algs:
            algs[key] = from_presentation(C.presentation)
        return algs[key]

    out = {"pairs": 0, "isomorphic": 0, "oracle_disagreements": 0, "cubic_disagreements": 0, "bad_witnesses": 0}
    first_bad = None
    first_cubic = None
    for A, B in pairs:
        w = iso_critical(A, B)
        o = orc.is_isomorphic(alg(A), alg(B))
        out["pairs"] += 1
        out["isomorphic"] += o
        if (w is not None) != o:
            out["oracle_disagreements"] += 1
            first_bad = first_bad or {"A": _pres_json(A), "B": _pres_json(B), "critical": w is not None, "oracle": o}
        if w is not None and not verify_witness(A, B, w):
            out["bad_witnesses"] += 1
        if cubic and ext.n == 3 and A.tag.index == B.tag.index:
            c = iso_cubic_cases(A, B)
            if (c is not None) != (w is not None) or (c is not None and not verify_witness(A, B, c)):
                out["cubic_disagreements"] += 1
                first_cubic = first_cubic or {"A": _pres_json(A), "B": _pres_json(B)}
    out["first_disagreement"] = first_bad
    out["first_cubic_disagreement"] = first_cubic
    return out


def within_type_pairs(forms):
    by_type: dict = {}
    for C in forms:
        by_type.setdefault(C.tag.key, []).append(C)
    for group in by_type.values():
        for A in group:
            for B in group:
                yield A, B


def check_oracle_equivalence(ext, exhaustive=True, samples=1000, rng=None) -> CheckResult:
    """iso_critical, the closed forms and the brute-force oracle give the same verdicts."""
    rng = rng or random.Random(0)
    if exhaustive and gl_order(ext.q, ext.n) ** 2 <= 100_000:
        pairs = within_type_pairs(_same_type_forms(ext))
    else:
        pairs = random_pairs(ext, samples, rng)
    res = oracle_sweep(ext, pairs)
    ok = res["oracle_disagreements"] == 0 and res["cubic_disagreements"] == 0 and res["bad_witnesses"] == 0
    cex = None if ok else (res["first_disagreement"] or res["first_cubic_disagreement"] or {"reason": "witness"})
    details = {k: v for k, v in res.items() if not k.startswith("first")}
    return CheckResult("oracle_equivalence", ok, res["pairs"], cex, details)


def check_scaling(ext, exhaustive=True, samples=100, rng=None) -> CheckResult:
    """K^(f,g) and K^(af,bg) are isomorphic for all a, b in F^x."""
    rng = rng or random.Random(0)
    checked = 0
    for _ in range(samples):
        f, g = random_operator(ext, rng), random_operator(ext, rng)
        P = IsotopePresentation(ext, f, g)
        for a in ext.F_units:
            for b in ext.F_units:
                Q = IsotopePresentation(ext, f.scaled(a), g.scaled(b))
                w = iso_critical(P, Q)
                checked += 1
                if w is None or not verify_witness(P, Q, w):
                    return CheckResult("scaling", False, checked, _pres_json(P) | {"a": a, "b": b})
    return CheckResult("scaling", True, checked)


def check_type_emptiness(ext, **_) -> CheckResult:
    """Over GF(2) no invertible f has the shape (1, y1, 0) or (1, 0, y2) with y_i nonzero."""
    bad = None
    count = 0
    for y in range(1, ext.order):
        for c in ((1, y, 0), (1, 0, y)):
            count += 1
            if reduced_norm(TwistedOperator(ext, c)) != 0:
                bad = bad or {"f": list(c)}
    return CheckResult("type_emptiness", bad is None, count, bad)


def check_det_invariant(ext, exhaustive=True, samples=100, rng=None) -> CheckResult:
    rng = rng or random.Random(0)
    for k in range(samples):
        P = IsotopePresentation(ext, random_operator(ext, rng), random_operator(ext, rng))
        if det_invariant(P) != (1, 1):
            return CheckResult("det_invariant", False, k + 1, _pres_json(P))
    return CheckResult("det_invariant", True, samples)


def check_atlas(ext, exhaustive=True, samples=300, rng=None, seed: int = 0) -> CheckResult:
    """Theorem-driven and brute-force partitions have the same class counts per type."""
    full = exhaustive and gl_order(ext.q, ext.n) ** 2 <= 100_000
    rep = atlas(ext, samples=None if full else samples, seed=seed, oracle=True)
    counts = {f"{k[0]}:{list(k[1])}": len(v) for k, v in sorted(rep.groups.items())}
    ok = bool(rep.oracle_agrees)
    cex = None if ok else {"oracle": {str(k): v for k, v in rep.oracle_counts.items()}, "theorem": counts}
    return CheckResult("atlas_partition", ok, sum(len(v) for v in rep.groups.values()), cex, {"class_counts": counts})


CHECKS: dict[str, Callable[..., CheckResult]] = {
    "field_arithmetic": check_field_arithmetic,
    "determinant_identity": check_determinant_identity,
    "operator_matrices": check_operator_matrices,
    "hilbert90": check_hilbert90,
    "transversal": check_transversal,
    "opposite": check_opposite,
    "kaplansky_round_trip": check_kaplansky,
    "division_closure": check_division,
    "canonical_forms": check_canonical_forms,
    "oracle_equivalence": check_oracle_equivalence,
    "scaling": check_scaling,
    "type_emptiness": check_type_emptiness,
    "det_invariant": check_det_invariant,
    "atlas_partition": check_atlas,
}


def run_suite(ext: CyclicExtension, level: str = "random", seed: int = 0, samples: int = 200, only=None) -> dict:
    """Run the checks that apply to ext; ``level`` is "exhaustive" or "random"."""
    if level not in ("exhaustive", "random"):
        raise ValueError(f"unknown level {level!r}")
    exhaustive = level == "exhaustive"
    results = []
    for name, fn in CHECKS.items():
        if only and name not in only:
            continue
        if name == "type_emptiness" and not (ext.q == 2 and ext.n == 3):
            continue
        if name in ("oracle_equivalence", "kaplansky_round_trip", "atlas_partition", "canonical_forms") and gl_order(
            ext.q, ext.n
        ) > 200_000:
            continue
        rng = random.Random(f"{seed}:{name}")
        kwargs = {"seed": seed} if name == "atlas_partition" else {}
        results.append(fn(ext, exhaustive=exhaustive, samples=samples, rng=rng, **kwargs))
    return {
        "ext": ext.to_json(),
        "level": level,
        "seed": seed,
        "samples": samples,
        "checks": [r.to_json() for r in results],
        "passed": all(r.passed for r in results),
    }
