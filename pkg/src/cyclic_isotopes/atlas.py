"""Isomorphism-class atlas of the isotopes K^(f,g) of one extension."""
from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Optional

from .algebra import IsotopePresentation, from_presentation
from .classify import CUBIC_N0, CUBIC_TYPES, CanonicalForm, canonicalize, iso_critical
from .galois import CyclicExtension, build_extension
from .oracle import BudgetExceeded, gl_order, oracle_for
from .twistop import TwistedOperator, is_invertible

__all__ = ["AtlasReport", "atlas", "invertible_operators", "random_operator", "DEFAULT_BUDGET"]

# presentation pairs enumerated exhaustively when |GL|^2 stays below this
DEFAULT_BUDGET = 100_000


def invertible_operators(ext: CyclicExtension) -> list[TwistedOperator]:
    ops = []
    for c in product(range(ext.order), repeat=ext.n):
        f = TwistedOperator(ext, c)
        if is_invertible(f):
            ops.append(f)
    return ops


def random_operator(ext: CyclicExtension, rng: random.Random) -> TwistedOperator:
    while True:
        f = TwistedOperator(ext, tuple(rng.randrange(ext.order) for _ in range(ext.n)))
        if is_invertible(f):
            return f


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ISOTOPE_THREADS", "1")))
    except ValueError:
        return 1


def _canon_chunk(args):
    key, pairs = args
    ext = build_extension(*key)
    out = set()
    for y, z in pairs:
        C = canonicalize(IsotopePresentation(ext, TwistedOperator(ext, y), TwistedOperator(ext, z)))
        out.add((C.f, C.g))
    return out


def _canonical_forms(ext: CyclicExtension, pairs: list, workers: int) -> list[CanonicalForm]:
    raw = [(f.coeffs, g.coeffs) for f, g in pairs]
    key = (ext.p, ext.m, ext.n)
    if workers > 1 and len(raw) > 2000:
        size = -(-len(raw) // workers)
        chunks = [(key, raw[i : i + size]) for i in range(0, len(raw), size)]
        with ProcessPoolExecutor(workers) as pool:
            found = set().union(*pool.map(_canon_chunk, chunks))
    else:
        found = _canon_chunk((key, raw))
    forms = [
        canonicalize(IsotopePresentation(ext, TwistedOperator(ext, y), TwistedOperator(ext, z))) for y, z in found
    ]
    forms.sort(key=CanonicalForm.sort_key)
    return forms


@dataclass
class AtlasReport:
    ext: CyclicExtension
    mode: str
    seed: Optional[int]
    samples: Optional[int]
    presentations: int
    groups: dict  # type key -> list of classes, each a list of CanonicalForm (representative first)
    oracle_checked: bool = False
    oracle_counts: Optional[dict] = None

    @property
    def oracle_agrees(self) -> Optional[bool]:
        if self.oracle_counts is None:
            return None
        return all(self.oracle_counts.get(k, 0) == len(v) for k, v in self.groups.items()) and all(
            k in self.groups for k in self.oracle_counts
        )

    def class_counts(self) -> dict:
        return {k: len(v) for k, v in self.groups.items()}

    def to_json(self) -> dict:
        keys = sorted(self.groups)
        if self.ext.n == 3:
            for idx in CUBIC_TYPES:
                if not any(k[0] == idx for k in keys):
                    keys.append((idx, CUBIC_N0[idx]))
            keys.sort()
        types = []
        for k in keys:
            classes = self.groups.get(k, [])
            entry = {
                "type_index": k[0],
                "N0": list(k[1]),
                "canonical_forms": sum(len(c) for c in classes),
                "class_count": len(classes),
                "representatives": [{"f": list(c[0].f), "g": list(c[0].g)} for c in classes],
            }
            if self.oracle_counts is not None:
                entry["oracle_class_count"] = self.oracle_counts.get(k, 0)
            types.append(entry)
        return {
            "ext": self.ext.to_json(),
            "mode": self.mode,
            "seed": self.seed,
            "samples": self.samples,
            "presentations": self.presentations,
            "types": types,
            "total_classes": sum(len(v) for v in self.groups.values()),
            "oracle_checked": self.oracle_checked,
            "oracle_agrees": self.oracle_agrees,
        }


def _partition(forms, same) -> list[list]:
    classes: list[list] = []
    for C in forms:
        for cl in classes:
            if same(cl[0], C):
                cl.append(C)
                break
        else:
            classes.append([C])
    return classes


def atlas(
    ext: CyclicExtension,
    *,
    samples: Optional[int] = None,
    seed: int = 0,
    oracle: bool = False,
    budget: int = DEFAULT_BUDGET,
    workers: Optional[int] = None,
) -> AtlasReport:
    """Canonical forms of invertible (f, g), grouped by type and split into isomorphism classes.

    All pairs are enumerated when there are at most ``budget`` of them and no
    sample count is given; otherwise ``samples`` seeded random pairs are used.
    Classes are formed greedily in sorted order, so each class is headed by its
    lexicographically smallest (type, f, g) member.  With ``oracle=True`` the
    same forms are partitioned again using only brute-force isomorphism tests.
    """
    workers = workers or _threads()
    total = gl_order(ext.q, ext.n) ** 2
    if samples is None:
        if total > budget:
            raise BudgetExceeded(f"{total} presentation pairs exceed the budget {budget}; pass a sample count")
        ops = invertible_operators(ext)
        pairs = [(f, g) for f in ops for g in ops]
        mode = "exhaustive"
    else:
        rng = random.Random(seed)
        pairs = [(random_operator(ext, rng), random_operator(ext, rng)) for _ in range(samples)]
        mode = "sampled"
    forms = _canonical_forms(ext, pairs, workers)

    by_type: dict = {}
    for C in forms:
        by_type.setdefault(C.tag.key, []).append(C)
    groups = {k: _partition(v, lambda a, b: iso_critical(a, b) is not None) for k, v in by_type.items()}

    report = AtlasReport(ext, mode, seed if mode == "sampled" else None, samples, len(pairs), groups)
    if oracle:
        orc = oracle_for(ext)
        classes = [[forms[i] for i in cl] for cl in orc.partition([from_presentation(C.presentation) for C in forms])]
        counts: dict = {}
        for cl in classes:
            k = cl[0].tag.key if len({C.tag.key for C in cl}) == 1 else ("mixed",)
            counts[k] = counts.get(k, 0) + 1
        report.oracle_checked = True
        report.oracle_counts = counts
    return report
