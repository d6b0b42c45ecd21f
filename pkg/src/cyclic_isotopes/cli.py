"""Command-line front end.  Every command prints JSON; ``--pretty`` renders the same data as text.

Exit codes: 0 success, 1 a checked property failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional, Sequence

from . import linalg
from .algebra import AlgebraStructure, IsotopePresentation, from_presentation, heart_decomposition, is_regular
from .atlas import atlas
from .classify import (
    TypeMismatch,
    canonicalize,
    compose_witness,
    invert_witness,
    iso_critical,
    iso_cubic_cases,
    verify_witness,
    witness_from_json,
)
from .ff import FieldError
from .galois import CyclicExtension, build_extension
from .oracle import BudgetExceeded, oracle_for
from .twistop import SingularOperator, TwistedOperator, is_invertible, reduced_norm, to_matrix
from .verify import run_suite


class ParseError(ValueError):
    pass


class CommandError(Exception):
    def __init__(self, kind: str, message: str, code: int = 2, **extra):
        super().__init__(message)
        self.kind, self.code, self.extra = kind, code, extra

    def to_json(self) -> dict:
        return {"error": self.kind, "message": str(self), **self.extra}


# --- output


def render(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_short(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _flat(item):
                lines.append(f"{pad}-")
                lines.append(render(item, indent + 1))
            else:
                lines.append(f"{pad}- {_short(item)}")
    else:
        lines.append(pad + _short(obj))
    return "\n".join(lines)


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)
    return False


def _short(v) -> str:
    return json.dumps(v) if isinstance(v, (list, dict, type(None), bool)) else str(v)


def render_atlas(rep: dict) -> str:
    ext = rep["ext"]
    out = [f"GF({ext['p']}^{ext['m']})^{ext['n']}  mode={rep['mode']}  presentations={rep['presentations']}"]
    out.append(f"{'type':>4} {'N0':<10} {'forms':>6} {'classes':>8} {'oracle':>7}")
    for t in rep["types"]:
        oracle = t.get("oracle_class_count", "-")
        out.append(f"{t['type_index']:>4} {str(t['N0']):<10} {t['canonical_forms']:>6} {t['class_count']:>8} {oracle!s:>7}")
    out.append(f"total classes: {rep['total_classes']}  oracle agrees: {rep['oracle_agrees']}")
    return "\n".join(out)


def emit(obj: dict, args, text: Optional[str] = None) -> None:
    if getattr(args, "pretty", False):
        payload = (text if text is not None else render(obj)) + "\n"
    else:
        payload = json.dumps(obj, sort_keys=True) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


# --- input parsing


def _ext(args) -> CyclicExtension:
    return build_extension(args.p, args.m, args.n)


def parse_operator(ext: CyclicExtension, text: str, name: str) -> TwistedOperator:
    try:
        coeffs = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ParseError(f"--{name}: expected comma-separated integers, got {text!r}") from None
    if len(coeffs) != ext.n:
        raise ParseError(f"--{name}: expected {ext.n} coefficients, got {len(coeffs)}")
    if any(not 0 <= c < ext.order for c in coeffs):
        raise ParseError(f"--{name}: encodings must lie in [0, {ext.order})")
    f = TwistedOperator(ext, coeffs)
    if not is_invertible(f):
        raise CommandError("SingularOperator", f"operator {name} has reduced norm 0", operand=name, coeffs=list(coeffs))
    return f


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read JSON from {path}: {e}") from None


# --- commands


def cmd_atlas(args) -> int:
    ext = _ext(args)
    rep = atlas(ext, samples=args.samples, seed=args.seed, oracle=args.oracle, budget=args.budget)
    obj = rep.to_json()
    emit(obj, args, render_atlas(obj))
    return 0 if not args.oracle or rep.oracle_agrees else 1


def cmd_isotest(args) -> int:
    ext = _ext(args)
    P = IsotopePresentation(ext, parse_operator(ext, args.f, "f"), parse_operator(ext, args.g, "g"))
    Q = IsotopePresentation(ext, parse_operator(ext, args.f2, "f2"), parse_operator(ext, args.g2, "g2"))
    out: dict = {"P": {"f": list(P.f.coeffs), "g": list(P.g.coeffs)}, "Q": {"f": list(Q.f.coeffs), "g": list(Q.g.coeffs)}}

    if args.witness:
        try:
            w = witness_from_json(json.loads(args.witness))
        except (ValueError, KeyError, TypeError) as e:
            raise ParseError(f"--witness: {e}") from None
        ok = verify_witness(P, Q, w)
        out.update({"witness": w.to_json(), "witness_valid": ok})
        emit(out, args)
        return 0 if ok else 1

    method = args.method
    if method == "auto":
        method = "cubic_case" if ext.n == 3 else "critical"
    if method == "critical":
        w = iso_critical(P, Q)
        witness = None if w is None else w.to_json()
    elif method == "cubic_case":
        if ext.n != 3:
            raise CommandError("UsageError", "cubic_case needs n = 3")
        C, D = canonicalize(P), canonicalize(Q)
        if C.tag.index != D.tag.index:
            w = None
        else:
            try:
                mid = iso_cubic_cases(C, D)
            except TypeMismatch:  # pragma: no cover - guarded above
                mid = None
            # P -> C -> D -> Q
            w = None
            if mid is not None:
                w = compose_witness(ext, invert_witness(ext, D.witness), compose_witness(ext, mid, C.witness))
        witness = None if w is None else w.to_json()
        out["types"] = [C.tag.index, D.tag.index]
    else:
        phi = oracle_for(ext).find(from_presentation(P), from_presentation(Q))
        w = None if phi is None else oracle_for(ext).to_matrix(phi)
        witness = None if w is None else {"kind": "map", "phi": w}
    out.update({"isomorphic": witness is not None, "witness": witness, "method": method})
    status = 0
    if args.oracle and method != "oracle":
        agree = oracle_for(ext).is_isomorphic(from_presentation(P), from_presentation(Q)) == (witness is not None)
        out["oracle_agrees"] = agree
        status = 0 if agree else 1
    emit(out, args)
    return status


def cmd_heart(args) -> int:
    obj = _read_json(args.tensor)
    try:
        A = AlgebraStructure.from_json(obj)
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"bad tensor: {e}") from None
    ext = A.ext
    out: dict = {"regular": False, "unit": None, "heart_is_K": False, "presentation": None}
    uv = is_regular(A)
    if uv is not None:
        out["regular"] = True
        out["unit"] = A.mul(*uv)
        out["uv"] = list(uv)
        d = heart_decomposition(A, ext)
        if d is not None:
            out["heart_is_K"] = True
            out["presentation"] = {"f": list(d.presentation.f.coeffs), "g": list(d.presentation.g.coeffs)}
            out["phi"] = d.phi
    emit(out, args)
    return 0


def cmd_verify(args) -> int:
    if args.field_spec:
        spec = _read_json(args.field_spec)
        try:
            p, m, n = int(spec["p"]), int(spec.get("m", 1)), int(spec["n"])
            ext = build_extension(p, m, n)
            if "modulus" in spec:
                ext = CyclicExtension.from_json(spec)
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            if isinstance(e, FieldError):
                raise
            raise ParseError(f"bad field spec: {e}") from None
    else:
        ext = _ext(args)
    rep = run_suite(ext, level=args.level, seed=args.seed, samples=args.samples)
    if args.pretty:
        lines = [f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}  ({c['checked']} checked)" for c in rep["checks"]]
        text = "\n".join(lines + [f"overall: {'PASS' if rep['passed'] else 'FAIL'}"])
    else:
        text = None
    emit(rep, args, text)
    return 0 if rep["passed"] else 1


def cmd_mset(args) -> int:
    ext = _ext(args)
    out = {
        "ext": ext.to_json(),
        "S": sorted(ext.S),
        "S_size": len(ext.S),
        "M": list(ext.M),
        "norms": {str(x): ext.norm(x) for x in ext.M},
        "F": list(ext.F_elems),
    }
    emit(out, args)
    return 0


def cmd_normtest(args) -> int:
    ext = _ext(args)
    rng = random.Random(args.seed)
    mismatches = []
    for _ in range(args.samples):
        f = TwistedOperator(ext, tuple(rng.randrange(ext.order) for _ in range(ext.n)))
        d, nr = linalg.det(ext.K, to_matrix(f)), reduced_norm(f)
        if d != nr:
            mismatches.append({"f": list(f.coeffs), "det": d, "reduced_norm": nr})
    out = {"ext": ext.to_json(), "checked": args.samples, "mismatches": len(mismatches), "examples": mismatches[:10]}
    emit(out, args)
    return 0 if not mismatches else 1


# --- entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyclic-isotopes", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, n_default=3):
        sp.add_argument("--p", type=int, default=2)
        sp.add_argument("--m", type=int, default=1)
        sp.add_argument("--n", type=int, default=n_default)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--pretty", action="store_true")
        sp.add_argument("--out")

    sp = sub.add_parser("atlas", help="isomorphism classes of K^(f,g)")
    common(sp)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--oracle", action="store_true")
    sp.add_argument("--budget", type=int, default=100_000)
    sp.set_defaults(func=cmd_atlas)

    sp = sub.add_parser("isotest", help="decide K^(f,g) = K^(f2,g2)")
    common(sp)
    for name in ("f", "g", "f2", "g2"):
        sp.add_argument(f"--{name}", required=True)
    sp.add_argument("--method", choices=["auto", "critical", "cubic_case", "oracle"], default="auto")
    sp.add_argument("--oracle", action="store_true")
    sp.add_argument("--witness", help="JSON witness to re-verify instead of searching")
    sp.set_defaults(func=cmd_isotest)

    sp = sub.add_parser("heart", help="Kaplansky heart of a structure tensor")
    sp.add_argument("--tensor", required=True, help="JSON file, or - for stdin")
    sp.add_argument("--pretty", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_heart)

    sp = sub.add_parser("verify", help="run the invariant suite")
    common(sp)
    sp.add_argument("--level", choices=["exhaustive", "random"], default="random")
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--field-spec", help="JSON {p, m, n[, modulus]} file, or - for stdin")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("m-set", help="print S(K) and M")
    common(sp)
    sp.set_defaults(func=cmd_mset)

    sp = sub.add_parser("normtest", help="reduced norm against determinant")
    common(sp)
    sp.add_argument("--samples", type=int, default=1000)
    sp.set_defaults(func=cmd_normtest)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except CommandError as e:
        err, code = e.to_json(), e.code
    except ParseError as e:
        err, code = {"error": "ParseError", "message": str(e)}, 2
    except (FieldError, BudgetExceeded, SingularOperator) as e:
        err, code = {"error": type(e).__name__, "message": str(e)}, 2
    sys.stdout.write(json.dumps(err, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
