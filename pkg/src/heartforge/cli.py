"""Batch command-line front end.

Algebras come from JSON spec documents (or the bundled fixtures); objects
of the extended module category are written either as named literals
("P1", "S1[1]", "I1->P1", "0->P1+P2") or as explicit JSON complexes.
Every command emits a deterministic JSON report; graph exports are DOT.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from typing import Dict, List, Optional, Sequence

from .algebra import AlgebraError, PathBasisAlgebra, Quiver, build_algebra
from .complexes import ModuleComplex, ProjComplex, mc_stalk
from .extcat import DerivedObject, ExtCategory, MembershipError
from .linalg import FieldSpec, Mat
from .reps import Representation, direct_sum, hom_modules, inj_rep, proj_rep, simple_rep
from .silting import (
    CensusCaps,
    SiltingComplex,
    check_tilting_pair,
    enumerate_silting,
    enumerate_tilting_pairs,
    is_presilting,
    is_silting,
    torsion_from_silting,
)
from .torsion import TorsionContext


class SpecError(AlgebraError):
    pass


def algebra_from_doc(doc: dict, max_dim: int = 512) -> PathBasisAlgebra:
    """Validate and build an algebra from a spec document."""
    for fieldname in ("field", "m", "vertices", "arrows"):
        if fieldname not in doc:
            raise SpecError(f"missing field {fieldname!r} in algebra spec")
    try:
        fs = FieldSpec(int(doc["field"]))
    except (ValueError, TypeError) as exc:
        raise SpecError(f"bad field characteristic: {exc}") from exc
    m = int(doc["m"])
    if m < 1:
        raise SpecError("m must be >= 1")
    vertices = list(doc["vertices"])
    arrows = []
    for k, arr in enumerate(doc["arrows"]):
        try:
            arrows.append((str(arr["name"]), arr["from"], arr["to"]))
        except (KeyError, TypeError) as exc:
            raise SpecError(f"arrow #{k}: needs name/from/to ({exc})") from exc
    try:
        quiver = Quiver(vertices, arrows)
    except AlgebraError as exc:
        raise SpecError(str(exc)) from exc
    relations = []
    for k, rel in enumerate(doc.get("relations", [])):
        terms = []
        for t in rel:
            try:
                terms.append((int(t["coeff"]), tuple(t["path"])))
            except (KeyError, TypeError) as exc:
                raise SpecError(f"relation #{k}: needs coeff/path ({exc})") from exc
        relations.append(terms)
    try:
        return build_algebra(quiver, relations, fs, m, max_dim=max_dim)
    except AlgebraError as exc:
        raise SpecError(f"algebra construction failed: {exc}") from exc


def spec_digest(doc: dict) -> str:
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()[:16]


def _named_module(A: PathBasisAlgebra, name: str) -> Representation:
    kind, rest = name[0], name[1:]
    vid: object
    try:
        vid = int(rest)
    except ValueError:
        vid = rest
    if vid not in A.quiver.vertex_index:
        raise SpecError(f"unknown vertex in module name {name!r}")
    if kind == "P":
        return proj_rep(A, vid)
    if kind == "I":
        return inj_rep(A, vid)
    if kind == "S":
        return simple_rep(A, vid)
    raise SpecError(f"unknown module name {name!r}")


def _parse_part(A: PathBasisAlgebra, text: str) -> Representation:
    text = text.strip()
    if text == "0":
        from .reps import zero_rep

        return zero_rep(A)
    mods = []
    for term in text.split("+"):
        term = term.strip()
        if "[" in term:
            raise SpecError("shift suffix is only allowed on a whole literal")
        mods.append(_named_module(A, term))
    return direct_sum(A, mods)


def parse_object_literal(cat: ExtCategory, text: str) -> DerivedObject:
    """Named object literal: "P1", "S1[1]", "A->B" chains, "+" for sums."""
    A = cat.A
    text = text.strip()
    shift = 0
    if text.endswith("]") and "[" in text and "->" not in text:
        base, _, suf = text.rpartition("[")
        shift = int(suf[:-1])
        text = base
    if "->" in text:
        parts = [p.strip() for p in text.split("->")]
        if len(parts) > cat.m:
            raise SpecError(f"literal has {len(parts)} terms; window allows {cat.m}")
        mods = [_parse_part(A, p) for p in parts]
        terms: Dict[int, Representation] = {}
        diffs = {}
        lo = -(len(parts) - 1)
        for off, M in enumerate(mods):
            terms[lo + off] = M
        for k in range(lo, 0):
            M, N = terms[k], terms[k + 1]
            if M.total_dim == 0 or N.total_dim == 0:
                continue
            from .reps import radical_hom

            f = radical_hom(M, N)
            if f is None:
                raise SpecError(
                    f"ambiguous literal map between terms {k} and {k + 1}; "
                    "provide an explicit complex"
                )
            diffs[k] = f
        return cat.normalize(ModuleComplex(A, terms, diffs))
    M = _parse_part(A, text)
    if M.total_dim == 0:
        return cat.zero
    return cat.normalize(mc_stalk(M, -shift))


def _matrix(A, rows, nr, nc):
    M = Mat.zero(A.p, nr, nc)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            M.rows[i][j] = int(v) % A.p
    return M


def parse_explicit_complex(cat: ExtCategory, doc: dict) -> DerivedObject:
    """Explicit module-complex literal: degree-indexed dims + arrow matrices
    + per-vertex differential matrices."""
    A = cat.A
    terms: Dict[int, Representation] = {}
    for dg, spec in doc.get("terms", {}).items():
        k = int(dg)
        if isinstance(spec, str):
            terms[k] = _parse_part(A, spec)
            continue
        dims = {v: int(spec.get("dims", {}).get(str(v), spec.get("dims", {}).get(v, 0)))
                for v in A.quiver.vertices}
        mats = {}
        for arr in A.quiver.arrows:
            rows = spec.get("maps", {}).get(arr.name, [])
            mats[arr.name] = _matrix(A, rows, dims[arr.target], dims[arr.source])
        rep = Representation(A, dims, mats)
        rep.check_relations()
        terms[k] = rep
    diffs = {}
    for dg, per_vertex in doc.get("differentials", {}).items():
        k = int(dg)
        if k not in terms or k + 1 not in terms:
            raise SpecError(f"differential at degree {k} without both terms")
        from .reps import ModuleMap

        mats = {}
        for v in A.quiver.vertices:
            rows = per_vertex.get(str(v), per_vertex.get(v, []))
            mats[v] = _matrix(A, rows, terms[k + 1].dims[v], terms[k].dims[v])
        diffs[k] = ModuleMap(terms[k], terms[k + 1], mats)
    X = ModuleComplex(A, terms, diffs)
    X.validate()
    return cat.normalize(X)


def parse_any_object(cat: ExtCategory, text: str) -> DerivedObject:
    text = text.strip()
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return parse_explicit_complex(cat, json.load(fh))
    if text.startswith("{"):
        return parse_explicit_complex(cat, json.loads(text))
    return parse_object_literal(cat, text)


def parse_silting_literal(cat: ExtCategory, text: str) -> ProjComplex:
    """A complex of projectives: "A" (the regular complex) or JSON with
    terms {degree: [vertex, ...]} and entries {degree: [[ [[coeff, path], ...] ]]}."""
    from .algebra import Path
    from .complexes import pc_stalk

    A = cat.A
    text = text.strip()
    if text == "A":
        return pc_stalk(A, tuple(A.quiver.vertices), 0)
    if text.startswith("@"):
        with open(text[1:]) as fh:
            doc = json.load(fh)
    else:
        doc = json.loads(text)
    terms = {}
    for dg, idx in doc["terms"].items():
        vids = []
        for v in idx:
            vids.append(int(v) if isinstance(v, str) and v.isdigit() else v)
        terms[int(dg)] = tuple(vids)
    diffs = {}
    for dg, rows in doc.get("entries", {}).items():
        k = int(dg)
        ents = []
        for row in rows:
            out_row = []
            for cell in row:
                elem: Dict[int, int] = {}
                for coeff, names in cell:
                    src = A.quiver.arrow_by_name[names[0]].source if names else None
                    if not names:
                        raise SpecError("empty path in silting literal; use trivial paths explicitly")
                    cur = src
                    for nm in names:
                        cur = A.quiver.arrow_by_name[nm].target
                    red = A.reduce_path(Path(src, cur, tuple(names)))
                    for b, c in red.items():
                        elem[b] = (elem.get(b, 0) + int(coeff) * c) % A.p
                out_row.append({b: c for b, c in elem.items() if c})
            ents.append(out_row)
        diffs[k] = ents
    P = ProjComplex(A, terms, diffs)
    P.validate()
    return P


# -- command implementations -----------------------------------------------------


def _report(payload: dict, doc: dict, args) -> dict:
    return {
        "spec_digest": spec_digest(doc),
        "m": int(doc["m"]),
        "field": int(doc["field"]),
        "threads": _threads(),
        "caps": {
            "max_dim": args.max_dim,
            "hom_enum_cap": args.hom_enum_cap,
            "census_cap": args.census_cap,
        },
        **payload,
    }


def _threads() -> int:
    raw = os.environ.get("HEARTFORGE_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise SpecError(f"HEARTFORGE_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise SpecError("HEARTFORGE_THREADS must be >= 0")
    return n  # 0 = auto; execution is sequential and deterministic either way


def _load_doc(args) -> dict:
    if args.fixture:
        from .verify import load_fixture

        return load_fixture(args.fixture)
    if not args.spec:
        raise SpecError("no algebra: pass a spec path or --fixture")
    with open(args.spec) as fh:
        return json.load(fh)


def _build(args):
    doc = _load_doc(args)
    A = algebra_from_doc(doc, max_dim=args.max_dim)
    if args.field_char:
        doc = dict(doc, field=args.field_char)
        A = algebra_from_doc(doc, max_dim=args.max_dim)
    cat = ExtCategory(A, hom_enum_cap=args.hom_enum_cap)
    return doc, A, cat


def _knit(cat, args):
    q = cat.knit_ar_quiver(limit=args.limit)
    reg = cat.registry_objects(q)
    ctx = TorsionContext(cat, reg, complete=q.complete)
    return q, reg, ctx


def cmd_indec(args) -> int:
    doc, A, cat = _build(args)
    q, reg, _ = _knit(cat, args)
    payload = {
        "command": "indec",
        "complete": q.complete,
        "count": len(q.vertices),
        "objects": [
            {
                "key": k,
                "name": q.labels[k],
                "projective": k in q.projectives,
                "injective": k in q.injectives,
            }
            for k in q.vertices
        ],
    }
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(q.to_dot())
        payload["dot"] = args.dot
    print(json.dumps(_report(payload, doc, args), indent=2, sort_keys=True))
    return 0


def cmd_tau(args) -> int:
    doc, A, cat = _build(args)
    Z = parse_any_object(cat, args.object)
    out = cat.tau_minus(Z) if args.back else cat.tau(Z)
    payload = {
        "command": "tau",
        "direction": "backward" if args.back else "forward",
        "input": Z.name,
        "result": out.name,
        "result_key": out.key,
        "result_cohomology": {str(k): list(v) for k, v in out.h_dims.items()},
    }
    print(json.dumps(_report(payload, doc, args), indent=2, sort_keys=True))
    return 0


def cmd_ar_quiver(args) -> int:
    doc, A, cat = _build(args)
    q, _, _ = _knit(cat, args)
    with open(args.dot, "w") as fh:
        fh.write(q.to_dot())
    payload = {"command": "ar-quiver", "dot": args.dot, **q.to_json()}
    print(json.dumps(_report(payload, doc, args), indent=2, sort_keys=True))
    return 0


def cmd_fac(args) -> int:
    doc, A, cat = _build(args)
    q, reg, ctx = _knit(cat, args)
    gens = [parse_any_object(cat, g) for g in args.gens]
    Z = parse_any_object(cat, args.check)
    n = args.n or cat.m
    verdict = ctx.factor_membership(Z, gens, n, args.side)
    payload = {
        "command": "fac",
        "side": args.side,
        "n": n,
        "generators": [g.name for g in gens],
        "object": Z.name,
        "verdict": {True: "yes", False: "no", None: "unknown"}[verdict],
    }
    print(json.dumps(_report(payload, doc, args), indent=2, sort_keys=True))
    return 0


def cmd_torsion(args) -> int:
    doc, A, cat = _build(args)
    q, reg, ctx = _knit(cat, args)
    P = parse_silting_literal(cat, args.silting)
    pre = is_presilting(cat, P)
    silt, trunc = is_silting(cat, P, limit=args.limit) if pre else (False, False)
    payload = {
        "command": "torsion",
        "presilting": pre,
        "silting": silt,
        "module_registry_truncated": trunc,
        "registry_complete": q.complete,
    }
    if pre and silt:
        S = SiltingComplex(P, True, silt, ("input",), trunc)
        data = torsion_from_silting(cat, ctx, S, check=True)
        pair = data["pair"]
        names = {o.key: o.name for o in reg}
        payload.update(
            {
                "T": sorted(names[k] for k in pair.T.keys),
                "F": sorted(names[k] for k in pair.F.keys),
                "flags": pair.flags(),
                "t_proj": data["t_proj"].name,
                "t_inj": data["t_inj"].name if data["t_inj"] else None,
                "f_proj": data["f_proj"].name if data["f_proj"] else None,
                "f_inj": data["f_inj"].name,
            }
        )
    print(json.dumps(_report(payload, doc, args), indent=2, sort_keys=True))
    return 0


def _census_caps(args) -> CensusCaps:
    caps = CensusCaps(module_registry_limit=min(args.limit, 64))
    if args.census_cap:
        caps.candidate_cap = args.census_cap
    return caps


def cmd_silting(args) -> int:
    if args.action != "enumerate":
        raise SpecError("usage: silting enumerate")
    doc, A, cat = _build(args)
    census, rep = enumerate_silting(cat, _census_caps(args))
    payload = {
        "command": "silting enumerate",
        "census": [
            {
                "key": s.key,
                "terms": {str(k): [str(v) for v in s.carrier.term(k)] for k in s.carrier.degrees},
                "silting": s.silting,
                "registry_truncated": s.registry_truncated,
            }
            for s in census
        ],
        "census_report": rep,
    }
    print(json.dumps(_report(payload, doc, args), indent=2, sort_keys=True))
    return 0


def cmd_tilting(args) -> int:
    if args.action != "pairs":
        raise SpecError("usage: tilting pairs")
    doc, A, cat = _build(args)
    q, reg, ctx = _knit(cat, args)
    pairs = enumerate_tilting_pairs(cat, ctx)
    payload = {
        "command": "tilting pairs",
        "count": len(pairs),
        "registry_complete": q.complete,
        "pairs": [
            {
                "X": sorted(f"{s.name}" for s, _ in cat.decompose(tp.X)) or ["0"],
                "P": [str(v) for v in tp.P],
                "flags": {
                    "positive_rigid": tp.positive_rigid,
                    "pair_rigid": tp.pair_rigid,
                    "tilting": tp.tilting,
                },
            }
            for tp in pairs
        ],
    }
    print(json.dumps(_report(payload, doc, args), indent=2, sort_keys=True))
    return 0


def cmd_hrs(args) -> int:
    doc, A, cat = _build(args)
    q, reg, ctx = _knit(cat, args)
    census, _ = enumerate_silting(cat, _census_caps(args))
    if not (0 <= args.pair < len(census)):
        raise SpecError(f"--pair must index the census (0..{len(census) - 1})")
    S = census[args.pair]
    data = torsion_from_silting(cat, ctx, S, check=True, check_generators=False)
    heart, tilted, cat2, ctx2 = ctx.hrs_tilt(data["pair"], limit=max(args.limit, 256))
    names2 = {o.key: o.name for o in ctx2.registry}
    payload = {
        "command": "hrs",
        "pair_index": args.pair,
        "source_flags": data["pair"].flags(),
        "heart_size": len(heart),
        "heart": sorted(names2.get(k, k) for k in heart.keys),
        "tilted_flags": tilted.flags(),
    }
    print(json.dumps(_report(payload, doc, args), indent=2, sort_keys=True))
    return 0


def cmd_verify(args) -> int:
    from .verify import run_paper_suite

    if args.suite != "paper":
        raise SpecError("only --suite paper is available")
    selected = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_paper_suite(selected)
    for r in results:
        print(r.line())
    summary = {
        "command": "verify",
        "suite": "paper",
        "passed": sum(1 for r in results if r.passed),
        "failed": sum(1 for r in results if not r.passed),
        "criteria": [
            {"name": r.name, "passed": r.passed, "seconds": round(r.seconds, 2),
             "details": r.details, "notes": r.notes}
            for r in results
        ],
    }
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0 if all(r.passed for r in results) else 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="heartforge",
        description="exact computations in m-extended module categories of quiver algebras",
    )
    ap.add_argument("--spec", help="path to an algebra spec JSON document")
    ap.add_argument("--fixture", choices=["a3", "lambda", "xy3"],
                    help="use a bundled algebra")
    ap.add_argument("--field-char", type=int, default=0,
                    help="override the field characteristic")
    ap.add_argument("--max-dim", type=int, default=512)
    ap.add_argument("--hom-enum-cap", type=int, default=1 << 16)
    ap.add_argument("--census-cap", type=int, default=0)
    ap.add_argument("--limit", type=int, default=128,
                    help="vertex cap for knitting / module registries")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("indec", help="knit the AR quiver and list indecomposables")
    p.add_argument("--dot")
    p.set_defaults(fn=cmd_indec)

    p = sub.add_parser("tau", help="AR translation of an object literal")
    p.add_argument("object")
    p.add_argument("--back", action="store_true")
    p.set_defaults(fn=cmd_tau)

    p = sub.add_parser("ar-quiver", help="export the AR quiver")
    p.add_argument("--dot", required=True)
    p.set_defaults(fn=cmd_ar_quiver)

    p = sub.add_parser("fac", help="Fac_n / Sub_n membership")
    p.add_argument("gens", nargs="+")
    p.add_argument("--check", required=True)
    p.add_argument("--side", choices=["factor", "subobject"], default="factor")
    p.add_argument("-n", type=int, default=0)
    p.set_defaults(fn=cmd_fac)

    p = sub.add_parser("torsion", help="torsion pair induced by a silting complex")
    p.add_argument("--silting", required=True)
    p.set_defaults(fn=cmd_torsion)

    p = sub.add_parser("silting", help="silting census")
    p.add_argument("action", choices=["enumerate"])
    p.set_defaults(fn=cmd_silting)

    p = sub.add_parser("tilting", help="tau_m-tilting pairs")
    p.add_argument("action", choices=["pairs"])
    p.set_defaults(fn=cmd_tilting)

    p = sub.add_parser("hrs", help="generalized HRS tilt of a census-induced pair")
    p.add_argument("--pair", type=int, required=True)
    p.set_defaults(fn=cmd_hrs)

    p = sub.add_parser("verify", help="run the regression suite")
    p.add_argument("--suite", default="paper")
    p.add_argument("--only", default="")
    p.set_defaults(fn=cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        return args.fn(args)
    except (SpecError, MembershipError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
