"""Command line front end: ``ainfty <command> [instance] [flags]``.

Exit codes: 0 computation finished (negative verdicts included), 1 bad input
or flags, 2 a budget or precision limit was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from typing import Sequence

from . import deform, geomfacts, hochschild, tw
from .ainfty import fmt_elem, h_category, validate
from .exactlin import PrecisionExhausted, TruncSeries, format_rational, parse_rational
from .io import FormatError, Instance, dumps, load, to_data

DEFAULT_TRUNC = 8
DEFAULT_LENGTH = 3
DEFAULT_BUDGET = 10000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_seed() -> int:
    raw = os.environ.get("AINFTY_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"AINFTY_SEED must be an integer, got {raw!r}") from None


# -- helpers ---------------------------------------------------------------------

_SHIFTED = re.compile(r"^(.*)\[(-?\d+)\]$")


def resolve(inst: Instance, name: str) -> tw.TwComplex:
    """A bundled twisted complex, an object, either with a ``[n]`` shift, or a ``+`` sum."""
    if "+" in name and name not in inst.complexes:
        return tw.direct_sum(*(resolve(inst, part) for part in name.split("+")))
    if name in inst.complexes:
        return inst.complexes[name]
    if name in inst.category.objects:
        return tw.TwComplex.of(name)
    m = _SHIFTED.match(name)
    if m:
        return tw.shift(resolve(inst, m.group(1)), int(m.group(2)))
    raise UsageError(f"unknown object or complex {name!r}")


def _complex_json(T: tw.TwComplex) -> dict:
    return {
        "name": T.label(),
        "carrier": [[x, s] for x, s in T.carrier],
        "delta": [[i, j, fmt_elem(e), str(c)] for (i, j), v in sorted(T.delta.items()) for e, c in sorted(v.items())],
    }


def _dims(d: dict) -> dict:
    return {str(k): v for k, v in sorted(d.items()) if v}


def _require_undeformed(inst: Instance):
    if inst.category.trunc is not None:
        raise UsageError("this command needs an instance over Q (use the deformation commands)")
    return inst.category


def _require_deformation(inst: Instance):
    if inst.category.trunc is None:
        raise UsageError("this command needs an instance over Q[t]/t^N")
    return inst.category


def _parse_series(text: str, N: int) -> TruncSeries:
    coeffs = {}
    for part in text.split(","):
        k, sep, c = part.partition(":")
        if not sep:
            raise UsageError(f"series term {part!r} must be exponent:coefficient")
        coeffs[int(k)] = coeffs.get(int(k), 0) + parse_rational(c)
    return TruncSeries(coeffs, N)


def _with_trunc(inst: Instance, N: int | None) -> Instance:
    if N is None or inst.category.trunc is None or N == inst.category.trunc:
        return inst
    A = inst.category.map_coefficients(lambda c: TruncSeries(dict(c.coeffs), N), trunc=N)
    conns = [deform.ConnectionObject(c.name, c.base, {e: TruncSeries(dict(v.coeffs), N) for e, v in c.alpha.items()})
             for c in inst.connections]
    return Instance(A, inst.complexes, conns, inst.description)


def _connections(inst: Instance) -> list[deform.ConnectionObject]:
    return inst.connections or [deform.ConnectionObject(x, x) for x in inst.category.objects]


# -- commands ----------------------------------------------------------------------


def cmd_validate(inst, args):
    A = inst.category
    rep = deform.validate_deformation(A) if A.trunc is not None else validate(A)
    text = [f"{A.name}: {'valid' if rep.valid else 'INVALID'}"]
    text += [f"  {v['kind']}: {json.dumps({k: w for k, w in v.items() if k != 'kind'})}" for v in rep.violations]
    return rep.to_json(), text


def cmd_h0(inst, args):
    A = _require_undeformed(inst)
    h = h_category(A, args.seed)
    out = h.to_json()
    text = [f"{A.name}: {'cohomologically unital' if h.unital else 'not cohomologically unital'}"]
    for (x, y), d in h.dims.items():
        if any(d.values()):
            text.append(f"  H(hom({x}, {y})) = {_dims(d)}")
    return out, text


def cmd_hom(inst, args):
    A = inst.category
    X, Y = resolve(inst, args.source), resolve(inst, args.target)
    if A.trunc is not None:
        A = A.to_laurent()
    coh = tw.hom_cohomology(A, X, Y, args.seed)
    out = {
        "source": X.label(), "target": Y.label(), "dims": _dims(coh.dims), "euler": coh.euler(),
        "representatives": {str(k): [[[i, j, fmt_elem(e), str(c)] for (i, j, e), c in sorted(z.items())] for z in reps]
                            for k, reps in sorted(coh.reps.items()) if reps},
    }
    return out, [f"H(hom({X.label()}, {Y.label()})) = {_dims(coh.dims)}  (euler {coh.euler()})"]


def cmd_hh(inst, args):
    A = _require_undeformed(inst)
    res = hochschild.hh(A, args.degree, args.length, args.seed)
    text = [f"HH^{args.degree}({A.name}) at length <= {args.length}: dim {res.dim}"
            f" (stable: {res.stable}, exact: {res.exact})"]
    for c in res.classes:
        text.append("  class: " + "; ".join(f"{'('+','.join(r[2])+')' if r[2] else '()'} -> {r[4]} {r[3]}"
                                              for r in hochschild.cochain_json(c.representative)))
    return res.to_json(), text


def _closed_morphism(A, X, Y, index: int | None, seed):
    if index is None:
        return tw.TwMorphism(X, Y, {}, 0, check=False)
    coh = tw.hom_cohomology(A, X, Y, seed)
    reps = coh.reps.get(0, [])
    if not 0 <= index < len(reps):
        raise UsageError(f"H^0(hom) has {len(reps)} classes; --class {index} is out of range")
    return tw.TwMorphism.from_vector(X, Y, reps[index], 0)


def cmd_cone(inst, args):
    A = _require_undeformed(inst)
    X, Y = resolve(inst, args.source), resolve(inst, args.target)
    c = _closed_morphism(A, X, Y, args.cls, args.seed)
    C = tw.cone(A, c)
    mc = tw.mc_check(A, C)
    acyclic = tw.is_acyclic(A, C)
    out = {"cone": _complex_json(C), "mc_valid": mc.valid, "acyclic": acyclic}
    return out, [f"{C!r}", f"  maurer-cartan: {'ok' if mc.valid else 'FAILED'}; acyclic: {acyclic}"]


def cmd_twist(inst, args):
    A = _require_undeformed(inst)
    S, L = resolve(inst, args.sphere), resolve(inst, args.object)
    res = tw.twist(A, S, L, args.seed)
    mc = tw.mc_check(A, res.complex)
    out = {
        "twist": _complex_json(res.complex),
        "classes": [[k, [[i, j, fmt_elem(e), str(c)] for (i, j, e), c in sorted(z.items())]] for k, z in res.classes],
        "mc_valid": mc.valid,
    }
    text = [f"{res.complex!r}", f"  {len(res.classes)} evaluation classes; maurer-cartan: {'ok' if mc.valid else 'FAILED'}"]
    if args.compare:
        T = resolve(inst, args.compare)
        w = tw.quasi_iso_witness(A, res.complex, T, args.budget, args.seed)
        out["compare"] = {"target": T.label(), **w.to_json()}
        out["budget_exhausted"] = not w.found and not w.exhaustive
        text.append(f"  quasi-isomorphic to {T.label()}: {'yes' if w.found else 'no witness found'}")
    return out, text


def cmd_quasi_iso(inst, args):
    A = _require_undeformed(inst)
    X, Y = resolve(inst, args.source), resolve(inst, args.target)
    w = tw.quasi_iso_witness(A, X, Y, args.budget, args.seed)
    verdict = "witness found" if w.found else ("none (exhaustive)" if w.exhaustive else "none found within budget")
    out = w.to_json()
    out["budget_exhausted"] = not w.found and not w.exhaustive
    return out, [f"{X.label()} -> {Y.label()}: {verdict} after {w.tried} candidates"]


def cmd_karoubi(inst, args):
    A = _require_undeformed(inst)
    X = resolve(inst, args.object)
    Y = resolve(inst, args.target) if args.target else X
    target = tw.karoubi_identity(A, Y)
    rows = []
    for pi in tw.idempotent_candidates(A, X, limit=args.limit):
        K = tw.KaroubiObject(X, pi)
        d = tw.dpi_hom(A, K, target)
        row = {"idempotent": tw._morphism_json(pi), "dpi_dims": _dims(d.dims),
               "splitting_verified": tw.verify_splitting(A, K, Y)}
        if args.target:
            row["image_iso_to_target"] = tw.karoubi_iso(A, K, Y)
        rows.append(row)
    full = tw.hom_cohomology(A, X, Y, args.seed).dims
    out = {"object": X.label(), "target": Y.label(), "full_dims": _dims(full), "idempotents": rows}
    text = [f"H(hom({X.label()}, {Y.label()})) = {_dims(full)}; {len(rows)} nontrivial idempotents"]
    text += [f"  image dims {r['dpi_dims']}, splitting {'ok' if r['splitting_verified'] else 'FAILED'}" for r in rows]
    return out, text


def cmd_generate(inst, args):
    A = _require_undeformed(inst)
    gens = [resolve(inst, g) for g in args.generators.split(",")]
    T = resolve(inst, args.target)
    res = tw.generate_search(A, gens, T, args.depth, args.budget, args.seed, args.shift_range)
    verdict = "found" if res.found else ("none (depth exhausted)" if res.exhausted else "none")
    return res.to_json(), [f"generate {T.label()} from {[g.label() for g in gens]}: {verdict} at depth {res.depth_reached}"]


def cmd_deform_validate(inst, args):
    _require_deformation(inst)
    return cmd_validate(inst, args)


def cmd_mc_solve(inst, args):
    E = _require_deformation(inst)
    objs = [args.object] if args.object else list(E.objects)
    out, text = {}, []
    for x in objs:
        if x not in E.objects:
            raise UsageError(f"unknown object {x!r}")
        r = deform.mc_solve(E, x, args.order, args.seed)
        out[x] = r.to_json()
        if r.solvable:
            a = ", ".join(f"{fmt_elem(e)}: {c}" for e, c in sorted(r.alpha.items())) or "0"
            text.append(f"{x}: {r.status}; alpha = {a}; parameters per order {r.parameter_dims}")
        else:
            text.append(f"{x}: obstructed at order {r.order}, class {[format_rational(c) for c in r.obstruction]}")
    return out, text


def _egl(inst):
    E = _require_deformation(inst)
    return deform.egl(E, _connections(inst))


def cmd_egl(inst, args):
    try:
        G = _egl(inst)
    except deform.NotFlat as exc:
        return {"flat": False, "error": str(exc)}, [f"not flat: {exc}"]
    rep = validate(G)
    out = {"flat": True, "objects": list(G.objects), "valid": rep.valid, "violations": rep.violations}
    return out, [f"Egl objects {list(G.objects)}: {'valid' if rep.valid else 'INVALID'}"]


def cmd_gen_fibre(inst, args):
    G = _egl(inst)
    r = deform.generic_hom(G, args.source, args.target, args.seed)
    return r.to_json(), [f"hom({args.source}, {args.target}): generic {_dims(r.dims)}, special {_dims(r.special_dims)}"]


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError("--window must be 'lo,hi'") from None
    if lo > hi:
        raise UsageError("--window needs lo <= hi")
    return lo, hi


def cmd_iso_laurent(inst, args):
    G = _egl(inst)
    r = deform.iso_over_laurent(G, args.source, args.target, args.budget, args.seed, _window(args.window))
    verdict = f"witness with valuation {r.valuation}" if r.found else "none found"
    out = r.to_json()
    out["budget_exhausted"] = not r.found and r.tried >= args.budget
    return out, [f"{args.source} -> {args.target} over Q((t)), window {r.window}: {verdict}"]


def cmd_defclass(inst, args):
    E = _require_deformation(inst)
    c = deform.deformation_class(E, args.length, args.seed)
    return c.to_json(), [f"first-order class in HH^2 (dim {c.hh_dim}, length <= {c.length}):"
                         f" {[format_rational(v) for v in c.coords]}{' (zero)' if c.is_zero else ''}"]


def cmd_reparam(inst, args):
    E = _require_deformation(inst)
    f = _parse_series(args.series, E.trunc)
    E2 = deform.reparametrize(E, f)
    rep = deform.validate_deformation(E2)
    new = Instance(E2, {}, [], inst.description)
    c1, c2 = deform.deformation_class(E, args.length), deform.deformation_class(E2, args.length)
    out = {"valid": rep.valid, "class_before": [format_rational(v) for v in c1.coords],
           "class_after": [format_rational(v) for v in c2.coords], "instance": to_data(new)}
    return out, [f"t -> {f}: {'valid' if rep.valid else 'INVALID'}; class {out['class_before']} -> {out['class_after']}"]


def cmd_e1(inst, args):
    bm, bb = geomfacts.parse_betti(args.betti_m), geomfacts.parse_betti(args.betti_bd)
    v = geomfacts.e1_dim(bm, bb, args.p, args.q)
    return {"p": args.p, "q": args.q, "e1": v}, [str(v)]


def cmd_sh2_bound(inst, args):
    bm, bb = geomfacts.parse_betti(args.betti_m), geomfacts.parse_betti(args.betti_bd)
    v = geomfacts.sh2_bound(bm.get(2, 0), bb.get(0, 0))
    return {"b2_m": bm.get(2, 0), "b0_bd": bb.get(0, 0), "bound": v}, [str(v)]


COMMANDS = {
    "validate": cmd_validate,
    "h0": cmd_h0,
    "hom": cmd_hom,
    "hh": cmd_hh,
    "cone": cmd_cone,
    "twist": cmd_twist,
    "quasi-iso": cmd_quasi_iso,
    "karoubi": cmd_karoubi,
    "generate": cmd_generate,
    "deform-validate": cmd_deform_validate,
    "mc-solve": cmd_mc_solve,
    "egl": cmd_egl,
    "gen-fibre": cmd_gen_fibre,
    "iso-laurent": cmd_iso_laurent,
    "defclass": cmd_defclass,
    "reparam": cmd_reparam,
    "e1": cmd_e1,
    "sh2-bound": cmd_sh2_bound,
}

NO_INSTANCE = {"e1", "sh2-bound"}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ainfty", description="Exact computations with finite A-infinity categories.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, *extra):
        sp = sub.add_parser(name)
        if name not in NO_INSTANCE:
            sp.add_argument("instance", help="instance file or bundled example name")
        sp.add_argument("--json", action="store_true", help="machine-readable report")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--trunc", type=int, default=None, help="override the truncation order N")
        for flag, kw in extra:
            sp.add_argument(flag, **kw)
        return sp

    src = ("--source", {"required": True})
    tgt = ("--target", {"required": True})
    budget = ("--budget", {"type": int, "default": DEFAULT_BUDGET})
    length = ("--length", {"type": int, "default": DEFAULT_LENGTH})
    add("validate")
    add("h0")
    add("hom", src, tgt)
    add("hh", ("--degree", {"type": int, "required": True}), length)
    add("cone", src, tgt, ("--class", {"type": int, "default": None, "dest": "cls",
                                       "help": "index of the H^0 class (default: zero morphism)"}))
    add("twist", ("--sphere", {"required": True}), ("--object", {"required": True}),
        ("--compare", {"default": None}), budget)
    add("quasi-iso", src, tgt, budget)
    add("karoubi", ("--object", {"required": True}), ("--target", {"default": None}),
        ("--limit", {"type": int, "default": 16}))
    add("generate", ("--generators", {"required": True}), tgt, ("--depth", {"type": int, "default": 2}), budget,
        ("--shift-range", {"type": int, "default": 2}))
    add("deform-validate")
    add("mc-solve", ("--object", {"default": None}), ("--order", {"type": int, "default": None}))
    add("egl")
    add("gen-fibre", src, tgt)
    add("iso-laurent", src, tgt, budget, ("--window", {"default": "-1,1"}))
    add("defclass", length)
    add("reparam", ("--series", {"required": True, "help": "exponent:coeff list, e.g. 1:2,2:1"}), length)
    betti = (("--betti-m", {"default": ""}), ("--betti-bd", {"default": ""}))
    add("e1", *betti, ("--p", {"type": int, "required": True}), ("--q", {"type": int, "required": True}))
    add("sh2-bound", *betti)
    return p


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.seed is None:
            args.seed = _default_seed()
        inst = None
        if args.command not in NO_INSTANCE:
            inst = _with_trunc(load(args.instance), args.trunc)
        result, text = COMMANDS[args.command](inst, args)
    except (UsageError, FormatError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=stderr)
        return 1
    except (tw.BudgetExceeded, PrecisionExhausted) as exc:
        print(f"limit: {exc}", file=stderr)
        return 2
    if args.json:
        report = {"command": args.command, "seed": args.seed}
        if inst is not None:
            report["instance"] = inst.name
            report["instance_hash"] = inst.digest()
        report["result"] = result
        stdout.write(json.dumps(report, indent=2, sort_keys=True, default=str) + "\n")
    else:
        stdout.write("\n".join(text) + "\n")
    # a search that stopped on its budget still reports, but signals the limit
    return 2 if result.get("budget_exhausted") else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
