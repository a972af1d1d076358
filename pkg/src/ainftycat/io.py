"""The ``ainfty-v1`` JSON instance format.

``mu`` entries list their inputs leftmost-first, i.e. ``(a_d, ..., a_1)``:
the last input is the one applied first.  Rational coefficients are strings
``"p/q"``; series coefficients are lists of ``[exponent, "p/q"]`` pairs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .ainfty import AInftyCategory, Elem
from .deform import ConnectionObject
from .exactlin import TruncSeries, format_rational, parse_rational
from .tw import TwComplex

FORMAT = "ainfty-v1"


class FormatError(ValueError):
    pass


@dataclass
class Instance:
    category: AInftyCategory
    complexes: dict[str, TwComplex] = field(default_factory=dict)
    connections: list[ConnectionObject] = field(default_factory=list)
    description: str = ""

    @property
    def name(self) -> str:
        return self.category.name

    def digest(self) -> str:
        return hashlib.sha256(dumps(self).encode()).hexdigest()[:16]


def _hom_key(x: str, y: str) -> str:
    return f"{x}|{y}"


def _split_key(key: str) -> tuple[str, str]:
    x, sep, y = key.partition("|")
    if not sep:
        raise FormatError(f"hom key {key!r} must look like 'Src|Tgt'")
    return x, y


def _coeff_in(raw, trunc: int | None):
    if trunc is None:
        if not isinstance(raw, str):
            raise FormatError(f"coefficient {raw!r} must be a rational string over Q")
        try:
            return parse_rational(raw)
        except ValueError as exc:
            raise FormatError(str(exc)) from None
    if isinstance(raw, str):
        return TruncSeries({0: parse_rational(raw)}, trunc)
    if not isinstance(raw, list):
        raise FormatError(f"series coefficient {raw!r} must be a list of [exponent, rational] pairs")
    try:
        return TruncSeries.from_pairs(raw, trunc)
    except (ValueError, TypeError) as exc:
        raise FormatError(f"bad series coefficient {raw!r}: {exc}") from None


def _coeff_out(c, trunc: int | None):
    if trunc is None:
        return format_rational(c)
    return [[k, format_rational(v)] for k, v in sorted(c.coeffs.items())]


def _elem_in(raw, degrees) -> Elem:
    if not (isinstance(raw, list) and len(raw) == 2):
        raise FormatError(f"element reference {raw!r} must be [homkey, label]")
    x, y = _split_key(raw[0])
    e = (x, y, str(raw[1]))
    if e not in degrees:
        raise FormatError(f"unknown element {raw[0]}:{raw[1]}")
    return e


def _elem_out(e: Elem) -> list:
    return [_hom_key(e[0], e[1]), e[2]]


def parse(data: dict) -> Instance:
    if not isinstance(data, dict) or data.get("format") != FORMAT:
        raise FormatError(f"expected format tag {FORMAT!r}")
    base = data.get("base", "Q")
    if base == "Q":
        trunc = None
    elif isinstance(base, dict) and "series" in base:
        s = base["series"]
        if s.get("var", "t") != "t":
            raise FormatError("only the variable 't' is supported")
        trunc = int(s.get("trunc", 8))
        if trunc < 1:
            raise FormatError("trunc must be positive")
    else:
        raise FormatError(f"unsupported base {base!r}")
    objects = list(data.get("objects", []))
    if len(set(objects)) != len(objects):
        raise FormatError("duplicate object names")
    homs = {}
    for key, basis in data.get("homs", {}).items():
        x, y = _split_key(key)
        if x not in objects or y not in objects:
            raise FormatError(f"hom {key} uses an undeclared object")
        homs[(x, y)] = [(b["label"], int(b["degree"])) for b in basis]
    degrees = {(x, y, str(lab)): d for (x, y), b in homs.items() for lab, d in b}
    mu: dict = {}
    for entry in data.get("mu", []):
        ins = tuple(_elem_in(r, degrees) for r in entry["inputs"])
        if "d" in entry and int(entry["d"]) != len(ins):
            raise FormatError(f"entry arity {entry['d']} does not match {len(ins)} inputs")
        out = _elem_in(entry["output"], degrees)
        key = (ins, out)
        if key in mu:
            raise FormatError(f"duplicate mu entry {entry}")
        mu[key] = _coeff_in(entry["coeff"], trunc)
    mu0: dict = {}
    for x, rows in data.get("mu0", {}).items():
        if trunc is None:
            raise FormatError("mu0 requires a series base")
        for row in rows:
            e = _elem_in(row[:2], degrees)
            mu0.setdefault(x, {})[e] = _coeff_in(row[2], trunc)
    try:
        A = AInftyCategory(objects, homs, mu, data.get("dmax"), trunc=trunc, mu0=mu0, name=data.get("name", ""))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    complexes = {}
    for block in data.get("tw", []):
        delta: dict = {}
        for i, j, hk, lab, c in block.get("delta", []):
            e = _elem_in([hk, lab], degrees)
            delta.setdefault((int(i), int(j)), {})[e] = _coeff_in(c, trunc)
        complexes[block["name"]] = TwComplex([(x, int(s)) for x, s in block["carrier"]], delta, block["name"])
    connections = []
    for block in data.get("connections", []):
        alpha = {}
        for hk, lab, c in block.get("alpha", []):
            alpha[_elem_in([hk, lab], degrees)] = _coeff_in(c, trunc)
        connections.append(ConnectionObject(block["name"], block["base"], alpha))
    return Instance(A, complexes, connections, data.get("description", ""))


def to_data(inst: Instance) -> dict:
    A = inst.category
    trunc = A.trunc
    out: dict[str, Any] = {"format": FORMAT, "name": A.name}
    if inst.description:
        out["description"] = inst.description
    out["base"] = "Q" if trunc is None else {"series": {"var": "t", "trunc": trunc}}
    out["objects"] = list(A.objects)
    out["dmax"] = A.dmax
    out["homs"] = {
        _hom_key(x, y): [{"label": lab, "degree": d} for lab, d in A.homs[(x, y)]]
        for x in A.objects for y in A.objects if (x, y) in A.homs
    }
    order = {e: i for i, e in enumerate(e for x in A.objects for y in A.objects for e in A.basis(x, y))}
    entries = sorted(A.mu.items(), key=lambda kv: (len(kv[0][0]), [order[e] for e in kv[0][0]], order[kv[0][1]]))
    out["mu"] = [
        {"d": len(ins), "inputs": [_elem_out(e) for e in ins], "output": _elem_out(o), "coeff": _coeff_out(c, trunc)}
        for (ins, o), c in entries
    ]
    if A.mu0:
        out["mu0"] = {
            x: [_elem_out(e) + [_coeff_out(c, trunc)] for e, c in sorted(A.mu0[x].items(), key=lambda kv: order[kv[0]])]
            for x in A.objects if x in A.mu0
        }
    if inst.complexes:
        out["tw"] = [
            {
                "name": name,
                "carrier": [[x, s] for x, s in T.carrier],
                "delta": [[i, j] + _elem_out(e) + [_coeff_out(c, trunc)]
                          for (i, j), v in sorted(T.delta.items()) for e, c in sorted(v.items(), key=lambda kv: order[kv[0]])],
            }
            for name, T in inst.complexes.items()
        ]
    if inst.connections:
        out["connections"] = [
            {"name": c.name, "base": c.base,
             "alpha": [_elem_out(e) + [_coeff_out(v, trunc)] for e, v in sorted(c.alpha.items(), key=lambda kv: order[kv[0]])]}
            for c in inst.connections
        ]
    return out


def dumps(inst: Instance) -> str:
    return json.dumps(to_data(inst), indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return parse(data)


def load(path: str | Path) -> Instance:
    """Read an instance from a path, falling back to the bundled example with that stem."""
    p = Path(path)
    if not p.exists() and p.suffix in ("", ".json"):
        bundled = resources.files("ainftycat") / "data" / "corpus" / f"{p.stem}.json"
        if bundled.is_file():
            return loads(bundled.read_text())
    try:
        return loads(p.read_text())
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None


def bundled_names() -> list[str]:
    d = resources.files("ainftycat") / "data" / "corpus"
    return sorted(f.name[:-5] for f in d.iterdir() if f.name.endswith(".json"))


def bundled(name: str) -> Instance:
    return load(name)


def schema() -> dict:
    return json.loads((resources.files("ainftycat") / "data" / "ainfty-v1.schema.json").read_text())
