"""Finite A-infinity categories given by structure constants.

Sign rule used everywhere in the package: the A-infinity relation at arity d
is

    sum_{m, n} (-1)^{*_n} mu^{d-m+1}(a_d, ..., a_{n+m+1}, mu^m(a_{n+m}, ..., a_{n+1}), a_n, ..., a_1) = 0

with ``*_n = sum_{j <= n} (|a_j| - 1)``.  Arguments are always written
rightmost-first, ``a_1`` being the morphism applied first.

A morphism basis element is an ``Elem`` triple ``(source, target, label)``.
Multilinear maps (the structure maps, Hochschild cochains) are stored flat as
``{(inputs, output): coefficient}`` where ``inputs`` is the tuple
``(a_d, ..., a_1)``; a length-zero entry has ``inputs == ()`` and an output
in some ``hom(X, X)``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactlin import (
    KeyedCohomology,
    SparseMatrix,
    TruncLaurent,
    TruncSeries,
    keyed_cohomology,
    solve,
    vec_axpy,
    vec_scale,
)

Elem = tuple  # (source, target, label)
Key = tuple  # (inputs tuple, output Elem)


class CategoryError(ValueError):
    """Structurally malformed category data."""


class AInftyCategory:
    """Objects, graded hom bases and sparse structure constants.

    ``trunc`` is ``None`` for categories over Q and ``N`` for categories over
    Q[t]/t^N (coefficients are then :class:`TruncSeries`).  ``mu0`` holds the
    curvature terms and is only nonempty for deformations.
    """

    def __init__(
        self,
        objects: Sequence[str],
        homs: Mapping[tuple[str, str], Sequence[tuple[str, int]]],
        mu: Mapping[Key, object],
        dmax: int | None = None,
        *,
        trunc: int | None = None,
        mu0: Mapping[str, Mapping[Elem, object]] | None = None,
        name: str = "",
        laurent: bool = False,
    ):
        self.laurent = laurent
        self.objects = tuple(objects)
        self.homs = {}
        self.degrees: dict[Elem, int] = {}
        for (x, y), basis in homs.items():
            if x not in self.objects or y not in self.objects:
                raise CategoryError(f"hom space {x}|{y} refers to an unknown object")
            labels = [lab for lab, _ in basis]
            if len(set(labels)) != len(labels):
                raise CategoryError(f"duplicate labels in hom({x}, {y})")
            self.homs[(x, y)] = tuple((str(lab), int(deg)) for lab, deg in basis)
            for lab, deg in basis:
                self.degrees[(x, y, str(lab))] = int(deg)
        self.trunc = trunc
        self.name = name
        self.mu: dict[Key, object] = {}
        for (ins, out), c in mu.items():
            c = self._coerce(c)
            if c:
                self.mu[(tuple(ins), out)] = c
        self.mu0: dict[str, dict[Elem, object]] = {}
        for x, vec in (mu0 or {}).items():
            clean = {e: self._coerce(c) for e, c in vec.items()}
            clean = {e: c for e, c in clean.items() if c}
            if clean:
                self.mu0[x] = clean
        arities = [len(ins) for ins, _ in self.mu]
        self.dmax = dmax if dmax is not None else max(arities, default=1)
        self._by_arity: dict[int, dict[tuple, dict[Elem, object]]] | None = None

    # -- basic accessors ---------------------------------------------------

    def _coerce(self, c):
        if self.laurent:
            return TruncLaurent._coerce(c)
        if self.trunc is None:
            if isinstance(c, TruncSeries):
                raise CategoryError("series coefficient in a category over Q")
            return Fraction(c)
        if isinstance(c, TruncSeries):
            return c.truncate(self.trunc) if c.trunc > self.trunc else c
        return TruncSeries({0: c}, self.trunc)

    @property
    def is_deformation(self) -> bool:
        return self.trunc is not None

    def one(self):
        if self.laurent:
            return TruncLaurent.exact(1)
        return Fraction(1) if self.trunc is None else TruncSeries({0: 1}, self.trunc)

    def basis(self, x: str, y: str) -> list[Elem]:
        return [(x, y, lab) for lab, _ in self.homs.get((x, y), ())]

    def basis_by_degree(self, x: str, y: str) -> dict[int, list[Elem]]:
        out: dict[int, list[Elem]] = defaultdict(list)
        for lab, deg in self.homs.get((x, y), ()):
            out[deg].append((x, y, lab))
        return dict(out)

    def degree(self, e: Elem) -> int:
        return self.degrees[e]

    def vec_degree(self, v: Mapping[Elem, object]) -> int | None:
        degs = {self.degrees[e] for e in v}
        if len(degs) > 1:
            raise CategoryError(f"inhomogeneous vector {v!r}")
        return degs.pop() if degs else None

    def elem(self, label: str, x: str | None = None, y: str | None = None) -> Elem:
        """Look up a basis element by label (optionally within ``hom(x, y)``)."""
        found = [e for e in self.degrees if e[2] == label and (x is None or e[0] == x)
                 and (y is None or e[1] == y)]
        if len(found) != 1:
            raise KeyError(f"label {label!r} is {'ambiguous' if found else 'unknown'}")
        return found[0]

    def structure(self, include_mu0: bool = True) -> dict[Key, object]:
        """The structure maps as one flat multilinear map."""
        flat = dict(self.mu)
        if include_mu0:
            for x, vec in self.mu0.items():
                for e, c in vec.items():
                    flat[((), e)] = c
        return flat

    def by_arity(self) -> dict[int, dict[tuple, dict[Elem, object]]]:
        if self._by_arity is None:
            table: dict[int, dict[tuple, dict[Elem, object]]] = defaultdict(dict)
            for (ins, out), c in self.mu.items():
                table[len(ins)].setdefault(ins, {})[out] = c
            self._by_arity = dict(table)
        return self._by_arity

    def composable_tuples(self, d: int, start: str | None = None) -> Iterable[tuple]:
        """All composable basis tuples ``(a_d, ..., a_1)``."""

        def extend(obj, length):
            if length == 0:
                yield ()
                return
            for y in self.objects:
                for e in self.basis(obj, y):
                    for rest in extend(y, length - 1):
                        yield rest + (e,)

        starts = [start] if start is not None else self.objects
        for x in starts:
            for tup in extend(x, d):
                yield tup

    # -- evaluation ----------------------------------------------------------

    def mu_eval(self, args: Sequence[Mapping[Elem, object]]) -> dict[Elem, object]:
        """``mu^d(args[0], ..., args[-1])`` on vectors (args rightmost-last)."""
        d = len(args)
        table = self.by_arity().get(d)
        out: dict[Elem, object] = {}
        if d == 0:
            return out
        if not table:
            return out
        for combo in itertools.product(*(list(a.items()) for a in args)):
            key = tuple(e for e, _ in combo)
            row = table.get(key)
            if row is None:
                continue
            coeff = 1
            for _, c in combo:
                coeff = coeff * c
            vec_axpy(out, coeff, row)
        return out

    def mu1(self, e: Elem) -> dict[Elem, object]:
        return dict(self.by_arity().get(1, {}).get((e,), {}))

    def special_fibre(self) -> "AInftyCategory":
        if self.trunc is None:
            return self
        mu = {k: c.constant_term for k, c in self.mu.items() if c.constant_term}
        return AInftyCategory(self.objects, self.homs, mu, self.dmax, name=self.name)

    def map_coefficients(self, fn, trunc=None, mu0=True, laurent=None) -> "AInftyCategory":
        return AInftyCategory(
            self.objects, self.homs, {k: fn(c) for k, c in self.mu.items()}, self.dmax,
            trunc=self.trunc if trunc is None else trunc,
            mu0={x: {e: fn(c) for e, c in v.items()} for x, v in self.mu0.items()} if mu0 else None,
            name=self.name,
            laurent=self.laurent if laurent is None else laurent,
        )

    def to_laurent(self) -> "AInftyCategory":
        """Extend scalars from Q[t]/t^N to truncated Laurent series (invert t)."""
        if self.laurent:
            return self
        conv = (lambda c: c.to_laurent()) if self.trunc is not None else TruncLaurent._coerce
        return self.map_coefficients(conv, laurent=True)

    def __eq__(self, other):
        if not isinstance(other, AInftyCategory):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.homs == other.homs
            and self.mu == other.mu
            and self.mu0 == other.mu0
            and self.trunc == other.trunc
            and self.dmax == other.dmax
        )

    def __repr__(self):
        base = "Q" if self.trunc is None else f"Q[t]/t^{self.trunc}"
        if self.laurent:
            base = "Q((t))"
        return f"AInftyCategory({self.name or '?'}, objects={list(self.objects)}, base={base}, dmax={self.dmax})"


# -- insertion (pre-Lie) kernel ---------------------------------------------


def reduced_weight(degrees: Mapping[Elem, int], elems: Iterable[Elem]) -> int:
    return sum(degrees[e] - 1 for e in elems)


def insert(
    outer: Mapping[Key, object],
    inner: Mapping[Key, object],
    degrees: Mapping[Elem, int],
    inner_shift: int = 1,
    max_length: int | None = None,
) -> dict[Key, object]:
    """Signed insertion of ``inner`` into every input slot of ``outer``.

    Each term carries ``(-1)^(inner_shift * *_n)`` where ``*_n`` is the reduced
    degree of the inputs to the right of the slot.  With ``inner_shift = 1``
    and ``outer = inner = mu`` this is the A-infinity relation operator.
    """
    by_out: dict[Elem, list[tuple[tuple, object]]] = defaultdict(list)
    for (ins, out), c in inner.items():
        by_out[out].append((ins, c))
    result: dict[Key, object] = {}
    odd_shift = inner_shift % 2 == 1
    for (ins, out), c1 in outer.items():
        k = len(ins)
        # slot j counted from the right: ins[k-1] is a_1
        right_weight = 0
        for pos in range(k - 1, -1, -1):
            slot = ins[pos]
            cands = by_out.get(slot)
            if cands:
                sign = -1 if (odd_shift and right_weight % 2) else 1
                left, right = ins[:pos], ins[pos + 1:]
                for ins2, c2 in cands:
                    new_ins = left + ins2 + right
                    if max_length is not None and len(new_ins) > max_length:
                        continue
                    key = (new_ins, out)
                    val = result.get(key, 0) + sign * c1 * c2
                    if val:
                        result[key] = val
                    else:
                        result.pop(key, None)
            right_weight += degrees[slot] - 1
    return result


# -- validation ---------------------------------------------------------------


@dataclass
class ValidationReport:
    valid: bool
    violations: list[dict] = field(default_factory=list)
    failures_by_arity: dict[int, int] = field(default_factory=dict)

    def summary(self) -> str:
        if self.valid:
            return "valid"
        kinds = sorted({v["kind"] for v in self.violations})
        return f"invalid ({len(self.violations)} violations: {', '.join(kinds)})"

    def to_json(self):
        return {
            "valid": self.valid,
            "failures_by_arity": {str(k): v for k, v in sorted(self.failures_by_arity.items())},
            "violations": self.violations,
        }


def fmt_elem(e: Elem) -> str:
    return f"{e[0]}|{e[1]}:{e[2]}"


def structural_violations(A: AInftyCategory) -> list[dict]:
    out = []
    for (ins, o), c in A.mu.items():
        where = {"inputs": [fmt_elem(e) for e in ins], "output": fmt_elem(o)}
        missing = [e for e in ins + (o,) if e not in A.degrees]
        if missing:
            out.append({"kind": "unknown-element", **where})
            continue
        if not ins:
            out.append({"kind": "zero-arity-in-mu", **where})
            continue
        chain_ok = all(ins[i][0] == ins[i + 1][1] for i in range(len(ins) - 1))
        if not chain_ok or o[0] != ins[-1][0] or o[1] != ins[0][1]:
            out.append({"kind": "composability", **where})
            continue
        expected = sum(A.degrees[e] for e in ins) + 2 - len(ins)
        if A.degrees[o] != expected:
            out.append({"kind": "degree", "expected": expected, "found": A.degrees[o], **where})
        if len(ins) > A.dmax:
            out.append({"kind": "arity-bound", **where})
    for x, vec in A.mu0.items():
        for e, c in vec.items():
            where = {"inputs": [], "output": fmt_elem(e), "object": x}
            if e not in A.degrees or e[0] != x or e[1] != x:
                out.append({"kind": "composability", **where})
            elif A.degrees[e] != 2:
                out.append({"kind": "degree", "expected": 2, "found": A.degrees[e], **where})
    return out


def relation_defects(A: AInftyCategory) -> dict[Key, object]:
    """Nonzero values of the A-infinity relation sums, keyed by input tuple."""
    flat = A.structure()
    return insert(flat, flat, A.degrees, 1)


def validate(A: AInftyCategory, max_report: int = 50) -> ValidationReport:
    """Check degrees, composability and all A-infinity relations exactly."""
    violations = structural_violations(A)
    if any(v["kind"] in ("unknown-element", "composability") for v in violations):
        return ValidationReport(False, violations[:max_report])
    defects = relation_defects(A)
    failures = {d: 0 for d in range(0 if A.mu0 else 1, 2 * A.dmax)}
    grouped: dict[tuple, dict] = defaultdict(dict)
    for (ins, o), c in defects.items():
        grouped[ins][o] = c
    for ins in sorted(grouped, key=lambda t: (len(t), t)):
        failures[len(ins)] = failures.get(len(ins), 0) + 1
        if len(violations) < max_report:
            violations.append({
                "kind": "relation",
                "arity": len(ins),
                "inputs": [fmt_elem(e) for e in ins],
                "value": {fmt_elem(o): str(c) for o, c in sorted(grouped[ins].items())},
            })
    return ValidationReport(not violations, violations, failures)


# -- hom cohomology and the cohomological category ----------------------------


def _field_convert(A: AInftyCategory):
    """Coefficient map to a field: identity over Q, Laurent over Q[t]/t^N."""
    if A.trunc is None or A.laurent:
        return None
    return lambda c: c.to_laurent()


def hom_cohomology(A: AInftyCategory, x: str, y: str, seed: int | None = None) -> KeyedCohomology:
    """Cohomology of ``(hom(x, y), mu^1)`` (over Laurent scalars for deformations)."""
    basis = A.basis_by_degree(x, y)
    if basis:
        lo, hi = min(basis), max(basis)
        basis = {k: basis.get(k, []) for k in range(lo - 1, hi + 2)}
    return keyed_cohomology(basis, A.mu1, convert=_field_convert(A), seed=seed)


def compose_classes(A: AInftyCategory, b: Mapping, a: Mapping) -> dict:
    """Cohomological composition ``[b].[a] = (-1)^|a| [mu^2(b, a)]``."""
    da = A.vec_degree(a) or 0
    out = A.mu_eval([b, a])
    return vec_scale(-1, out) if da % 2 else out


@dataclass
class HCategory:
    objects: tuple
    dims: dict[tuple[str, str], dict[int, int]]
    cohomology: dict[tuple[str, str], KeyedCohomology]
    products: dict[tuple[str, str, str], dict[tuple[int, int, int, int], list]]
    units: dict[str, list | None]

    @property
    def unital(self) -> bool:
        return all(u is not None for u in self.units.values())

    def rep_list(self, x: str, y: str) -> list[tuple[int, int, dict]]:
        """Flattened representatives ``(degree, index, vector)`` of ``H(hom(x, y))``."""
        coh = self.cohomology[(x, y)]
        return [(k, i, z) for k in sorted(coh.reps) for i, z in enumerate(coh.reps[k])]

    def to_json(self):
        return {
            "objects": list(self.objects),
            "dims": {f"{x}|{y}": {str(k): n for k, n in d.items() if n} for (x, y), d in self.dims.items()},
            "unital": self.unital,
            "units": {x: (None if u is None else [str(c) for c in u]) for x, u in self.units.items()},
            "products": {
                f"{z}<-{y}<-{x}": {f"{kb}.{ib}*{ka}.{ia}": [str(c) for c in v] for (kb, ib, ka, ia), v in tab.items()}
                for (x, y, z), tab in self.products.items()
            },
        }


def h_category(A: AInftyCategory, seed: int | None = None) -> HCategory:
    """Graded cohomology category: dims, product table on representatives, units.

    Products are recorded as class coordinates in the target degree.
    """
    coh = {(x, y): hom_cohomology(A, x, y, seed) for x in A.objects for y in A.objects}
    dims = {k: v.dims for k, v in coh.items()}

    def coords(x, y, vec):
        if not vec:
            return None
        k = A.vec_degree(vec)
        return k, coh[(x, y)].coords(k, vec)

    products = {}
    for x, y, z in itertools.product(A.objects, repeat=3):
        table = {}
        for ka, ia, a in _reps(coh[(x, y)]):
            for kb, ib, b in _reps(coh[(y, z)]):
                c = coords(x, z, compose_classes(A, b, a))
                if c is not None and any(c[1]):
                    table[(kb, ib, ka, ia)] = c[1]
        products[(x, y, z)] = table

    units = {x: _find_unit(A, coh, x) for x in A.objects}
    return HCategory(A.objects, dims, coh, products, units)


def _reps(c: KeyedCohomology):
    for k in sorted(c.reps):
        for i, z in enumerate(c.reps[k]):
            yield k, i, z


def _find_unit(A: AInftyCategory, coh, x: str) -> list | None:
    """Coordinates of the two-sided unit in ``H^0(end x)`` or ``None``."""
    end0 = coh[(x, x)].reps.get(0, [])
    if not end0:
        return None
    n = len(end0)
    rows: list[dict] = []
    rhs: list = []

    def add_condition(target_key, k, target_vec, images):
        # images[i] = coordinates of u_i acting on the class; want sum l_i images[i] = coords(target)
        want = coh[target_key].coords(k, target_vec)
        for r in range(len(want)):
            rows.append({i: images[i][r] for i in range(n) if images[i][r]})
            rhs.append(want[r])

    for y in A.objects:
        for k, _, a in _reps(coh[(y, x)]):
            imgs = []
            for u in end0:
                prod = compose_classes(A, u, a)
                imgs.append(coh[(y, x)].coords(k, prod) if prod else [0] * len(coh[(y, x)].reps[k]))
            add_condition((y, x), k, a, imgs)
        for k, _, b in _reps(coh[(x, y)]):
            imgs = []
            for u in end0:
                prod = compose_classes(A, b, u)
                imgs.append(coh[(x, y)].coords(k, prod) if prod else [0] * len(coh[(x, y)].reps[k]))
            add_condition((x, y), k, b, imgs)
    m = SparseMatrix(len(rows), n, {(r, c): v for r, row in enumerate(rows) for c, v in row.items()})
    sol = solve(m, {r: v for r, v in enumerate(rhs) if v})
    if sol is None:
        return None
    return [sol.get(i, 0) for i in range(n)]


def unit_representative(A: AInftyCategory, x: str, h: HCategory | None = None) -> dict | None:
    """A chain-level cocycle representing the cohomological unit of ``x``."""
    h = h or h_category(A)
    u = h.units.get(x)
    if u is None:
        return None
    out: dict = {}
    for c, z in zip(u, h.cohomology[(x, x)].reps.get(0, [])):
        vec_axpy(out, c, z)
    return out


# -- convenience builder --------------------------------------------------------


class Builder:
    """Small helper for assembling categories in code and tests."""

    def __init__(self, name: str = "", trunc: int | None = None):
        self.name = name
        self.trunc = trunc
        self.objects: list[str] = []
        self.homs: dict[tuple[str, str], list[tuple[str, int]]] = {}
        self.mu: dict[Key, object] = {}
        self.mu0: dict[str, dict[Elem, object]] = {}
        self.dmax: int | None = None

    def obj(self, *names: str) -> "Builder":
        for n in names:
            if n not in self.objects:
                self.objects.append(n)
        return self

    def hom(self, x: str, y: str, *basis: tuple[str, int]) -> "Builder":
        self.obj(x, y)
        self.homs.setdefault((x, y), []).extend(basis)
        return self

    def _elem(self, spec) -> Elem:
        if isinstance(spec, tuple):
            return spec
        found = [(x, y, lab) for (x, y), b in self.homs.items() for lab, _ in b if lab == spec]
        if len(found) != 1:
            raise KeyError(f"label {spec!r} is {'ambiguous' if found else 'unknown'}")
        return found[0]

    def set(self, inputs: Sequence, output, coeff=1) -> "Builder":
        key = (tuple(self._elem(s) for s in inputs), self._elem(output))
        self.mu[key] = self.mu.get(key, 0) + coeff
        return self

    def curvature(self, x: str, output, coeff) -> "Builder":
        e = self._elem(output)
        self.mu0.setdefault(x, {})[e] = coeff
        return self

    def unital(self, unit_labels: Mapping[str, str]) -> "Builder":
        """Add strict-unit products ``mu2(a, e) = a`` and ``mu2(e, a) = (-1)^|a| a``."""
        for (x, y), basis in list(self.homs.items()):
            for lab, deg in basis:
                a = (x, y, lab)
                if x in unit_labels:
                    self.set([a, self._elem(unit_labels[x])], a, 1)
                if y in unit_labels and not (x == y and lab == unit_labels[y]):
                    self.set([self._elem(unit_labels[y]), a], a, (-1) ** (deg % 2))
        return self

    def build(self) -> AInftyCategory:
        return AInftyCategory(self.objects, self.homs, self.mu, self.dmax, trunc=self.trunc,
                              mu0=self.mu0, name=self.name)
