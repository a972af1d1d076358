"""Twisted complexes over a finite A-infinity category.

A twisted complex is a shifted formal sum ``X_0[s_0] + ... + X_{n-1}[s_{n-1}]``
with a connection ``delta``.  ``delta[(i, j)]`` is a vector in
``hom_A(X_i, X_j)`` (a map *from* summand ``i`` *to* summand ``j``) and is
nonzero only for ``i > j``; with that ordering ``Cone(c: C -> D)`` has carrier
``D + C[1]``.

A basis element ``a`` of ``hom_A(X, Y)`` of degree ``|a|`` sits in
``hom(X[s], Y[t])`` in degree ``|a| + s - t``.  On shifted objects the
structure maps pick up ``(-1)^s`` with ``s`` the shift of the source of the
rightmost argument; with that rule the identity of ``X[s]`` is ``(-1)^s e_X``.
Connections have reduced degree zero, so inserting them contributes no sign.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .ainfty import AInftyCategory, Elem, ValidationReport, fmt_elem, h_category, unit_representative
from .exactlin import KeyedCohomology, TruncLaurent, keyed_cohomology, solve, SparseMatrix, vec_axpy, vec_scale


class ShapeMismatch(ValueError):
    pass


class NotClosed(ValueError):
    pass


class WrongDegree(ValueError):
    pass


class NotIdempotent(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


def _freeze(entries: Mapping) -> tuple:
    return tuple(sorted((k, tuple(sorted((e, str(c)) for e, c in v.items()))) for k, v in entries.items()))


def _clean(entries: Mapping) -> dict:
    return {k: dict(v) for k, v in entries.items() if v}


class TwComplex:
    """Carrier ``((object, shift), ...)`` plus lower-triangular connection."""

    __slots__ = ("carrier", "delta", "name", "_key")

    def __init__(self, carrier: Sequence[tuple[str, int]], delta: Mapping | None = None, name: str = ""):
        self.carrier = tuple((str(x), int(s)) for x, s in carrier)
        self.delta = _clean(delta or {})
        self.name = name
        self._key = None

    @classmethod
    def of(cls, obj: str, shift: int = 0) -> "TwComplex":
        return cls([(obj, shift)], name=obj if shift == 0 else f"{obj}[{shift}]")

    def __len__(self):
        return len(self.carrier)

    @property
    def key(self):
        if self._key is None:
            self._key = (self.carrier, _freeze(self.delta))
        return self._key

    def __eq__(self, other):
        return isinstance(other, TwComplex) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        parts = " + ".join(x if s == 0 else f"{x}[{s}]" for x, s in self.carrier) or "0"
        return f"TwComplex({self.name + ': ' if self.name else ''}{parts}, |delta|={len(self.delta)})"

    def label(self) -> str:
        return self.name or (" + ".join(x if s == 0 else f"{x}[{s}]" for x, s in self.carrier) or "0")

    def as_morphism(self) -> "TwMorphism":
        return TwMorphism(self, self, self.delta, 1, check=False)


class TwMorphism:
    """Matrix of A-morphisms; ``entries[(i, j)]`` maps source summand i to target summand j."""

    __slots__ = ("source", "target", "entries", "degree")

    def __init__(self, source: TwComplex, target: TwComplex, entries: Mapping, degree: int,
                 A: AInftyCategory | None = None, check: bool = True):
        self.source = source
        self.target = target
        self.entries = _clean(entries)
        self.degree = degree
        if check and A is not None:
            for (i, j), v in self.entries.items():
                xi, si = source.carrier[i]
                yj, tj = target.carrier[j]
                for e in v:
                    if e[0] != xi or e[1] != yj:
                        raise ShapeMismatch(f"entry ({i}, {j}) element {e} not in hom({xi}, {yj})")
                    if A.degrees[e] + si - tj != degree:
                        raise WrongDegree(f"entry ({i}, {j}) has shifted degree {A.degrees[e] + si - tj} != {degree}")

    def __bool__(self):
        return bool(self.entries)

    def __add__(self, other: "TwMorphism") -> "TwMorphism":
        out = {k: dict(v) for k, v in self.entries.items()}
        for k, v in other.entries.items():
            vec_axpy(out.setdefault(k, {}), 1, v)
        return TwMorphism(self.source, self.target, out, self.degree, check=False)

    def scale(self, c) -> "TwMorphism":
        return TwMorphism(self.source, self.target, {k: vec_scale(c, v) for k, v in self.entries.items()},
                          self.degree, check=False)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __repr__(self):
        return f"TwMorphism({self.source.label()} -> {self.target.label()}, deg={self.degree}, nnz={len(self.entries)})"

    def to_vector(self) -> dict:
        """Flatten to ``{(i, j, elem): coeff}`` (the hom-complex basis keys)."""
        return {(i, j, e): c for (i, j), v in self.entries.items() for e, c in v.items()}

    @classmethod
    def from_vector(cls, source, target, vec: Mapping, degree: int) -> "TwMorphism":
        entries: dict = defaultdict(dict)
        for (i, j, e), c in vec.items():
            entries[(i, j)][e] = c
        return cls(source, target, entries, degree, check=False)


# -- structure maps -------------------------------------------------------------


def sigma_mu(A: AInftyCategory, mats: Sequence[Mapping], carriers: Sequence[Sequence[tuple[str, int]]]) -> dict:
    """Structure map of the shifted additive enlargement on matrices.

    ``mats`` is ``[f_d, ..., f_1]`` and ``carriers`` is ``[C_0, ..., C_d]``.
    """
    seq = list(reversed(mats))
    paths = [(i0, i0, ()) for i0 in range(len(carriers[0]))]
    for f in seq:
        by_src: dict[int, list] = defaultdict(list)
        for (i, j), v in f.items():
            by_src[i].append((j, v))
        paths = [(i0, j, vecs + (v,)) for i0, cur, vecs in paths for j, v in by_src.get(cur, ())]
        if not paths:
            return {}
    out: dict = {}
    for i0, i_end, vecs in paths:
        val = A.mu_eval(list(reversed(vecs)))
        if not val:
            continue
        sign = -1 if carriers[0][i0][1] % 2 else 1
        vec_axpy(out.setdefault((i0, i_end), {}), sign, val)
    return _clean(out)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for k in range(total + 1):
        for rest in _compositions(total - k, parts - 1):
            yield (k,) + rest


def tw_mu(A: AInftyCategory, fs: Sequence[TwMorphism]) -> TwMorphism:
    """``mu^d_Tw(f_d, ..., f_1)`` summed over all connection insertions."""
    d = len(fs)
    if d == 0:
        raise ValueError("arity must be positive")
    chain = list(reversed(fs))  # f_1, ..., f_d
    for a, b in zip(chain, chain[1:]):
        if a.target != b.source:
            raise ShapeMismatch(f"{b!r} cannot follow {a!r}")
    objs = [chain[0].source] + [f.target for f in chain]
    out: dict = {}
    for extra in range(0, A.dmax - d + 1):
        for counts in _compositions(extra, d + 1):
            if any(k and not objs[p].delta for p, k in enumerate(counts)):
                continue
            mats, carriers = [], [objs[0].carrier]
            for p in range(d + 1):
                for _ in range(counts[p]):
                    mats.append(objs[p].delta)
                    carriers.append(objs[p].carrier)
                if p < d:
                    mats.append(chain[p].entries)
                    carriers.append(objs[p + 1].carrier)
            val = sigma_mu(A, list(reversed(mats)), carriers)
            for k, v in val.items():
                vec_axpy(out.setdefault(k, {}), 1, v)
    degree = sum(f.degree for f in fs) + 2 - d
    return TwMorphism(objs[0], objs[-1], out, degree, check=False)


def mc_defect(A: AInftyCategory, T: TwComplex) -> dict:
    """The finite Maurer-Cartan sum ``sum_d mu^d(delta, ..., delta)``."""
    out: dict = {}
    if not T.delta:
        return out
    for d in range(1, A.dmax + 1):
        val = sigma_mu(A, [T.delta] * d, [T.carrier] * (d + 1))
        for k, v in val.items():
            vec_axpy(out.setdefault(k, {}), 1, v)
    return _clean(out)


def mc_check(A: AInftyCategory, T: TwComplex) -> ValidationReport:
    """Triangularity, degrees and the Maurer-Cartan identity of ``T``."""
    violations = []
    for (i, j), v in sorted(T.delta.items()):
        if not (0 <= j < i < len(T)):
            violations.append({"kind": "triangularity", "position": [i, j]})
            continue
        xi, si = T.carrier[i]
        xj, sj = T.carrier[j]
        for e in v:
            if e[0] != xi or e[1] != xj:
                violations.append({"kind": "composability", "position": [i, j], "element": fmt_elem(e)})
            elif A.degrees[e] + si - sj != 1:
                violations.append({"kind": "degree", "position": [i, j], "element": fmt_elem(e),
                                   "found": A.degrees[e] + si - sj})
    if not violations:
        for (i, j), v in sorted(mc_defect(A, T).items()):
            violations.append({"kind": "maurer-cartan", "position": [i, j],
                               "value": {fmt_elem(e): str(c) for e, c in v.items()}})
            break
    return ValidationReport(not violations, violations)


# -- constructions ---------------------------------------------------------------


def shift(T: TwComplex, n: int) -> TwComplex:
    """``T[n]``.  The connection has reduced degree 0 so it is unchanged."""
    name = ""
    if T.name:
        name = T.name if n == 0 else f"{T.name}[{n}]"
    return TwComplex([(x, s + n) for x, s in T.carrier], T.delta, name)


def direct_sum(*Ts: TwComplex) -> TwComplex:
    carrier, delta, off = [], {}, 0
    for T in Ts:
        carrier.extend(T.carrier)
        for (i, j), v in T.delta.items():
            delta[(i + off, j + off)] = v
        off += len(T)
    return TwComplex(carrier, delta, " + ".join(T.label() for T in Ts))


def hom_basis(A: AInftyCategory, C: TwComplex, D: TwComplex) -> dict[int, list]:
    """Basis keys ``(i, j, elem)`` of ``hom_Tw(C, D)`` grouped by degree."""
    out: dict[int, list] = defaultdict(list)
    for i, (x, s) in enumerate(C.carrier):
        for j, (y, t) in enumerate(D.carrier):
            for e in A.basis(x, y):
                out[A.degrees[e] + s - t].append((i, j, e))
    return dict(out)


def _padded(basis: dict[int, list]) -> dict[int, list]:
    if not basis:
        return {0: []}
    lo, hi = min(basis), max(basis)
    return {k: basis.get(k, []) for k in range(lo - 1, hi + 2)}


def mu1_tw(A: AInftyCategory, f: TwMorphism) -> TwMorphism:
    return tw_mu(A, [f])


def hom_cohomology(A: AInftyCategory, C: TwComplex, D: TwComplex, seed: int | None = None) -> KeyedCohomology:
    """Cohomology of ``hom_Tw(C, D)`` with keyed representatives."""
    basis = _padded(hom_basis(A, C, D))
    one = A.one()

    def diff(key):
        i, j, e = key
        f = TwMorphism(C, D, {(i, j): {e: one}}, 0, check=False)
        return tw_mu(A, [f]).to_vector()

    convert = None
    if A.trunc is not None and not A.laurent:
        convert = lambda c: c.to_laurent()  # noqa: E731
    return keyed_cohomology(basis, diff, convert=convert, seed=seed)


def euler(A: AInftyCategory, C: TwComplex, D: TwComplex) -> int:
    """Chain-level Euler characteristic of ``hom_Tw(C, D)``."""
    return sum((-1) ** (k % 2) * len(v) for k, v in hom_basis(A, C, D).items())


def identity(A: AInftyCategory, T: TwComplex, units: Mapping[str, dict] | None = None) -> TwMorphism:
    """``diag((-1)^s_i u_i)`` built from chain-level unit representatives."""
    if units is None:
        h = h_category(A)
        units = {x: unit_representative(A, x, h) for x in A.objects}
    entries = {}
    for i, (x, s) in enumerate(T.carrier):
        u = units.get(x)
        if u is None:
            raise ValueError(f"object {x} has no cohomological unit")
        entries[(i, i)] = vec_scale(-1 if s % 2 else 1, u)
    return TwMorphism(T, T, entries, 0, check=False)


def is_closed(A: AInftyCategory, f: TwMorphism) -> bool:
    return not tw_mu(A, [f]).entries


def cone(A: AInftyCategory, c: TwMorphism, name: str = "") -> TwComplex:
    """Mapping cone ``D + C[1]`` of a closed degree-0 ``c: C -> D``."""
    if c.degree != 0:
        raise WrongDegree("cone needs a degree-0 morphism")
    if not is_closed(A, c):
        raise NotClosed("cone needs a closed morphism")
    C, D = c.source, c.target
    n = len(D)
    carrier = list(D.carrier) + [(x, s + 1) for x, s in C.carrier]
    delta = dict(D.delta)
    for (i, j), v in C.delta.items():
        delta[(n + i, n + j)] = v
    for (i, j), v in c.entries.items():
        delta[(n + i, j)] = v
    return TwComplex(carrier, delta, name or f"Cone({C.label()} -> {D.label()})")


def identity_class_vanishes(A: AInftyCategory, T: TwComplex, seed: int | None = None) -> bool:
    """Whether ``[id_T] = 0`` in ``H^0(end T)``.

    For a cohomologically unital category this holds iff ``H^0(end T) = 0``;
    when a closed chain-level identity exists its class is tested directly
    and the two criteria are required to agree.
    """
    coh = hom_cohomology(A, T, T, seed)
    vanishes = coh.dims.get(0, 0) == 0
    try:
        idm = identity(A, T)
    except ValueError:
        return vanishes
    if not is_closed(A, idm):
        return vanishes
    direct = coh.is_exact(0, idm.to_vector())
    if direct != vanishes:
        raise AssertionError("identity class and H^0(end) disagree; category is not cohomologically unital")
    return direct


def is_acyclic(A: AInftyCategory, T: TwComplex) -> bool:
    return identity_class_vanishes(A, T)


# -- quasi-isomorphisms -----------------------------------------------------------


@dataclass
class WitnessResult:
    witness: TwMorphism | None
    tried: int
    exhaustive: bool

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_json(self):
        return {
            "found": self.found,
            "tried": self.tried,
            "exhaustive": self.exhaustive,
            "witness": None if self.witness is None else _morphism_json(self.witness),
        }


def _morphism_json(f: TwMorphism):
    return {
        "source": f.source.label(),
        "target": f.target.label(),
        "degree": f.degree,
        "entries": [[i, j, fmt_elem(e), str(c)] for (i, j), v in sorted(f.entries.items()) for e, c in sorted(v.items())],
    }


def candidate_morphisms(reps: Sequence[dict], budget: int, seed: int, scalars=(1, -1, 2, Fraction(1, 2))):
    """Basis representatives first, then seeded random combinations."""
    for z in reps:
        yield z
    if len(reps) < 2:
        return
    rng = random.Random(seed)
    for _ in range(max(0, budget - len(reps))):
        vec: dict = {}
        for z in reps:
            c = rng.choice((0,) + tuple(scalars))
            if c:
                vec_axpy(vec, c, z)
        if vec:
            yield vec


def quasi_iso_witness(A: AInftyCategory, X: TwComplex, Y: TwComplex, budget: int = 10000,
                      seed: int = 0, coh: KeyedCohomology | None = None) -> WitnessResult:
    """Search closed degree-0 ``c: X -> Y`` with acyclic cone.  Sound, not complete."""
    coh = coh or hom_cohomology(A, X, Y)
    reps = coh.reps.get(0, [])
    tried = 0
    for vec in candidate_morphisms(reps, budget, seed):
        if tried >= budget:
            break
        tried += 1
        c = TwMorphism.from_vector(X, Y, vec, 0)
        if is_acyclic(A, cone(A, c)):
            return WitnessResult(c, tried, True)
    # with at most one class every nonzero candidate is a rescaling of it
    return WitnessResult(None, tried, len(reps) <= 1)


# -- spherical twist ---------------------------------------------------------------


@dataclass
class TwistResult:
    complex: TwComplex
    evaluation: TwMorphism
    source_sum: TwComplex
    classes: list[tuple[int, dict]]
    inclusion: TwMorphism | None = None
    projection: TwMorphism | None = None


def twist(A: AInftyCategory, S: TwComplex, L: TwComplex, seed: int | None = None) -> TwistResult:
    """Cone over the evaluation ``H(hom(S, L)) (x) S -> L``.

    Each representative ``b`` of degree ``k`` contributes a copy ``S[-k]``,
    so that ``b`` becomes a closed degree-0 map ``S[-k] -> L``.
    """
    coh = hom_cohomology(A, S, L, seed)
    classes = [(k, z) for k in sorted(coh.reps) for z in coh.reps[k]]
    pieces = [shift(S, -k) for k, _ in classes]
    E = direct_sum(*pieces) if pieces else TwComplex([], name="0")
    entries: dict = {}
    off = 0
    for (k, z), piece in zip(classes, pieces):
        for (i, j, e), c in z.items():
            vec_axpy(entries.setdefault((off + i, j), {}), c, {e: 1})
        off += len(piece)
    ev = TwMorphism(E, L, entries, 0, check=False)
    C = cone(A, ev, name=f"T_{S.label()}({L.label()})")
    res = TwistResult(C, ev, E, classes)
    try:
        h = h_category(A)
        units = {x: unit_representative(A, x, h) for x in A.objects}
        n = len(L)
        inc = {}
        for i, (x, s) in enumerate(L.carrier):
            inc[(i, i)] = vec_scale(-1 if s % 2 else 1, units[x])
        res.inclusion = TwMorphism(L, C, inc, 0, check=False)
        E1 = shift(E, 1)
        proj = {}
        for i, (x, s) in enumerate(E1.carrier):
            proj[(n + i, i)] = vec_scale(-1 if s % 2 else 1, units[x])
        res.projection = TwMorphism(C, E1, proj, 0, check=False)
    except (TypeError, KeyError, AttributeError):
        pass
    return res


def iterated_twist(A: AInftyCategory, spheres: Sequence[TwComplex], L: TwComplex,
                   seed: int | None = None) -> TwComplex:
    """``T_{S_1} ... T_{S_m}(L)``; the last sphere acts first."""
    T = L
    for S in reversed(spheres):
        T = twist(A, S, T, seed).complex
    return T


def twist_harness(A: AInftyCategory, spheres: Sequence[TwComplex], L: TwComplex, expected_shift: int = 2,
                  budget: int = 10000, seed: int = 0) -> WitnessResult:
    """Test the iterated twist of ``L`` against ``L[expected_shift]``."""
    return quasi_iso_witness(A, iterated_twist(A, spheres, L, seed), shift(L, expected_shift), budget, seed)


# -- H^0-level idempotent completion ---------------------------------------------


@dataclass
class KaroubiObject:
    carrier: TwComplex
    idempotent: TwMorphism
    name: str = ""

    def label(self):
        return self.name or f"({self.carrier.label()}, pi)"


def compose(A: AInftyCategory, g: TwMorphism, f: TwMorphism) -> TwMorphism:
    """Cohomological composition ``g . f = (-1)^|f| mu^2(g, f)``."""
    out = tw_mu(A, [g, f])
    return out.scale(-1) if f.degree % 2 else out


def check_idempotent(A: AInftyCategory, K: KaroubiObject, coh: KeyedCohomology | None = None) -> None:
    pi = K.idempotent
    if pi.degree != 0:
        raise NotIdempotent("idempotent must have degree 0")
    if not is_closed(A, pi):
        raise NotIdempotent("idempotent is not closed")
    coh = coh or hom_cohomology(A, K.carrier, K.carrier)
    diff = compose(A, pi, pi) - pi
    if not coh.is_exact(0, diff.to_vector()):
        raise NotIdempotent("[pi]^2 != [pi] in H^0")


@dataclass
class DpiHom:
    dims: dict[int, int]
    basis: dict[int, list[dict]]  # chain-level representatives of the image

    def total(self):
        return sum(self.dims.values())


def dpi_hom(A: AInftyCategory, K1: KaroubiObject, K2: KaroubiObject, seed: int | None = None) -> DpiHom:
    """``[rho] o H(hom(X, Y)) o [pi]`` degree by degree."""
    check_idempotent(A, K1)
    check_idempotent(A, K2)
    X, Y = K1.carrier, K2.carrier
    coh = hom_cohomology(A, X, Y, seed)
    dims, basis = {}, {}
    for k, reps in sorted(coh.reps.items()):
        if not reps:
            continue
        images = []
        for z in reps:
            f = TwMorphism.from_vector(X, Y, z, k)
            g = compose(A, K2.idempotent, compose(A, f, K1.idempotent))
            images.append(g.to_vector())
        cols = [dict(enumerate(coh.coords(k, v))) if v else {} for v in images]
        cols = [{i: c for i, c in col.items() if c} for col in cols]
        m = SparseMatrix.from_columns(len(reps), cols)
        from .exactlin import rref

        res = rref(m)
        dims[k] = res.rank
        basis[k] = [images[c] for _, c in res.pivots]
    return DpiHom(dims, basis)


def karoubi_identity(A: AInftyCategory, T: TwComplex) -> KaroubiObject:
    return KaroubiObject(T, identity(A, T), name=T.label())


def split_idempotent(A: AInftyCategory, K: KaroubiObject) -> tuple[KaroubiObject, KaroubiObject]:
    """``(X, pi)`` and ``(X, 1 - pi)``."""
    check_idempotent(A, K)
    comp = identity(A, K.carrier) - K.idempotent
    return K, KaroubiObject(K.carrier, comp, name=f"ker({K.label()})")


def verify_splitting(A: AInftyCategory, K: KaroubiObject, Y: TwComplex) -> bool:
    """``H(hom(X, Y))`` has the dimensions of ``dpi((X,pi),Y) + dpi((X,1-pi),Y)``."""
    im, ker = split_idempotent(A, K)
    target = karoubi_identity(A, Y)
    d1, d2 = dpi_hom(A, im, target), dpi_hom(A, ker, target)
    full = hom_cohomology(A, K.carrier, Y).dims
    keys = set(full) | set(d1.dims) | set(d2.dims)
    return all(full.get(k, 0) == d1.dims.get(k, 0) + d2.dims.get(k, 0) for k in keys)


def idempotent_candidates(A: AInftyCategory, T: TwComplex, limit: int = 64,
                          coeffs=(0, 1, -1, Fraction(1, 2))) -> list[TwMorphism]:
    """Nontrivial H^0 idempotents among small combinations of an ``H^0(end T)`` basis."""
    coh = hom_cohomology(A, T, T)
    reps = coh.reps.get(0, [])
    out = []
    idm = None
    for combo in itertools.product(coeffs, repeat=len(reps)):
        if len(out) >= limit:
            break
        vec: dict = {}
        for c, z in zip(combo, reps):
            if c:
                vec_axpy(vec, c, z)
        if not vec:
            continue
        pi = TwMorphism.from_vector(T, T, vec, 0)
        if not coh.is_exact(0, (compose(A, pi, pi) - pi).to_vector()):
            continue
        if idm is None:
            idm = identity(A, T)
        if coh.is_exact(0, (pi - idm).to_vector()):
            continue
        out.append(pi)
    return out


def karoubi_iso(A: AInftyCategory, K: KaroubiObject, T: TwComplex) -> bool:
    """Whether ``(X, pi)`` is isomorphic to ``(T, id)`` in the split-closed H^0.

    Looks for ``f in pi-component of H^0(hom(X, T))`` and ``g`` with
    ``g f = pi`` and ``f g = id_T``; ``g`` is solved linearly for each ``f`` in
    a basis of the image (one-dimensional images make this exhaustive).
    """
    target = karoubi_identity(A, T)
    fwd = dpi_hom(A, K, target).basis.get(0, [])
    back = dpi_hom(A, target, K).basis.get(0, [])
    if len(fwd) != 1 or not back:
        return False if not fwd or not back else _karoubi_iso_general(A, K, T, fwd, back)
    return _karoubi_iso_general(A, K, T, fwd, back)


def _karoubi_iso_general(A, K, T, fwd, back) -> bool:
    X = K.carrier
    coh_xx = hom_cohomology(A, X, X)
    coh_tt = hom_cohomology(A, T, T)
    idt = identity(A, T)
    for fv in fwd:
        f = TwMorphism.from_vector(X, T, fv, 0)
        rows_x, rows_t = [], []
        for gv in back:
            g = TwMorphism.from_vector(T, X, gv, 0)
            rows_x.append(coh_xx.coords(0, compose(A, g, f).to_vector()))
            rows_t.append(coh_tt.coords(0, compose(A, f, g).to_vector()))
        want_x = coh_xx.coords(0, K.idempotent.to_vector())
        want_t = coh_tt.coords(0, idt.to_vector())
        n = len(back)
        entries = {}
        rhs = {}
        r = 0
        for want, rows in ((want_x, rows_x), (want_t, rows_t)):
            for i, w in enumerate(want):
                for j in range(n):
                    if rows[j][i]:
                        entries[(r, j)] = rows[j][i]
                if w:
                    rhs[r] = w
                r += 1
        if solve(SparseMatrix(r, n, entries), rhs) is not None:
            return True
    return False


# -- generation search ----------------------------------------------------------------


@dataclass
class SearchResult:
    found: bool
    tree: dict | None
    depth_reached: int
    explored: int
    exhausted: bool

    def to_json(self):
        return {
            "found": self.found,
            "tree": self.tree,
            "depth_reached": self.depth_reached,
            "explored": self.explored,
            "exhausted": self.exhausted,
        }


def generate_search(A: AInftyCategory, generators: Sequence[TwComplex], target: TwComplex, depth: int = 2,
                    budget: int = 10000, seed: int = 0, shift_range: int = 2,
                    max_objects: int = 200) -> SearchResult:
    """Breadth-first closure under shifts, cones and H^0 idempotent splittings.

    Returns a construction tree for the first object found quasi-isomorphic
    to ``target``.  Raises :class:`BudgetExceeded` when the candidate budget
    runs out before the requested depth is exhausted.
    """
    spent = 0

    def charge(n=1):
        nonlocal spent
        spent += n
        if spent > budget:
            raise BudgetExceeded(f"search budget {budget} exhausted")

    def matches(T) -> bool:
        charge()
        return quasi_iso_witness(A, T, target, budget=16, seed=seed).found

    def shift_of(T):
        return T.carrier[0][1] if T.carrier else 0

    level: list[tuple[TwComplex, dict]] = []
    seen = set()
    for g in generators:
        tree = {"op": "generator", "object": g.label()}
        level.append((g, tree))
        seen.add(g.key)
        if matches(g):
            return SearchResult(True, tree, 0, spent, False)
    pool = list(level)
    for dep in range(1, depth + 1):
        new: list[tuple[TwComplex, dict]] = []

        def offer(T, tree):
            if T.key in seen or len(pool) + len(new) >= max_objects:
                return None
            seen.add(T.key)
            new.append((T, tree))
            return matches(T)

        for T, tree in list(pool):
            base_shifts = {s for _, s in T.carrier}
            for n in (1, -1):
                if all(abs(s + n) <= shift_range for s in base_shifts):
                    t2 = {"op": "shift", "by": n, "of": tree}
                    if offer(shift(T, n), t2):
                        return SearchResult(True, t2, dep, spent, False)
        for (X, tx), (Y, ty) in itertools.product(list(pool), repeat=2):
            coh = hom_cohomology(A, X, Y)
            for idx, z in enumerate(coh.reps.get(0, [])):
                c = TwMorphism.from_vector(X, Y, z, 0)
                C = cone(A, c)
                t2 = {"op": "cone", "class": idx, "source": tx, "target": ty}
                if offer(C, t2):
                    return SearchResult(True, t2, dep, spent, False)
        for X, tx in list(pool):
            for pi in idempotent_candidates(A, X, limit=8):
                charge()
                K = KaroubiObject(X, pi)
                if karoubi_iso(A, K, target):
                    t2 = {"op": "split", "of": tx, "idempotent": _morphism_json(pi)}
                    return SearchResult(True, t2, dep, spent, False)
        if not new:
            return SearchResult(False, None, dep, spent, True)
        pool.extend(new)
    return SearchResult(False, None, depth, spent, True)


# -- Tw subcategories as A-infinity categories ------------------------------------------


def tw_category(A: AInftyCategory, complexes: Mapping[str, TwComplex], name: str = "") -> AInftyCategory:
    """Materialize the full subcategory of Tw(A) on the named complexes."""
    names = list(complexes)
    homs = {}
    label_of = {}
    for a in names:
        for b in names:
            basis = []
            for deg, keys in sorted(hom_basis(A, complexes[a], complexes[b]).items()):
                for i, j, e in keys:
                    lab = f"{i}.{j}.{e[2]}"
                    basis.append((lab, deg))
                    label_of[(a, b, i, j, e)] = lab
            if basis:
                homs[(a, b)] = basis
    one = A.one()
    mu = {}
    cat_stub = AInftyCategory(names, homs, {}, A.dmax)

    def unit_morph(elem):
        a, b, lab = elem
        i, j, rest = lab.split(".", 2)
        i, j = int(i), int(j)
        x = complexes[a].carrier[i][0]
        y = complexes[b].carrier[j][0]
        return TwMorphism(complexes[a], complexes[b], {(i, j): {(x, y, rest): one}},
                          cat_stub.degrees[elem], check=False)

    for d in range(1, A.dmax + 1):
        for tup in cat_stub.composable_tuples(d):
            out = tw_mu(A, [unit_morph(e) for e in tup])
            src = tup[-1][0]
            tgt = tup[0][1]
            for (i, j), v in out.entries.items():
                for e, c in v.items():
                    mu[(tup, (src, tgt, label_of[(src, tgt, i, j, e)]))] = c
    return AInftyCategory(names, homs, mu, A.dmax, trunc=A.trunc, name=name or f"Tw({A.name})",
                          laurent=A.laurent)


def relation_sum(A: AInftyCategory, fs: Sequence[TwMorphism]) -> TwMorphism:
    """The signed A-infinity relation sum of ``mu_Tw`` on ``[f_d, ..., f_1]``."""
    d = len(fs)
    chain = list(reversed(fs))
    total = None
    for m in range(1, d + 1):
        for n in range(0, d - m + 1):
            sign = -1 if sum(f.degree - 1 for f in chain[:n]) % 2 else 1
            inner = tw_mu(A, list(reversed(chain[n:n + m])))
            args = list(reversed(chain[:n] + [inner] + chain[n + m:]))
            term = tw_mu(A, args).scale(sign)
            total = term if total is None else total + term
    return total


def random_morphism(A: AInftyCategory, C: TwComplex, D: TwComplex, rng: random.Random,
                    degree: int | None = None, density: float = 0.6) -> TwMorphism:
    basis = hom_basis(A, C, D)
    if not basis:
        return TwMorphism(C, D, {}, 0 if degree is None else degree, check=False)
    if degree is None:
        degree = rng.choice(sorted(basis))
    vec = {key: Fraction(rng.randint(-3, 3)) for key in basis.get(degree, []) if rng.random() < density}
    return TwMorphism.from_vector(C, D, {k: v for k, v in vec.items() if v}, degree)
