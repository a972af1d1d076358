"""One-parameter deformations over Q[t]/t^N.

A deformation is an :class:`~ainftycat.ainfty.AInftyCategory` with
``trunc = N``: coefficients are :class:`TruncSeries` and ``mu0`` holds the
curvature (obstruction cocycles), which must vanish at ``t = 0``.

Coupling an object with a connection ``alpha`` in ``hom^1(X, X)`` of order
``t`` gives the curvature ``mu0 + mu1(alpha) + mu2(alpha, alpha) + ...``;
``alpha`` has reduced degree zero so no signs appear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .ainfty import (
    AInftyCategory,
    Elem,
    ValidationReport,
    fmt_elem,
    h_category,
    hom_cohomology,
    unit_representative,
    validate,
)
from .exactlin import (
    PrecisionExhausted,
    SparseMatrix,
    TruncLaurent,
    TruncSeries,
    format_rational,
    solve,
    vec_axpy,
    vec_scale,
)
from .exactlin.scalars import valuation as scalar_valuation
from . import hochschild as hs
from . import tw


class NotFlat(ValueError):
    pass


class BadParameter(ValueError):
    pass


class DifferentFibres(ValueError):
    pass


class NotADeformation(ValueError):
    pass


def _require_series(E: AInftyCategory) -> int:
    if E.trunc is None or E.laurent:
        raise NotADeformation("expected a category over Q[t]/t^N")
    return E.trunc


def trivial_deformation(A: AInftyCategory, N: int = 8) -> AInftyCategory:
    """``A`` with its constants viewed in Q[t]/t^N."""
    return AInftyCategory(A.objects, A.homs, {k: TruncSeries({0: c}, N) for k, c in A.mu.items()}, A.dmax,
                          trunc=N, name=A.name)


def validate_deformation(E: AInftyCategory, max_report: int = 50) -> ValidationReport:
    """Order-t curvature plus the curved relations, exactly mod t^N."""
    _require_series(E)
    order = []
    for x, vec in sorted(E.mu0.items()):
        for e, c in sorted(vec.items()):
            if c.constant_term:
                order.append({"kind": "order-t", "object": x, "output": fmt_elem(e),
                              "constant": format_rational(c.constant_term)})
    rep = validate(E, max_report)
    violations = order + rep.violations
    return ValidationReport(not violations, violations[:max_report], rep.failures_by_arity)


def special_fibre(E: AInftyCategory) -> AInftyCategory:
    _require_series(E)
    return E.special_fibre()


# -- curvature of coupled objects ---------------------------------------------


def deformed_obstruction(E: AInftyCategory, x: str, alpha: Mapping[Elem, object] | None = None) -> dict:
    """``mu0(x) + sum_d mu^d(alpha, ..., alpha)`` mod t^N."""
    N = _require_series(E)
    alpha = {e: E._coerce(c) for e, c in (alpha or {}).items() if c}
    for e, c in alpha.items():
        if e[0] != x or e[1] != x or E.degrees[e] != 1:
            raise ValueError(f"{fmt_elem(e)} is not a degree-1 endomorphism of {x}")
        if c.constant_term:
            raise ValueError("connection must be of order t")
    out: dict = {}
    vec_axpy(out, 1, E.mu0.get(x, {}))
    if alpha:
        for d in range(1, min(E.dmax, N - 1) + 1):
            vec_axpy(out, 1, E.mu_eval([alpha] * d))
    return {e: c for e, c in out.items() if c}


@dataclass
class MCResult:
    status: str  # "solved" | "family" | "obstructed"
    alpha: dict | None
    order: int | None = None
    obstruction: list | None = None
    obstruction_cocycle: dict | None = None
    parameter_dims: list[int] = field(default_factory=list)
    log: list[dict] = field(default_factory=list)

    @property
    def solvable(self) -> bool:
        return self.status in ("solved", "family")

    def to_json(self):
        return {
            "status": self.status,
            "order": self.order,
            "obstruction": None if self.obstruction is None else [format_rational(c) for c in self.obstruction],
            "alpha": None if self.alpha is None else {
                fmt_elem(e): c.to_json() for e, c in sorted(self.alpha.items())
            },
            "parameter_dims": self.parameter_dims,
            "log": self.log,
        }


def mc_solve(E: AInftyCategory, x: str, N: int | None = None, seed: int | None = None) -> MCResult:
    """Order-by-order solution of the Maurer-Cartan equation for ``x``.

    At order ``k`` the residue ``R_k`` (the ``t^k`` part of the curvature of
    the current ``alpha``) is a cocycle of the special-fibre endomorphism
    complex; a nonzero class in ``H^2`` obstructs, otherwise
    ``mu1_0(alpha_k) = -R_k`` is solved with the deterministic pivot rule.
    """
    trunc = _require_series(E)
    N = trunc if N is None else min(N, trunc)
    A0 = E.special_fibre()
    coh = hom_cohomology(A0, x, x, seed)
    h1 = coh.dims.get(1, 0)
    deg1 = [e for e in A0.basis(x, x) if A0.degrees[e] == 1]
    deg2 = [e for e in A0.basis(x, x) if A0.degrees[e] == 2]
    row = {e: i for i, e in enumerate(deg2)}
    entries = {}
    for j, e in enumerate(deg1):
        for o, c in A0.mu1(e).items():
            entries[(row[o], j)] = c
    d1 = SparseMatrix(len(deg2), len(deg1), entries)
    alpha: dict = {}
    log = []
    dims = []
    for k in range(1, N):
        curv = deformed_obstruction(E, x, alpha)
        low = {e: c for e, c in curv.items() if any(c[j] for j in range(k))}
        if low:
            raise AssertionError(f"curvature does not vanish below order {k}")
        R = {e: c[k] for e, c in curv.items() if c[k]}
        if not R:
            log.append({"order": k, "residue": 0})
            dims.append(h1)
            continue
        if any(o not in row for o in R):
            raise AssertionError("curvature outside hom^2")
        cls = coh.coords(2, R)
        if any(cls):
            log.append({"order": k, "residue": {fmt_elem(e): format_rational(c) for e, c in sorted(R.items())},
                        "obstructed": True})
            return MCResult("obstructed", None, k, cls, R, dims, log)
        sol = solve(d1, {row[e]: -c for e, c in R.items()})
        if sol is None:
            raise AssertionError("exact residue has no preimage")
        for j, c in sol.items():
            e = deg1[j]
            alpha[e] = alpha.get(e, TruncSeries({}, trunc)) + TruncSeries({k: c}, trunc)
        alpha = {e: c for e, c in alpha.items() if c}
        log.append({"order": k, "residue": {fmt_elem(e): format_rational(c) for e, c in sorted(R.items())},
                    "alpha_k": {fmt_elem(deg1[j]): format_rational(c) for j, c in sorted(sol.items())}})
        dims.append(h1)
    final = deformed_obstruction(E, x, alpha)
    if final:
        raise AssertionError("solver output does not satisfy the curvature equation")
    return MCResult("family" if h1 else "solved", alpha, None, None, None, dims, log)


# -- global sections and the generic fibre ----------------------------------------


@dataclass
class ConnectionObject:
    name: str
    base: str
    alpha: dict = field(default_factory=dict)


def egl(E: AInftyCategory, candidates: Sequence[ConnectionObject], name: str = "") -> AInftyCategory:
    """Full subcategory of flat coupled objects, materialized mod t^N."""
    N = _require_series(E)
    cx = {}
    for cand in candidates:
        curv = deformed_obstruction(E, cand.base, cand.alpha)
        if curv:
            raise NotFlat(f"object {cand.name} has curvature "
                          + ", ".join(f"{fmt_elem(e)}: {c}" for e, c in sorted(curv.items())))
        alpha = {e: E._coerce(c) for e, c in cand.alpha.items() if c}
        cx[cand.name] = tw.TwComplex([(cand.base, 0)], {(0, 0): alpha} if alpha else {}, name=cand.name)
    names = [c.name for c in candidates]
    homs = {}
    for a in candidates:
        for b in candidates:
            basis = E.homs.get((a.base, b.base))
            if basis:
                homs[(a.name, b.name)] = list(basis)
    stub = AInftyCategory(names, homs, {}, E.dmax)
    one = E.one()
    mu = {}
    for d in range(1, E.dmax + 1):
        for tup in stub.composable_tuples(d):
            ms = []
            for (s, t_, lab) in tup:
                base = (cx[s].carrier[0][0], cx[t_].carrier[0][0], lab)
                ms.append(tw.TwMorphism(cx[s], cx[t_], {(0, 0): {base: one}}, stub.degrees[(s, t_, lab)], check=False))
            out = tw.tw_mu(E, ms)
            src, tgt = tup[-1][0], tup[0][1]
            for e, c in out.entries.get((0, 0), {}).items():
                if c:
                    mu[(tup, (src, tgt, e[2]))] = c
    return AInftyCategory(names, homs, mu, E.dmax, trunc=N, name=name or f"Egl({E.name})")


def egl_trivial(E: AInftyCategory) -> AInftyCategory:
    """All objects with zero connection (requires zero curvature)."""
    return egl(E, [ConnectionObject(x, x) for x in E.objects])


@dataclass
class GenericHom:
    dims: dict[int, int]
    margin: float
    special_dims: dict[int, int]

    def to_json(self):
        return {
            "generic": {str(k): v for k, v in self.dims.items() if v},
            "special": {str(k): v for k, v in self.special_dims.items() if v},
            "margin": None if self.margin == float("inf") else self.margin,
        }


def generic_hom(Egl: AInftyCategory, a: str, b: str, seed: int | None = None) -> GenericHom:
    """Cohomology of ``hom(a, b)`` after inverting ``t``."""
    _require_series(Egl)
    try:
        coh = hom_cohomology(Egl, a, b, seed)
    except PrecisionExhausted as exc:
        raise PrecisionExhausted(f"{exc}; raise the truncation order N") from exc
    sp = hom_cohomology(Egl.special_fibre(), a, b, seed)
    return GenericHom(coh.dims, coh.margin, sp.dims)


def morphism_valuation(f: tw.TwMorphism) -> int | None:
    vals = [scalar_valuation(c) for v in f.entries.values() for c in v.values()]
    return min(vals) if vals else None


@dataclass
class LaurentIso:
    forward: tw.TwMorphism | None
    inverse: tw.TwMorphism | None
    tried: int
    window: tuple[int, int]

    @property
    def found(self) -> bool:
        return self.forward is not None

    @property
    def valuation(self) -> int | None:
        if not self.found:
            return None
        return min(morphism_valuation(self.forward), morphism_valuation(self.inverse))

    def to_json(self):
        def enc(f):
            return [[i, j, fmt_elem(e), c.to_json()] for (i, j), v in sorted(f.entries.items())
                    for e, c in sorted(v.items())]

        return {
            "found": self.found,
            "valuation": self.valuation,
            "window": list(self.window),
            "tried": self.tried,
            "forward": None if self.forward is None else enc(self.forward),
            "inverse": None if self.inverse is None else enc(self.inverse),
        }


def _inverse_class(A, X, Y, c, coh_yx, coh_xx, coh_yy):
    """A degree-0 class ``g`` with ``g c = id_X`` and ``c g = id_Y`` in H^0, or None."""
    reps = coh_yx.reps.get(0, [])
    if not reps:
        return None
    idx, idy = tw.identity(A, X), tw.identity(A, Y)
    rows_x, rows_y = [], []
    for z in reps:
        g = tw.TwMorphism.from_vector(Y, X, z, 0)
        rows_x.append(coh_xx.coords(0, tw.compose(A, g, c).to_vector()))
        rows_y.append(coh_yy.coords(0, tw.compose(A, c, g).to_vector()))
    want = coh_xx.coords(0, idx.to_vector()) + coh_yy.coords(0, idy.to_vector())
    cols = [rx + ry for rx, ry in zip(rows_x, rows_y)]
    m = SparseMatrix(len(want), len(reps), {(i, j): v for j, col in enumerate(cols) for i, v in enumerate(col) if v})
    sol = solve(m, {i: w for i, w in enumerate(want) if w})
    if sol is None:
        return None
    vec: dict = {}
    for j, s in sol.items():
        vec_axpy(vec, s, reps[j])
    return tw.TwMorphism.from_vector(Y, X, vec, 0)


def iso_over_laurent(Egl: AInftyCategory, a: str, b: str, budget: int = 10000, seed: int = 0,
                     window: tuple[int, int] = (-1, 1)) -> LaurentIso:
    """Isomorphism ``a -> b`` over Laurent scalars with both legs in the window.

    Candidates ``t^k z`` run over cocycle classes ``z`` and ``k`` in the
    window; a candidate counts when its cone is acyclic and the inverse class
    (solved linearly) also has valuation inside the window.  With
    ``window = (0, 0)`` this asks for an isomorphism defined over Q[[t]].
    """
    L = Egl.to_laurent()
    X, Y = tw.TwComplex.of(a), tw.TwComplex.of(b)
    coh = tw.hom_cohomology(L, X, Y)
    coh_yx = tw.hom_cohomology(L, Y, X)
    coh_xx = tw.hom_cohomology(L, X, X)
    coh_yy = tw.hom_cohomology(L, Y, Y)
    reps = coh.reps.get(0, [])
    lo, hi = window
    tried = 0
    for z in tw.candidate_morphisms(reps, budget, seed):
        for k in sorted(range(lo, hi + 1), key=lambda k: (abs(k), k)):
            if tried >= budget:
                return LaurentIso(None, None, tried, window)
            tried += 1
            scale = TruncLaurent.exact(1, k)
            c = tw.TwMorphism.from_vector(X, Y, {key: scale * v for key, v in z.items()}, 0)
            v = morphism_valuation(c)
            if v is None or not (lo <= v <= hi):
                continue
            if not tw.is_acyclic(L, tw.cone(L, c)):
                continue
            g = _inverse_class(L, X, Y, c, coh_yx, coh_xx, coh_yy)
            if g is None:
                continue
            vg = morphism_valuation(g)
            if vg is not None and lo <= vg <= hi:
                return LaurentIso(c, g, tried, window)
    return LaurentIso(None, None, tried, window)


# -- deformation classes ------------------------------------------------------------


def first_order_cochain(E: AInftyCategory) -> dict:
    """The ``t^1`` parts of ``(mu0, mu1, mu2, ...)`` as one Hochschild cochain."""
    _require_series(E)
    phi = {}
    for (ins, out), c in E.mu.items():
        if c[1]:
            phi[(ins, out)] = c[1]
    for x, vec in E.mu0.items():
        for e, c in vec.items():
            if c[1]:
                phi[((), e)] = c[1]
    return phi


@dataclass
class DeformationClass:
    cochain: dict
    coords: list
    hh_dim: int
    length: int
    exact: bool

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_json(self):
        return {
            "coords": [format_rational(c) for c in self.coords],
            "zero": self.is_zero,
            "hh2_dim": self.hh_dim,
            "length": self.length,
            "exact_truncation": self.exact,
            "cochain": hs.cochain_json(self.cochain),
        }


def deformation_class(E: AInftyCategory, L: int = 3, seed: int | None = None) -> DeformationClass:
    """Class of the first-order part in the truncated HH^2 of the special fibre."""
    A0 = E.special_fibre()
    phi = first_order_cochain(E)
    if hs.hochschild_diff(A0, phi, L, 2):
        raise AssertionError("first-order part is not a Hochschild cocycle")
    res = hs.hh(A0, 2, L, seed, stability=False)
    return DeformationClass(phi, res.coords(phi), res.dim, L, res.exact)


def reparametrize(E: AInftyCategory, f: TruncSeries) -> AInftyCategory:
    """Substitute ``t -> f(t)`` in every coefficient."""
    N = _require_series(E)
    if not isinstance(f, TruncSeries):
        raise BadParameter("parameter must be a series")
    if f.constant_term:
        raise BadParameter("parameter change must satisfy f(0) = 0")
    if not f:
        raise BadParameter("parameter change must be nonzero")
    f = f if f.trunc == N else TruncSeries({k: f[k] for k in range(min(N, f.trunc))}, N)
    return E.map_coefficients(lambda c: c.compose(f))


@dataclass
class FirstOrderVerdict:
    equivalent: bool
    difference: list
    exact: bool

    def to_json(self):
        return {
            "equivalent": self.equivalent,
            "difference": [format_rational(c) for c in self.difference],
            "truncation_exact": self.exact,
        }


def first_order_equiv(E: AInftyCategory, E2: AInftyCategory, L: int = 3) -> FirstOrderVerdict:
    f1, f2 = E.special_fibre(), E2.special_fibre()
    if (f1.objects, f1.homs, f1.mu) != (f2.objects, f2.homs, f2.mu):
        raise DifferentFibres("special fibres differ")
    c1, c2 = deformation_class(E, L), deformation_class(E2, L)
    diff = [b - a for a, b in zip(c1.coords, c2.coords)]
    return FirstOrderVerdict(not any(diff), diff, c1.exact)


@dataclass
class UniquenessReport:
    hh2_dim: int
    scalar: Fraction | None
    reparametrization: str | None
    note: str

    def to_json(self):
        return {
            "hh2_dim": self.hh2_dim,
            "scalar": None if self.scalar is None else format_rational(self.scalar),
            "reparametrization": self.reparametrization,
            "note": self.note,
        }


def uniqueness_harness(E: AInftyCategory, E2: AInftyCategory, L: int = 3) -> UniquenessReport:
    """With truncated ``dim HH^2 = 1``, find ``c1`` with ``[E2] = c1 [E]``.

    The induced candidate is ``t -> c1 t``; agreement beyond first order is
    not checked.
    """
    first_order_equiv(E, E, L)
    c1, c2 = deformation_class(E, L), deformation_class(E2, L)
    if c1.hh_dim != 1:
        return UniquenessReport(c1.hh_dim, None, None, "truncated HH^2 is not one-dimensional")
    if c1.is_zero:
        return UniquenessReport(1, None, None, "first deformation is trivial to first order")
    f1, f2 = E.special_fibre(), E2.special_fibre()
    if (f1.objects, f1.homs, f1.mu) != (f2.objects, f2.homs, f2.mu):
        raise DifferentFibres("special fibres differ")
    s = Fraction(c2.coords[0]) / Fraction(c1.coords[0])
    rep = None if s == 0 else f"t -> {format_rational(s)}*t"
    return UniquenessReport(1, s, rep, "first-order match only")
