"""Length-truncated Hochschild cochains of an A-infinity category.

A cochain is a flat multilinear map ``{(inputs, output): coeff}`` (see
:mod:`ainftycat.ainfty`).  An entry with ``s`` inputs has Hochschild degree
``r = |out| - sum |a_i| + s``; the structure map itself has degree 2.

Composition ``phi o psi`` inserts ``psi`` into each slot of ``phi`` with sign
``(-1)^((r_psi - 1) * *_n)``, ``*_n`` the reduced degree of the inputs to the
right of the slot.  The bracket is ``[phi, psi] = phi o psi - (-1)^((r_phi-1)(r_psi-1)) psi o phi``
and the differential is ``d tau = [mu, tau]``.  Since insertions never shorten
cochains (for uncurved ``mu``), lengths above ``L`` form a subcomplex and the
quotient by it is what gets computed.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .ainfty import AInftyCategory, Elem, fmt_elem, insert
from .exactlin import KeyedCohomology, NotACocycle, keyed_cohomology, vec_axpy

Cochain = dict  # {(inputs, output): coeff}


def cochain_degree(A: AInftyCategory, key) -> int:
    ins, out = key
    return A.degrees[out] - sum(A.degrees[a] for a in ins) + len(ins)


def homogeneous_degree(A: AInftyCategory, phi: Mapping) -> int | None:
    degs = {cochain_degree(A, k) for k in phi}
    if len(degs) > 1:
        raise ValueError(f"cochain is not homogeneous (degrees {sorted(degs)})")
    return degs.pop() if degs else None


def _strings(A: AInftyCategory, s: int):
    """Composable input strings of length ``s`` with their end objects."""
    if s == 0:
        for x in A.objects:
            yield (), x, x
        return
    for tup in A.composable_tuples(s):
        yield tup, tup[-1][0], tup[0][1]


def cc_basis(A: AInftyCategory, r: int, L: int) -> list[tuple]:
    """Degree-``r`` basis cochain keys of length ``<= L`` in deterministic order."""
    out = []
    for s in range(L + 1):
        for ins, x0, xs in _strings(A, s):
            need = r + sum(A.degrees[a] for a in ins) - s
            for e in A.basis(x0, xs):
                if A.degrees[e] == need:
                    out.append((ins, e))
    return out


def length_bound(A: AInftyCategory, r: int) -> int | None:
    """Largest length that can carry cochains of degrees ``r-1 .. r+1``.

    ``None`` when the degree formula does not bound the length (some basis
    element of degree 1 or hom degrees of both signs around 1).
    """
    degs = set(A.degrees.values())
    if not degs:
        return 0
    lo, hi = min(degs), max(degs)
    if hi <= 0:
        # every input lowers -sum||a|| by at least 1: r >= lo + s
        return max(0, r + 1 - lo)
    if lo >= 2:
        return max(0, hi - (r - 1))
    return None


def compose(A: AInftyCategory, phi: Mapping, psi: Mapping, r_psi: int | None = None,
            max_length: int | None = None) -> Cochain:
    """Gerstenhaber pre-Lie product ``phi o psi``."""
    if r_psi is None:
        r_psi = homogeneous_degree(A, psi) or 0
    return insert(phi, psi, A.degrees, inner_shift=r_psi - 1, max_length=max_length)


def _sub(x: Mapping, y: Mapping, c=1) -> Cochain:
    out = dict(x)
    vec_axpy(out, -c, y)
    return out


def bracket(A: AInftyCategory, phi: Mapping, psi: Mapping, max_length: int | None = None,
            r_phi: int | None = None, r_psi: int | None = None) -> Cochain:
    """``[phi, psi]``; degree ``r_phi + r_psi - 1``."""
    if r_phi is None:
        r_phi = homogeneous_degree(A, phi) or 0
    if r_psi is None:
        r_psi = homogeneous_degree(A, psi) or 0
    a = compose(A, phi, psi, r_psi, max_length)
    b = compose(A, psi, phi, r_phi, max_length)
    sign = -1 if ((r_phi - 1) * (r_psi - 1)) % 2 else 1
    return _sub(a, b, sign)


def hochschild_diff(A: AInftyCategory, tau: Mapping, L: int | None = None, r: int | None = None) -> Cochain:
    """``[mu, tau]`` with lengths above ``L`` discarded."""
    return bracket(A, A.structure(include_mu0=False), tau, max_length=L, r_phi=2, r_psi=r)


def brace2(A: AInftyCategory, phi: Mapping, psi: Mapping, r_phi: int, r_psi: int,
           max_length: int | None = None) -> Cochain:
    """``mu{phi, psi}``: ``phi`` and ``psi`` in two slots of ``mu``, ``phi`` to the left."""
    phi_by_out: dict[Elem, list] = defaultdict(list)
    for (ins, out), c in phi.items():
        phi_by_out[out].append((ins, c))
    psi_by_out: dict[Elem, list] = defaultdict(list)
    for (ins, out), c in psi.items():
        psi_by_out[out].append((ins, c))
    deg = A.degrees
    result: Cochain = {}
    sp, ss = (r_phi - 1) % 2, (r_psi - 1) % 2
    for (ins, out), c0 in A.mu.items():
        k = len(ins)
        for q in range(k - 1, -1, -1):  # psi slot (right)
            cands_psi = psi_by_out.get(ins[q])
            if not cands_psi:
                continue
            right_q = sum(deg[a] - 1 for a in ins[q + 1:])
            for p in range(q - 1, -1, -1):  # phi slot (left)
                cands_phi = phi_by_out.get(ins[p])
                if not cands_phi:
                    continue
                mid = ins[p + 1:q]
                mid_w = sum(deg[a] - 1 for a in mid)
                for ins_s, c_s in cands_psi:
                    w_s = sum(deg[a] - 1 for a in ins_s)
                    # phi passes everything to its right (raw inputs)
                    exp = ss * right_q + sp * (mid_w + w_s + right_q)
                    sign = -1 if exp % 2 else 1
                    for ins_f, c_f in cands_phi:
                        new_ins = ins[:p] + ins_f + mid + ins_s + ins[q + 1:]
                        if max_length is not None and len(new_ins) > max_length:
                            continue
                        key = (new_ins, out)
                        val = result.get(key, 0) + sign * c0 * c_f * c_s
                        if val:
                            result[key] = val
                        else:
                            result.pop(key, None)
    return result


def cup(A: AInftyCategory, phi: Mapping, psi: Mapping, max_length: int | None = None,
        r_phi: int | None = None, r_psi: int | None = None) -> Cochain:
    """Cup product ``(-1)^r_psi mu{phi, psi}``; degree ``r_phi + r_psi``.

    The prefactor makes the length-zero unit class a two-sided identity.
    """
    if r_phi is None:
        r_phi = homogeneous_degree(A, phi) or 0
    if r_psi is None:
        r_psi = homogeneous_degree(A, psi) or 0
    out = brace2(A, phi, psi, r_phi, r_psi, max_length)
    if r_psi % 2:
        out = {k: -v for k, v in out.items()}
    return out


# -- cohomology -----------------------------------------------------------------


@dataclass
class HHClass:
    degree: int
    representative: dict
    coords: list

    def to_json(self):
        return {
            "degree": self.degree,
            "coords": [str(c) for c in self.coords],
            "representative": cochain_json(self.representative),
        }


@dataclass
class HHResult:
    degree: int
    length: int
    dim: int
    classes: list[HHClass]
    stable: bool | None
    exact: bool
    cohomology: KeyedCohomology

    def coords(self, phi: Mapping) -> list:
        return self.cohomology.coords(self.degree, truncate(phi, self.length))

    def is_zero(self, phi: Mapping) -> bool:
        return not any(self.coords(phi))

    def to_json(self):
        return {
            "degree": self.degree,
            "length": self.length,
            "dim": self.dim,
            "stable": self.stable,
            "exact": self.exact,
            "classes": [c.to_json() for c in self.classes],
        }


def truncate(phi: Mapping, L: int) -> Cochain:
    return {k: v for k, v in phi.items() if len(k[0]) <= L}


def cochain_json(phi: Mapping) -> list:
    rows = []
    for (ins, out), c in sorted(phi.items(), key=lambda kv: (len(kv[0][0]), kv[0])):
        objs = [out[0]] + [a[1] for a in reversed(ins)] if ins else [out[0]]
        rows.append([len(ins), objs, [fmt_elem(a) for a in ins], fmt_elem(out), str(c)])
    return rows


def hh_complex(A: AInftyCategory, r: int, L: int, seed: int | None = None) -> KeyedCohomology:
    basis = {k: cc_basis(A, k, L) for k in (r - 1, r, r + 1)}
    one = A.one()

    def diff(key):
        return hochschild_diff(A, {key: one}, L, cochain_degree(A, key))

    return keyed_cohomology(basis, diff, seed=seed, want=[r])


def hh(A: AInftyCategory, r: int, L: int, seed: int | None = None, stability: bool = True) -> HHResult:
    """Degree-``r`` cohomology of the length ``<= L`` quotient complex."""
    if A.trunc is not None or A.mu0:
        raise ValueError("Hochschild cohomology is computed for uncurved categories over Q")
    coh = hh_complex(A, r, L, seed)
    reps = coh.reps.get(r, [])
    classes = []
    for i, z in enumerate(reps):
        coords = [Fraction(0)] * len(reps)
        coords[i] = Fraction(1)
        classes.append(HHClass(r, z, coords))
    stable = None
    if stability and L >= 1:
        stable = hh_complex(A, r, L - 1, seed).dims.get(r, 0) == len(reps)
    bound = length_bound(A, r)
    return HHResult(r, L, len(reps), classes, stable, bound is not None and L >= bound, coh)


def is_cocycle(A: AInftyCategory, phi: Mapping, L: int) -> bool:
    return not hochschild_diff(A, phi, L)


def random_cochain(A: AInftyCategory, r: int, L: int, rng: random.Random, density: float = 0.5) -> Cochain:
    out = {}
    for key in cc_basis(A, r, L):
        if rng.random() < density:
            c = rng.randint(-3, 3)
            if c:
                out[key] = Fraction(c)
    return out


def unit_cochain(A: AInftyCategory, units: Mapping[str, Mapping]) -> Cochain:
    """Length-zero cochain ``X -> u_X`` from chain-level unit representatives."""
    return {((), e): c for x in A.objects for e, c in units[x].items()}


def lincomb(*terms: tuple) -> Cochain:
    """``sum c_i * phi_i`` for ``(c_i, phi_i)`` pairs."""
    out: Cochain = {}
    for c, phi in terms:
        vec_axpy(out, c, phi)
    return out


@dataclass
class GerstenhaberReport:
    unit_failures: int
    assoc_failures: int
    leibniz_failures: int
    triples: int

    @property
    def ok(self) -> bool:
        return not (self.unit_failures or self.assoc_failures or self.leibniz_failures)


def gerstenhaber_check(A: AInftyCategory, L: int, max_degree: int = 4, units: Mapping | None = None) -> GerstenhaberReport:
    """Cup unit, cup associativity and bracket Leibniz on computed classes.

    Classes come from the length ``<= L`` quotient.  Cup identities are read
    there; a bracket with a length-zero cochain shortens terms, so the Leibniz
    identity (whose homotopy inserts two cochains at once) is read in the
    length ``<= L - 2`` quotient.
    """
    from .ainfty import unit_representative

    R = {r: hh(A, r, L) for r in range(0, max_degree + 1)}
    low = max(L - 2, 0)
    R2: dict[int, HHResult] = {}

    def vanishes(phi, r, table, length):
        if r < 0 or r > max_degree + 1:
            return True
        if r not in table:
            table[r] = hh(A, r, length)
        return table[r].is_zero(truncate(phi, length))

    if units is None:
        units = {x: unit_representative(A, x) for x in A.objects}
    unit_fail = 0
    if all(units.get(x) for x in A.objects):
        u = unit_cochain(A, units)
        for r, res in R.items():
            for c in res.classes:
                p = c.representative
                unit_fail += not vanishes(lincomb((1, cup(A, u, p, L, 0, r)), (-1, p)), r, R, L)
                unit_fail += not vanishes(lincomb((1, cup(A, p, u, L, r, 0)), (-1, p)), r, R, L)
    cl = [(r, c.representative) for r in R for c in R[r].classes]
    assoc = leib = n = 0
    for (r1, p), (r2, q), (r3, s) in itertools.product(cl, repeat=3):
        if r1 + r2 + r3 > max_degree:
            continue
        n += 1
        qs = cup(A, q, s, L, r2, r3)
        x = cup(A, cup(A, p, q, L, r1, r2), s, L, r1 + r2, r3)
        y = cup(A, p, qs, L, r1, r2 + r3)
        assoc += not vanishes(lincomb((1, x), (-1, y)), r1 + r2 + r3, R, L)
        lhs = bracket(A, p, qs, L, r1, r2 + r3)
        t1 = cup(A, bracket(A, p, q, L, r1, r2), s, L, r1 + r2 - 1, r3)
        t2 = cup(A, q, bracket(A, p, s, L, r1, r3), L, r2, r1 + r3 - 1)
        sign = -1 if ((r1 - 1) * r2) % 2 else 1
        leib += not vanishes(lincomb((1, lhs), (-1, t1), (-sign, t2)), r1 + r2 + r3 - 1, R2, low)
    return GerstenhaberReport(unit_fail, assoc, leib, n)
