import random
from fractions import Fraction

import pytest

from ainftycat import deform, hochschild, tw
from ainftycat.ainfty import AInftyCategory, Builder, validate
from ainftycat.exactlin import TruncSeries

N = 8
DEFORMED = ["dual_t", "curved", "solvable", "rankjump"]


def t(c=1, k=1, n=N):
    return TruncSeries({k: c}, n)


@pytest.fixture
def E(corpus):
    return lambda name: corpus(name).category


def test_validate_bundled(E):
    for name in DEFORMED:
        assert deform.validate_deformation(E(name)).valid, name


def test_constant_mu0_rejected():
    b = Builder("bad", trunc=N).hom("X", "X", ("e", 0), ("c", 2)).unital({"X": "e"})
    b.curvature("X", "c", TruncSeries({0: 1, 1: 1}, N))
    rep = deform.validate_deformation(b.build())
    assert not rep.valid
    assert rep.violations[0]["kind"] == "order-t"


def test_relation_failure_detected(E):
    D = E("dual_t")
    # drop the unit relation mu2(x, e) = x: associativity breaks at order 0
    mu = {k: v for k, v in D.mu.items() if k[0] != (("X", "X", "x"), ("X", "X", "e"))}
    broken = AInftyCategory(D.objects, D.homs, mu, D.dmax, trunc=N)
    assert not deform.validate_deformation(broken).valid


def test_special_fibres(E, corpus):
    assert deform.special_fibre(E("dual_t")) == corpus("dual0").category
    A = corpus("sph_2").category
    assert deform.special_fibre(deform.trivial_deformation(A, N)) == A
    C = deform.special_fibre(E("curved"))
    assert not C.mu0 and validate(C).valid
    assert [lab for lab, _ in C.homs[("X", "X")]] == ["e", "c"]


def test_deformed_obstruction(E):
    assert deform.deformed_obstruction(E("curved"), "X") == {("X", "X", "c"): t()}
    S = E("solvable")
    assert deform.deformed_obstruction(S, "X", {("X", "X", "b"): t(-1)}) == {}
    # only the first order vanishes for a wrong higher correction
    wrong = {("X", "X", "b"): t(-1) + t(1, 2)}
    assert deform.deformed_obstruction(S, "X", wrong) == {("X", "X", "c"): t(1, 2)}


def test_mc_solve_zero(E, corpus):
    triv = deform.trivial_deformation(corpus("dual0").category, N)
    r = deform.mc_solve(triv, "X")
    assert r.solvable and r.alpha == {}


def test_mc_solve_curved(E):
    r = deform.mc_solve(E("curved"), "X")
    assert r.status == "obstructed" and r.order == 1
    assert r.obstruction == [1]


def test_mc_solve_solvable(E):
    S = E("solvable")
    r = deform.mc_solve(S, "X")
    assert r.status == "solved"
    assert deform.deformed_obstruction(S, "X", r.alpha) == {}
    # H^1 of the special fibre end complex is zero (mu1(b) = c)
    sf = deform.special_fibre(S)
    from ainftycat.ainfty import hom_cohomology

    h1 = hom_cohomology(sf, "X", "X").dims.get(1, 0)
    assert r.parameter_dims == [h1] * (N - 1)


def test_mc_family(E):
    # dual_t has H^1(end X) = 0 in the fibre too, so build one with a free degree-1 class
    b = Builder("fam", trunc=4).hom("X", "X", ("e", 0), ("f", 1)).unital({"X": "e"})
    r = deform.mc_solve(b.build(), "X")
    assert r.status == "family" and r.parameter_dims == [1, 1, 1]
    assert deform.deformed_obstruction(b.build(), "X", r.alpha) == {}


def test_egl(E):
    inst_alpha = {("X", "X", "b"): t(-1)}
    G = deform.egl(E("solvable"), [deform.ConnectionObject("Xa", "X", inst_alpha)])
    assert validate(G).valid
    for x in G.objects:
        for y in G.objects:
            for e in G.basis(x, y):
                d = G.mu1(e)
                assert not d or not G.mu_eval([d])
    with pytest.raises(deform.NotFlat):
        deform.egl(E("curved"), [deform.ConnectionObject("X", "X")])


def test_egl_trivial_equals_E(E):
    D = E("dual_t")
    G = deform.egl(D, [deform.ConnectionObject("X", "X")])
    assert G.mu == D.mu


def test_rank_jump(E):
    G = deform.egl_trivial(E("rankjump"))
    z = deform.generic_hom(G, "Z", "Z")
    assert sum(z.dims.values()) == 0
    assert {k: v for k, v in z.special_dims.items() if v} == {-1: 1, 0: 1}
    w = deform.iso_over_laurent(G, "X", "Y")
    assert w.found and w.valuation == -1
    assert not deform.iso_over_laurent(G, "X", "Y", window=(0, 0)).found
    assert deform.iso_over_laurent(G, "X", "X").valuation == 0
    sp = tw.quasi_iso_witness(deform.special_fibre(G), tw.TwComplex.of("X"), tw.TwComplex.of("Y"))
    assert not sp.found and sp.exhaustive


def test_generic_dims_dual_t(E):
    G = deform.egl_trivial(E("dual_t"))
    assert deform.generic_hom(G, "X", "X").dims.get(0) == 2


@pytest.mark.parametrize("name", ["dual_t", "solvable", "rankjump"])
def test_semicontinuity(corpus, name):
    inst = corpus(name)
    conns = inst.connections or [deform.ConnectionObject(x, x) for x in inst.category.objects]
    G = deform.egl(inst.category, conns)
    for a in G.objects:
        for b in G.objects:
            g = deform.generic_hom(G, a, b)
            for k, v in g.dims.items():
                assert v <= g.special_dims.get(k, 0)


def test_generic_equals_special_for_trivial(corpus):
    G = deform.egl_trivial(deform.trivial_deformation(corpus("sph_2").category, N))
    g = deform.generic_hom(G, "S", "S")
    assert {k: v for k, v in g.dims.items() if v} == {k: v for k, v in g.special_dims.items() if v}


def test_deformation_classes(E, corpus):
    D = E("dual_t")
    c = deform.deformation_class(D)
    assert c.coords == [1] and not c.is_zero
    assert deform.deformation_class(deform.trivial_deformation(corpus("dual0").category, N)).is_zero
    assert deform.deformation_class(deform.reparametrize(D, t(2))).coords == [2]
    assert deform.deformation_class(deform.reparametrize(D, t(1, 2))).is_zero
    cc = deform.deformation_class(E("curved"))
    assert not cc.is_zero
    assert cc.cochain.get(((), ("X", "X", "c")))


def test_reparametrize_identity_and_bad(E):
    D = E("dual_t")
    assert deform.reparametrize(D, t()) == D
    with pytest.raises(deform.BadParameter):
        deform.reparametrize(D, TruncSeries({0: 1, 1: 1}, N))


def test_reparametrize_keeps_special_fibre(E):
    rng = random.Random(20)
    for name in DEFORMED:
        D = E(name)
        for _ in range(20):
            f = TruncSeries({k: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for k in range(1, 4)}, N)
            if not f:
                continue
            R = deform.reparametrize(D, f)
            assert deform.special_fibre(R) == deform.special_fibre(D)
            assert deform.validate_deformation(R).valid


def test_class_scales_with_linear_term(E):
    D = E("dual_t")
    for c1 in (Fraction(1, 2), -3, 5):
        f = TruncSeries({1: c1, 2: 7, 3: -1}, N)
        assert deform.deformation_class(deform.reparametrize(D, f)).coords == [c1]


def test_first_order_equiv(E, corpus):
    D = E("dual_t")
    assert deform.first_order_equiv(D, deform.reparametrize(D, TruncSeries({1: 1, 2: 1}, N))).equivalent
    assert not deform.first_order_equiv(D, deform.trivial_deformation(corpus("dual0").category, N)).equivalent
    with pytest.raises(deform.DifferentFibres):
        deform.first_order_equiv(D, E("curved"))


def test_first_order_equiv_coboundary(corpus):
    # add t * delta(g) with g(e) = x (not a derivation); a deformation mod t^2
    n = 2
    D = corpus("dual_t").category
    D2 = D.map_coefficients(lambda c: c.truncate(n), trunc=n)
    A0 = deform.special_fibre(D2)
    g = {((("X", "X", "e"),), ("X", "X", "x")): 1}
    dg = hochschild.hochschild_diff(A0, g, r=1)
    assert dg
    mu = dict(D2.mu)
    for key, c in dg.items():
        mu[key] = mu.get(key, TruncSeries({}, n)) + TruncSeries({1: c}, n)
    E2 = AInftyCategory(D2.objects, D2.homs, mu, D2.dmax, trunc=n)
    assert deform.validate_deformation(E2).valid
    assert deform.first_order_equiv(D2, E2).equivalent
    assert deform.deformation_class(E2).coords == deform.deformation_class(D2).coords


def test_uniqueness_harness(E):
    D = E("dual_t")
    rep = deform.uniqueness_harness(D, deform.reparametrize(D, t(3)))
    assert rep.scalar == 3
