"""Builders for the bundled example instances.

The JSON files under ``data/corpus`` are generated from these functions
(``tools/build_corpus.py``); tests check the two agree.
"""

from __future__ import annotations

from .ainfty import Builder
from .deform import ConnectionObject
from .exactlin import TruncSeries
from .io import Instance
from .tw import TwComplex

N_DEFAULT = 8


def _t(N: int, c=1, k: int = 1) -> TruncSeries:
    return TruncSeries({k: c}, N)


def pt() -> Instance:
    A = Builder("pt").hom("X", "X", ("e", 0)).unital({"X": "e"}).build()
    return Instance(A, {"X": TwComplex.of("X"), "X[1]": TwComplex.of("X", 1)},
                    description="one object, hom = Q.e in degree 0")


def dual0() -> Instance:
    A = Builder("dual0").hom("X", "X", ("e", 0), ("x", 0)).unital({"X": "e"}).build()
    x = ("X", "X", "x")
    three = TwComplex([("X", 0), ("X", 1), ("X", 2)], {(2, 1): {x: 1}, (1, 0): {x: 1}}, "X<-X[1]<-X[2]")
    return Instance(A, {"X": TwComplex.of("X"), "three": three},
                    description="dual numbers Q[x]/x^2 in degree 0")


def sph(n: int) -> Instance:
    A = Builder(f"sph_{n}").hom("S", "S", ("e", 0), ("s", n)).unital({"S": "e"}).build()
    return Instance(A, {"S": TwComplex.of("S")}, description=f"cohomology of the {n}-sphere")


def a2() -> Instance:
    A = (Builder("a2").hom("X", "X", ("ex", 0)).hom("Y", "Y", ("ey", 0)).hom("X", "Y", ("a", 0))
         .unital({"X": "ex", "Y": "ey"}).build())
    cone = TwComplex([("Y", 0), ("X", 1)], {(1, 0): {("X", "Y", "a"): 1}}, "Cone(a)")
    return Instance(A, {"X": TwComplex.of("X"), "Y": TwComplex.of("Y"), "Cone(a)": cone},
                    description="A2 quiver X -> Y")


def dual_t(N: int = N_DEFAULT) -> Instance:
    b = Builder("dual_t", trunc=N).hom("X", "X", ("e", 0), ("x", 0)).unital({"X": "e"})
    b.set(["x", "x"], "e", _t(N))
    return Instance(b.build(), connections=[ConnectionObject("X", "X")],
                    description="dual numbers deformed by x^2 = t")


def curved(N: int = N_DEFAULT) -> Instance:
    b = Builder("curved", trunc=N).hom("X", "X", ("e", 0), ("c", 2)).unital({"X": "e"})
    b.curvature("X", "c", _t(N))
    return Instance(b.build(), description="obstructed object: mu0 = t c")


def solvable(N: int = N_DEFAULT) -> Instance:
    b = Builder("solvable", trunc=N).hom("X", "X", ("e", 0), ("b", 1), ("c", 2)).unital({"X": "e"})
    b.set(["b"], "c", 1)
    b.curvature("X", "c", _t(N))
    conn = ConnectionObject("Xa", "X", {("X", "X", "b"): _t(N, -1)})
    return Instance(b.build(), connections=[conn], description="mu0 = t mu1(b), removed by alpha = -t b")


def rankjump(N: int = N_DEFAULT) -> Instance:
    b = (Builder("rankjump", trunc=N)
         .hom("X", "X", ("ex", 0)).hom("Y", "Y", ("ey", 0))
         .hom("X", "Y", ("a", 0)).hom("Y", "X", ("b", 0))
         .hom("Z", "Z", ("ez", 0), ("p", -1))
         .unital({"X": "ex", "Y": "ey", "Z": "ez"}))
    b.set(["b", "a"], "ex", _t(N))
    b.set(["a", "b"], "ey", _t(N))
    b.set(["p"], "ez", _t(N))
    conns = [ConnectionObject(x, x) for x in ("X", "Y", "Z")]
    return Instance(b.build(), connections=conns,
                    description="X and Y become isomorphic and Z vanishes once t is inverted")


BUILDERS = {
    "pt": pt,
    "dual0": dual0,
    "sph_1": lambda: sph(1),
    "sph_2": lambda: sph(2),
    "sph_3": lambda: sph(3),
    "a2": a2,
    "dual_t": dual_t,
    "curved": curved,
    "solvable": solvable,
    "rankjump": rankjump,
}

UNDEFORMED = ["pt", "dual0", "sph_1", "sph_2", "sph_3", "a2"]
DEFORMATIONS = ["dual_t", "curved", "solvable", "rankjump"]
