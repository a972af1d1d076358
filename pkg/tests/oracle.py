"""Brute-force reference checks written directly from the defining formulas.

Deliberately naive and independent of the package's ``insert`` kernel.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def mu_apply(mu, degrees, ins):
    """mu^d on a tuple of basis elements (leftmost-first); returns {elem: coeff}."""
    out = {}
    for (key_ins, o), c in mu.items():
        if key_ins == tuple(ins):
            out[o] = out.get(o, 0) + c
    return out


def relation(mu, degrees, ins):
    """Sum over m, n of (-1)^{sum_{j<=n}(|a_j|-1)} mu(..., mu^m(...), ...) at one input tuple."""
    d = len(ins)
    a = list(reversed(ins))  # a[0] = a_1
    total = {}
    for m in range(1, d + 1):
        for n in range(0, d - m + 1):
            sign = (-1) ** sum(degrees[a[j]] - 1 for j in range(n))
            inner = mu_apply(mu, degrees, tuple(reversed(a[n:n + m])))
            for y, cy in inner.items():
                outer_in = tuple(reversed(a[:n] + [y] + a[n + m:]))
                for o, co in mu_apply(mu, degrees, outer_in).items():
                    total[o] = total.get(o, 0) + sign * cy * co
    return {o: c for o, c in total.items() if c}


def composable(homs, d):
    elems = [(x, y, lab) for (x, y), basis in homs.items() for lab, _ in basis]
    for tup in itertools.product(elems, repeat=d):
        # tup is (a_d, ..., a_1): target of a_i is source of a_{i+1}
        if all(tup[i][0] == tup[i + 1][1] for i in range(d - 1)):
            yield tup


def is_valid(objects, homs, mu, dmax):
    degrees = {(x, y, lab): deg for (x, y), basis in homs.items() for lab, deg in basis}
    for (ins, o), c in mu.items():
        if any(e not in degrees for e in ins + (o,)):
            return False
        if degrees[o] != sum(degrees[e] for e in ins) + 2 - len(ins):
            return False
        if any(ins[i][0] != ins[i + 1][1] for i in range(len(ins) - 1)):
            return False
        if o[0] != ins[-1][0] or o[1] != ins[0][1]:
            return False
    for d in range(1, 2 * dmax):
        for tup in composable(homs, d):
            if relation(mu, degrees, tup):
                return False
    return True


def mutations(A):
    """Single-entry edits: sign flips, drops, degree bumps, wrong-degree additions.

    Yields ``(description, homs, mu)``.
    """
    homs = {k: list(v) for k, v in A.homs.items()}
    mu = dict(A.mu)
    for key in sorted(mu, key=repr):
        flipped = dict(mu)
        flipped[key] = -mu[key]
        yield f"flip {key}", homs, flipped
    for key in sorted(mu, key=repr):
        dropped = {k: v for k, v in mu.items() if k != key}
        yield f"drop {key}", homs, dropped
    for hk in sorted(homs):
        for i, (lab, deg) in enumerate(homs[hk]):
            for bump in (1, -1, 2, -2, 3, -3, 4, -4):
                h2 = {k: list(v) for k, v in homs.items()}
                h2[hk][i] = (lab, deg + bump)
                yield f"bump {hk}:{lab} by {bump}", h2, mu
    for hk in sorted(homs):
        for lab, _ in homs[hk]:
            e = (hk[0], hk[1], lab)
            yield f"add mu1({lab}) = {lab}", homs, {**mu, ((e,), e): Fraction(1)}
            if hk[0] == hk[1]:
                yield f"add mu3({lab},{lab},{lab}) = {lab}", homs, {**mu, ((e, e, e), e): Fraction(1)}
