"""Betti-number arithmetic for the symplectic cohomology spectral sequence.

``e1_dim`` is the rank of the starting page at ``(p, q)``; ``sh2_bound`` the
resulting upper bound for ``dim SH^2``.  Nothing about the differentials is
computed.
"""

from __future__ import annotations

from typing import Mapping


def parse_betti(text: str) -> dict[int, int]:
    """``"0:1,2:3"`` -> ``{0: 1, 2: 3}``."""
    out: dict[int, int] = {}
    text = text.strip()
    if not text:
        return out
    for part in text.split(","):
        deg, _, dim = part.partition(":")
        if not _:
            raise ValueError(f"bad Betti entry {part!r}; expected degree:dim")
        d, n = int(deg), int(dim)
        if n < 0:
            raise ValueError("Betti numbers are non-negative")
        out[d] = out.get(d, 0) + n
    return out


def e1_dim(betti_m: Mapping[int, int], betti_bd: Mapping[int, int], p: int, q: int) -> int:
    if p > 0:
        return 0
    if p == 0:
        return int(betti_m.get(q, 0))
    return int(betti_bd.get(q + 3 * p, 0))


def sh2_bound(b2_m: int, b0_bd: int) -> int:
    if b2_m < 0 or b0_bd < 0:
        raise ValueError("Betti numbers are non-negative")
    return b2_m + b0_bd


def total_degree_contributions(betti_m: Mapping[int, int], betti_bd: Mapping[int, int], n: int,
                               p_min: int = -10) -> dict[tuple[int, int], int]:
    """Nonzero ``E_1^{p,q}`` with ``p + q = n`` and ``p_min <= p <= 0``."""
    out = {}
    for p in range(p_min, 1):
        d = e1_dim(betti_m, betti_bd, p, n - p)
        if d:
            out[(p, n - p)] = d
    return out
