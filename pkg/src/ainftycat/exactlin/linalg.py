"""Sparse linear algebra over Q and over truncated Laurent series.

Vectors are plain dicts ``{index: scalar}`` with no stored zeros.  Matrices
are :class:`SparseMatrix` coordinate maps.  Pivoting is deterministic:
minimal t-adic valuation first, then lowest row, then lowest column.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .scalars import PrecisionExhausted, TruncLaurent, TruncSeries, valuation

INF = float("inf")


class NotAComplex(ValueError):
    """Raised when consecutive differentials do not compose to zero."""


class NotACocycle(ValueError):
    pass


def scalar_kind(x) -> str:
    if isinstance(x, TruncLaurent):
        return "laurent"
    if isinstance(x, TruncSeries):
        return "series"
    return "rational"


def _noise(x) -> float:
    """Absolute precision of an inexact zero, ``inf`` for an exact zero."""
    if isinstance(x, TruncLaurent) and not x.digits and x.precision is not None:
        return x.valuation
    return INF


# -- sparse vectors -----------------------------------------------------------


def vec_axpy(y: dict, a, x: Mapping) -> dict:
    """In place ``y += a * x``; returns ``y``."""
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)
    return y


def vec_scale(a, x: Mapping) -> dict:
    out = {}
    for k, v in x.items():
        s = a * v
        if s:
            out[k] = s
    return out


def vec_add(*xs: Mapping) -> dict:
    out: dict = {}
    for x in xs:
        vec_axpy(out, 1, x)
    return out


def vec_clean(x: Mapping) -> dict:
    return {k: v for k, v in x.items() if v}


# -- matrices -----------------------------------------------------------------


class SparseMatrix:
    """Coordinate-map matrix with a homogeneous scalar kind."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        clean = {}
        kinds = set()
        if entries:
            items = entries.items() if isinstance(entries, dict) else (
                ((r, c), v) for r, c, v in entries
            )
            for (r, c), v in items:
                if isinstance(v, int):
                    v = Fraction(v)
                if not (0 <= r < rows and 0 <= c < cols):
                    raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
                if v:
                    clean[(r, c)] = clean.get((r, c), 0) + v
                    if not clean[(r, c)]:
                        del clean[(r, c)]
                    kinds.add(scalar_kind(v))
        if len(kinds) > 1:
            # exact rationals promote into a single non-rational kind
            others = kinds - {"rational"}
            if len(others) > 1:
                raise TypeError(f"mixed scalar kinds in matrix: {sorted(kinds)}")
            promote = TruncLaurent._coerce if others == {"laurent"} else None
            if promote is None:
                raise TypeError(f"mixed scalar kinds in matrix: {sorted(kinds)}")
            clean = {k: (promote(v) if scalar_kind(v) == "rational" else v) for k, v in clean.items()}
        self.entries = dict(sorted(clean.items()))

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        n = len(rows)
        m = len(rows[0]) if n else 0
        return cls(n, m, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r)})

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping]) -> "SparseMatrix":
        return cls(rows, len(columns), {(i, j): v for j, col in enumerate(columns) for i, v in col.items()})

    @property
    def kind(self) -> str:
        for v in self.entries.values():
            return scalar_kind(v)
        return "rational"

    def to_dense(self) -> list[list]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def row_dicts(self) -> list[dict]:
        rows: list[dict] = [{} for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def column_dicts(self) -> list[dict]:
        cols: list[dict] = [{} for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def apply(self, x: Mapping) -> dict:
        out: dict = {}
        cols = self.column_dicts()
        for j, a in x.items():
            vec_axpy(out, a, cols[j])
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        left = self.row_dicts()
        right = other.row_dicts()
        out: dict = {}
        for i, row in enumerate(left):
            acc: dict = {}
            for k, a in row.items():
                vec_axpy(acc, a, right[k])
            for j, v in acc.items():
                out[(i, j)] = v
        return SparseMatrix(self.rows, other.cols, out)

    def map(self, fn) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, {k: fn(v) for k, v in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


@dataclass
class RrefResult:
    rank: int
    pivots: list[tuple[int, int]]
    kernel: list[dict]
    image: list[dict]
    reduced: SparseMatrix
    # orders of t separating the pivots from undetermined residual entries
    margin: float = INF
    pivot_precision: float = INF


def rref(m: SparseMatrix, col_priority: Sequence[int] | None = None, *, strict: bool = True,
         column_major: bool = False) -> RrefResult:
    """Gauss-Jordan elimination with valuation-aware pivoting.

    ``col_priority`` optionally reorders column preference (it is a list of
    column indices, most preferred first); the default is natural order.
    Over Laurent scalars an entry with no known nonzero digit is treated as
    zero; if such an entry is at least as significant as a chosen pivot the
    rank is undecidable and :class:`PrecisionExhausted` is raised.
    ``column_major`` ranks columns before valuations (used by :func:`solve`,
    where the right-hand side column must come last).
    """
    rank_of_col = list(range(m.cols))
    if col_priority is not None:
        for pos, c in enumerate(col_priority):
            rank_of_col[c] = pos
    rows = m.row_dicts()
    noise = [INF] * m.rows
    laurent = m.kind == "laurent"
    active = set(range(m.rows))
    pivots: list[tuple[int, int]] = []
    pivot_vals: list[int] = []
    pivot_prec = INF

    while True:
        best = None
        if laurent:
            for r in sorted(active):
                for c, v in rows[r].items():
                    if column_major:
                        key = (rank_of_col[c], valuation(v), r)
                    else:
                        key = (valuation(v), r, rank_of_col[c])
                    if best is None or key < best[0]:
                        best = (key, r, c)
        else:
            for r in sorted(active):
                if rows[r]:
                    c = min(rows[r], key=rank_of_col.__getitem__)
                    best = (None, r, c)
                    break
        if best is None:
            break
        _, pr, pc = best
        pv = rows[pr][pc]
        if laurent:
            pivot_vals.append(pv.valuation)
            if pv.precision is not None:
                pivot_prec = min(pivot_prec, pv.precision)
        inv = 1 / pv
        prow = {}
        for c, v in rows[pr].items():
            s = v * inv
            if s:
                prow[c] = s
            else:
                noise[pr] = min(noise[pr], _noise(s))
        prow[pc] = Fraction(1) if not laurent else TruncLaurent.exact(1)
        rows[pr] = prow
        active.discard(pr)
        for r in range(m.rows):
            if r == pr or pc not in rows[r]:
                continue
            f = rows[r][pc]
            row = rows[r]
            for c, v in prow.items():
                s = row.get(c, 0) - f * v
                if s:
                    row[c] = s
                else:
                    if c in row:
                        del row[c]
                    noise[r] = min(noise[r], _noise(s))
            row.pop(pc, None)
        pivots.append((pr, pc))

    residual = min((noise[r] for r in active), default=INF)
    margin = INF
    if pivot_vals and residual < INF:
        margin = residual - max(pivot_vals)
    elif residual < INF:
        margin = residual
    if laurent and strict and residual < INF and margin <= 0:
        raise PrecisionExhausted(
            f"rank undecidable: residual entries known only to O(t^{int(residual)}); raise the truncation"
        )

    pivot_cols = {c: r for r, c in pivots}
    one = TruncLaurent.exact(1) if laurent else Fraction(1)
    kernel = []
    for f in sorted(range(m.cols), key=rank_of_col.__getitem__):
        if f in pivot_cols:
            continue
        v = {f: one}
        for pc, pr in pivot_cols.items():
            a = rows[pr].get(f)
            if a:
                v[pc] = -a
        kernel.append(v)
    cols = m.column_dicts()
    image = [cols[c] for c in sorted(pivot_cols, key=rank_of_col.__getitem__)]
    reduced = SparseMatrix(m.rows, m.cols, {(r, c): v for r, row in enumerate(rows) for c, v in row.items()})
    return RrefResult(len(pivots), sorted(pivots), kernel, image, reduced, margin, pivot_prec)


def rank(m: SparseMatrix) -> int:
    """Rank via row echelon form; Laurent input defers to :func:`rref`."""
    if m.kind == "laurent":
        return rref(m).rank
    rows = m.row_dicts() if m.rows <= m.cols else m.column_dicts()
    pivot_rows: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        while row:
            c = min(row)
            prow = pivot_rows.get(c)
            if prow is None:
                inv = 1 / row[c]
                pivot_rows[c] = {k: v * inv for k, v in row.items()}
                break
            vec_axpy(row, -row[c], prow)
    return len(pivot_rows)


def solve(m: SparseMatrix, rhs: Mapping) -> dict | None:
    """One solution ``x`` of ``m x = rhs`` (free variables zero), or ``None``."""
    aug_col = m.cols
    entries = dict(m.entries)
    for r, v in rhs.items():
        entries[(r, aug_col)] = v
    big = SparseMatrix(m.rows, m.cols + 1, entries)
    res = rref(big, col_priority=list(range(m.cols + 1)), column_major=True)
    sol = {}
    for r, c in res.pivots:
        if c == aug_col:
            return None
        a = res.reduced.entries.get((r, aug_col))
        if a:
            sol[c] = a
    return sol


# -- incremental echelon basis ------------------------------------------------


class Echelon:
    """Incrementally built echelon basis that remembers how each row was made.

    Every added generator gets an integer id; ``reduce`` expresses a vector
    as (residual, combination of generator ids).  Row ``i`` vanishes at the
    pivots of rows before it, so one forward pass reduces any vector.
    """

    def __init__(self):
        self.rows: list[tuple[object, dict, dict]] = []  # (pivot, row, combo)
        self.count = 0

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: Mapping) -> tuple[dict, dict]:
        res = dict(v)
        combo: dict = {}
        for p, row, rc in self.rows:
            a = res.get(p)
            if a:
                vec_axpy(res, -a, row)
                vec_axpy(combo, a, rc)
        return res, combo

    def add(self, v: Mapping) -> int | None:
        """Add a generator; returns its id if it was independent, else ``None``."""
        gid = self.count
        self.count += 1
        res, combo = self.reduce(v)
        if not res:
            return None
        combo = vec_scale(-1, combo)
        combo[gid] = combo.get(gid, 0) + 1
        p = min(res, key=lambda k: (valuation(res[k]), k))
        inv = 1 / res[p]
        self.rows.append((p, vec_scale(inv, res), vec_scale(inv, combo)))
        return gid

    def coordinates(self, v: Mapping) -> dict:
        res, combo = self.reduce(v)
        if res:
            raise ValueError("vector is not in the span")
        return combo


# -- chain complexes ----------------------------------------------------------


@dataclass
class ChainComplexData:
    """Cochain complex: ``dims[k]`` and ``diffs[k]`` of shape dims[k+1] x dims[k]."""

    dims: dict[int, int]
    diffs: dict[int, SparseMatrix] = field(default_factory=dict)

    def __post_init__(self):
        for k, d in self.diffs.items():
            if d.cols != self.dims.get(k, 0) or d.rows != self.dims.get(k + 1, 0):
                raise ValueError(f"differential d_{k} has shape {d.rows}x{d.cols}")

    def check(self) -> None:
        for k, d in self.diffs.items():
            nxt = self.diffs.get(k + 1)
            if nxt is None:
                continue
            prod = nxt @ d
            if prod.entries:
                raise NotAComplex(f"d_{k + 1} o d_{k} != 0")


@dataclass
class Cohomology:
    dims: dict[int, int]
    reps: dict[int, list[dict]]
    margin: float = INF
    _transfer: dict[int, tuple[Echelon, list[int]]] = field(default_factory=dict, repr=False)

    def euler(self) -> int:
        return sum((-1) ** (k % 2) * n for k, n in self.dims.items())

    def total(self) -> int:
        return sum(self.dims.values())

    def coords(self, k: int, z: Mapping) -> list:
        """Class coordinates of a cocycle in degree ``k`` against ``reps[k]``."""
        if k not in self._transfer:
            if z:
                raise NotACocycle(f"degree {k} has no cochains")
            return []
        ech, gids = self._transfer[k]
        try:
            combo = ech.coordinates(z)
        except ValueError:
            raise NotACocycle(f"vector is not a cocycle in degree {k}") from None
        return [combo.get(g, 0) for g in gids]

    def is_exact(self, k: int, z: Mapping) -> bool:
        return not any(self.coords(k, z))


def complex_cohomology(
    c: ChainComplexData, col_priority_seed: int | None = None, *, check: bool = True,
    want: Iterable[int] | None = None,
) -> Cohomology:
    """Cohomology with representatives and a class-coordinate transfer.

    With ``col_priority_seed`` the basis of each degree is visited in a
    seeded random order, giving a different but equally valid choice of
    representatives.  ``want`` restricts the degrees that are computed.
    """
    import random

    if check:
        c.check()
    dims, reps, transfer = {}, {}, {}
    margin = INF
    degrees = sorted(set(c.dims))
    if want is not None:
        wanted = set(want)
        degrees = [k for k in degrees if k in wanted]
    prio: dict[int, list[int] | None] = {}
    for k in sorted(c.dims):
        if col_priority_seed is None:
            prio[k] = None
        else:
            order = list(range(c.dims[k]))
            random.Random(hash((col_priority_seed, k)) & 0xFFFFFFFF).shuffle(order)
            prio[k] = order
    results = {}
    for k in sorted(set(degrees) | {k - 1 for k in degrees}):
        if k not in prio:
            prio[k] = None
        d = c.diffs.get(k)
        if d is not None and d.entries:
            results[k] = rref(d, prio[k])
            margin = min(margin, results[k].margin)
    for k in degrees:
        n = c.dims[k]
        if n == 0:
            dims[k] = 0
            reps[k] = []
            continue
        if k in results:
            cycles = results[k].kernel
        else:
            order = prio[k] or list(range(n))
            one = Fraction(1)
            d = c.diffs.get(k)
            if d is not None and d.kind == "laurent":
                one = TruncLaurent.exact(1)
            cycles = [{i: one} for i in order]
        prev = results.get(k - 1)
        boundaries = prev.image if prev is not None else []
        ech = Echelon()
        for b in boundaries:
            ech.add(b)
        chosen, gids = [], []
        for z in cycles:
            g = ech.add(z)
            if g is not None:
                chosen.append(z)
                gids.append(g)
        dims[k] = len(chosen)
        reps[k] = chosen
        transfer[k] = (ech, gids)
    return Cohomology(dims, reps, margin, transfer)


class KeyedCohomology:
    """Cohomology of a complex whose basis vectors carry hashable keys.

    ``basis`` maps degree -> ordered list of keys; vectors are dicts keyed by
    those keys.  ``reps[k]`` are keyed cocycles; ``coords`` gives class
    coordinates of a keyed cocycle.
    """

    def __init__(self, basis: dict[int, list], coh: Cohomology):
        self.basis = basis
        self.index = {k: {key: i for i, key in enumerate(keys)} for k, keys in basis.items()}
        self.coh = coh
        self.reps = {
            k: [{basis[k][i]: v for i, v in z.items()} for z in coh.reps.get(k, [])]
            for k in basis
        }

    @property
    def dims(self) -> dict[int, int]:
        return {k: n for k, n in sorted(self.coh.dims.items())}

    @property
    def margin(self) -> float:
        return self.coh.margin

    def total(self) -> int:
        return self.coh.total()

    def euler(self) -> int:
        return self.coh.euler()

    def _indexed(self, k: int, vec: Mapping) -> dict:
        idx = self.index.get(k, {})
        out = {}
        for key, v in vec.items():
            if key not in idx:
                raise NotACocycle(f"key {key!r} is not a degree-{k} basis element")
            out[idx[key]] = v
        return out

    def coords(self, k: int, vec: Mapping) -> list:
        return self.coh.coords(k, self._indexed(k, vec))

    def is_exact(self, k: int, vec: Mapping) -> bool:
        return not any(self.coords(k, vec))


def keyed_cohomology(basis: dict[int, list], diff, convert=None, seed: int | None = None,
                     check: bool = True, want: Iterable[int] | None = None) -> KeyedCohomology:
    """Assemble matrices from ``diff(key) -> {key: scalar}`` and take cohomology.

    Keys produced by ``diff`` that are not basis keys of the next degree are
    dropped (quotient by a subcomplex, used for truncations).
    """
    degrees = sorted(basis)
    index = {k: {key: i for i, key in enumerate(basis[k])} for k in degrees}
    dims = {k: len(basis[k]) for k in degrees}
    diffs = {}
    for k in degrees:
        if k + 1 not in index or not basis[k] or not basis[k + 1]:
            continue
        nxt = index[k + 1]
        entries = {}
        for j, key in enumerate(basis[k]):
            for out_key, v in diff(key).items():
                i = nxt.get(out_key)
                if i is not None and v:
                    entries[(i, j)] = convert(v) if convert else v
        diffs[k] = SparseMatrix(dims[k + 1], dims[k], entries)
    data = ChainComplexData(dims, diffs)
    return KeyedCohomology(basis, complex_cohomology(data, seed, check=check, want=want))
