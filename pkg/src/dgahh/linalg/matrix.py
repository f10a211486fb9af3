"""Sparse exact matrices."""
from __future__ import annotations

from dataclasses import dataclass, field

from .rings import Ring, UnsupportedRingError
from . import backend


@dataclass
class ExactMatrix:
    """Sparse matrix over an exact ring, stored as {(row, col): value}.

    Zero entries are never stored.
    """

    ring: Ring
    nrows: int
    ncols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        ring = self.ring
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.nrows and 0 <= j < self.ncols):
                raise IndexError(f"entry ({i},{j}) outside {self.nrows}x{self.ncols}")
            if not ring.is_zero(v):
                clean[(i, j)] = v
        self.entries = clean

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        return cls(ring, nrows, ncols, {})

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, n, n, {(i, i): ring.one() for i in range(n)})

    @classmethod
    def from_dense(cls, ring, rows):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        ents = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                ents[(i, j)] = v
        return cls(ring, nrows, ncols, ents)

    def to_dense(self):
        z = self.ring.zero()
        out = [[z] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def get(self, i, j):
        return self.entries.get((i, j), self.ring.zero())

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_zero(self):
        return not self.entries

    def transpose(self):
        return ExactMatrix(self.ring, self.ncols, self.nrows,
                           {(j, i): v for (i, j), v in self.entries.items()})

    def rows(self):
        """Row dicts {col: value}."""
        out = [dict() for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def columns(self):
        out = [dict() for _ in range(self.ncols)]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ring != other.ring:
            raise ValueError("ring mismatch")
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        R = self.ring
        orows = other.rows()
        acc = {}
        for (i, k), a in self.entries.items():
            for j, b in orows[k].items():
                key = (i, j)
                acc[key] = R.add(acc.get(key, R.zero()), R.mul(a, b))
        return ExactMatrix(R, self.nrows, other.ncols, acc)

    def apply(self, vec: dict) -> dict:
        """Multiply by a sparse column vector {index: value}."""
        R = self.ring
        cols = self.columns()
        out = {}
        for j, x in vec.items():
            for i, a in cols[j].items():
                out[i] = R.add(out.get(i, R.zero()), R.mul(a, x))
        return {i: v for i, v in out.items() if not R.is_zero(v)}

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.ring == other.ring
                and self.shape == other.shape and self.entries == other.entries)

    def __repr__(self):
        return f"ExactMatrix({self.ring!r}, {self.nrows}x{self.ncols}, nnz={len(self.entries)})"


def rank(m: ExactMatrix) -> int:
    """Rank over a prime field, using the active elimination backend."""
    if not m.ring.is_field:
        raise UnsupportedRingError(f"rank needs a field, got {m.ring!r}")
    return backend.fp_rank(m.columns(), m.nrows, m.ring.p)


def rref(rows: list, ncols: int, p: int):
    """Reduced row echelon form of sparse rows over F_p.

    Returns (pivot_rows, pivot_cols): rows normalised to leading 1 and
    cleared above and below each pivot, sorted by pivot column.
    """
    pivots = {}  # col -> row dict
    for row in rows:
        r = {j: v % p for j, v in row.items() if v % p}
        for c in sorted(pivots):
            if c in r:
                f = r[c]
                for j, v in pivots[c].items():
                    nv = (r.get(j, 0) - f * v) % p
                    if nv:
                        r[j] = nv
                    else:
                        r.pop(j, None)
        if not r:
            continue
        lead = min(r)
        inv = pow(r[lead], p - 2, p)
        r = {j: v * inv % p for j, v in r.items()}
        for c, prow in pivots.items():
            if lead in prow:
                f = prow[lead]
                for j, v in r.items():
                    nv = (prow.get(j, 0) - f * v) % p
                    if nv:
                        prow[j] = nv
                    else:
                        prow.pop(j, None)
        pivots[lead] = r
    cols = sorted(pivots)
    return [pivots[c] for c in cols], cols


def rank_kernel(m: ExactMatrix):
    """Rank and a kernel basis of ``m`` over F_p.

    The kernel basis is returned as sparse vectors {col: value}, one per
    free column, in increasing order of free column.
    """
    R = m.ring
    if not R.is_field:
        raise UnsupportedRingError(f"rank_kernel needs a field, got {R!r}")
    p = R.p
    prows, pcols = rref(m.rows(), m.ncols, p)
    pivot_set = set(pcols)
    kernel = []
    for f in range(m.ncols):
        if f in pivot_set:
            continue
        v = {f: 1}
        for row, c in zip(prows, pcols):
            a = row.get(f, 0)
            if a:
                v[c] = (-a) % p
        kernel.append(v)
    return len(pcols), kernel
