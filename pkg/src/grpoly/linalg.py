"""Exact rational sparse linear algebra.

Scalars are `fractions.Fraction` (arbitrary precision, always reduced,
positive denominator).  Matrices are sparse maps (row, col) -> nonzero
Fraction over explicitly indexed bases.  Rank and kernel computations use
fraction-free (Bareiss-style) elimination on integer-cleared rows, with
the pivot in each column chosen by smallest bit length.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class DimensionMismatchError(ValueError):
    """Raised when matrix shapes are incompatible."""


class IndexedBasis:
    """An ordered family of distinct, hashable basis keys."""

    def __init__(self, keys):
        self.keys = tuple(keys)
        self._index = {k: i for i, k in enumerate(self.keys)}
        if len(self._index) != len(self.keys):
            raise ValueError("basis keys must be distinct")

    def __len__(self):
        return len(self.keys)

    def __iter__(self):
        return iter(self.keys)

    def __contains__(self, key):
        return key in self._index

    def __eq__(self, other):
        return isinstance(other, IndexedBasis) and self.keys == other.keys

    def position(self, key):
        return self._index[key]

    def key_at(self, i):
        return self.keys[i]


class SparseMatrix:
    """Immutable sparse matrix over Q; zero entries are never stored."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        self.rows = rows
        self.cols = cols
        clean = {}
        for (i, j), v in entries.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i},{j}) out of range {rows}x{cols}")
            v = Fraction(v)
            if v:
                clean[(i, j)] = v
        self.entries = clean

    @classmethod
    def from_rows(cls, row_list):
        rows = len(row_list)
        cols = len(row_list[0]) if row_list else 0
        entries = {}
        for i, row in enumerate(row_list):
            if len(row) != cols:
                raise DimensionMismatchError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = Fraction(v)
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, {len(self.entries)} entries)"

    def row(self, i):
        return {j: v for (r, j), v in self.entries.items() if r == i}

    def column(self, j):
        return {i: v for (i, c), v in self.entries.items() if c == j}

    def matmul(self, other):
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        by_row = {}
        for (i, j), v in self.entries.items():
            by_row.setdefault(i, []).append((j, v))
        other_rows = {}
        for (i, j), v in other.entries.items():
            other_rows.setdefault(i, []).append((j, v))
        out = {}
        for i, terms in by_row.items():
            acc = {}
            for k, v in terms:
                for j, w in other_rows.get(k, ()):
                    acc[j] = acc.get(j, Fraction(0)) + v * w
            for j, v in acc.items():
                if v:
                    out[(i, j)] = v
        return SparseMatrix(self.rows, other.cols, out)

    def apply(self, vec):
        """Matrix times a dense coordinate vector."""
        if len(vec) != self.cols:
            raise DimensionMismatchError("vector length does not match column count")
        out = [Fraction(0)] * self.rows
        for (i, j), v in self.entries.items():
            if vec[j]:
                out[i] += v * vec[j]
        return tuple(out)

    def stack(self, other):
        if self.cols != other.cols:
            raise DimensionMismatchError("column counts differ")
        entries = dict(self.entries)
        for (i, j), v in other.entries.items():
            entries[(self.rows + i, j)] = v
        return SparseMatrix(self.rows + other.rows, self.cols, entries)


def _integer_rows(m):
    """Rows of m scaled to integers (row scaling preserves rank and kernel)."""
    rows = [{} for _ in range(m.rows)]
    for (i, j), v in m.entries.items():
        rows[i][j] = v
    out = []
    for row in rows:
        if not row:
            continue
        den = 1
        for v in row.values():
            den = den * v.denominator // gcd(den, v.denominator)
        out.append({j: int(v * den) for j, v in row.items()})
    return out


def _normalize(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


def _row_echelon(int_rows, cols):
    """Fraction-free elimination; returns (echelon integer rows, pivot cols).

    Cross-multiplication keeps everything integral; each updated row is
    divided by its content (gcd) and the pivot in each column is the
    candidate of smallest bit length, which together control coefficient
    growth without ever rounding.
    """
    rows = [_normalize(dict(r)) for r in int_rows if r]
    pivots = []
    echelon = []
    for col in range(cols):
        best = None
        for idx, row in enumerate(rows):
            v = row.get(col)
            if v:
                size = abs(v).bit_length()
                if best is None or size < best[0]:
                    best = (size, idx)
        if best is None:
            continue
        piv_row = rows.pop(best[1])
        piv = piv_row[col]
        new_rows = []
        for row in rows:
            v = row.get(col, 0)
            if v:
                g = gcd(piv, v)
                a, b = piv // g, v // g
                merged = {}
                for j in set(row) | set(piv_row):
                    if j <= col:
                        continue
                    num = row.get(j, 0) * a - piv_row.get(j, 0) * b
                    if num:
                        merged[j] = num
                row = _normalize(merged)
            if row:
                new_rows.append(row)
        rows = new_rows
        echelon.append(piv_row)
        pivots.append(col)
    return echelon, pivots


def rank(m):
    """Rank of m over Q."""
    _, pivots = _row_echelon(_integer_rows(m), m.cols)
    return len(pivots)


def kernel_basis(m):
    """A basis of the right kernel of m, as tuples of Fractions.

    The vectors are linearly independent and their count is
    cols - rank(m); each free column yields one vector with a 1 in that
    coordinate.
    """
    echelon, pivots = _row_echelon(_integer_rows(m), m.cols)
    pivot_set = set(pivots)
    free_cols = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * m.cols
        vec[fc] = Fraction(1)
        # Back-substitute pivot coordinates, bottom pivot row first.
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            row = echelon[r]
            s = Fraction(0)
            for j, v in row.items():
                if j != pc and vec[j]:
                    s += v * vec[j]
            vec[pc] = -s / row[pc]
        basis.append(tuple(vec))
    return basis


def joint_kernel(matrices, cols=None):
    """Basis of the intersection of the kernels of the given matrices.

    The empty intersection convention: with no matrices, the full space
    (cols must then be supplied).
    """
    mats = list(matrices)
    if not mats:
        if cols is None:
            raise DimensionMismatchError("empty joint kernel needs an explicit column count")
        return kernel_basis(SparseMatrix(0, cols, {}))
    width = mats[0].cols
    stacked = mats[0]
    for m in mats[1:]:
        if m.cols != width:
            raise DimensionMismatchError("joint kernel over unequal column counts")
        stacked = stacked.stack(m)
    return kernel_basis(stacked)


def coordinates_in_span(vectors, target):
    """Express target as a rational combination of the given vectors.

    Returns a tuple of coefficients, or None if target is not in the span.
    Used for membership-in-span tests and for restricting actions to
    computed subspaces.
    """
    if not vectors:
        return () if not any(target) else None
    n = len(target)
    cols = len(vectors)
    entries = {}
    for j, vec in enumerate(vectors):
        if len(vec) != n:
            raise DimensionMismatchError("vector lengths differ")
        for i, v in enumerate(vec):
            if v:
                entries[(i, j)] = Fraction(v)
    for i, v in enumerate(target):
        if v:
            entries[(i, cols)] = -Fraction(v)
    augmented = SparseMatrix(n, cols + 1, entries)
    for vec in kernel_basis(augmented):
        if vec[cols]:
            scale = vec[cols]
            return tuple(vec[j] / scale for j in range(cols))
    return None
