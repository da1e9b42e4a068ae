"""Core sparse-matrix value types, Matrix Market ingestion, and the
matrix-vector / residual primitives the rest of the solver consumes.

Vectors are plain 1-D float64 numpy arrays throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import (
    DimensionMismatch,
    EmptyMatrix,
    IndexOutOfRange,
    NonSquare,
    ParseError,
    UnsupportedFormat,
)


def _readonly(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SparseMatrixCSR:
    """Immutable square sparse matrix in row-major compressed form.

    Invariants enforced at construction: ``row_ptr`` is non-decreasing with
    ``row_ptr[0] == 0`` and ``row_ptr[n] == nnz``; column indices are strictly
    increasing within each row and lie in ``[0, n)``.  Explicitly stored zeros
    are kept: the pattern is treated as authoritative by the symbolic phase.
    """

    n: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.n <= 0:
            raise EmptyMatrix("matrix dimension must be positive")
        row_ptr = _readonly(np.asarray(self.row_ptr, dtype=np.int64))
        col_idx = _readonly(np.asarray(self.col_idx, dtype=np.int64))
        values = _readonly(np.asarray(self.values, dtype=np.float64))
        object.__setattr__(self, "row_ptr", row_ptr)
        object.__setattr__(self, "col_idx", col_idx)
        object.__setattr__(self, "values", values)
        if row_ptr.shape != (self.n + 1,):
            raise DimensionMismatch("row_ptr must have length n + 1")
        if row_ptr[0] != 0 or row_ptr[-1] != len(col_idx) or len(col_idx) != len(values):
            raise DimensionMismatch("row_ptr endpoints do not match nnz")
        if np.any(np.diff(row_ptr) < 0):
            raise DimensionMismatch("row_ptr must be non-decreasing")
        if len(col_idx):
            if col_idx.min() < 0 or col_idx.max() >= self.n:
                raise IndexOutOfRange("column index out of range")
        for i in range(self.n):
            row = col_idx[row_ptr[i]:row_ptr[i + 1]]
            if len(row) > 1 and np.any(np.diff(row) <= 0):
                raise DimensionMismatch(f"row {i} columns not strictly increasing")

    @property
    def nnz(self):
        return int(self.row_ptr[-1])

    def row(self, i):
        """(columns, values) view of row ``i``."""
        lo, hi = self.row_ptr[i], self.row_ptr[i + 1]
        return self.col_idx[lo:hi], self.values[lo:hi]

    def to_triplets(self):
        """COO copy as (rows, cols, values) arrays, row-major sorted."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.row_ptr))
        return rows, self.col_idx.copy(), self.values.copy()

    def to_dense(self):
        out = np.zeros((self.n, self.n))
        rows, cols, vals = self.to_triplets()
        out[rows, cols] = vals
        return out

    def with_values(self, values):
        """Same pattern, new values (used by refactorization tests/benchmarks)."""
        values = np.asarray(values, dtype=np.float64)
        if values.shape != self.values.shape:
            raise DimensionMismatch("value array length differs from nnz")
        return SparseMatrixCSR(self.n, self.row_ptr, self.col_idx, values)

    @staticmethod
    def identity(n):
        idx = np.arange(n, dtype=np.int64)
        return SparseMatrixCSR(n, np.arange(n + 1, dtype=np.int64), idx, np.ones(n))

    @staticmethod
    def from_dense(dense, keep_zeros=False):
        dense = np.asarray(dense, dtype=np.float64)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise NonSquare(f"expected a square 2-D array, got shape {dense.shape}")
        n = dense.shape[0]
        if keep_zeros:
            mask = np.ones_like(dense, dtype=bool)
        else:
            mask = dense != 0.0
        rows, cols = np.nonzero(mask)
        return build_csr(np.stack([rows, cols, dense[rows, cols]], axis=1), n)


def build_csr(triplets, n):
    """Assemble a canonical CSR matrix from (row, col, value) triplets.

    Duplicate (row, col) pairs are summed, matching the Matrix Market
    assembly convention.  Raises IndexOutOfRange / EmptyMatrix on bad input.
    """
    if n <= 0:
        raise EmptyMatrix("matrix dimension must be positive")
    arr = np.asarray(list(triplets) if not isinstance(triplets, np.ndarray) else triplets,
                     dtype=np.float64)
    if arr.size == 0:
        arr = arr.reshape(0, 3)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise DimensionMismatch("triplets must be (row, col, value) records")
    rows = arr[:, 0].astype(np.int64)
    cols = arr[:, 1].astype(np.int64)
    vals = arr[:, 2]
    if np.any(rows != arr[:, 0]) or np.any(cols != arr[:, 1]):
        raise IndexOutOfRange("non-integer row/column index")
    if len(rows) and (rows.min() < 0 or cols.min() < 0 or rows.max() >= n or cols.max() >= n):
        raise IndexOutOfRange("triplet index out of range")
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    if len(rows):
        keep = np.empty(len(rows), dtype=bool)
        keep[0] = True
        keep[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
        group = np.cumsum(keep) - 1
        summed = np.zeros(int(group[-1]) + 1)
        np.add.at(summed, group, vals)
        rows, cols, vals = rows[keep], cols[keep], summed
    row_ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(row_ptr[1:], rows, 1)
    np.cumsum(row_ptr, out=row_ptr)
    return SparseMatrixCSR(n, row_ptr, cols, vals)


# ---------------------------------------------------------------------------
# Matrix Market I/O (coordinate real/integer/pattern, general/symmetric/skew)
# ---------------------------------------------------------------------------

def read_matrix_market(path):
    """Parse a coordinate Matrix Market file into a SparseMatrixCSR.

    Symmetric storage is expanded to the full pattern (skew-symmetric mirrors
    with negation), pattern entries get value 1.0, and 1-based indices are
    converted to 0-based.
    """
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        lines = fh.readlines()
    if not lines:
        raise ParseError("empty file", 1)
    header = lines[0].strip().split()
    if len(header) < 5 or header[0].lower() != "%%matrixmarket":
        raise ParseError("missing %%MatrixMarket header", 1)
    obj, fmt, field, symmetry = (tok.lower() for tok in header[1:5])
    if obj != "matrix":
        raise UnsupportedFormat(f"unsupported object {obj!r}")
    if fmt != "coordinate":
        raise UnsupportedFormat(f"unsupported format {fmt!r} (only coordinate)")
    if field not in ("real", "integer", "pattern"):
        raise UnsupportedFormat(f"unsupported field {field!r}")
    if symmetry not in ("general", "symmetric", "skew-symmetric"):
        raise UnsupportedFormat(f"unsupported symmetry {symmetry!r}")

    line_no = 1
    size_line = None
    for line_no, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text or text.startswith("%"):
            continue
        size_line = text
        break
    if size_line is None:
        raise ParseError("missing size line", line_no)
    parts = size_line.split()
    if len(parts) != 3:
        raise ParseError("size line must contain 'rows cols nnz'", line_no)
    try:
        nrows, ncols, nnz = (int(p) for p in parts)
    except ValueError:
        raise ParseError("size line must contain integers", line_no) from None
    if nrows != ncols:
        raise NonSquare(f"matrix is {nrows}x{ncols}")
    if nrows == 0:
        raise EmptyMatrix("matrix dimension is zero")

    want_value = field != "pattern"
    rows_buf, cols_buf, vals_buf = [], [], []
    count = 0
    for entry_line_no, raw in enumerate(lines[line_no:], start=line_no + 1):
        text = raw.strip()
        if not text or text.startswith("%"):
            continue
        parts = text.split()
        expected = 3 if want_value else 2
        if len(parts) < expected:
            raise ParseError(f"expected {expected} fields, got {len(parts)}", entry_line_no)
        try:
            i = int(parts[0])
            j = int(parts[1])
            v = float(parts[2]) if want_value else 1.0
        except ValueError:
            raise ParseError("malformed entry", entry_line_no) from None
        if not (1 <= i <= nrows and 1 <= j <= ncols):
            raise ParseError(f"index ({i}, {j}) outside 1..{nrows}", entry_line_no)
        rows_buf.append(i - 1)
        cols_buf.append(j - 1)
        vals_buf.append(v)
        count += 1
    if count != nnz:
        raise ParseError(f"expected {nnz} entries, found {count}", len(lines))

    rows = np.asarray(rows_buf, dtype=np.float64)
    cols = np.asarray(cols_buf, dtype=np.float64)
    vals = np.asarray(vals_buf, dtype=np.float64)
    if symmetry in ("symmetric", "skew-symmetric"):
        off = rows != cols
        sign = -1.0 if symmetry == "skew-symmetric" else 1.0
        rows, cols, vals = (
            np.concatenate([rows, cols[off]]),
            np.concatenate([cols, rows[off]]),
            np.concatenate([vals, sign * vals[off]]),
        )
    entries = np.stack([rows, cols, vals], axis=1)
    return build_csr(entries, nrows)


def write_matrix_market(path, A, comment=None):
    """Write a SparseMatrixCSR as a general real coordinate Matrix Market file."""
    rows, cols, vals = A.to_triplets()
    with open(path, "w", encoding="ascii") as fh:
        fh.write("%%MatrixMarket matrix coordinate real general\n")
        if comment:
            fh.write(f"% {comment}\n")
        fh.write(f"{A.n} {A.n} {A.nnz}\n")
        for i, j, v in zip(rows, cols, vals):
            fh.write(f"{i + 1} {j + 1} {v!r}\n")


# ---------------------------------------------------------------------------
# Matrix-vector primitives
# ---------------------------------------------------------------------------

@njit(cache=True)
def _spmv_kernel(n, row_ptr, col_idx, values, x, out):
    for i in range(n):
        acc = 0.0
        for t in range(row_ptr[i], row_ptr[i + 1]):
            acc += values[t] * x[col_idx[t]]
        out[i] = acc


@njit(cache=True)
def _backward_error_kernel(n, row_ptr, col_idx, values, x, b):
    worst = 0.0
    for i in range(n):
        acc = 0.0
        mag = 0.0
        for t in range(row_ptr[i], row_ptr[i + 1]):
            v = values[t]
            xa = x[col_idx[t]]
            acc += v * xa
            mag += abs(v) * abs(xa)
        num = abs(b[i] - acc)
        den = mag + abs(b[i])
        if den == 0.0:
            continue  # 0/0 convention: contributes 0
        rel = num / den
        if rel > worst:
            worst = rel
    return worst


def as_vector(x, n, what="vector"):
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != n:
        raise DimensionMismatch(f"{what} must have length {n}, got shape {x.shape}")
    return x


def spmv(A, x):
    """Row-by-row product A @ x."""
    x = as_vector(x, A.n, "x")
    out = np.empty(A.n)
    _spmv_kernel(A.n, A.row_ptr, A.col_idx, A.values, x, out)
    return out


def backward_error(A, x, b):
    """Componentwise backward error max_i |b - Ax|_i / (|A||x| + |b|)_i.

    Rows where both numerator and denominator vanish contribute zero.
    """
    x = as_vector(x, A.n, "x")
    b = as_vector(b, A.n, "b")
    return float(_backward_error_kernel(A.n, A.row_ptr, A.col_idx, A.values, x, b))
