"""Exact dense linear algebra over GF(2).

Matrices are stored bit-packed, 64 entries per machine word, as numpy
uint64 arrays (one row of words per matrix row, LSB-first within a word).
Gaussian elimination always pivots on the lowest-index nonzero column so
ranks, kernels and solutions are bit-reproducible across runs.

Also provides the two on-disk formats used throughout: the MacKay "alist"
sparse text format and a raw binary dump (two little-endian uint64 dims
followed by packed rows).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import ContainmentError, DimensionMismatch

_WORD = 64


def _n_words(cols: int) -> int:
    return max(1, (cols + _WORD - 1) // _WORD)


class F2Matrix:
    """Immutable bit-packed matrix over GF(2).

    Entries live in ``data``, shape (rows, n_words) dtype uint64; bit j of
    row i is ``(data[i, j // 64] >> (j % 64)) & 1``.
    """

    __slots__ = ("rows", "cols", "data", "_tcache")

    def __init__(self, rows: int, cols: int, data: np.ndarray):
        if data.shape != (rows, _n_words(cols)) or data.dtype != np.uint64:
            raise DimensionMismatch(
                f"packed data shape {data.shape} does not match {rows}x{cols}"
            )
        self.rows = rows
        self.cols = cols
        self.data = data
        self.data.flags.writeable = False

    # -- constructors -------------------------------------------------

    @staticmethod
    def zeros(rows: int, cols: int) -> "F2Matrix":
        return F2Matrix(rows, cols, np.zeros((rows, _n_words(cols)), dtype=np.uint64))

    @staticmethod
    def identity(n: int) -> "F2Matrix":
        data = np.zeros((n, _n_words(n)), dtype=np.uint64)
        for i in range(n):
            data[i, i // _WORD] = np.uint64(1) << np.uint64(i % _WORD)
        return F2Matrix(n, n, data)

    @staticmethod
    def from_dense(a) -> "F2Matrix":
        a = np.asarray(a, dtype=np.uint8) % 2
        if a.ndim != 2:
            raise DimensionMismatch("expected a 2-d array")
        rows, cols = a.shape
        if cols == 0 or rows == 0:
            return F2Matrix.zeros(rows, cols)
        packed = np.packbits(a, axis=1, bitorder="little")
        width = _n_words(cols) * 8
        if packed.shape[1] < width:
            packed = np.pad(packed, ((0, 0), (0, width - packed.shape[1])))
        return F2Matrix(rows, cols, np.ascontiguousarray(packed).view(np.uint64))

    @staticmethod
    def from_rows(int_rows: list[int], cols: int) -> "F2Matrix":
        """Build from Python ints used as little-endian bitsets."""
        rows = len(int_rows)
        width = _n_words(cols) * 8
        data = np.zeros((rows, width), dtype=np.uint8)
        for i, r in enumerate(int_rows):
            if r < 0 or (cols < r.bit_length()):
                raise DimensionMismatch(f"row {i} does not fit in {cols} columns")
            b = r.to_bytes(width, "little")
            data[i] = np.frombuffer(b, dtype=np.uint8)
        return F2Matrix(rows, cols, data.view(np.uint64))

    @staticmethod
    def from_entries(rows: int, cols: int, ones: list[tuple[int, int]]) -> "F2Matrix":
        """Build from a list of (row, col) positions holding a 1; duplicates cancel."""
        data = np.zeros((rows, _n_words(cols)), dtype=np.uint64)
        for i, j in ones:
            if not (0 <= i < rows and 0 <= j < cols):
                raise DimensionMismatch(f"entry ({i},{j}) outside {rows}x{cols}")
            data[i, j // _WORD] ^= np.uint64(1) << np.uint64(j % _WORD)
        return F2Matrix(rows, cols, data)

    # -- accessors ----------------------------------------------------

    def get(self, i: int, j: int) -> int:
        return int(self.data[i, j // _WORD] >> np.uint64(j % _WORD)) & 1

    def row_int(self, i: int) -> int:
        return int.from_bytes(self.data[i].tobytes(), "little")

    def row_ints(self) -> list[int]:
        return [self.row_int(i) for i in range(self.rows)]

    def to_dense(self) -> np.ndarray:
        if self.cols == 0:
            return np.zeros((self.rows, 0), dtype=np.uint8)
        bits = np.unpackbits(
            self.data.view(np.uint8), axis=1, bitorder="little", count=self.cols
        )
        return bits.astype(np.uint8)

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self.data).sum(axis=1).astype(np.int64)

    def col_weights(self) -> np.ndarray:
        return self.transpose().row_weights()

    def is_zero(self) -> bool:
        return not self.data.any()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, F2Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"F2Matrix({self.rows}x{self.cols})"

    # -- algebra ------------------------------------------------------

    def transpose(self) -> "F2Matrix":
        return F2Matrix.from_dense(self.to_dense().T)

    def add(self, other: "F2Matrix") -> "F2Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix addition shape mismatch")
        return F2Matrix(self.rows, self.cols, self.data ^ other.data)

    def matmul(self, other: "F2Matrix") -> "F2Matrix":
        """Matrix product over GF(2): result[i] = XOR of other's rows selected by row i."""
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        out = np.zeros((self.rows, _n_words(other.cols)), dtype=np.uint64)
        dense = self.to_dense()
        for i in range(self.rows):
            sel = np.nonzero(dense[i])[0]
            if len(sel):
                out[i] = np.bitwise_xor.reduce(other.data[sel], axis=0)
        return F2Matrix(self.rows, other.cols, out)

    def mul_vec_int(self, x: int) -> int:
        """Apply to a column vector given as a bitset int; returns a bitset int."""
        acc = 0
        xi = x
        tdata = self._transposed_data()
        while xi:
            j = (xi & -xi).bit_length() - 1
            acc ^= tdata[j]
            xi &= xi - 1
        return acc

    def _transposed_data(self) -> list[int]:
        # lazy cache of columns-as-ints for repeated vector application
        cache = getattr(self, "_tcache", None)
        if cache is None:
            cache = self.transpose().row_ints()
            object.__setattr__(self, "_tcache", cache)
        return cache

    def hstack(self, other: "F2Matrix") -> "F2Matrix":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack row mismatch")
        a, b = self.to_dense(), other.to_dense()
        return F2Matrix.from_dense(np.hstack([a, b]))

    def vstack(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.cols:
            raise DimensionMismatch("vstack column mismatch")
        return F2Matrix(
            self.rows + other.rows, self.cols, np.vstack([self.data, other.data])
        )

    def submatrix_rows(self, idx) -> "F2Matrix":
        idx = np.asarray(idx, dtype=np.int64)
        return F2Matrix(len(idx), self.cols, self.data[idx].copy())

    def nonzeros(self) -> tuple[np.ndarray, np.ndarray]:
        return np.nonzero(self.to_dense())

    def permuted(self, row_perm, col_perm) -> "F2Matrix":
        """Rows and columns relocated: entry (i, j) moves to
        (row_perm[i], col_perm[j])."""
        rows, cols = self.nonzeros()
        rp = np.asarray(row_perm, dtype=np.int64)
        cp = np.asarray(col_perm, dtype=np.int64)
        ones = list(zip(rp[rows].tolist(), cp[cols].tolist()))
        return F2Matrix.from_entries(self.rows, self.cols, ones)


def _echelonize(data: np.ndarray, cols: int) -> tuple[np.ndarray, list[int]]:
    """In-place row echelon form; returns (data, pivot column list).

    Pivots are chosen at the lowest-index nonzero column, eliminating both
    above and below (reduced form), so output is canonical.
    """
    rows = data.shape[0]
    pivots: list[int] = []
    r = 0
    for j in range(cols):
        if r >= rows:
            break
        w, b = j // _WORD, np.uint64(j % _WORD)
        colbits = (data[r:, w] >> b) & np.uint64(1)
        hit = np.nonzero(colbits)[0]
        if len(hit) == 0:
            continue
        p = r + int(hit[0])
        if p != r:
            data[[r, p]] = data[[p, r]]
        mask = (data[:, w] >> b) & np.uint64(1)
        mask[r] = 0
        sel = np.nonzero(mask)[0]
        if len(sel):
            data[sel] ^= data[r]
        pivots.append(j)
        r += 1
    return data, pivots


def rank(m: F2Matrix) -> int:
    """Rank over GF(2)."""
    work = m.data.copy()
    _, pivots = _echelonize(work, m.cols)
    return len(pivots)


def rref(m: F2Matrix) -> tuple[F2Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns (zero rows dropped)."""
    work = m.data.copy()
    work, pivots = _echelonize(work, m.cols)
    out = F2Matrix(len(pivots), m.cols, work[: len(pivots)].copy())
    return out, pivots


@dataclass(frozen=True)
class F2Subspace:
    """A subspace of GF(2)^ambient_dim spanned by independent row vectors."""

    ambient_dim: int
    basis: F2Matrix

    def __post_init__(self):
        if self.basis.cols != self.ambient_dim:
            raise DimensionMismatch("basis width does not match ambient dimension")
        if rank(self.basis) != self.basis.rows:
            raise ContainmentError("basis rows are linearly dependent")

    @property
    def dim(self) -> int:
        return self.basis.rows

    def contains(self, v: int) -> bool:
        """Membership test for a vector given as a bitset int."""
        aug = F2Matrix.from_rows(self.basis.row_ints() + [v], self.ambient_dim)
        return rank(aug) == self.dim

    def contains_space(self, other: "F2Subspace") -> bool:
        stacked = self.basis.vstack(other.basis)
        return rank(stacked) == self.dim


def kernel_basis(m: F2Matrix) -> F2Subspace:
    """Basis of the right kernel {x : Mx = 0}, one vector per free column.

    Derived from the reduced echelon form, so repeated runs are
    bit-identical; dimension is cols - rank.
    """
    r, pivots = rref(m)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    rows: list[int] = []
    rdense = r.to_dense()
    for f in free:
        v = 1 << f
        for i, p in enumerate(pivots):
            if rdense[i, f]:
                v |= 1 << p
        rows.append(v)
    return F2Subspace(m.cols, F2Matrix.from_rows(rows, m.cols))


def row_space(m: F2Matrix) -> F2Subspace:
    r, _ = rref(m)
    return F2Subspace(m.cols, r)


def quotient_dim(z: F2Subspace, b: F2Subspace) -> int:
    """dim Z - dim B for a containment B <= Z; raises if B is not inside Z."""
    if z.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("subspaces live in different ambient spaces")
    if not z.contains_space(b):
        raise ContainmentError("B is not contained in Z")
    return z.dim - b.dim


def solve(m: F2Matrix, b: int) -> int | None:
    """Any x with Mx = b (b, x as bitset ints), or None when unsolvable.

    The particular solution sets all free variables to zero, so it is
    deterministic.
    """
    if b >> m.rows:
        raise DimensionMismatch("right-hand side longer than row count")
    aug_rows = []
    for i in range(m.rows):
        aug_rows.append(m.row_int(i) | (((b >> i) & 1) << m.cols))
    aug = F2Matrix.from_rows(aug_rows, m.cols + 1)
    r, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = 0
    rdense = r.to_dense()
    for i, p in enumerate(pivots):
        if rdense[i, m.cols]:
            x |= 1 << p
    return x


def solve_matrix(m: F2Matrix, rhs: F2Matrix) -> F2Matrix | None:
    """Solve M X = RHS column-by-column; None if any column is unsolvable."""
    if rhs.rows != m.rows:
        raise DimensionMismatch("rhs row count mismatch")
    cols = []
    rhs_t = rhs.transpose()
    for j in range(rhs.cols):
        x = solve(m, rhs_t.row_int(j))
        if x is None:
            return None
        cols.append(x)
    return F2Matrix.from_rows(cols, m.cols).transpose()


def vector_weight(v: int) -> int:
    return v.bit_count()


class IncrementalSpan:
    """Growing GF(2) row space with O(dim) membership/insert per vector.

    Vectors are bitset ints; pivots sit at each vector's lowest set bit
    after reduction.
    """

    def __init__(self, rows=()):
        self.pivots: dict[int, int] = {}
        for v in rows:
            self.add(v)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, v: int) -> int:
        while v:
            low = (v & -v).bit_length() - 1
            if low not in self.pivots:
                return v
            v ^= self.pivots[low]
        return 0

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def add(self, v: int) -> bool:
        """Insert if independent; returns True when the dimension grew."""
        v = self.reduce(v)
        if v == 0:
            return False
        self.pivots[(v & -v).bit_length() - 1] = v
        return True


# -- alist import/export ----------------------------------------------


def alist_dumps(m: F2Matrix) -> str:
    """MacKay's alist format (first line: cols rows).

    Index lists are 1-based; shorter lists are not zero-padded.
    """
    dense = m.to_dense()
    n, mm = m.cols, m.rows
    col_lists = [list(np.nonzero(dense[:, j])[0] + 1) for j in range(n)]
    row_lists = [list(np.nonzero(dense[i, :])[0] + 1) for i in range(mm)]
    lines = [
        f"{n} {mm}",
        f"{max((len(c) for c in col_lists), default=0)} "
        f"{max((len(r) for r in row_lists), default=0)}",
        " ".join(str(len(c)) for c in col_lists),
        " ".join(str(len(r)) for r in row_lists),
    ]
    lines.extend(" ".join(map(str, c)) for c in col_lists)
    lines.extend(" ".join(map(str, r)) for r in row_lists)
    return "\n".join(lines) + "\n"


def write_alist(m: F2Matrix, path) -> None:
    with open(path, "w") as f:
        f.write(alist_dumps(m))


def alist_loads(text: str) -> F2Matrix:
    it = iter(text.split())
    n, mm = int(next(it)), int(next(it))
    next(it), next(it)
    col_deg = [int(next(it)) for _ in range(n)]
    row_deg = [int(next(it)) for _ in range(mm)]
    ones = []
    for j in range(n):
        for _ in range(col_deg[j]):
            i = int(next(it))
            if i > 0:  # zero entries appear when files are padded
                ones.append((i - 1, j))
    # row lists are redundant; consume if present
    for i in range(mm):
        for _ in range(row_deg[i]):
            try:
                next(it)
            except StopIteration:
                break
    return F2Matrix.from_entries(mm, n, ones)


def read_alist(path) -> F2Matrix:
    with open(path) as f:
        return alist_loads(f.read())


# -- dense binary dump ------------------------------------------------


def write_binary(m: F2Matrix, path) -> None:
    """Raw dump: rows and cols as two little-endian uint64, then packed rows.

    Each row occupies n_words*8 bytes, LSB-first bit order (the in-memory
    layout verbatim).
    """
    with open(path, "wb") as f:
        f.write(struct.pack("<QQ", m.rows, m.cols))
        f.write(m.data.tobytes())


def read_binary(path) -> F2Matrix:
    with open(path, "rb") as f:
        rows, cols = struct.unpack("<QQ", f.read(16))
        raw = f.read()
    words = _n_words(cols)
    data = np.frombuffer(raw, dtype=np.uint64, count=rows * words).reshape(rows, words)
    return F2Matrix(rows, cols, data.copy())
