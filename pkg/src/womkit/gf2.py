"""Dense + sparse GF(2) linear algebra.

All vectors are plain numpy uint8 arrays with entries in {0, 1}.  Matrices
are wrapped in :class:`BitMatrix`, which keeps a bit-packed dense form for
elimination and lazily derives sparse adjacency views (CSR/CSC index
arrays) for message passing.
"""

from __future__ import annotations

import numpy as np


def asbits(seq) -> np.ndarray:
    """Coerce a sequence of 0/1 values to a uint8 bit vector."""
    v = np.asarray(seq, dtype=np.uint8)
    if v.ndim != 1:
        raise ValueError("expected a 1-D bit vector")
    if np.any(v > 1):
        raise ValueError("entries must be 0 or 1")
    return v


class BitMatrix:
    """A rows x cols matrix over GF(2).

    Internally bit-packed (little bit order: column j lives in byte j >> 3,
    bit j & 7).  The unpacked dense array and the sparse index views are
    materialized on demand and cached; the matrix is immutable once built.
    """

    __slots__ = ("rows", "cols", "packed", "_csr", "_csc")

    def __init__(self, dense):
        dense = np.atleast_2d(np.asarray(dense, dtype=np.uint8))
        if np.any(dense > 1):
            raise ValueError("entries must be 0 or 1")
        self.rows, self.cols = dense.shape
        self.packed = np.packbits(dense, axis=1, bitorder="little")
        self._csr = None
        self._csc = None

    @classmethod
    def _from_packed(cls, packed, rows, cols):
        m = cls.__new__(cls)
        m.rows, m.cols = rows, cols
        m.packed = packed
        m._csr = None
        m._csc = None
        return m

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def toarray(self) -> np.ndarray:
        return np.unpackbits(self.packed, axis=1, count=self.cols, bitorder="little")

    def row_support(self, i: int) -> np.ndarray:
        indptr, indices = self.csr()
        return indices[indptr[i] : indptr[i + 1]]

    def csr(self):
        """(indptr, indices) of the set positions, row-major, indices sorted."""
        if self._csr is None:
            dense = self.toarray()
            counts = dense.sum(axis=1, dtype=np.int64)
            indptr = np.zeros(self.rows + 1, dtype=np.int64)
            np.cumsum(counts, out=indptr[1:])
            _, indices = np.nonzero(dense)
            self._csr = (indptr, indices.astype(np.int64))
        return self._csr

    def csc(self):
        """(indptr, indices) of the set positions, column-major."""
        if self._csc is None:
            dense = self.toarray()
            counts = dense.sum(axis=0, dtype=np.int64)
            indptr = np.zeros(self.cols + 1, dtype=np.int64)
            np.cumsum(counts, out=indptr[1:])
            cols_idx, rows_idx = np.nonzero(dense.T)
            del cols_idx
            self._csc = (indptr, rows_idx.astype(np.int64))
        return self._csc

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.toarray().T)

    def __eq__(self, other):
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.packed, other.packed)

    def __repr__(self):
        return f"BitMatrix({self.rows}x{self.cols})"


def _ge_packed(P: np.ndarray, ncols: int, full: bool):
    """In-place Gaussian elimination on packed rows.

    Scans columns left to right (lowest eligible column wins ties), picks
    the first row carrying a 1 as pivot.  With ``full`` the pivot column is
    cleared everywhere (RREF); otherwise only below the pivot.  Returns the
    pivot column list.
    """
    nrows = P.shape[0]
    r = 0
    pivots = []
    for c in range(ncols):
        if r >= nrows:
            break
        byte, bit = c >> 3, c & 7
        col = (P[r:, byte] >> bit) & 1
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            P[[r, p]] = P[[p, r]]
        if full:
            hits = np.nonzero((P[:, byte] >> bit) & 1)[0]
            hits = hits[hits != r]
        else:
            hits = r + 1 + np.nonzero((P[r + 1 :, byte] >> bit) & 1)[0]
        if hits.size:
            P[hits] ^= P[r]
        pivots.append(c)
        r += 1
    return pivots


def multiply(a, b: BitMatrix):
    """GF(2) product a @ b; `a` may be a bit vector or a BitMatrix.

    Computed as an XOR-accumulation of the rows of ``b`` selected by the
    set bits of ``a``, so the cost scales with the support of ``a``.
    """
    if isinstance(a, BitMatrix):
        if a.cols != b.rows:
            raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
        out = np.zeros((a.rows, b.packed.shape[1]), dtype=np.uint8)
        indptr, indices = a.csr()
        for i in range(a.rows):
            sup = indices[indptr[i] : indptr[i + 1]]
            if sup.size:
                np.bitwise_xor.reduce(b.packed[sup], axis=0, out=out[i])
        return BitMatrix._from_packed(out, a.rows, b.cols)
    v = asbits(a)
    if v.size != b.rows:
        raise ValueError(f"dimension mismatch: ({v.size},) @ {b.shape}")
    sup = np.nonzero(v)[0]
    acc = np.zeros(b.packed.shape[1], dtype=np.uint8)
    if sup.size:
        np.bitwise_xor.reduce(b.packed[sup], axis=0, out=acc)
    return np.unpackbits(acc, count=b.cols, bitorder="little")


def rank(M: BitMatrix) -> int:
    P = M.packed.copy()
    return len(_ge_packed(P, M.cols, full=False))


def rref(M: BitMatrix):
    """Reduced row echelon form.

    Returns ``(R, pivots, perm)`` where ``R`` keeps the original column
    order (zero rows at the bottom) and ``perm`` lists pivot columns first,
    then the free columns — callers producing systematic forms permute by
    ``perm`` and must un-permute before exposing codewords.
    """
    P = M.packed.copy()
    pivots = _ge_packed(P, M.cols, full=True)
    free = [c for c in range(M.cols) if c not in set(pivots)]
    perm = np.array(pivots + free, dtype=np.int64)
    R = BitMatrix._from_packed(P, M.rows, M.cols)
    return R, np.array(pivots, dtype=np.int64), perm


def right_inverse(A: BitMatrix) -> BitMatrix:
    """B with A @ B = I.  Requires full row rank."""
    m, n = A.shape
    aug = np.concatenate([A.toarray(), np.eye(m, dtype=np.uint8)], axis=1)
    P = np.packbits(aug, axis=1, bitorder="little")
    pivots = _ge_packed(P, n, full=True)
    if len(pivots) != m:
        raise ValueError(f"matrix is rank deficient: rank {len(pivots)} < {m} rows")
    reduced = np.unpackbits(P, axis=1, count=n + m, bitorder="little")
    E = reduced[:m, n:]
    B = np.zeros((n, m), dtype=np.uint8)
    B[np.array(pivots, dtype=np.int64)] = E
    return BitMatrix(B)


def null_space_basis(A: BitMatrix) -> BitMatrix:
    """Rows form a basis of {v : A @ v = 0}; row count = cols - rank."""
    R, pivots, perm = rref(A)
    n = A.cols
    r = pivots.size
    free = perm[r:]
    N = np.zeros((free.size, n), dtype=np.uint8)
    if free.size:
        N[np.arange(free.size), free] = 1
        if r:
            dense = R.toarray()
            N[:, pivots] = dense[:r][:, free].T
    return BitMatrix(N)


def _rows_as_ints(M: BitMatrix):
    return [int.from_bytes(row.tobytes(), "little") for row in M.packed]


def _reduce_int(x: int, pivots: dict):
    """Reduce x against a pivot dictionary keyed by leading column."""
    while x:
        c = (x & -x).bit_length() - 1
        if c in pivots:
            x ^= pivots[c]
        else:
            return x, c
    return 0, -1


def complete_basis(inner: BitMatrix, outer: BitMatrix) -> BitMatrix:
    """Extend a basis of inner's row space to one of outer's row space.

    Returns the extension rows, drawn verbatim from ``outer``'s rows.
    Raises if inner's row space is not contained in outer's.
    """
    if inner.cols != outer.cols:
        raise ValueError("column counts differ")
    pivots = {}
    for x in _rows_as_ints(inner):
        red, c = _reduce_int(x, pivots)
        if c >= 0:
            pivots[c] = red
    inner_rank = len(pivots)
    chosen = []
    for idx, x in enumerate(_rows_as_ints(outer)):
        red, c = _reduce_int(x, pivots)
        if c >= 0:
            pivots[c] = red
            chosen.append(idx)
    # Containment holds iff stacking inner on top added nothing beyond
    # outer's own row space.
    if inner_rank + len(chosen) != rank(outer):
        raise ValueError("inner row space not contained in outer row space")
    ext = outer.toarray()[np.array(chosen, dtype=np.int64)] if chosen else np.zeros(
        (0, outer.cols), dtype=np.uint8
    )
    return BitMatrix(ext)
