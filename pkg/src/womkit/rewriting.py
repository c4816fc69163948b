"""Rewriting codec: erasure quantization over a sparse generator.

Model: memory cells only move 1 -> 0.  A state vector s marks writable
cells with 1.  Messages label cosets of the quantization code C_Q; writing
message m over state s means finding x in m's coset with x_i = 0 wherever
s_i = 0.  Encoding reduces to binary erasure quantization on the sparse
generator of C_Q and can fail — failure is a value here, not an exception.

Ternary vectors (the quantizer's source) are int8 arrays over {0, 1, -1}
with -1 standing for an erasure ('*' in text files).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _peel
from .gf2 import BitMatrix, asbits, multiply, null_space_basis, rref

ERASED = -1


def ternary_from_text(line: str) -> np.ndarray:
    table = {"0": 0, "1": 1, "*": ERASED}
    try:
        return np.array([table[ch] for ch in line.strip()], dtype=np.int8)
    except KeyError as e:
        raise ValueError(f"bad ternary symbol {e.args[0]!r}") from None


def ternary_to_text(v: np.ndarray) -> str:
    return "".join("*" if x == ERASED else str(int(x)) for x in v)


@dataclass(frozen=True)
class EncodeOutcome:
    """Either a written state x or a Failure (x is None)."""

    x: np.ndarray | None

    @property
    def ok(self) -> bool:
        return self.x is not None


FAILURE = EncodeOutcome(None)


@dataclass(frozen=True)
class RewriteCode:
    """A rewriting codec over n cells.

    gq:        generator of C_Q, possibly with redundant rows (the sparse
               message-passing graph); rank r.
    h:         k x n parity check of C_Q (k = n - r).
    embedder:  k x n map taking a message to a coset representative z.
    extractor: n x k map recovering the message, x @ extractor.
    Invariants (checked in tests): h @ gq^T = 0, gq @ extractor = 0,
    embedder @ extractor = I_k.
    """

    gq: BitMatrix
    h: BitMatrix
    embedder: BitMatrix
    extractor: BitMatrix
    n: int
    k: int
    r: int
    d: int = field(default=0)

    @property
    def rate(self) -> float:
        return self.k / self.n

    @classmethod
    def from_generator(cls, gq: BitMatrix) -> "RewriteCode":
        """Build the plain codec from a (sparse) generator matrix.

        The parity check is the reduced null-space basis of gq; with h in
        reduced echelon form, placing the k message bits on the pivot
        columns is a valid embedder (h restricted to its pivot columns is
        the identity), which keeps the embedding step O(n).
        """
        n = gq.cols
        h, pivots, _ = rref(null_space_basis(gq))
        k = pivots.size
        emb = np.zeros((k, n), dtype=np.uint8)
        emb[np.arange(k), pivots] = 1
        dense = gq.toarray()
        d = int(max(dense.sum(axis=1).max(initial=0), dense.sum(axis=0).max(initial=0)))
        return cls(
            gq=gq,
            h=h,
            embedder=BitMatrix(emb),
            extractor=h.transpose(),
            n=n,
            k=k,
            r=n - k,
            d=d,
        )


def bec_mask(w, v) -> np.ndarray:
    """Erase w at every position where v is 1; keep it where v is 0."""
    w = asbits(w)
    v = asbits(v)
    if w.size != v.size:
        raise ValueError("length mismatch")
    out = w.astype(np.int8)
    out[v == 1] = ERASED
    return out


def erasure_quantize(gq: BitMatrix, s_prime: np.ndarray):
    """Label u with (u @ gq) matching s_prime at every non-erased position.

    Returns u (length = rows of gq) or None when the peeling schedule
    stalls with a non-erased position unresolved.
    """
    s_prime = np.asarray(s_prime, dtype=np.int8)
    if s_prime.size != gq.cols:
        raise ValueError("length mismatch")
    known = (s_prime != ERASED).astype(np.uint8)
    vals = np.where(s_prime == 1, 1, 0).astype(np.uint8)
    row_ptr, row_cols = gq.csr()
    col_ptr, col_rows = gq.csc()
    ok, u = _peel.quantize_kernel(row_ptr, row_cols, col_ptr, col_rows, known, vals)
    return u if ok else None


def reconstruct(u, gq: BitMatrix) -> np.ndarray:
    """The codeword u @ gq."""
    return multiply(u, gq)


def enc(code: RewriteCode, m, s) -> EncodeOutcome:
    """Write message m over state s (1 = writable cell).

    On success the written state x satisfies x_i = 0 wherever s_i = 0 and
    dec(code, x) = m; on a quantizer stall returns the Failure outcome.
    """
    m = asbits(m)
    s = asbits(s)
    if m.size != code.k or s.size != code.n:
        raise ValueError("length mismatch")
    z = multiply(m, code.embedder)
    s_prime = bec_mask(z, s)
    u = erasure_quantize(code.gq, s_prime)
    if u is None:
        return FAILURE
    x = reconstruct(u, code.gq) ^ z
    return EncodeOutcome(x)


def dec(code: RewriteCode, x) -> np.ndarray:
    """Recover the message stored in state x (the syndrome x @ extractor)."""
    x = asbits(x)
    if x.size != code.n:
        raise ValueError("length mismatch")
    return multiply(x, code.extractor)


def erasure_decode(h: BitMatrix, y: np.ndarray):
    """Peeling erasure decoder: repeatedly solve checks with one erasure.

    y is ternary; returns the filled vector, or None on a stall.  When y
    comes from a codeword of the code checked by h through an erasure
    channel, the filled vector is that codeword; the decoder does not
    re-verify checks whose neighbors were never erased.
    """
    y = np.asarray(y, dtype=np.int8)
    if y.size != h.cols:
        raise ValueError("length mismatch")
    erased = (y == ERASED).astype(np.uint8)
    vals = np.where(y == 1, 1, 0).astype(np.uint8)
    row_ptr, row_cols = h.csr()
    col_ptr, col_rows = h.csc()
    ok, filled = _peel.erasure_decode_kernel(
        row_ptr, row_cols, col_ptr, col_rows, erased, vals
    )
    return filled if ok else None


def check_rewritable(code: RewriteCode, s) -> bool:
    """Whether enc would succeed on state s, for any (hence every) message.

    Success of the quantizer depends only on the pattern of stuck cells,
    so this runs the same peeling schedule with an all-zero target.
    """
    s = asbits(s)
    if s.size != code.n:
        raise ValueError("length mismatch")
    known = (s == 0).astype(np.uint8)
    vals = np.zeros(code.n, dtype=np.uint8)
    row_ptr, row_cols = code.gq.csr()
    col_ptr, col_rows = code.gq.csc()
    ok, _ = _peel.quantize_kernel(row_ptr, row_cols, col_ptr, col_rows, known, vals)
    return bool(ok)
