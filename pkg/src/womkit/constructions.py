"""Code-family builders: random sparse matrices, Euclidean-geometry LDPC
codes, BCH codes, and conjugate quantization/ECC pairs.

Conventions used throughout:
  * A length-n binary vector v corresponds to the polynomial sum of
    v[j] * x^j — vector position j is the coefficient of x^j.
  * Columns of an EG incidence matrix are indexed by the nonzero field
    elements in generator order: column j is the point alpha^j.
The two conventions line up so that rows of an EG incidence matrix are
literal codewords of the matching BCH code.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import (
    Field,
    cyclotomic_cosets,
    minimal_polynomial,
    poly_degree,
    poly_divmod,
    poly_invmod,
    poly_lcm,
    poly_mod,
)
from .gf2 import BitMatrix, asbits, complete_basis, rank, rref, right_inverse
from .rewriting import RewriteCode


# ---------------------------------------------------------------------------
# MacKay-style sparse matrices


def build_mackay(n: int, r: int, col_weight: int, seed: int) -> BitMatrix:
    """Random r x n matrix, every column weight col_weight, row weights
    balanced to within one of each other, 4-cycles avoided best-effort.

    Deterministic for a fixed seed.  Columns are filled left to right by
    weighted sampling on remaining row capacities; a draw that would close
    a 4-cycle is retried up to 100 times and then accepted as-is.
    """
    if not (0 < r < n):
        raise ValueError("need 0 < r < n")
    if col_weight < 2 or col_weight > r:
        raise ValueError("column weight must be in [2, r]")
    weights = np.full(n, col_weight, dtype=np.int64)
    for attempt in range(50):
        rng = np.random.default_rng((seed, attempt))
        dense = _try_mackay(n, r, weights, rng)
        if dense is not None:
            return BitMatrix(dense)
    raise ValueError(f"cannot build a balanced {r}x{n} matrix of column weight {col_weight}")


def build_mackay_profile(n: int, r: int, weights, seed: int) -> BitMatrix:
    """Like build_mackay but with a prescribed weight for each column.

    Short blocks quantize noticeably better when a minority of columns
    have weight 2 (they seed the peeling process); the regular ensemble
    is fine at n in the thousands but loses about a decade of failure
    rate below n ~ 1000.  weights[j] is the number of ones in column j;
    the column order is randomized internally so callers can pass a
    sorted profile.
    """
    weights = np.asarray(weights, dtype=np.int64)
    if weights.shape != (n,):
        raise ValueError("need one weight per column")
    if not (0 < r < n):
        raise ValueError("need 0 < r < n")
    if weights.min() < 2 or weights.max() > r:
        raise ValueError("column weights must be in [2, r]")
    for attempt in range(50):
        rng = np.random.default_rng((seed, attempt))
        dense = _try_mackay(n, r, weights[rng.permutation(n)], rng)
        if dense is not None:
            return BitMatrix(dense)
    raise ValueError(f"cannot build a balanced {r}x{n} matrix for the given profile")


def _try_mackay(n, r, weights, rng):
    base, extra = divmod(int(weights.sum()), r)
    caps = np.full(r, base, dtype=np.int64)
    if extra:
        caps[rng.choice(r, size=extra, replace=False)] += 1
    dense = np.zeros((r, n), dtype=np.uint8)
    seen_pairs = set()
    for j in range(n):
        wc = int(weights[j])
        total = caps.sum()
        if (caps > 0).sum() < wc:
            return None  # stranded capacity; caller retries with a fresh stream
        rows = None
        for _ in range(100):
            p = caps / total
            cand = rng.choice(r, size=wc, replace=False, p=p)
            cand.sort()
            pairs = [(int(a), int(b)) for ai, a in enumerate(cand) for b in cand[ai + 1 :]]
            if all(pr not in seen_pairs for pr in pairs):
                rows = cand
                break
        if rows is None:
            rows = cand  # accept the last draw, 4-cycle and all
            pairs = [(int(a), int(b)) for ai, a in enumerate(rows) for b in rows[ai + 1 :]]
        seen_pairs.update(pairs)
        caps[rows] -= 1
        dense[rows, j] = 1
    return dense


# ---------------------------------------------------------------------------
# Euclidean-geometry LDPC codes (Type I, lines only)


def enumerate_mu_flats(m: int, mu: int, s: int, p: int = 2):
    """All mu-flats of EG(m, p^s) avoiding the origin, as column-index tuples.

    Points are the nonzero elements of GF(2^{sm}); the flat {a + t*b} is
    reported as the sorted tuple of discrete logs of its points.  Only
    lines (mu = 1) are supported — every code used here is a line code.
    """
    if p != 2:
        raise ValueError("only characteristic 2 is supported")
    if not 1 <= mu < m:
        raise ValueError("need 1 <= mu < m")
    if mu != 1:
        raise ValueError("only 1-flats (lines) are implemented")
    f = Field(s * m)
    n = f.order
    q = 1 << s
    n_dirs = n // (q - 1)
    # GF(q)* sits inside GF(2^{sm}) as the powers of alpha^(n/(q-1)).
    subfield = np.array([0] + [int(f.exp[(n_dirs * j) % n]) for j in range(q - 1)])
    elements = f.exp  # alpha^0 .. alpha^(n-1)
    flats = []
    for d in range(n_dirs):
        b = int(f.exp[d])
        tb = np.zeros(q, dtype=np.int64)
        for ti, t in enumerate(subfield):
            tb[ti] = f.mul(int(t), b)
        members = elements[:, None] ^ tb[None, :]  # row a: the line a + GF(q)b
        keep = (members.min(axis=1) == elements) & ~(members == 0).any(axis=1)
        logs = np.sort(f.log[members[keep]], axis=1)
        flats.extend(tuple(int(v) for v in row) for row in logs)
    return flats


@dataclass(frozen=True)
class EgLdpcCode:
    """Type-I EG-LDPC code given by the J x n flat/point incidence matrix."""

    m: int
    mu: int
    s: int
    p: int
    n: int
    J: int
    h: BitMatrix  # incidence matrix of flats vs. points (redundant rows)
    rank: int

    @property
    def k(self) -> int:
        return self.n - self.rank

    def row_supports(self) -> np.ndarray:
        """Column indices of each flat, shape (J, points-per-flat)."""
        indptr, indices = self.h.csr()
        width = indptr[1] - indptr[0]
        return indices.reshape(self.J, int(width))


def build_eg_ldpc(m: int, mu: int, s: int, p: int = 2) -> EgLdpcCode:
    flats = enumerate_mu_flats(m, mu, s, p)
    n = (1 << (s * m)) - 1
    J = len(flats)
    cols = np.array(flats, dtype=np.int64)
    dense = np.zeros((J, n), dtype=np.uint8)
    dense[np.repeat(np.arange(J), cols.shape[1]), cols.ravel()] = 1
    h = BitMatrix(dense)
    return EgLdpcCode(m=m, mu=mu, s=s, p=p, n=n, J=J, h=h, rank=rank(h))


# ---------------------------------------------------------------------------
# BCH codes


@dataclass
class BchCode:
    """Narrow-sense binary BCH code of design distance delta."""

    n: int
    k: int
    delta: int
    t: int
    generator: int  # GF(2) polynomial, bit i = coefficient of x^i
    field: Field
    _xk_inv: int | None = dc_field(default=None, repr=False)

    @property
    def parity(self) -> int:
        return self.n - self.k


@dataclass(frozen=True)
class DecodeFailure:
    """Detected decoding failure (distinct from a silent miscorrection)."""

    reason: str


def build_bch(n: int, delta: int) -> BchCode:
    e = n.bit_length()
    if n != (1 << e) - 1:
        raise ValueError(f"block length {n} is not 2^e - 1")
    if not 2 <= delta <= n:
        raise ValueError("design distance out of range")
    f = Field(e)
    reps = sorted({min(c) for c in cyclotomic_cosets(n, 2) for j in c if 1 <= j < delta})
    reps = [r for r in reps if r != 0]
    g = poly_lcm([minimal_polynomial(f, int(f.exp[r])) for r in reps])
    k = n - poly_degree(g)
    return BchCode(n=n, k=k, delta=delta, t=(delta - 1) // 2, generator=g, field=f)


def _vec_to_poly(v: np.ndarray) -> int:
    return int.from_bytes(np.packbits(v, bitorder="little").tobytes(), "little")


def _poly_to_vec(p: int, n: int) -> np.ndarray:
    raw = np.frombuffer(p.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, count=n, bitorder="little")


def bch_encode(c: BchCode, data) -> np.ndarray:
    """Systematic encode: data in the first k positions, parity appended.

    With position j holding the coefficient of x^j, the parity block p(x)
    satisfies d(x) + x^k p(x) = 0 mod g(x), i.e. p = d * (x^k)^-1 mod g.
    """
    data = asbits(data)
    if data.size != c.k:
        raise ValueError(f"expected {c.k} data bits, got {data.size}")
    if c._xk_inv is None:
        c._xk_inv = poly_invmod(poly_mod(1 << c.k, c.generator), c.generator)
    d_poly = _vec_to_poly(data)
    par = poly_mod(poly_mul_mod(d_poly, c._xk_inv, c.generator), c.generator)
    return _poly_to_vec(d_poly | (par << c.k), c.n)


def poly_mul_mod(a: int, b: int, mod: int) -> int:
    """a*b mod `mod` over GF(2), keeping intermediates near deg(mod)."""
    out = 0
    a = poly_mod(a, mod)
    dm = poly_degree(mod)
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if poly_degree(a) >= dm:
            a ^= mod << (poly_degree(a) - dm)
    return poly_mod(out, mod)


def bch_syndromes(c: BchCode, v: np.ndarray) -> np.ndarray:
    """Power sums v(alpha^i) for i = 1..delta-1, as field elements."""
    f = c.field
    sup = np.nonzero(v)[0].astype(np.int64)
    out = np.zeros(c.delta - 1, dtype=np.int64)
    if sup.size == 0:
        return out
    for i in range(1, c.delta):
        out[i - 1] = np.bitwise_xor.reduce(f.exp[(i * sup) % c.n])
    return out


def bch_decode(c: BchCode, received):
    """Bounded-distance decode: returns the nearest codeword when at most
    t errors occurred, else a DecodeFailure (or, rarely, a miscorrection —
    the returned vector is always a true codeword, but may be the wrong
    one when more than t errors occurred)."""
    v = asbits(received)
    if v.size != c.n:
        raise ValueError(f"expected {c.n} bits, got {v.size}")
    f = c.field
    syn = bch_syndromes(c, v)
    if not syn.any():
        return v.copy()
    lam = _berlekamp_massey(f, [int(x) for x in syn])
    L = len(lam) - 1
    if L > c.t:
        return DecodeFailure(f"error locator degree {L} exceeds t={c.t}")
    positions = _chien_roots(f, lam, c.n)
    if positions.size != L:
        return DecodeFailure("error locator does not split over the field")
    out = v.copy()
    out[positions] ^= 1
    if bch_syndromes(c, out).any():
        return DecodeFailure("residual syndrome after correction")
    return out


def _berlekamp_massey(f: Field, syn):
    """Connection polynomial (list of field coefficients, index = degree)."""
    C = [1]
    B = [1]
    L = 0
    m = 1
    b = 1
    for i, s_i in enumerate(syn):
        d = s_i
        for j in range(1, L + 1):
            if j < len(C):
                d ^= f.mul(C[j], syn[i - j])
        if d == 0:
            m += 1
            continue
        coef = f.mul(d, f.inv(b))
        shifted = [0] * m + [f.mul(coef, x) for x in B]
        if 2 * L <= i:
            old = C[:]
            C = _poly_add(C, shifted)
            L = i + 1 - L
            B = old
            b = d
            m = 1
        else:
            C = _poly_add(C, shifted)
            m += 1
    while len(C) > 1 and C[-1] == 0:
        C.pop()
    return C


def _poly_add(a, b):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] ^= x
    for i, x in enumerate(b):
        out[i] ^= x
    return out


def _chien_roots(f: Field, lam, n: int) -> np.ndarray:
    """Positions j with lambda(alpha^-j) = 0."""
    acc = np.full(n, lam[0], dtype=np.int64)
    j = np.arange(n, dtype=np.int64)
    for l, coeff in enumerate(lam[1:], start=1):
        if coeff:
            acc ^= f.exp[(int(f.log[coeff]) - j * l) % n]
    return np.nonzero(acc == 0)[0]


# ---------------------------------------------------------------------------
# Conjugate pairs (quantization code inside an ECC)


@dataclass(frozen=True)
class ConjugatePair:
    """An EG-LDPC incidence matrix acting as the sparse generator of the
    quantization code C_Q, nested inside a conjugate BCH code C_1.

    Rewriting with this pair stores messages on the cosets of C_Q inside
    C_1, so every written state is itself a BCH codeword and survives a
    noisy read via BCH decoding."""

    eg: EgLdpcCode
    c1: BchCode
    code: RewriteCode

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def rate(self) -> float:
        return self.code.rate


def check_rows_in_bch(eg: EgLdpcCode, c1: BchCode) -> bool:
    """Do all incidence rows have zero syndrome in the BCH code?

    Evaluates the delta-1 power sums of every row at once.
    """
    f = c1.field
    cols = eg.row_supports()
    for i in range(1, c1.delta):
        sums = np.bitwise_xor.reduce(f.exp[(i * cols) % c1.n], axis=1)
        if sums.any():
            return False
    return True


def bch_generator_matrix(c: BchCode) -> BitMatrix:
    """k x n matrix whose rows are x^i * g(x), i = 0..k-1."""
    g_bits = _poly_to_vec(c.generator, c.parity + 1)
    dense = np.zeros((c.k, c.n), dtype=np.uint8)
    for i in range(c.k):
        dense[i, i : i + g_bits.size] = g_bits
    return BitMatrix(dense)


def bch_parity_check(c: BchCode) -> BitMatrix:
    """(n-k) x n parity-check matrix: shifts of the reversed check polynomial.

    The check polynomial is h(x) = (x^n + 1) / g(x); row i carries the
    coefficients of x^i * x^k h(1/x).
    """
    xn1 = (1 << c.n) | 1
    h_poly, rem = poly_divmod(xn1, c.generator)
    if rem:
        raise AssertionError("generator does not divide x^n + 1")
    h_rev = 0
    for t in range(c.k + 1):
        if (h_poly >> t) & 1:
            h_rev |= 1 << (c.k - t)
    h_bits = _poly_to_vec(h_rev, c.k + 1)
    dense = np.zeros((c.parity, c.n), dtype=np.uint8)
    for i in range(c.parity):
        dense[i, i : i + h_bits.size] = h_bits
    return BitMatrix(dense)


def build_conjugate_pair(m: int, mu: int, s: int, p: int = 2) -> ConjugatePair:
    eg = build_eg_ldpc(m, mu, s, p)
    delta = p ** (mu * s) - 1
    c1 = build_bch(eg.n, delta)
    if not check_rows_in_bch(eg, c1):
        raise ValueError("incidence rows are not BCH codewords; construction broken")
    r = eg.rank
    bq_red, piv, _ = rref(eg.h)
    bq = BitMatrix(bq_red.toarray()[:r])  # basis of C_Q
    g1 = bch_generator_matrix(c1)
    emb = complete_basis(bq, g1)
    k = c1.k - r
    if emb.rows != k:
        raise AssertionError("basis completion size mismatch")
    stacked = BitMatrix(np.concatenate([bq.toarray(), emb.toarray()], axis=0))
    rinv = right_inverse(stacked)
    extractor = BitMatrix(rinv.toarray()[:, r:])
    dense = eg.h.toarray()
    d = int(max(dense.sum(axis=1).max(), dense.sum(axis=0).max()))
    code = RewriteCode(
        gq=eg.h,
        h=extractor.transpose(),
        embedder=emb,
        extractor=extractor,
        n=eg.n,
        k=k,
        r=r,
        d=d,
    )
    return ConjugatePair(eg=eg, c1=c1, code=code)
