"""Self-check suites: linear-algebra identities, field-table sanity,
round-trip properties of the codecs, and the small-instance oracles.

Each check either returns a short detail string (pass) or raises (fail).
run_verify collects (name, ok, detail) rows; the CLI renders them and
maps any failure to a nonzero exit.
"""

from __future__ import annotations

import time

import numpy as np

from . import fields as _fields
from .alist import AlistFormatError, read_alist, write_alist
from .constructions import (
    bch_decode,
    bch_encode,
    bch_syndromes,
    build_bch,
    build_conjugate_pair,
    build_eg_ldpc,
    build_mackay,
    check_rows_in_bch,
)
from .fields import Field, cyclotomic_cosets, minimal_polynomial, poly_degree, poly_mod
from .gf2 import BitMatrix, complete_basis, multiply, null_space_basis, rank, rref, right_inverse
from .rewriting import (
    RewriteCode,
    bec_mask,
    check_rewritable,
    dec,
    enc,
    erasure_decode,
)
from .sim import sample_state, trial_stream

# A fixed 3x6 sparse generator whose brute-force coset oracle has been
# checked by hand; small enough to enumerate all 8 labels x 8 messages
# x 64 cell states.
_TOY_GQ = np.array(
    [
        [0, 1, 1, 0, 1, 0],
        [1, 1, 0, 0, 0, 0],
        [0, 0, 1, 1, 0, 1],
    ],
    dtype=np.uint8,
)


def _check_gf2_identities():
    rng = np.random.default_rng(11)
    for trial in range(20):
        rows = int(rng.integers(1, 12))
        cols = int(rng.integers(rows, 16))
        a = BitMatrix((rng.random((rows, cols)) < 0.4).astype(np.uint8))
        assert rank(a) == rank(a.transpose()), "rank(A) != rank(A^T)"
        red, pivots, _ = rref(a)
        assert rank(red) == rank(a), "rref changed rank"
        for i, j in enumerate(pivots):
            col = red.toarray()[:, j]
            want = np.zeros(red.rows, dtype=np.uint8)
            want[i] = 1
            assert np.array_equal(col, want), "pivot column not a unit vector"
        ns = null_space_basis(a)
        assert ns.rows == cols - rank(a), "null space dimension wrong"
        if ns.rows:
            assert multiply(a, ns.transpose()).toarray().max() == 0, "A @ N^T != 0"
        if rank(a) == rows:
            inv = right_inverse(a)
            assert multiply(a, inv) == BitMatrix(np.eye(rows, dtype=np.uint8)), (
                "A @ right_inverse(A) != I"
            )
        # multiply agrees with the dense mod-2 product
        b = BitMatrix((rng.random((cols, 7)) < 0.5).astype(np.uint8))
        dense = (a.toarray() @ b.toarray()) % 2
        assert np.array_equal(multiply(a, b).toarray(), dense), "packed product mismatch"
    # basis completion: random nested spans
    for trial in range(10):
        outer = BitMatrix((rng.random((8, 12)) < 0.5).astype(np.uint8))
        inner_mix = (rng.random((3, 8)) < 0.5).astype(np.uint8)
        inner = BitMatrix((inner_mix @ outer.toarray()) % 2)
        ext = complete_basis(inner, outer)
        stacked = np.vstack([inner.toarray(), ext.toarray()])
        assert rank(BitMatrix(stacked % 2)) == rank(outer), "completion does not span"
    return "rank/rref/null-space/right-inverse/completion on 30 random matrices"


def _check_field_tables():
    for e in sorted(_fields.PRIMITIVE_POLYS):
        Field(e)  # constructor runs the order self-test
    f16 = Field(4)
    for a in range(1, 16):
        assert f16.mul(a, f16.inv(a)) == 1, f"inv broken at {a}"
    assert f16.pow(2, f16.order) == 1, "generator order wrong"
    f8 = Field(3)
    assert f8.mul(2, f8.mul(2, 2)) == 0b011, "alpha^3 != alpha + 1 in GF(8)"
    # A corrupted constant table must be caught by the order self-test:
    # x^4 + x^2 + 1 is reducible, so its power sequence repeats early.
    good = _fields.PRIMITIVE_POLYS[4]
    _fields.PRIMITIVE_POLYS[4] = 0b10101
    try:
        Field(4)
    except ValueError:
        pass
    else:
        raise AssertionError("reducible polynomial passed the self-test")
    finally:
        _fields.PRIMITIVE_POLYS[4] = good
    return "tables e=1..13 pass order/inversion tests; corruption detected"


def _check_polynomials():
    assert cyclotomic_cosets(7, 2) == [[0], [1, 2, 4], [3, 5, 6]], "cosets mod 7"
    sizes = sorted(len(c) for c in cyclotomic_cosets(15, 2))
    assert sizes == [1, 2, 4, 4, 4], "coset sizes mod 15"
    f8 = Field(3)
    assert minimal_polynomial(f8, 2) == 0b1011, "minpoly(alpha) over GF(8)"
    assert minimal_polynomial(f8, f8.pow(2, 3)) == 0b1101, "minpoly(alpha^3)"
    f16 = Field(4)
    xn1 = (1 << 15) | 1  # x^15 + 1
    for elt in range(1, 16):
        mp = minimal_polynomial(f16, elt)
        assert f16.eval_poly2(mp, elt) == 0, "element is not a root of its minpoly"
        assert poly_mod(xn1, mp) == 0, "minpoly does not divide x^n + 1"
    return "cyclotomic cosets and minimal polynomials check out"


def _check_alist_roundtrip():
    import os
    import tempfile

    rng = np.random.default_rng(5)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "m.alist")
        for trial in range(5):
            m = BitMatrix((rng.random((6, 11)) < 0.3).astype(np.uint8))
            write_alist(path, m)
            assert m == read_alist(path), "alist round-trip changed the matrix"
        with open(path) as fh:
            text = fh.read().splitlines()
        with open(path, "w") as fh:
            fh.write("\n".join(text[: len(text) // 2]) + "\n")
        try:
            read_alist(path)
        except AlistFormatError as err:
            assert "line" in str(err), "truncation error does not name a line"
        else:
            raise AssertionError("truncated alist accepted")
    return "write/read round-trip exact; truncation rejected with line number"


def _make_small_code():
    gq = build_mackay(256, 156, 3, seed=3)
    return RewriteCode.from_generator(gq)


def _check_write_correctness():
    code = _make_small_code()
    successes = 0
    for t in range(2000):
        stream = trial_stream(101, 0, t)
        s = sample_state(code.n, 0.5, stream)
        m = stream.integers(0, 2, size=code.k, dtype=np.uint8)
        out = enc(code, m, s)
        if not out.ok:
            continue
        successes += 1
        assert not np.any(out.x[s == 0]), "wrote into a stuck cell"
        assert np.array_equal(dec(code, out.x), m), "syndrome does not recover m"
    assert successes > 1000, "implausibly low success rate at beta=0.5"
    return f"writability and syndrome identity on {successes} successful encodes"


def _check_quantization_duality():
    code = _make_small_code()
    ones = np.ones(code.n, dtype=np.uint8)
    agree = 0
    for t in range(2000):
        stream = trial_stream(102, 0, t)
        s = sample_state(code.n, 0.5, stream)
        m = stream.integers(0, 2, size=code.k, dtype=np.uint8)
        z_prime = stream.integers(0, 2, size=code.n, dtype=np.uint8)
        enc_ok = enc(code, m, s).ok
        dec_ok = erasure_decode(code.gq, bec_mask(z_prime, s ^ ones)) is not None
        assert enc_ok == dec_ok, f"duality violated on trial {t}"
        agree += 1
    return f"encode and complement-erasure decode flags equal on {agree} trials"


def _check_message_independence():
    code = _make_small_code()
    for t in range(300):
        stream = trial_stream(103, 0, t)
        s = sample_state(code.n, 0.5, stream)
        flags = {
            enc(code, stream.integers(0, 2, size=code.k, dtype=np.uint8), s).ok
            for _ in range(8)
        }
        assert len(flags) == 1, "success flag varied with the message"
        assert flags.pop() == check_rewritable(code, s), "check_rewritable disagreed"
    return "flag constant over messages and matches check_rewritable on 300 states"


def _bits(value, width):
    return np.array(list(np.binary_repr(value, width)), dtype=np.uint8)


def _check_toy_oracle():
    code = RewriteCode.from_generator(BitMatrix(_TOY_GQ))
    assert code.k == 3 and code.r == 3
    cosets = [
        multiply(BitMatrix(_bits(i, code.r)[None, :]), code.gq).toarray()[0]
        for i in range(1 << code.r)
    ]
    bases = [
        multiply(BitMatrix(_bits(mi, code.k)[None, :]), code.embedder).toarray()[0]
        for mi in range(1 << code.k)
    ]
    checked = 0
    for si in range(64):
        s = _bits(si, 6)
        stuck = s == 0
        all_feasible = all(
            any(not np.any((base ^ c)[stuck]) for c in cosets) for base in bases
        )
        flag = check_rewritable(code, s)
        assert flag == all_feasible, f"flag vs oracle mismatch at state {si}"
        for mi in range(1 << code.k):
            m = _bits(mi, code.k)
            out = enc(code, m, s)
            assert out.ok == flag, "enc flag varied with message on toy code"
            if out.ok:
                assert not np.any(out.x[stuck]), "toy encode broke writability"
                assert np.array_equal(dec(code, out.x), m), "toy round-trip failed"
                checked += 1
    return f"exhaustive 64-state x 8-message oracle agreement ({checked} encodes)"


def _check_geometry_nesting():
    for params in ((3, 1, 2, 2), (4, 1, 2, 2)):
        m, mu, s, p = params
        eg = build_eg_ldpc(m, mu, s, p)
        q = p**s
        row_wt = eg.h.toarray().sum(axis=1)
        assert (row_wt == q ** mu).all(), "row weight != points per flat"
        col_wt = eg.h.toarray().sum(axis=0)
        expect = (q**m - 1) // (q - 1) - 1
        assert (col_wt == expect).all(), "column weight formula violated"
        bch = build_bch(eg.n, (p ** (mu * s)) - 1)
        assert check_rows_in_bch(eg, bch), f"EG rows escape BCH at {params}"
    return "EG rows are BCH codewords for (3,1,2,2) and (4,1,2,2); weights exact"


def _check_bch_roundtrip():
    code = build_bch(15, 5)  # [15,7,5], corrects 2 errors
    assert code.k == 7
    rng = np.random.default_rng(9)
    tried = 0
    for _ in range(6):
        data = rng.integers(0, 2, size=code.k, dtype=np.uint8)
        cw = bch_encode(code, data)
        assert not bch_syndromes(code, cw).any(), "codeword has nonzero syndrome"
        assert np.array_equal(cw[: code.k], data), "encoding is not systematic"
        for e1 in range(15):
            for e2 in range(e1, 15):
                y = cw.copy()
                y[e1] ^= 1
                if e2 != e1:  # e2 == e1 leaves a weight-1 pattern
                    y[e2] ^= 1
                got = bch_decode(code, y)
                assert isinstance(got, np.ndarray) and np.array_equal(got, cw), (
                    f"decode failed at errors ({e1},{e2})"
                )
                tried += 1
    return f"[15,7,5] exhaustive <=2-error correction on {tried} patterns"


def _check_conjugate_pair():
    pair = build_conjugate_pair(3, 1, 2, 2)
    code = pair.code
    ident = BitMatrix(np.eye(code.k, dtype=np.uint8))
    assert multiply(code.embedder, code.extractor) == ident, "embedder @ extractor != I"
    assert multiply(code.gq, code.extractor).toarray().max() == 0, "G_Q @ extractor != 0"
    hits = 0
    for t in range(300):
        stream = trial_stream(104, 0, t)
        s = sample_state(code.n, 0.6, stream)
        m = stream.integers(0, 2, size=code.k, dtype=np.uint8)
        out = enc(code, m, s)
        if not out.ok:
            continue
        hits += 1
        assert not bch_syndromes(pair.c1, out.x).any(), "encode left the ECC code"
        assert np.array_equal(dec(code, out.x), m), "conjugate round-trip failed"
    assert hits > 100, "implausibly low conjugate success rate"
    return f"conjugate encodes stay inside the ECC code ({hits} trials)"


def _check_linear_scaling():
    """Encode time should grow about linearly in n for fixed degree."""
    times = {}
    for n in (500, 2000):
        r = int(round(n * 0.61))
        code = RewriteCode.from_generator(build_mackay(n, r, 3, seed=1))
        best = float("inf")
        for rep in range(3):
            t0 = time.perf_counter()
            for t in range(200):
                stream = trial_stream(105, rep, t)
                s = sample_state(code.n, 0.5, stream)
                m = stream.integers(0, 2, size=code.k, dtype=np.uint8)
                enc(code, m, s)
            best = min(best, time.perf_counter() - t0)
        times[n] = best
    ratio = times[2000] / times[500]
    assert ratio <= 5.0, f"encode scaling ratio {ratio:.1f} exceeds linear budget"
    return f"200-encode time ratio n=2000/n=500 is {ratio:.2f} (budget 5.0)"


CHECKS = [
    ("gf2 linear algebra", _check_gf2_identities),
    ("field tables", _check_field_tables),
    ("polynomial machinery", _check_polynomials),
    ("alist round-trip", _check_alist_roundtrip),
    ("rewriting correctness", _check_write_correctness),
    ("quantization duality", _check_quantization_duality),
    ("message-independent failure", _check_message_independence),
    ("toy exhaustive oracle", _check_toy_oracle),
    ("geometry rows in ECC", _check_geometry_nesting),
    ("bch error correction", _check_bch_roundtrip),
    ("conjugate pair", _check_conjugate_pair),
    ("linear-time encoding", _check_linear_scaling),
]


def run_verify(names=None):
    """Run the named checks (default all); returns [(name, ok, detail)]."""
    rows = []
    for name, fn in CHECKS:
        if names and name not in names:
            continue
        try:
            detail = fn()
            rows.append((name, True, detail))
        except Exception as err:  # noqa: BLE001 -- report, don't crash the suite
            rows.append((name, False, f"{type(err).__name__}: {err}"))
    return rows
