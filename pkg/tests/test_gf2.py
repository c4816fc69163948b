"""Packed GF(2) linear algebra against dense numpy references."""

import numpy as np
import pytest

from womkit.gf2 import (
    BitMatrix,
    asbits,
    complete_basis,
    multiply,
    null_space_basis,
    rank,
    rref,
    right_inverse,
)


def random_matrix(rng, rows, cols, density=0.5):
    return BitMatrix((rng.random((rows, cols)) < density).astype(np.uint8))


def dense_rank(a):
    """Reference rank by plain elimination on an int matrix."""
    a = a.astype(np.int64).copy() % 2
    r = 0
    for j in range(a.shape[1]):
        pivots = np.nonzero(a[r:, j])[0]
        if pivots.size == 0:
            continue
        p = r + pivots[0]
        a[[r, p]] = a[[p, r]]
        hits = np.nonzero(a[:, j])[0]
        hits = hits[hits != r]
        a[hits] ^= a[r]
        r += 1
        if r == a.shape[0]:
            break
    return r


def test_asbits_accepts_lists_and_arrays():
    assert np.array_equal(asbits([1, 0, 1]), np.array([1, 0, 1], dtype=np.uint8))
    assert asbits(np.array([0.0, 1.0])).dtype == np.uint8
    with pytest.raises(ValueError):
        asbits([0, 2, 1])


def test_bitmatrix_round_trip_and_shape():
    rng = np.random.default_rng(0)
    dense = (rng.random((5, 70)) < 0.3).astype(np.uint8)
    m = BitMatrix(dense)
    assert m.shape == (5, 70)
    assert np.array_equal(m.toarray(), dense)
    assert np.array_equal(m.transpose().toarray(), dense.T)
    assert m == BitMatrix(dense.copy())
    assert m != BitMatrix(dense[:, :-1])


def test_identity_and_zeros():
    eye = BitMatrix.identity(4)
    assert np.array_equal(eye.toarray(), np.eye(4, dtype=np.uint8))
    assert BitMatrix.zeros(2, 3).toarray().sum() == 0


def test_row_support_matches_dense():
    rng = np.random.default_rng(1)
    m = random_matrix(rng, 8, 40, 0.2)
    dense = m.toarray()
    for i in range(8):
        assert np.array_equal(m.row_support(i), np.nonzero(dense[i])[0])


def test_multiply_matches_dense_product():
    rng = np.random.default_rng(2)
    for _ in range(10):
        a = random_matrix(rng, int(rng.integers(1, 9)), int(rng.integers(1, 9)))
        b = random_matrix(rng, a.cols, int(rng.integers(1, 9)))
        want = (a.toarray().astype(int) @ b.toarray().astype(int)) % 2
        assert np.array_equal(multiply(a, b).toarray(), want.astype(np.uint8))


def test_rank_matches_reference():
    rng = np.random.default_rng(3)
    for _ in range(20):
        m = random_matrix(rng, int(rng.integers(1, 12)), int(rng.integers(1, 12)))
        assert rank(m) == dense_rank(m.toarray())
        assert rank(m) == rank(m.transpose())


def test_rref_is_reduced_and_row_equivalent():
    rng = np.random.default_rng(4)
    for _ in range(10):
        m = random_matrix(rng, 6, 10)
        red, pivots, perm = rref(m)
        assert rank(red) == rank(m)
        dense = red.toarray()
        for i, j in enumerate(pivots):
            col = np.zeros(red.rows, dtype=np.uint8)
            col[i] = 1
            assert np.array_equal(dense[:, j], col)
        # pivots first, then free columns, each exactly once
        assert sorted(perm) == list(range(m.cols))
        assert list(perm[: len(pivots)]) == list(pivots)
        # row spaces agree: every rref row reduces to zero against m's rows
        stacked = np.vstack([m.toarray(), dense])
        assert dense_rank(stacked) == rank(m)


def test_right_inverse_product_is_identity():
    rng = np.random.default_rng(5)
    built = 0
    while built < 10:
        a = random_matrix(rng, 5, 9)
        if rank(a) < 5:
            continue
        built += 1
        assert multiply(a, right_inverse(a)) == BitMatrix.identity(5)
    with pytest.raises(ValueError):
        right_inverse(BitMatrix(np.zeros((2, 4), dtype=np.uint8)))


def test_right_inverse_one_by_two():
    b = right_inverse(BitMatrix(np.array([[1, 1]], dtype=np.uint8)))
    assert b.toarray().sum() % 2 == 1  # any odd-weight column works


def test_null_space_basis_dimensions_and_orthogonality():
    rng = np.random.default_rng(6)
    assert null_space_basis(BitMatrix.identity(3)).rows == 0
    ns = null_space_basis(BitMatrix(np.array([[1, 1, 1]], dtype=np.uint8)))
    assert ns.rows == 2
    assert (ns.toarray().sum(axis=1) % 2 == 0).all()
    for _ in range(10):
        a = random_matrix(rng, 4, 11, 0.4)
        ns = null_space_basis(a)
        assert ns.rows == a.cols - rank(a)
        if ns.rows:
            assert rank(ns) == ns.rows
            assert multiply(a, ns.transpose()).toarray().max(initial=0) == 0


def test_complete_basis_extends_to_outer_span():
    inner = BitMatrix(np.array([[1, 1, 0]], dtype=np.uint8))
    outer = BitMatrix(np.array([[1, 1, 0], [0, 1, 1]], dtype=np.uint8))
    ext = complete_basis(inner, outer)
    assert np.array_equal(ext.toarray(), np.array([[0, 1, 1]], dtype=np.uint8))

    same = complete_basis(BitMatrix.identity(2), BitMatrix.identity(2))
    assert same.rows == 0

    rng = np.random.default_rng(7)
    for _ in range(10):
        outer = random_matrix(rng, 7, 12)
        mix = (rng.random((3, 7)) < 0.5).astype(np.uint8)
        inner = BitMatrix((mix @ outer.toarray()) % 2)
        ext = complete_basis(inner, outer)
        assert ext.rows == rank(outer) - rank(inner)
        stacked = BitMatrix(np.vstack([inner.toarray(), ext.toarray()]))
        assert rank(stacked) == rank(outer)
        # extension rows are rows of outer, verbatim
        outer_rows = {r.tobytes() for r in outer.toarray()}
        assert all(r.tobytes() in outer_rows for r in ext.toarray())


def test_complete_basis_rejects_non_contained_inner():
    inner = BitMatrix(np.array([[1, 0, 0]], dtype=np.uint8))
    outer = BitMatrix(np.array([[0, 1, 0]], dtype=np.uint8))
    with pytest.raises(ValueError):
        complete_basis(inner, outer)
