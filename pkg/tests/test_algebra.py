import numpy as np
import pytest

from rydcorr import algebra
from rydcorr.errors import (
    DimensionMismatchError,
    NearDefectiveError,
    NonSquareError,
)

RNG = np.random.default_rng(20260809)


def random_complex(shape, scale=1.0):
    return scale * (RNG.standard_normal(shape) + 1j * RNG.standard_normal(shape))


def test_kron_identity():
    eye3 = np.eye(3)
    assert np.array_equal(algebra.kron(eye3, eye3), np.eye(9))


def test_kron_dimensions():
    a = random_complex((3, 3))
    b = random_complex((3, 3))
    assert algebra.kron(a, b).shape == (9, 9)


def test_kron_single_entry_index():
    s33 = np.zeros((3, 3))
    s33[2, 2] = 1.0
    k = algebra.kron(s33, s33)
    expected = np.zeros((9, 9))
    expected[8, 8] = 1.0
    assert np.array_equal(k, expected)


def test_kron_bilinearity():
    a = random_complex((3, 4))
    b = random_complex((2, 5))
    alpha = 0.7 - 1.3j
    assert np.allclose(algebra.kron(alpha * a, b), alpha * algebra.kron(a, b), rtol=1e-14)


def test_expm_zero_is_identity():
    assert np.allclose(algebra.expm(np.zeros((4, 4))), np.eye(4), atol=1e-15)


def test_expm_diagonal():
    d = np.array([0.3, -1.2 + 2j, 4.0])
    assert np.allclose(algebra.expm(np.diag(d)), np.diag(np.exp(d)), rtol=1e-13)


def test_expm_nilpotent():
    m = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert np.allclose(algebra.expm(m), np.array([[1.0, 1.0], [0.0, 1.0]]), atol=1e-15)


def test_expm_inverse_pairing():
    for _ in range(5):
        m = random_complex((9, 9))
        m *= 10.0 / np.linalg.norm(m)
        prod = algebra.expm(m) @ algebra.expm(-m)
        assert np.max(np.abs(prod - np.eye(9))) < 1e-8


def test_expm_matches_eigendecomposition():
    m = random_complex((9, 9))
    dec = algebra.eig(m)
    v = dec.right_eigenvectors
    rebuilt = v @ np.diag(np.exp(dec.eigenvalues)) @ np.linalg.inv(v)
    assert np.max(np.abs(algebra.expm(m) - rebuilt)) < 1e-7 * np.linalg.norm(algebra.expm(m))


def test_expm_rejects_nonsquare():
    with pytest.raises(NonSquareError):
        algebra.expm(np.zeros((2, 3)))


def test_eig_simple_diagonal():
    dec = algebra.eig(np.diag([2.0, -1.0]))
    assert np.allclose(dec.eigenvalues, [2.0, -1.0])


def test_eig_identity():
    dec = algebra.eig(np.eye(9))
    assert np.allclose(dec.eigenvalues, np.ones(9))


def test_eig_real_matrix_conjugate_closure():
    m = RNG.standard_normal((8, 8))
    w = algebra.eig(m).eigenvalues
    dist = np.abs(w.conj()[:, None] - w[None, :])
    assert dist.min(axis=1).max() < 1e-10


def test_eig_residual_contract():
    m = random_complex((9, 9))
    dec = algebra.eig(m)
    resid = m @ dec.right_eigenvectors - dec.right_eigenvectors * dec.eigenvalues
    assert np.linalg.norm(resid) <= 1e-8 * np.linalg.norm(m) * np.linalg.norm(dec.right_eigenvectors)


def test_eig_sorted_descending_real():
    w = algebra.eig(random_complex((9, 9))).eigenvalues
    assert np.all(np.diff(w.real) <= 1e-12)


def test_eig_flags_defective():
    with pytest.raises(NearDefectiveError):
        algebra.eig(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_vectorize_round_trip_exact():
    m = random_complex((9, 9))
    back = algebra.devectorize(algebra.vectorize(m), 9, 9)
    assert np.array_equal(back, m)


def test_vectorize_column_stacking_convention():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(algebra.vectorize(m), np.array([1.0, 3.0, 2.0, 4.0]))


def test_vectorize_kron_identity():
    a = random_complex((3, 3))
    x = random_complex((3, 3))
    b = random_complex((3, 3))
    lhs = algebra.vectorize(a @ x @ b)
    rhs = algebra.kron(b.T, a) @ algebra.vectorize(x)
    assert np.allclose(lhs, rhs, rtol=1e-13, atol=1e-14)


def test_devectorize_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        algebra.devectorize(np.zeros(5), 2, 2)
