import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from uinorm import linalg as la
from uinorm.errors import NotNormalError, ShapeError, SingularMatrixError
from uinorm.sampling import SamplerConfig, random_normal_in_disk, stream

from conftest import complex_matrices, haar

NIL = np.array([[0, 1], [0, 0]], dtype=complex)


def triple_loop(a, b):
    n, m, p = a.shape[0], a.shape[1], b.shape[1]
    out = [[0j] * p for _ in range(n)]
    for i in range(n):
        for j in range(p):
            acc = 0j
            for k in range(m):
                acc += a[i, k] * b[k, j]
            out[i][j] = acc
    return np.array(out)


def same_multiset(got, want, tol):
    left = list(got)
    for lam in want:
        k = int(np.argmin(np.abs(np.array(left) - lam)))
        if abs(left.pop(k) - lam) > tol:
            return False
    return not left


def test_multiply_identity_and_nilpotent(rng):
    x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    assert np.array_equal(la.multiply(np.eye(2), x), x)
    assert np.array_equal(la.multiply(NIL, NIL), np.zeros((2, 2)))


def test_multiply_matches_triple_loop(rng):
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert np.max(np.abs(la.multiply(a, b) - triple_loop(a, b))) <= 1e-13


def test_multiply_shape_error():
    with pytest.raises(ShapeError):
        la.multiply(np.ones((2, 3)), np.ones((2, 3)))


def test_as_matrix_rejects_nan():
    with pytest.raises(ValueError):
        la.as_matrix([[np.nan]])


def test_adjoint():
    assert la.adjoint([[1j]])[0, 0] == -1j
    h = np.array([[2, 1 - 1j], [1 + 1j, -1]])
    assert np.array_equal(la.adjoint(h), h)


@given(complex_matrices())
def test_adjoint_involution(a):
    assert np.array_equal(la.adjoint(la.adjoint(a)), a)


def test_singular_values_examples():
    assert np.allclose(la.singular_values(np.diag([3.0, -4.0])), [4, 3], atol=1e-14)
    assert np.allclose(la.singular_values([[0, 2], [0, 0]]), [2, 0], atol=1e-14)


def test_singular_values_against_eigen_oracle(rng):
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    oracle = np.sqrt(np.maximum(np.linalg.eigvalsh(a.conj().T @ a), 0))[::-1]
    assert np.allclose(la.singular_values(a), oracle, rtol=1e-8)


def test_singular_values_rectangular(rng):
    a = rng.standard_normal((2, 5)) + 1j * rng.standard_normal((2, 5))
    s = la.singular_values(a)
    assert s.shape == (2,)
    assert np.allclose(s, np.linalg.svd(a, compute_uv=False), atol=1e-12)


@given(complex_matrices())
def test_singular_values_adjoint_invariant(a):
    assert np.allclose(la.singular_values(a), la.singular_values(la.adjoint(a)), atol=1e-10)


@given(complex_matrices(), st.integers(0, 2**32 - 1))
def test_singular_values_unitary_invariant(a, seed):
    r = np.random.default_rng(seed)
    n = a.shape[0]
    u, v = haar(r, n), haar(r, n)
    assert np.allclose(la.singular_values(u @ a @ v), la.singular_values(a), atol=1e-9)


def test_absolute_value_examples(rng):
    assert np.allclose(la.absolute_value([[0, 2], [0, 0]]), np.diag([0, 2]), atol=1e-14)
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    p = g @ g.conj().T
    assert np.allclose(la.absolute_value(p), p, atol=1e-12)
    assert np.allclose(la.absolute_value(haar(rng, 4)), np.eye(4), atol=1e-12)


@given(complex_matrices())
def test_absolute_value_is_psd(a):
    m = la.absolute_value(a)
    assert np.array_equal(m, m.conj().T)
    assert np.min(np.linalg.eigvalsh(m)) >= -1e-10


def test_eig_normal_examples():
    d = la.eig_normal(np.diag([0.5, -0.3j]))
    assert same_multiset(d.eigenvalues, [0.5, -0.3j], 1e-15)
    # ordered by real part, so the standard basis up to permutation
    p = np.abs(d.eigenvectors)
    assert np.allclose(p.sum(axis=0), 1) and np.allclose(p.sum(axis=1), 1) and np.allclose(p * (1 - p), 0)
    d = la.eig_normal([[0, 1], [1, 0]])
    assert np.allclose(np.sort(d.eigenvalues.real), [-1, 1], atol=1e-14)


def test_eig_normal_zero_matrix():
    d = la.eig_normal(np.zeros((3, 3)))
    assert np.array_equal(d.eigenvectors, np.eye(3))
    assert np.array_equal(d.eigenvalues, np.zeros(3))


@pytest.mark.parametrize("dim", [1, 3, 8, 16])
def test_eig_normal_recovers_construction(dim):
    cfg = SamplerConfig(42, dim)
    a, dec = random_normal_in_disk(cfg, stream(42, dim))
    got = la.eig_normal(a)
    assert np.max(np.abs(got.reconstruct() - a)) <= 1e-10
    u = got.eigenvectors
    assert np.allclose(u.conj().T @ u, np.eye(dim), atol=1e-10)
    assert same_multiset(got.eigenvalues, dec.eigenvalues, 1e-9)


def test_eig_normal_repeated_real_parts(rng):
    # H has a degenerate eigenspace, K separates it
    u = haar(rng, 4)
    lam = np.array([0.3 + 0.2j, 0.3 - 0.4j, -0.1j, 0.3])
    a = (u * lam) @ u.conj().T
    got = la.eig_normal(a)
    assert np.allclose(got.reconstruct(), a, atol=1e-10)
    assert same_multiset(got.eigenvalues, lam, 1e-9)


def test_eig_normal_rejects_non_normal():
    with pytest.raises(NotNormalError):
        la.eig_normal(NIL)


def test_direct_sum():
    assert np.array_equal(la.direct_sum([[1]], [[2]]), np.diag([1, 2]))


def test_direct_sum_with_zero(rng):
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    s = la.singular_values(la.direct_sum(a, np.zeros((3, 3))))
    assert np.allclose(s, np.concatenate([la.singular_values(a), np.zeros(3)]), atol=1e-12)


@given(complex_matrices(max_dim=5), complex_matrices(max_dim=5))
def test_direct_sum_merges_singular_values(a, b):
    merged = np.sort(np.concatenate([la.singular_values(a), la.singular_values(b)]))[::-1]
    assert np.allclose(la.singular_values(la.direct_sum(a, b)), merged, atol=1e-10 * max(1.0, merged[0]))


def test_solve_examples():
    b = np.array([[1, 2j], [3, 4]])
    assert np.allclose(la.solve(np.eye(2), b), b, atol=0)
    assert np.allclose(la.solve(np.diag([2.0, 4.0]), np.eye(2)), np.diag([0.5, 0.25]), atol=1e-16)


def test_solve_recovers_x(rng):
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)) + 6 * np.eye(6)
    x = rng.standard_normal((6, 2)) + 1j * rng.standard_normal((6, 2))
    assert np.max(np.abs(la.solve(a, a @ x) - x)) <= 1e-9


def test_solve_singular():
    with pytest.raises(SingularMatrixError):
        la.solve(NIL, np.eye(2))


def test_slack_rule():
    assert la.within_slack(1.0 + 5e-10, 1.0)
    assert not la.within_slack(1.0 + 2e-9, 1.0)
    assert la.within_slack(1e-12, 0.0)
    assert not la.within_slack(1e-11, 0.0)
