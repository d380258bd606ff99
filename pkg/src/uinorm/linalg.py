"""Dense complex matrix substrate.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  The
Hermitian eigensolver and the linear solver run on the kernels selected in
:mod:`uinorm._backend`; everything else is thin numpy plumbing.
"""
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DomainError, NotNormalError, ShapeError

# lhs <= rhs accepted when lhs <= rhs * (1 + REL_SLACK) + ABS_SLACK
REL_SLACK = 1e-9
ABS_SLACK = 1e-12

SINGULAR_RTOL = 1e-14
GROUPING_RTOL = 1e-8


def within_slack(lhs, rhs):
    """Slack-tolerant ``lhs <= rhs``."""
    return lhs <= rhs * (1.0 + REL_SLACK) + ABS_SLACK


def as_matrix(a):
    """Coerce ``a`` to a finite 2-D complex array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    return m


def _square(a, what="matrix"):
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"{what} must be square, got shape {m.shape}")
    return m


def identity(n):
    return np.eye(n, dtype=np.complex128)


@dataclass(frozen=True)
class SpectralDecomposition:
    """``A = U diag(eigenvalues) U*`` for a normal matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T

    def adjoint(self):
        """Decomposition of ``A*``: conjugated eigenvalues, same eigenvectors."""
        return SpectralDecomposition(self.eigenvalues.conj(), self.eigenvectors)


def multiply(a, b):
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a):
    return as_matrix(a).conj().T


def eigh(a):
    """Hermitian eigen-decomposition ``(w, V)``, ``w`` ascending.

    Raises :class:`~uinorm.errors.ConvergenceError` with the sweep count if
    the Jacobi iteration stalls.
    """
    a = _square(a)
    w, v, _ = _backend.jacobi_eigh(a)
    return w, v


def hermitian_function(a, fn):
    """Apply a real function to a Hermitian matrix through its eigenbasis."""
    w, v = eigh(a)
    return (v * fn(w)) @ v.conj().T


def _gram(a):
    return a.conj().T @ a if a.shape[0] >= a.shape[1] else a @ a.conj().T


def singular_values(a):
    """Singular values, non-increasing, of length ``min(rows, cols)``.

    Eigenvectors ``v_j`` of ``A*A`` (or ``AA*`` for wide matrices) give
    ``s_j = ||A v_j||``.  Unlike ``sqrt(w_j)`` this keeps small singular
    values accurate to about ``eps * ||A||`` instead of ``sqrt(eps) * ||A||``.
    """
    a = as_matrix(a)
    _, v = eigh(_gram(a))
    m = a @ v if a.shape[0] >= a.shape[1] else a.conj().T @ v
    return np.sort(np.linalg.norm(m, axis=0))[::-1]


def op_norm(a):
    return float(singular_values(a)[0])


def absolute_value(a):
    """Positive square root ``|A| = (A*A)^(1/2)``."""
    a = _square(a)
    w, v = eigh(a.conj().T @ a)
    s = np.sqrt(np.maximum(w, 0.0))
    out = (v * s) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def psd_sqrt(p):
    """Square root of a positive semidefinite matrix."""
    out = hermitian_function(_square(p), lambda w: np.sqrt(np.maximum(w, 0.0)))
    return 0.5 * (out + out.conj().T)


def commutator_norm(a, b):
    return op_norm(a @ b - b @ a)


def eig_normal(a, tol=1e-9):
    """Unitary diagonalization of a normal matrix.

    Splits ``A = H + iK`` into Hermitian parts, diagonalizes ``H`` and then
    ``K`` restricted to each eigenspace of ``H``.  Eigenvalues of ``H``
    closer than ``1e-8 * ||A||`` are grouped into one eigenspace.

    Raises
    ------
    NotNormalError
        If ``||A*A - AA*|| > tol * ||A||^2``.
    """
    a = _square(a)
    n = a.shape[0]
    scale = op_norm(a)
    if scale == 0.0:
        return SpectralDecomposition(np.zeros(n, dtype=np.complex128), identity(n))
    ah = a.conj().T
    comm = op_norm(ah @ a - a @ ah)
    if comm > tol * scale**2:
        raise NotNormalError(comm, tol * scale**2)
    h = 0.5 * (a + ah)
    k = -0.5j * (a - ah)
    wh, v = eigh(h)
    v = v.copy()
    start = 0
    gap = GROUPING_RTOL * scale
    for stop in range(1, n + 1):
        if stop < n and wh[stop] - wh[stop - 1] <= gap:
            continue
        if stop - start > 1:
            block = v[:, start:stop]
            _, r = eigh(block.conj().T @ k @ block)
            v[:, start:stop] = block @ r
        start = stop
    lam = np.einsum("ij,ij->j", v.conj(), a @ v)
    return SpectralDecomposition(lam, v)


def direct_sum(a, b):
    """Block-diagonal ``diag(A, B)``."""
    a = _square(a, "first summand")
    b = _square(b, "second summand")
    m, n = a.shape[0], b.shape[0]
    out = np.zeros((m + n, m + n), dtype=np.complex128)
    out[:m, :m] = a
    out[m:, m:] = b
    return out


def solve(a, rhs, scale=None):
    """Solve ``a @ x = rhs`` by elimination with partial pivoting.

    The system is declared singular when a pivot falls below
    ``1e-14 * scale``; ``scale`` defaults to ``||a||_op`` and callers that
    solve many shifted systems may pass a precomputed upper bound instead.
    """
    a = _square(a)
    b = as_matrix(rhs)
    if b.shape[0] != a.shape[0]:
        raise ShapeError(f"right-hand side has {b.shape[0]} rows, expected {a.shape[0]}")
    if scale is None:
        scale = op_norm(a)
    return _backend.lu_solve(a, b, SINGULAR_RTOL * scale)
