"""Pure-Python kernels (numpy row/column operations).

Same algorithms as the compiled ``_kernels`` module: cyclic Jacobi for
complex Hermitian matrices and elimination with partial pivoting.
"""
import math

import numpy as np

from .errors import ConvergenceError, SingularMatrixError

NAME = "python"


def jacobi_eigh(a_in, rtol=1e-15, max_sweeps=100):
    """Eigen-decompose a Hermitian matrix.

    Returns ``(w, v, sweeps)`` with ``w`` ascending and ``v`` unitary.
    Only the Hermitian part of ``a_in`` is used.
    """
    a = np.array(a_in, dtype=np.complex128, copy=True)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    frob = math.sqrt(float(np.sum(a.real**2 + a.imag**2)))
    iu = np.triu_indices(n, 1)
    sweep = 0
    while True:
        upper = a[iu]
        off = math.sqrt(2.0 * float(np.sum(upper.real**2 + upper.imag**2)))
        if off <= rtol * frob or sweep >= max_sweeps:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = math.hypot(apq.real, apq.imag)
                if mag == 0.0:
                    continue
                ph = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                php = s * ph
                phm = s * ph.conjugate()
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - phm * cq
                a[:, q] = php * cp + c * cq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - php * rq
                a[q, :] = phm * rp + c * rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - phm * vq
                v[:, q] = php * vp + c * vq
    if off > rtol * frob:
        raise ConvergenceError("Jacobi eigensolver did not converge", sweep)
    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order], sweep


def lu_solve(a_in, b_in, threshold):
    """Solve ``a x = b`` by elimination with partial pivoting.

    Raises ``SingularMatrixError`` when a pivot magnitude falls below
    ``threshold``.
    """
    a = np.array(a_in, dtype=np.complex128, copy=True)
    x = np.array(b_in, dtype=np.complex128, copy=True)
    n = a.shape[0]
    for k in range(n):
        col = np.abs(a[k:, k])
        piv = k + int(np.argmax(col))
        best = float(col[piv - k])
        if best < threshold or best == 0.0:
            raise SingularMatrixError(
                f"pivot {best:.3e} below singularity threshold {threshold:.3e}"
            )
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            x[[k, piv]] = x[[piv, k]]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(factors, a[k, k:])
        x[k + 1:] -= np.outer(factors, x[k])
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x
