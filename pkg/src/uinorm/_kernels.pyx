# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: cyclic Jacobi for complex Hermitian matrices and
Gaussian elimination with partial pivoting.

Both mirror ``uinorm._fallback`` operation for operation.
"""
import numpy as np

from uinorm.errors import ConvergenceError, SingularMatrixError

from libc.math cimport sqrt, fabs, hypot

NAME = "cython"


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double complex conj(double complex z) nogil:
    return z.real - 1j * z.imag


def jacobi_eigh(a_in, double rtol=1e-15, int max_sweeps=100):
    """Eigen-decompose a Hermitian matrix.

    Returns ``(w, v, sweeps)`` with ``w`` ascending and ``v`` unitary.
    Only the Hermitian part of ``a_in`` is used.
    """
    a_np = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    a_np = 0.5 * (a_np + a_np.conj().T)
    a_np = np.ascontiguousarray(a_np)
    cdef double complex[:, ::1] a = a_np
    cdef Py_ssize_t n = a.shape[0]
    v_np = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] v = v_np
    cdef Py_ssize_t p, q, k
    cdef int sweep = 0
    cdef double frob = 0.0, off, mag, app, aqq, tau, t, c, s
    cdef double complex ph, php, phm, x, y

    for p in range(n):
        for q in range(n):
            frob += cabs2(a[p, q])
    frob = sqrt(frob)

    with nogil:
        while True:
            off = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    off += 2.0 * cabs2(a[p, q])
            off = sqrt(off)
            if off <= rtol * frob:
                break
            if sweep >= max_sweeps:
                break
            sweep += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    mag = hypot(a[p, q].real, a[p, q].imag)
                    if mag == 0.0:
                        continue
                    ph = a[p, q] / mag
                    app = a[p, p].real
                    aqq = a[q, q].real
                    tau = (aqq - app) / (2.0 * mag)
                    if tau >= 0.0:
                        t = 1.0 / (tau + hypot(1.0, tau))
                    else:
                        t = -1.0 / (-tau + hypot(1.0, tau))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    php = s * ph
                    phm = s * conj(ph)
                    for k in range(n):
                        x = a[k, p]
                        y = a[k, q]
                        a[k, p] = c * x - phm * y
                        a[k, q] = php * x + c * y
                    for k in range(n):
                        x = a[p, k]
                        y = a[q, k]
                        a[p, k] = c * x - php * y
                        a[q, k] = phm * x + c * y
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = app - t * mag
                    a[q, q] = aqq + t * mag
                    for k in range(n):
                        x = v[k, p]
                        y = v[k, q]
                        v[k, p] = c * x - phm * y
                        v[k, q] = php * x + c * y

    if off > rtol * frob:
        raise ConvergenceError("Jacobi eigensolver did not converge", sweep)
    w = np.array([a[k, k].real for k in range(n)], dtype=np.float64)
    order = np.argsort(w, kind="stable")
    return w[order], v_np[:, order], sweep


def lu_solve(a_in, b_in, double threshold):
    """Solve ``a x = b`` by elimination with partial pivoting.

    Raises ``SingularMatrixError`` when a pivot magnitude falls below
    ``threshold``.
    """
    a_np = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    x_np = np.array(b_in, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, ::1] a = a_np
    cdef double complex[:, ::1] x = x_np
    cdef Py_ssize_t n = a.shape[0], m = x.shape[1]
    cdef Py_ssize_t i, j, k, piv
    cdef double best, cur
    cdef double complex factor, tmp
    cdef int singular = 0

    with nogil:
        for k in range(n):
            piv = k
            best = cabs2(a[k, k])
            for i in range(k + 1, n):
                cur = cabs2(a[i, k])
                if cur > best:
                    best = cur
                    piv = i
            if sqrt(best) < threshold or best == 0.0:
                singular = 1
                break
            if piv != k:
                for j in range(n):
                    tmp = a[k, j]
                    a[k, j] = a[piv, j]
                    a[piv, j] = tmp
                for j in range(m):
                    tmp = x[k, j]
                    x[k, j] = x[piv, j]
                    x[piv, j] = tmp
            for i in range(k + 1, n):
                factor = a[i, k] / a[k, k]
                if factor == 0.0:
                    continue
                a[i, k] = 0.0
                for j in range(k + 1, n):
                    a[i, j] = a[i, j] - factor * a[k, j]
                for j in range(m):
                    x[i, j] = x[i, j] - factor * x[k, j]
        if not singular:
            for k in range(n - 1, -1, -1):
                for j in range(m):
                    tmp = x[k, j]
                    for i in range(k + 1, n):
                        tmp = tmp - a[k, i] * x[i, j]
                    x[k, j] = tmp / a[k, k]

    if singular:
        raise SingularMatrixError(
            f"pivot {sqrt(best):.3e} below singularity threshold {threshold:.3e}"
        )
    return x_np
