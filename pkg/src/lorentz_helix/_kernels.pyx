# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract as ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

from .errors import DegenerateFrameError

cnp.import_array()

NAME = "cython"

cdef double SIG[4]
SIG[0] = -1.0
SIG[1] = 1.0
SIG[2] = 1.0
SIG[3] = 1.0


cdef inline double _ip(double[:, ::1] f, int a, int b) noexcept nogil:
    return -f[a, 0] * f[b, 0] + f[a, 1] * f[b, 1] + f[a, 2] * f[b, 2] + f[a, 3] * f[b, 3]


cdef int _gram_schmidt(double[:, ::1] f, double tol) noexcept nogil:
    """Orthonormalize rows 1..4 of ``f`` in place; returns failing vector or -1."""
    cdef int i, j, c, rep
    cdef double p, q
    for i in range(4):
        for rep in range(2):
            for j in range(i):
                p = SIG[j] * _ip(f, i + 1, j + 1)
                for c in range(4):
                    f[i + 1, c] -= p * f[j + 1, c]
        q = _ip(f, i + 1, i + 1)
        if fabs(q) <= tol or (i == 0 and q > 0) or (i > 0 and q < 0):
            return i
        q = sqrt(fabs(q))
        for c in range(4):
            f[i + 1, c] /= q
    return -1


cdef inline void _rhs(double[:, ::1] x, double[:, ::1] dx, double a, double b, double g) noexcept nogil:
    cdef int c
    for c in range(4):
        dx[0, c] = x[1, c]
        dx[1, c] = a * x[2, c]
        dx[2, c] = a * x[1, c] + b * x[3, c]
        dx[3, c] = -b * x[2, c] + g * x[4, c]
        dx[4, c] = -g * x[3, c]


def integrate_frame(k1, k2, k3, double h, x0, int reorth_every, double tol):
    cdef double[::1] a = np.ascontiguousarray(k1, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(k2, dtype=np.float64)
    cdef double[::1] g = np.ascontiguousarray(k3, dtype=np.float64)
    cdef Py_ssize_t n = (a.shape[0] - 1) // 2
    out_arr = np.empty((n + 1, 5, 4), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef double[:, ::1] x = np.array(x0, dtype=np.float64, order="C")
    cdef double[:, ::1] y = np.empty((5, 4))
    cdef double[:, ::1] q1 = np.empty((5, 4))
    cdef double[:, ::1] q2 = np.empty((5, 4))
    cdef double[:, ::1] q3 = np.empty((5, 4))
    cdef double[:, ::1] q4 = np.empty((5, 4))
    cdef Py_ssize_t j, i, r, c
    cdef double hh = 0.5 * h
    cdef double h6 = h / 6.0
    cdef int fail = -1
    cdef Py_ssize_t fail_node = -1
    out[0, :, :] = x
    with nogil:
        for j in range(n):
            i = 2 * j
            _rhs(x, q1, a[i], b[i], g[i])
            for r in range(5):
                for c in range(4):
                    y[r, c] = x[r, c] + hh * q1[r, c]
            _rhs(y, q2, a[i + 1], b[i + 1], g[i + 1])
            for r in range(5):
                for c in range(4):
                    y[r, c] = x[r, c] + hh * q2[r, c]
            _rhs(y, q3, a[i + 1], b[i + 1], g[i + 1])
            for r in range(5):
                for c in range(4):
                    y[r, c] = x[r, c] + h * q3[r, c]
            _rhs(y, q4, a[i + 2], b[i + 2], g[i + 2])
            for r in range(5):
                for c in range(4):
                    x[r, c] = x[r, c] + h6 * (q1[r, c] + 2.0 * q2[r, c] + 2.0 * q3[r, c] + q4[r, c])
            if reorth_every > 0 and (j + 1) % reorth_every == 0:
                fail = _gram_schmidt(x, tol)
                if fail >= 0:
                    fail_node = j + 1
                    break
            out[j + 1, :, :] = x
    if fail >= 0:
        raise DegenerateFrameError(
            f"re-orthonormalization degenerate at vector {fail}", node=fail_node, step=fail
        )
    return out_arr
