# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Jacobi kernels for small dense complex matrices.

All routines work on private copies and return fresh arrays.  A negative
sweep count signals that the sweep budget was exhausted.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs
from libc.float cimport DBL_EPSILON

cnp.import_array()


cdef inline double cabs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double cabs_(double complex z) noexcept nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef inline void _rotation(double app, double aqq, double babs,
                           double* c, double* s) noexcept nogil:
    cdef double theta = (aqq - app) / (2.0 * babs)
    cdef double t
    if theta >= 0.0:
        t = 1.0 / (theta + sqrt(theta * theta + 1.0))
    else:
        t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
    c[0] = 1.0 / sqrt(t * t + 1.0)
    s[0] = t * c[0]


def heevj(a_in, int max_sweeps=100):
    """Cyclic two-sided Jacobi for a Hermitian matrix.

    Returns ``(w, v, sweeps)`` with ``w`` ascending and ``a = v diag(w) v*``.
    Only the upper triangle and the real part of the diagonal are read.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] arr = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = arr.shape[0]
    cdef double complex[:, ::1] a = arr
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] varr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] v = varr
    cdef cnp.ndarray[cnp.float64_t, ndim=1] warr = np.empty(n, dtype=np.float64)
    cdef double[::1] w = warr
    cdef Py_ssize_t i, j, p, q, k
    cdef double fro = 0.0, tiny, babs, c, s, app, aqq
    cdef double complex b, e, akp, akq
    cdef int sweep, rotated, sweeps = -1

    with nogil:
        for i in range(n):
            a[i, i] = a[i, i].real
            for j in range(i + 1, n):
                a[j, i] = a[i, j].conjugate()
        for i in range(n):
            for j in range(n):
                fro += cabs2(a[i, j])
        tiny = DBL_EPSILON * DBL_EPSILON * sqrt(fro)
        for sweep in range(max_sweeps):
            rotated = 0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    b = a[p, q]
                    babs = cabs_(b)
                    app = a[p, p].real
                    aqq = a[q, q].real
                    if babs <= tiny or babs <= DBL_EPSILON * sqrt(fabs(app) * fabs(aqq)):
                        a[p, q] = 0.0
                        a[q, p] = 0.0
                        continue
                    rotated = 1
                    e = b / babs
                    _rotation(app, aqq, babs, &c, &s)
                    for k in range(n):
                        if k == p or k == q:
                            continue
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * e.conjugate() * akq
                        a[k, q] = s * e * akp + c * akq
                        a[p, k] = a[k, p].conjugate()
                        a[q, k] = a[k, q].conjugate()
                    a[p, p] = app - (s / c) * babs
                    a[q, q] = aqq + (s / c) * babs
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for k in range(n):
                        akp = v[k, p]
                        akq = v[k, q]
                        v[k, p] = c * akp - s * e.conjugate() * akq
                        v[k, q] = s * e * akp + c * akq
            if not rotated:
                sweeps = sweep + 1
                break
        for i in range(n):
            w[i] = a[i, i].real
        # selection sort keeps (w, v) paired; n is small
        for i in range(n - 1):
            p = i
            for j in range(i + 1, n):
                if w[j] < w[p]:
                    p = j
            if p != i:
                app = w[i]
                w[i] = w[p]
                w[p] = app
                for k in range(n):
                    akp = v[k, i]
                    v[k, i] = v[k, p]
                    v[k, p] = akp

    return warr, varr, sweeps


cdef int _hestenes(double complex[:, ::1] g, double complex[:, ::1] v, bint want_v,
                   int max_sweeps) noexcept nogil:
    cdef Py_ssize_t m = g.shape[0]
    cdef Py_ssize_t n = g.shape[1]
    cdef Py_ssize_t i, p, q, k
    cdef double fro = 0.0, tiny, alpha, beta, gabs, c, s
    cdef double complex gamma, e, xp, xq
    cdef int sweep, rotated

    for i in range(m):
        for k in range(n):
            fro += cabs2(g[i, k])
    tiny = DBL_EPSILON * DBL_EPSILON * fro
    for sweep in range(max_sweeps):
        rotated = 0
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for k in range(m):
                    alpha += cabs2(g[k, p])
                    beta += cabs2(g[k, q])
                    gamma = gamma + g[k, p].conjugate() * g[k, q]
                gabs = cabs_(gamma)
                if gabs <= tiny or gabs <= 4.0 * DBL_EPSILON * sqrt(alpha * beta):
                    continue
                rotated = 1
                e = gamma / gabs
                _rotation(alpha, beta, gabs, &c, &s)
                for k in range(m):
                    xp = g[k, p]
                    xq = g[k, q]
                    g[k, p] = c * xp - s * e.conjugate() * xq
                    g[k, q] = s * e * xp + c * xq
                if want_v:
                    for k in range(n):
                        xp = v[k, p]
                        xq = v[k, q]
                        v[k, p] = c * xp - s * e.conjugate() * xq
                        v[k, q] = s * e * xp + c * xq
        if not rotated:
            return sweep + 1
    return -1


def svdj(a_in, int max_sweeps=100):
    """One-sided (Hestenes) Jacobi on the columns of ``a``.

    Returns ``(g, v, sweeps)`` with ``g = a v`` having mutually orthogonal
    columns; the column norms of ``g`` are the singular values.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] garr = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] varr = np.eye(garr.shape[1], dtype=np.complex128)
    cdef double complex[:, ::1] g = garr
    cdef double complex[:, ::1] v = varr
    cdef int sweeps
    with nogil:
        sweeps = _hestenes(g, v, 1, max_sweeps)
    return garr, varr, sweeps


def svdvals(a_in, int max_sweeps=100):
    """Singular values only, in descending order, as ``(s, sweeps)``."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] garr = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, ::1] g = garr
    cdef double complex[:, ::1] dummy = np.zeros((1, 1), dtype=np.complex128)
    cdef Py_ssize_t m = garr.shape[0]
    cdef Py_ssize_t n = garr.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sarr = np.empty(n, dtype=np.float64)
    cdef double[::1] sv = sarr
    cdef Py_ssize_t i, j, k, best
    cdef double acc, tmp
    cdef int sweeps
    with nogil:
        sweeps = _hestenes(g, dummy, 0, max_sweeps)
        for j in range(n):
            acc = 0.0
            for k in range(m):
                acc += cabs2(g[k, j])
            sv[j] = sqrt(acc)
        for i in range(n):
            best = i
            for j in range(i + 1, n):
                if sv[j] > sv[best]:
                    best = j
            tmp = sv[i]
            sv[i] = sv[best]
            sv[best] = tmp
    return sarr, sweeps


def haar_unitary(z_in):
    """Orthonormalize the columns of a square complex Gaussian matrix.

    Modified Gram-Schmidt with one reorthogonalization pass; the implied
    triangular factor has a positive diagonal, so the result is Haar
    distributed when ``z`` has i.i.d. standard complex Gaussian entries.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] qarr = np.array(z_in, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = qarr.shape[0]
    cdef double complex[:, ::1] qv = qarr
    cdef Py_ssize_t i, j, k
    cdef int rep
    cdef double nrm
    cdef double complex r

    with nogil:
        for j in range(n):
            for rep in range(2):
                for i in range(j):
                    r = 0.0
                    for k in range(n):
                        r = r + qv[k, i].conjugate() * qv[k, j]
                    for k in range(n):
                        qv[k, j] = qv[k, j] - r * qv[k, i]
            nrm = 0.0
            for k in range(n):
                nrm += cabs2(qv[k, j])
            nrm = sqrt(nrm)
            for k in range(n):
                qv[k, j] = qv[k, j] / nrm
    return qarr
