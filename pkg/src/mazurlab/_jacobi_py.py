"""Pure-Python twins of the compiled Jacobi kernels.

Same algorithms, thresholds and return conventions as ``_jacobi.pyx``;
used when the extension is unavailable or ``MAZURLAB_PURE_PYTHON=1``.
"""
import math

import numpy as np

_EPS = np.finfo(float).eps


def _rotation(app, aqq, babs):
    theta = (aqq - app) / (2.0 * babs)
    if theta >= 0.0:
        t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
    else:
        t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    return c, t * c


def heevj(a_in, max_sweeps=100):
    a = np.array(a_in, dtype=np.complex128, copy=True)
    n = a.shape[0]
    a = np.triu(a, 1)
    a = a + a.conj().T + np.diag(np.real(np.diagonal(np.asarray(a_in, dtype=np.complex128))))
    v = np.eye(n, dtype=np.complex128)
    tiny = _EPS * _EPS * math.sqrt(float(np.sum(np.abs(a) ** 2)))
    sweeps = -1
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                babs = abs(b)
                app = a[p, p].real
                aqq = a[q, q].real
                if babs <= tiny or babs <= _EPS * math.sqrt(abs(app) * abs(aqq)):
                    a[p, q] = a[q, p] = 0.0
                    continue
                rotated = True
                e = b / babs
                c, s = _rotation(app, aqq, babs)
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - s * e.conjugate() * colq
                a[:, q] = s * e * colp + c * colq
                a[p, :] = a[:, p].conj()
                a[q, :] = a[:, q].conj()
                a[p, p] = app - (s / c) * babs
                a[q, q] = aqq + (s / c) * babs
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * e.conjugate() * vq
                v[:, q] = s * e * vp + c * vq
        if not rotated:
            sweeps = sweep + 1
            break
    w = np.real(np.diagonal(a)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order], sweeps


def svdj(a_in, max_sweeps=100):
    g = np.array(a_in, dtype=np.complex128, copy=True)
    n = g.shape[1]
    v = np.eye(n, dtype=np.complex128)
    tiny = _EPS * _EPS * float(np.sum(np.abs(g) ** 2))
    sweeps = -1
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                gp = g[:, p].copy()
                gq = g[:, q].copy()
                alpha = float(np.vdot(gp, gp).real)
                beta = float(np.vdot(gq, gq).real)
                gamma = np.vdot(gp, gq)
                gabs = abs(gamma)
                if gabs <= tiny or gabs <= 4.0 * _EPS * math.sqrt(alpha * beta):
                    continue
                rotated = True
                e = gamma / gabs
                c, s = _rotation(alpha, beta, gabs)
                g[:, p] = c * gp - s * e.conjugate() * gq
                g[:, q] = s * e * gp + c * gq
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * e.conjugate() * vq
                v[:, q] = s * e * vp + c * vq
        if not rotated:
            sweeps = sweep + 1
            break
    return g, v, sweeps


def svdvals(a_in, max_sweeps=100):
    g, _, sweeps = svdj(a_in, max_sweeps)
    s = np.sqrt(np.sum(np.abs(g) ** 2, axis=0))
    return -np.sort(-s), sweeps


def haar_unitary(z_in):
    q = np.array(z_in, dtype=np.complex128, copy=True)
    n = q.shape[0]
    for j in range(n):
        for _ in range(2):
            for i in range(j):
                q[:, j] -= np.vdot(q[:, i], q[:, j]) * q[:, i]
        q[:, j] /= np.linalg.norm(q[:, j])
    return q
