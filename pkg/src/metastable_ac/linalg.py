"""Cyclic Jacobi eigensolver for small dense symmetric matrices.

Works on float arrays and on object arrays of ``mpmath.mpf`` entries, which
is how the generator oracle resolves eigenvalues spanning many decades.
"""
import math

import numpy as np

from .errors import InputError, NumericError


def _scalar_ops(a):
    if a.dtype == object:
        import mpmath
        return mpmath.sqrt, mpmath.mpf(0)
    return math.sqrt, 0.0


def off_norm(a):
    mask = ~np.eye(a.shape[0], dtype=bool)
    vals = a[mask]
    if a.dtype == object:
        import mpmath
        return mpmath.sqrt(sum(v * v for v in vals))
    return float(np.sqrt(np.sum(vals * vals)))


def jacobi_eigh(a, tol=1e-13, max_sweeps=100, vectors=False):
    """Eigen-decompose a symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : (n, n) array_like
        Symmetric matrix. Object dtype keeps arbitrary precision entries.
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm is at most
        ``tol`` times the Frobenius norm of ``a``.
    vectors : bool
        Also accumulate the eigenvectors.

    Returns
    -------
    w : ndarray
        Eigenvalues in ascending order.
    v : ndarray, optional
        Orthonormal eigenvectors as columns.
    """
    a = np.array(a, dtype=object if np.asarray(a).dtype == object else float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError("jacobi_eigh expects a square matrix")
    n = a.shape[0]
    sqrt, zero = _scalar_ops(a)
    scale = sqrt(sum(v * v for v in a.ravel())) if a.dtype == object else float(np.linalg.norm(a))
    asym = a - a.T
    if (off_norm(asym) if n > 1 else 0) > 1e-12 * (scale if scale else 1):
        raise InputError("jacobi_eigh expects a symmetric matrix")
    v = np.eye(n, dtype=a.dtype) if vectors else None
    if a.dtype == object and vectors:
        v = np.array([[zero + (1 if i == j else 0) for j in range(n)] for i in range(n)], dtype=object)
    threshold = tol * (scale if scale else 1)
    for _ in range(max_sweeps):
        if off_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0:
                    continue
                app, aqq = a[p, p], a[q, q]
                diff = aqq - app
                if abs(apq) * 1e150 < abs(diff):
                    t = apq / diff  # tiny rotation; theta would overflow
                else:
                    theta = diff / (2 * apq)
                    sign = 1 if theta >= 0 else -1
                    t = sign / (abs(theta) + sqrt(theta * theta + 1))
                c = 1 / sqrt(t * t + 1)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = zero
                if vectors:
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = c * vp - s * vq
                    v[:, q] = s * vp + c * vq
    else:
        if off_norm(a) > threshold:
            raise NumericError("Jacobi iteration did not converge")
    w = np.array([a[i, i] for i in range(n)], dtype=a.dtype)
    order = sorted(range(n), key=lambda i: w[i])
    w = w[order]
    if vectors:
        return w, v[:, order]
    return w


def symmetric_eigvals(a, tol=1e-13):
    return jacobi_eigh(a, tol=tol)
