"""Potential, constrained drift and constrained Hessian of the ring model.

The potential on a periodic ring of ``n`` sites is

    V(x) = sum_i U(x_i) + gamma/4 * sum_i (x_{i+1} - x_i)^2,
    U(t) = t^4/4 - t^2/2,

and the dynamics is restricted to the zero-sum hyperplane S.
"""
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_eps, check_gamma, check_size, check_vector
from .errors import DegeneratePointError, InputError
from .linalg import jacobi_eigh

DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class Params:
    n: int
    gamma: float = 0.0
    eps: float = 0.05

    def __post_init__(self):
        object.__setattr__(self, "n", check_size(self.n))
        object.__setattr__(self, "gamma", check_gamma(self.gamma))
        object.__setattr__(self, "eps", check_eps(self.eps))

    @property
    def m(self):
        return self.n // 2


@dataclass(frozen=True)
class LatticeConfig:
    """A point of S. Construction enforces the zero-sum constraint."""

    values: np.ndarray

    def __post_init__(self):
        v = check_vector(self.values, name="values")
        if abs(v.sum()) > 1e-12 * max(1.0, np.abs(v).sum()):
            raise InputError(f"configuration is not in S: sum = {v.sum():.3e}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


@dataclass(frozen=True)
class HessianView:
    matrix: np.ndarray
    basis: np.ndarray
    eigenvalues: np.ndarray = field(default=None, repr=False)

    def spectrum(self):
        if self.eigenvalues is None:
            object.__setattr__(self, "eigenvalues", jacobi_eigh(self.matrix))
        return self.eigenvalues

    def determinant(self):
        return float(np.prod(self.spectrum()))


# Kernels without lattice-size validation. The horseshoe count runs on odd
# rings, so these accept any length.

def _potential(x, gamma):
    dx = np.roll(x, -1) - x
    return float(np.sum(0.25 * x**4 - 0.5 * x**2) + 0.25 * gamma * np.sum(dx * dx))


def _gradient(x, gamma):
    # slicing instead of np.roll: this runs inside every Newton iteration
    lap = -2.0 * x
    lap[:-1] += x[1:]
    lap[-1] += x[0]
    lap[1:] += x[:-1]
    lap[0] += x[-1]
    return x**3 - x - 0.5 * gamma * lap


def _full_hessian(x, gamma):
    n = x.shape[0]
    h = np.diag(3.0 * x**2 - 1.0 + gamma)
    idx = np.arange(n)
    h[idx, (idx + 1) % n] -= 0.5 * gamma
    h[idx, (idx - 1) % n] -= 0.5 * gamma
    return h


def _params_and_x(params, x):
    if not isinstance(params, Params):
        raise InputError("params must be a Params instance")
    return check_vector(x, params.n)


def potential(params, x):
    """Energy V_gamma(x) with periodic wraparound."""
    return _potential(_params_and_x(params, x), params.gamma)


def unconstrained_gradient(params, x):
    return _gradient(_params_and_x(params, x), params.gamma)


def project_to_S(v):
    """Orthogonal projection onto the zero-sum hyperplane."""
    v = check_vector(v, name="v")
    return v - v.mean()


def constrained_drift(params, x):
    """Drift of the constrained dynamics: -grad V plus its mean, mean removed last."""
    g = unconstrained_gradient(params, x)
    d = -g + g.mean()
    return d - d.mean()


def full_hessian(params, x):
    return _full_hessian(_params_and_x(params, x), params.gamma)


def basis_of_S(n):
    """Orthonormal basis of S from mean-removed e_1..e_{n-1} by Gram-Schmidt.

    Returns an (n, n-1) matrix whose columns span S.
    """
    vecs = np.eye(n)[:, : n - 1] - 1.0 / n
    basis = np.zeros_like(vecs)
    for k in range(n - 1):
        v = vecs[:, k].copy()
        for _ in range(2):  # reorthogonalise once for stability
            v -= basis[:, :k] @ (basis[:, :k].T @ v)
        basis[:, k] = v / np.linalg.norm(v)
    return basis


def restricted_hessian(x, gamma, basis=None):
    x = np.asarray(x, dtype=float)
    if basis is None:
        basis = basis_of_S(x.shape[0])
    h = basis.T @ _full_hessian(x, gamma) @ basis
    h = 0.5 * (h + h.T)
    return HessianView(matrix=h, basis=basis)


def constrained_hessian(params, x, basis=None):
    """Hessian of V_gamma restricted to S in an orthonormal basis of S."""
    x = _params_and_x(params, x)
    if basis is not None:
        basis = np.asarray(basis, dtype=float)
        if basis.shape != (params.n, params.n - 1):
            raise InputError("basis must have shape (n, n-1)")
    return restricted_hessian(x, params.gamma, basis)


def morse_index(hessian, tol=DEGENERACY_TOL):
    """Number of negative eigenvalues; raises on a near-zero eigenvalue."""
    w = hessian.spectrum() if isinstance(hessian, HessianView) else jacobi_eigh(hessian)
    w = np.asarray(w, dtype=float)
    if np.any(np.abs(w) <= tol):
        raise DegeneratePointError(
            f"degenerate stationary point: min |eigenvalue| = {np.min(np.abs(w)):.3e}")
    return int(np.sum(w < -tol))
