"""Existence domain and horseshoe map for stationary points at gamma > 0.

Unconstrained stationary points with multiplier lambda are the period-N
orbits of the two-dimensional map T below.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericError
from .model import _full_hessian, _gradient

LAMBDA_C = 2.0 / (3.0 * math.sqrt(3.0))


def cubic_roots(lam):
    """Real roots (alpha_min, alpha_c, alpha_max) of x^3 - x - lam, |lam| < lambda_c."""
    if abs(lam) >= LAMBDA_C:
        raise InputError(f"|lambda| = {abs(lam)} must be below lambda_c = {LAMBDA_C}")
    # trigonometric form of the three real roots
    r = 2.0 / math.sqrt(3.0)
    phi = math.acos(max(-1.0, min(1.0, lam / LAMBDA_C))) / 3.0
    roots = sorted(r * math.cos(phi - 2.0 * math.pi * k / 3.0) for k in range(3))
    return tuple(roots)


def alpha_hat(lam):
    return cubic_roots(abs(lam))[2]


@dataclass(frozen=True)
class HorseshoeDomain:
    gamma: float
    lam: float
    in_D: bool
    in_Dprime: bool
    strip_bounds: dict
    sharp_strip_bounds: dict

    def contains(self, symbol, x, sharp=False):
        lo, hi = (self.sharp_strip_bounds if sharp else self.strip_bounds)[symbol]
        return lo <= x <= hi


def check_domain(gamma, lam):
    """Membership of (gamma, lambda) in D and D', plus Lemma-type strip bounds.

    ``strip_bounds`` are the width-sqrt(gamma) boxes, ``sharp_strip_bounds``
    the tighter closed forms that depend on the roots and on z0.
    """
    gamma, lam = float(gamma), float(lam)
    if not (0.0 <= gamma <= 0.25) or abs(lam) > LAMBDA_C:
        raise InputError("(gamma, lambda) outside [0, 1/4] x [-lambda_c, lambda_c]")
    in_D = abs(lam) + gamma * _alpha_hat_closed(lam) <= LAMBDA_C * (1.0 - gamma) ** 1.5
    in_Dp = gamma <= 2.0 / 9.0 and abs(lam) <= LAMBDA_C * (1.0 - 4.5 * gamma)
    if abs(lam) < LAMBDA_C:
        amin, ac, amax = cubic_roots(lam)
    else:
        amin = ac = amax = float("nan")
    w = math.sqrt(gamma)
    strips = {"-": (amin, amin + w), "0": (ac - w, ac + w), "+": (amax - w, amax)}
    z0 = math.sqrt((1.0 - gamma) / 3.0)
    sharp = {
        "-": (amin, amin + math.sqrt(gamma * (amax - amin) / (2 * z0 - amin))),
        "0": (ac - math.sqrt(gamma * (amax - ac) / (2 * z0 - ac)),
              ac + math.sqrt(gamma * (ac - amin) / (2 * z0 + ac))),
        "+": (amax - math.sqrt(gamma * (amax - amin) / (2 * z0 + amax)), amax),
    }
    return HorseshoeDomain(gamma, lam, bool(in_D), bool(in_Dp), strips, sharp)


def _alpha_hat_closed(lam):
    lam = min(abs(lam), LAMBDA_C)
    r = 2.0 / math.sqrt(3.0)
    return r * math.cos(math.acos(lam / LAMBDA_C) / 3.0)


def horseshoe_map(gamma, lam, point):
    """T(x, y) = (2x - y - (2/gamma) f(x), x) with f(x) = x - x^3 + lambda."""
    if gamma <= 0:
        raise NumericError("the horseshoe map is singular at gamma = 0")
    x, y = point
    f = x - x**3 + lam
    return (2.0 * x - y - 2.0 / gamma * f, x)


def horseshoe_inverse(gamma, lam, point):
    """T^{-1} = P T P where P swaps the two coordinates."""
    x, y = point
    u, v = horseshoe_map(gamma, lam, (y, x))
    return (v, u)


def newton_stationary(x0, gamma, lam, tol=1e-13, max_iter=60, max_halvings=30):
    """Newton on grad V_gamma(x) = lambda * 1 with step halving."""
    x = np.array(x0, dtype=float)
    r = _gradient(x, gamma) - lam
    rn = np.max(np.abs(r))
    for _ in range(max_iter):
        if rn <= tol:
            return x
        try:
            dx = np.linalg.solve(_full_hessian(x, gamma), -r)
        except np.linalg.LinAlgError as exc:
            raise NumericError("singular Hessian in Newton iteration") from exc
        t = 1.0
        for _ in range(max_halvings + 1):
            xn = x + t * dx
            rnew = _gradient(xn, gamma) - lam
            rnn = np.max(np.abs(rnew))
            if rnn < rn or rnn <= tol:
                break
            t *= 0.5
        else:
            raise NumericError("Newton step halving exhausted")
        x, r, rn = xn, rnew, rnn
    if rn <= tol * 10:
        return x
    raise NumericError(f"Newton did not converge, residual {rn:.3e}")


def periodic_solutions(n, gamma, lam, gamma_step=0.01, min_distance=1e-6):
    """Solve grad V_gamma = lambda * 1 from every word over the three roots.

    Each of the 3^n symbol words seeds a Newton continuation in gamma.
    Returns the solutions with pairwise max-norm distance above ``min_distance``.
    """
    roots = np.array(cubic_roots(lam))
    steps = max(1, int(math.ceil(gamma / gamma_step - 1e-12)))
    gammas = np.linspace(0.0, gamma, steps + 1)[1:]
    found = []
    for word in itertools.product(range(3), repeat=n):
        x = roots[list(word)]
        for g in gammas:
            x = newton_stationary(x, g, lam)
        found.append(x)
    sols = np.array(found)
    keep = []
    for s in sols:
        if all(np.max(np.abs(s - k)) > min_distance for k in keep):
            keep.append(s)
    return np.array(keep)
