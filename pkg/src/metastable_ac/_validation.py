import numbers

import numpy as np

from .errors import InputError, UnsupportedSizeError


def check_size(n):
    """Validate a lattice size: even, at least 4, not a multiple of 3."""
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise InputError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < 4 or n % 2:
        raise InputError(f"n must be even and >= 4, got {n}")
    if n % 3 == 0:
        raise UnsupportedSizeError(
            f"n={n} is divisible by 3; degenerate stationary families are not supported")
    return n


def check_gamma(gamma):
    gamma = float(gamma)
    if not np.isfinite(gamma) or gamma < 0:
        raise InputError(f"gamma must be finite and >= 0, got {gamma}")
    return gamma


def check_eps(eps):
    eps = float(eps)
    if not np.isfinite(eps) or eps <= 0:
        raise InputError(f"eps must be finite and > 0, got {eps}")
    return eps


def check_vector(x, n=None, name="x"):
    """Return ``x`` as a finite 1-d float array, optionally of length ``n``."""
    arr = np.asarray(getattr(x, "values", x), dtype=float)
    if arr.ndim != 1:
        raise InputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise InputError(f"{name} has length {arr.shape[0]}, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite entries")
    return arr


def check_bits(bits):
    """Validate a balanced +-1 word and return it as an int8 array."""
    arr = np.asarray(bits)
    if arr.ndim != 1 or arr.size < 4 or arr.size % 2:
        raise InputError("bits must be a word of even length >= 4")
    if not np.all((arr == 1) | (arr == -1)):
        raise InputError("bits must contain only +1 and -1")
    if int(arr.sum()) != 0:
        raise InputError("bits must contain as many +1 as -1 entries")
    return arr.astype(np.int8)
