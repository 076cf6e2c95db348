"""The symmetry group D_N x Z_2 of the ring potential.

An element is a triple ``(i, j, k)`` standing for r^i s^j c^k, where
r(x)_l = x_{l+1} is the cyclic shift, s reverses the ring and c flips
every sign. Elements act by applying c^k first, then s^j, then r^i.
"""
import itertools

import numpy as np


def group_elements(n):
    return [(i, j, k) for i in range(n) for j in (0, 1) for k in (0, 1)]


def act(g, x):
    i, j, k = g
    y = np.asarray(x)
    if k:
        y = -y
    if j:
        y = y[::-1]
    return np.roll(y, -i)


def compose(g, h, n):
    """Return the element g*h (apply h first) by tracking a generic vector."""
    probe = np.arange(1, n + 1, dtype=float) * 1.0
    target = act(g, act(h, probe))
    for e in group_elements(n):
        if np.array_equal(act(e, probe), target):
            return e
    raise AssertionError("composition left the group")


def stabiliser(x, n=None, decimals=10):
    x = np.asarray(x, dtype=float)
    n = x.shape[0] if n is None else n
    key = np.round(x, decimals)
    return [g for g in group_elements(n) if np.array_equal(np.round(act(g, x), decimals), key)]


def _word(x, decimals):
    return tuple(np.round(np.asarray(x, dtype=float), decimals) + 0.0)


def canonical_form(x, decimals=10):
    """Lexicographically smallest image of ``x`` over the whole group.

    Returns the canonical word (a tuple) and one group element mapping ``x``
    onto it. Rounding to ``decimals`` makes float words comparable.
    """
    x = np.asarray(x, dtype=float)
    best, best_g = None, None
    for g in group_elements(x.shape[0]):
        w = _word(act(g, x), decimals)
        if best is None or w < best:
            best, best_g = w, g
    return best, best_g


def orbit(x, decimals=10):
    """All distinct images of ``x`` as rounded tuples, in sorted order."""
    x = np.asarray(x, dtype=float)
    return sorted({_word(act(g, x), decimals) for g in group_elements(x.shape[0])})


def balanced_words(n):
    """Every +-1 word of length n with n/2 entries of each sign."""
    m = n // 2
    out = []
    for ones in itertools.combinations(range(n), m):
        w = -np.ones(n, dtype=np.int8)
        w[list(ones)] = 1
        out.append(w)
    return out


def word_orbits(n):
    """Orbit representatives (canonical words) of balanced words with orbit sizes."""
    seen = {}
    for w in balanced_words(n):
        key, _ = canonical_form(w, decimals=0)
        seen[key] = seen.get(key, 0) + 1
    return seen
