"""Stationary points of the constrained potential and their transition graph.

At gamma = 0 every stationary point has coordinates taking at most three
values alpha_0, alpha_1, alpha_2, the roots of x^3 - x = lambda, with
multiplicities (a0, a1, a2). Points at gamma > 0 are obtained by numerical
continuation.
"""
import itertools
import math
from dataclasses import dataclass, field, replace
from math import comb, factorial
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from ._validation import check_gamma, check_size
from .errors import ContinuationError, InputError, NumericError, UnsupportedSizeError
from .horseshoe import (LAMBDA_C, HorseshoeDomain, check_domain, cubic_roots,
                        horseshoe_inverse, horseshoe_map, newton_stationary,
                        periodic_solutions)
from .model import _full_hessian, _gradient, _potential, morse_index, restricted_hessian
from .symmetry import act, canonical_form, group_elements, stabiliser

__all__ = [
    "LAMBDA_C", "Triple", "AlphaRoots", "StationaryPoint", "TransitionGraph",
    "HorseshoeDomain", "enumerate_triples", "triple_index", "alpha_from_triple",
    "family_of", "family_triple", "k_max", "family_cardinality", "count_points",
    "point_from_labels", "points_of_triple", "family_points", "representative",
    "connect_saddle", "build_transition_graph", "continue_to_gamma",
    "sigma_brackets", "persistence_bound", "check_domain", "horseshoe_map",
    "horseshoe_inverse", "periodic_solutions", "cubic_roots",
]

FULL_ENUMERATION_MAX_N = 10


class Triple(NamedTuple):
    a0: int
    a1: int
    a2: int

    @property
    def n(self):
        return self.a0 + self.a1 + self.a2


def make_triple(a0, a1, a2):
    t = Triple(int(a0), int(a1), int(a2))
    if min(t) < 0 or not (t.a0 <= t.a1 <= t.a2):
        raise InputError(f"invalid triple {tuple(t)}")
    if 2 * t.a1 == t.a0 + t.a2:
        raise UnsupportedSizeError(f"degenerate triple {tuple(t)}")
    return t


def triple_index(t):
    """Morse index of the stationary points with occupancy triple ``t``."""
    if t.a0 == 0 and t.a1 == 0:
        return t.a2 - 1
    if 2 * t.a1 > t.a0 + t.a2:
        return t.a0
    return t.a2 - 1


def enumerate_triples(n):
    """All triples a0 <= a1 <= a2 summing to n, paired with their index."""
    n = check_size(n)
    out = []
    for a0 in range(n // 3 + 1):
        for a1 in range(a0, (n - a0) // 2 + 1):
            t = make_triple(a0, a1, n - a0 - a1)
            out.append((t, triple_index(t)))
    return out


@dataclass(frozen=True)
class AlphaRoots:
    alpha0: float
    alpha1: float
    alpha2: float
    lam: float
    sign: int

    @property
    def values(self):
        return (self.alpha0, self.alpha1, self.alpha2)


def alpha_from_triple(t):
    """Both sign branches of the root values attached to a triple."""
    t = make_triple(*t)
    if t.a0 == 0 and t.a1 == 0:
        raise InputError("the triple (0, 0, n) is the origin and has no root branches")
    denom = t.a0**2 + t.a1**2 + t.a2**2 - t.a0 * t.a1 - t.a0 * t.a2 - t.a1 * t.a2
    if denom <= 0:
        raise NumericError(f"nonpositive R for triple {tuple(t)}")
    sr = 1.0 / math.sqrt(denom)
    out = []
    for sign in (1, -1):
        a = (sign * (t.a1 - t.a2) * sr, sign * (t.a2 - t.a0) * sr, sign * (t.a0 - t.a1) * sr)
        # use the root with the largest magnitude to limit cancellation in lambda
        j = int(np.argmax(np.abs(a)))
        lam = a[j] ** 3 - a[j]
        out.append(AlphaRoots(a[0], a[1], a[2], lam, sign))
    return tuple(out)


def k_max(n):
    return n // 6


def family_triple(n, k, family):
    n = check_size(n)
    m = n // 2
    family = family.upper()
    if family == "B":
        if not 0 <= k <= k_max(n):
            raise InputError(f"k={k} out of range for B at n={n}")
        return make_triple(0, m - k, m + k)
    if family == "C":
        hi = max(k_max(n), 1 if n == 4 else 0)
        if not 1 <= k <= hi:
            raise InputError(f"k={k} out of range for C at n={n}")
        return make_triple(1, m - k, m + k - 1)
    raise InputError(f"unknown family {family!r}")


def family_of(t, n=None):
    """Family tag B_k, C_k or Other(index) for a triple."""
    n = t.n if n is None else n
    m = n // 2
    idx = triple_index(t)
    if idx == 0 and t.a0 == 0:
        return f"B_{m - t.a1}"
    if idx == 1 and t.a0 == 1 and t.a1 + t.a2 == n - 1 and t.a2 - m + 1 == m - t.a1:
        return f"C_{m - t.a1}"
    return f"Other({idx})"


def _branch_points_coincide(t):
    """True when the sign flip maps the + branch point set onto the - branch set."""
    plus, minus = alpha_from_triple(t)
    counts = (t.a0, t.a1, t.a2)
    a = sorted((round(v, 12), c) for v, c in zip(plus.values, counts) if c)
    b = sorted((round(v, 12), c) for v, c in zip(minus.values, counts) if c)
    return a == b


def count_points(t):
    """Number of distinct stationary points carrying the triple ``t``."""
    t = make_triple(*t)
    multinomial = factorial(t.n) // (factorial(t.a0) * factorial(t.a1) * factorial(t.a2))
    return multinomial * (1 if _branch_points_coincide(t) else 2)


def family_cardinality(n, k, family):
    """Closed-form size of B_k or C_k at gamma = 0."""
    t = family_triple(n, k, family)
    m = n // 2
    if n == 4 and family.upper() == "C":
        return count_points(t)
    if family.upper() == "B":
        return comb(2 * m, m) if k == 0 else 2 * comb(2 * m, m + k)
    return 2 * factorial(2 * m) // (factorial(m - k) * factorial(m + k - 1))


@dataclass(frozen=True)
class StationaryPoint:
    coords: np.ndarray
    triple: Triple
    family: str
    morse_index: int
    lam: float
    gamma: float
    potential: float
    labels: np.ndarray = field(repr=False)
    sign: int = 1
    residual: float = 0.0
    meta: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self):
        return self.coords.shape[0]

    def key(self, decimals=10):
        return tuple(np.round(self.coords, decimals) + 0.0)

    def canonical_key(self, decimals=8):
        return canonical_form(self.coords, decimals)[0]

    def to_dict(self):
        return {
            "coords": [float(v) for v in self.coords],
            "triple": list(self.triple),
            "family": self.family,
            "morse_index": int(self.morse_index),
            "lambda": float(self.lam),
            "gamma": float(self.gamma),
            "potential": float(self.potential),
            "residual": float(self.residual),
        }


def _residual(x, gamma, lam):
    g = _gradient(x, gamma)
    drift = -g + g.mean()
    return float(max(np.max(np.abs(drift - drift.mean())), 0.0)), float(np.max(np.abs(g - lam)))


def point_from_labels(labels, t, sign=1, gamma=0.0, check_index=True):
    """Build the gamma = 0 stationary point whose site j carries alpha_{labels[j]}."""
    t = make_triple(*t)
    labels = np.asarray(labels, dtype=int)
    counts = tuple(int(np.sum(labels == j)) for j in range(3))
    if counts != tuple(t):
        raise InputError(f"labels have counts {counts}, triple is {tuple(t)}")
    roots = alpha_from_triple(t)[0 if sign > 0 else 1]
    x = np.array(roots.values)[labels]
    x = x - x.mean()  # removes rounding drift only
    idx = triple_index(t)
    if check_index:
        idx = morse_index(restricted_hessian(x, 0.0))
    res, _ = _residual(x, 0.0, roots.lam)
    return StationaryPoint(coords=x, triple=t, family=family_of(t), morse_index=idx,
                           lam=roots.lam, gamma=0.0, potential=_potential(x, 0.0),
                           labels=labels, sign=int(sign), residual=res)


def _label_words(t):
    n = t.n
    sites = range(n)
    for zeros in itertools.combinations(sites, t.a0):
        rest = [s for s in sites if s not in zeros]
        for ones in itertools.combinations(rest, t.a1):
            lab = np.full(n, 2, dtype=int)
            lab[list(zeros)] = 0
            lab[list(ones)] = 1
            yield lab


def points_of_triple(t, check_index=False):
    """Every distinct stationary point with triple ``t`` at gamma = 0."""
    t = make_triple(*t)
    seen, out = set(), []
    for sign in (1, -1):
        for lab in _label_words(t):
            p = point_from_labels(lab, t, sign, check_index=check_index)
            k = p.key()
            if k not in seen:
                seen.add(k)
                out.append(p)
    return out


def family_points(n, k, family):
    return points_of_triple(family_triple(n, k, family))


def representative(n, k, family, sign=1):
    """A canonical member of B_k or C_k: labels sorted as 1..1 0 2..2."""
    t = family_triple(n, k, family)
    lab = np.array([1] * t.a1 + [0] * t.a0 + [2] * t.a2)
    return point_from_labels(lab, t, sign)


def connect_saddle(z):
    """The two minima joined by a C_k saddle at gamma = 0.

    The lower endpoint lies in B_{k-1} and gives the alpha'_0 site the value
    of the alpha'_1 sites; the upper endpoint lies in B_k and gives it the
    value of the alpha'_2 sites. On the 4-site ring both endpoints lie in B_0.
    """
    if not isinstance(z, StationaryPoint) or z.gamma != 0.0:
        raise InputError("connect_saddle expects a gamma = 0 StationaryPoint")
    fam = family_of(z.triple, z.n)
    if not fam.startswith("C_"):
        raise InputError(f"point with triple {tuple(z.triple)} is not in any C_k")
    n, m, k = z.n, z.n // 2, int(fam[2:])
    lab = z.labels
    s1 = np.sign(np.array(alpha_from_triple(z.triple)[0 if z.sign > 0 else 1].values)[1])
    if n == 4:
        # the alpha'_2 = 0 sites split into one +1 and one -1 site
        free = np.flatnonzero(lab == 2)
        base = np.round(z.coords).astype(int)
        ends = []
        for hi in (0, 1):
            x = base.astype(float).copy()
            x[free[hi]], x[free[1 - hi]] = 1.0, -1.0
            t = make_triple(0, 2, 2)
            newlab = np.where(x > 0, 1, 2)
            ends.append(point_from_labels(newlab, t, 1))
        ends.sort(key=lambda p: p.key())
        return ends[0], ends[1]
    out = []
    for target_k, to in ((k - 1, 1), (k, 2)):
        t = family_triple(n, target_k, "B")
        newlab = lab.copy()
        newlab[lab == 0] = to
        r = alpha_from_triple(t)
        sign = 1 if np.sign(r[0].alpha1) == s1 else -1
        p = point_from_labels(newlab, t, sign)
        if p.morse_index != 0 or p.residual > 1e-10:
            raise NumericError("transition rule produced a non-minimum endpoint")
        out.append(p)
    return out[0], out[1]


@dataclass
class TransitionGraph:
    n: int
    mode: str
    minima: list
    saddles: list
    edges: list  # (saddle index, lower minimum index, upper minimum index)
    multiplicity: dict = field(default_factory=dict)

    def degree(self, i):
        return sum((e[1] == i) + (e[2] == i) for e in self.edges)

    def family_edges(self):
        """Distinct (lower family, upper family, saddle family) classes."""
        return sorted({(self.minima[lo].family, self.minima[hi].family, self.saddles[s].family)
                       for s, lo, hi in self.edges})

    def to_networkx(self):
        import networkx as nx
        g = nx.MultiGraph()
        for i, p in enumerate(self.minima):
            g.add_node(i, family=p.family, potential=p.potential,
                       multiplicity=self.multiplicity.get(("min", i), 1))
        for s, lo, hi in self.edges:
            g.add_edge(lo, hi, saddle=s, family=self.saddles[s].family,
                       multiplicity=self.multiplicity.get(("saddle", s), 1))
        return g

    def to_dot(self):
        lines = [f"graph transition_n{self.n} {{"]
        for i, p in enumerate(self.minima):
            mult = self.multiplicity.get(("min", i))
            extra = f" x{mult}" if mult else ""
            lines.append(f'  m{i} [label="{p.family}{extra}"];')
        for s, lo, hi in self.edges:
            mult = self.multiplicity.get(("saddle", s))
            extra = f" x{mult}" if mult else ""
            lines.append(f'  m{lo} -- m{hi} [label="{self.saddles[s].family}{extra}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "n": self.n,
            "mode": self.mode,
            "minima": [dict(p.to_dict(), multiplicity=self.multiplicity.get(("min", i), 1))
                       for i, p in enumerate(self.minima)],
            "saddles": [dict(p.to_dict(), multiplicity=self.multiplicity.get(("saddle", i), 1))
                        for i, p in enumerate(self.saddles)],
            "edges": [{"saddle": s, "lower": lo, "upper": hi} for s, lo, hi in self.edges],
        }


def _families(n):
    bs = [family_triple(n, k, "B") for k in range(k_max(n) + 1)]
    cs = [family_triple(n, k, "C") for k in range(1, max(k_max(n), 1 if n == 4 else 0) + 1)]
    return bs, cs


def _orbit_representatives(t):
    """One point per symmetry orbit among the points with triple ``t``."""
    reps = {}
    for sign in (1, -1):
        seen_words = set()
        for lab in _label_words(t):
            s = "".join(map(str, lab))
            variants = [s[i:] + s[:i] for i in range(len(s))]
            rs = s[::-1]
            variants += [rs[i:] + rs[:i] for i in range(len(s))]
            w = min(variants)
            if w in seen_words:
                continue
            seen_words.add(w)
            p = point_from_labels(np.array([int(c) for c in w]), t, sign, check_index=False)
            key = p.canonical_key()
            if key not in reps:
                reps[key] = p
    return [reps[k] for k in sorted(reps)]


def _orbit_size(p):
    return len(group_elements(p.n)) // len(stabiliser(p.coords, decimals=8))


def build_transition_graph(n, mode="full"):
    """Minima of all B_k, saddles of all C_k and the saddle-endpoint edges.

    ``mode='full'`` lists every point (n <= 10); ``mode='orbits'`` keeps one
    representative per symmetry orbit and records orbit sizes.
    """
    n = check_size(n)
    bs, cs = _families(n)
    if mode == "full":
        if n > FULL_ENUMERATION_MAX_N:
            raise UnsupportedSizeError(
                f"full enumeration is limited to n <= {FULL_ENUMERATION_MAX_N}; use mode='orbits'")
        minima = [p for t in bs for p in points_of_triple(t)]
        saddles = [p for t in cs for p in points_of_triple(t)]
        index = {p.key(): i for i, p in enumerate(minima)}
        edges = []
        for s, z in enumerate(saddles):
            lo, hi = connect_saddle(z)
            edges.append((s, index[lo.key()], index[hi.key()]))
        return TransitionGraph(n, "full", minima, saddles, edges)
    if mode in ("orbits", "orbit-quotient"):
        minima = [p for t in bs for p in _orbit_representatives(t)]
        saddles = [p for t in cs for p in _orbit_representatives(t)]
        index = {p.canonical_key(): i for i, p in enumerate(minima)}
        mult = {}
        for i, p in enumerate(minima):
            mult[("min", i)] = _orbit_size(p)
        edges = []
        for s, z in enumerate(saddles):
            mult[("saddle", s)] = _orbit_size(z)
            lo, hi = connect_saddle(z)
            edges.append((s, index[lo.canonical_key()], index[hi.canonical_key()]))
        return TransitionGraph(n, "orbits", minima, saddles, edges, mult)
    raise InputError(f"unknown mode {mode!r}")


def persistence_bound(family, k, n, c=None):
    """Coupling below which the family is guaranteed to persist.

    B_0 has the explicit bound 7/3 - sqrt(5). For other families the bound is
    c (1/6 - k/n)^2 with an unspecified constant c; without ``c`` the bound is
    unknown and ``inf`` is returned so that continuation failures are reported
    empirically instead.
    """
    if family.upper() == "B" and k == 0:
        return 7.0 / 3.0 - math.sqrt(5.0)
    if c is None:
        return math.inf
    return c * (1.0 / 6.0 - k / n) ** 2


def _sigma(x_start, gamma, lam):
    x = newton_stationary(x_start, gamma, lam)
    return float(x.mean()), x


def _same_branch(x, ref, tol):
    return np.max(np.abs(x - ref)) <= tol


def _augmented_newton(x, gamma, lam, tol=1e-13, max_iter=50, max_halvings=30):
    """Newton on (grad V_gamma(x) - lambda 1, mean(x)) = 0 in the unknowns (x, lambda)."""
    n = x.shape[0]
    x = x.copy()

    def resid(x, lam):
        return np.concatenate([_gradient(x, gamma) - lam, [x.mean()]])

    r = resid(x, lam)
    rn = np.max(np.abs(r))
    for _ in range(max_iter):
        if rn <= tol:
            return x, lam
        jac = np.zeros((n + 1, n + 1))
        jac[:n, :n] = _full_hessian(x, gamma)
        jac[:n, n] = -1.0
        jac[n, :n] = 1.0 / n
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError as exc:
            raise NumericError("singular augmented Jacobian") from exc
        t = 1.0
        for _ in range(max_halvings + 1):
            xn, ln = x + t * step[:n], lam + t * step[n]
            rnew = resid(xn, ln)
            rnn = np.max(np.abs(rnew))
            if rnn < rn:
                break
            t *= 0.5
        else:
            if rn <= 100 * tol:
                return x, lam
            raise NumericError("augmented Newton step halving exhausted")
        x, lam, r, rn = xn, ln, rnew, rnn
    if rn <= 100 * tol:
        return x, lam
    raise NumericError(f"augmented Newton did not converge, residual {rn:.2e}")


def _solve_constrained(x_pred, gamma, lam_pred, x_ref, branch_tol=0.5):
    """Corrector for one continuation step.

    The augmented Newton iteration locates (x*, lambda*); the two-level
    formulation then confirms it: a sign change of lambda -> mean(x*(lambda))
    is bracketed around lambda* with fixed-lambda Newton solves, and the root
    is polished by Brent's method on that bracket.
    """
    x0, lam0 = _augmented_newton(x_pred, gamma, lam_pred)
    if not _same_branch(x0, x_ref, branch_tol):
        raise NumericError("corrector left the branch")
    d = 1e-9
    while True:
        sa, _ = _sigma(x0, gamma, lam0 - d)
        sb, _ = _sigma(x0, gamma, lam0 + d)
        if sa * sb <= 0:
            break
        d *= 4.0
        if d > 1e-3:
            raise NumericError("no sign change of the mean around the corrector's lambda")
    if sa == 0.0 or sb == 0.0:
        lam = lam0 - d if sa == 0.0 else lam0 + d
    else:
        lam = brentq(lambda l: _sigma(x0, gamma, l)[0], lam0 - d, lam0 + d, xtol=1e-16,
                     rtol=8.9e-16, maxiter=200)
    return newton_stationary(x0, gamma, lam), lam


_GROUP_TABLES = {}


def _group_table(n):
    """Index and sign arrays with act(g, x) == sign[g] * x[index[g]] for every g."""
    if n not in _GROUP_TABLES:
        gs = group_elements(n)
        probe = np.arange(1, n + 1, dtype=float)
        imgs = np.array([act(g, probe) for g in gs])
        _GROUP_TABLES[n] = (np.abs(imgs).astype(int) - 1, np.sign(imgs))
    return _GROUP_TABLES[n]


def _symmetry_count(x, tol=1e-7):
    idx, sgn = _group_table(x.shape[0])
    return int(np.sum(np.max(np.abs(sgn * x[idx] - x), axis=1) <= tol))


def _step_index(x, gamma):
    """Morse index for the per-step check, with LAPACK eigenvalues for speed."""
    h = restricted_hessian(x, gamma)
    return morse_index(replace(h, eigenvalues=np.linalg.eigvalsh(h.matrix)))


def continue_to_gamma(point0, gamma_target, step=0.01, persistence_c=None, sigma_tol=1e-12,
                      residual_tol=1e-10):
    """Follow a gamma = 0 stationary point to ``gamma_target``.

    Each gamma step solves grad V_gamma(x) = lambda 1 by Newton for fixed
    lambda, and a bracketed root search on lambda enforces mean(x) = 0.
    The Morse index must not change along the way, and neither may the
    symmetry group of the point: an isolated branch keeps its stabiliser,
    so a gain means Newton slid onto another branch at a pitchfork.
    """
    gamma_target = check_gamma(gamma_target)
    if not isinstance(point0, StationaryPoint):
        raise InputError("continue_to_gamma expects a StationaryPoint")
    if gamma_target == point0.gamma:
        return point0
    if point0.gamma != 0.0:
        raise InputError("continuation starts from a gamma = 0 point")
    fam = point0.family
    if fam[0] in "BC" and "_" in fam:
        bound = persistence_bound(fam[0], int(fam.split("_")[1]), point0.n, persistence_c)
        if gamma_target >= bound:
            raise InputError(f"gamma={gamma_target} is beyond the persistence bound {bound:.4g} "
                             f"of {fam}")
    x, lam, g_cur, last_good = point0.coords.copy(), point0.lam, 0.0, 0.0
    n_sym = _symmetry_count(x)
    prev = None  # (gamma, x, lambda) of the step before, for the secant predictor
    h, steps, domains = min(step, gamma_target), 0, []
    while g_cur < gamma_target:
        g = min(gamma_target, g_cur + h)
        if gamma_target - g < 1e-12:
            g = gamma_target
        if prev is not None:
            w = (g - g_cur) / (g_cur - prev[0])
            x_pred, lam_pred = x + w * (x - prev[1]), lam + w * (lam - prev[2])
        else:
            x_pred, lam_pred = x, lam
        try:
            xn, lam_n = _solve_constrained(x_pred, g, lam_pred, x)
            idx = _step_index(xn, g)
            if idx != point0.morse_index:
                raise ContinuationError(
                    f"Morse index of {fam} changed from {point0.morse_index} to {idx} "
                    f"at gamma={g:.4g}", last_good_gamma=last_good)
            if _symmetry_count(xn) != n_sym:
                raise ContinuationError(
                    f"{fam} branch ends in a symmetry-breaking bifurcation near gamma={g:.4g}",
                    last_good_gamma=last_good)
        except ContinuationError:
            raise
        except NumericError as exc:
            if h > 1e-4:
                h *= 0.5
                continue
            raise ContinuationError(f"continuation of {fam} failed at gamma={g:.4g}: {exc}",
                                    last_good_gamma=last_good) from exc
        sig = abs(xn.mean())
        res, _ = _residual(xn, g, lam_n)
        if sig > sigma_tol or res > residual_tol:
            raise ContinuationError(
                f"continuation of {fam} lost accuracy at gamma={g:.4g} "
                f"(mean {sig:.2e}, residual {res:.2e})", last_good_gamma=last_good)
        prev = (g_cur, x, lam)
        x, lam, g_cur, last_good = xn, lam_n, g, g
        steps += 1
        h = min(step, 2 * h)
        if abs(lam) <= LAMBDA_C and g <= 0.25:
            domains.append(check_domain(g, lam).in_D)
    res, _ = _residual(x, gamma_target, lam)
    meta = {"in_D_all_steps": all(domains), "steps": steps}
    return replace(point0, coords=x, gamma=float(gamma_target), lam=float(lam),
                   potential=_potential(x, gamma_target), residual=res, meta=meta)


def sigma_brackets(point0, gamma, lam_grid):
    """Sign changes of lambda -> mean(x*(gamma, lambda)) along a lambda grid.

    The branch is followed from ``point0`` by continuation in gamma at the
    grid point nearest the point's own multiplier, then along the grid.
    Returns the list of (lambda_left, lambda_right) brackets.
    """
    grid = np.sort(np.asarray(lam_grid, dtype=float))
    start = int(np.argmin(np.abs(grid - point0.lam)))
    x = point0.coords.copy()
    gs = np.linspace(0.0, gamma, max(1, int(math.ceil(gamma / 0.01))) + 1)[1:]
    for g in gs:
        x = newton_stationary(x, g, grid[start])
    sig = {start: x.mean()}
    for direction in (1, -1):
        xi = x.copy()
        i = start + direction
        while 0 <= i < grid.shape[0]:
            try:
                xi = newton_stationary(xi, gamma, grid[i])
            except NumericError:
                break
            sig[i] = xi.mean()
            i += direction
    idx = sorted(sig)
    return [(grid[a], grid[b]) for a, b in zip(idx, idx[1:])
            if b == a + 1 and sig[a] * sig[b] <= 0]
