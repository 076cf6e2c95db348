"""Eyring-Kramers transition times, symmetry factors and the spectral gap."""
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._validation import check_eps, check_gamma, check_size
from .errors import InputError
from .linalg import jacobi_eigh
from .model import constrained_hessian, morse_index, Params
from .symmetry import act, group_elements, stabiliser

ERROR_NOTE = "relative error O(eps^(1/2) |log eps|^(3/2)) not included"


@dataclass(frozen=True)
class HessianClosedForms:
    m: int
    det_min: Fraction
    det_saddle: Fraction
    lambda_minus: Fraction


def hessian_closed_forms(m):
    """Determinants at B_0 and at a C_1 saddle, and the saddle's negative eigenvalue (gamma = 0)."""
    if not isinstance(m, (int, np.integer)) or m < 4:
        raise InputError(f"closed forms need an integer M >= 4, got {m!r}")
    m = int(m)
    d = m * m - 3 * m + 3
    det_saddle = -Fraction(m ** (m - 2) * (m - 3) ** m * (2 * m - 3) ** (2 * m - 2), d ** (2 * m - 2))
    return HessianClosedForms(m, Fraction(2 ** (2 * m - 1)), det_saddle,
                              -Fraction((m - 3) * (2 * m - 3), 2 * d))


@dataclass
class RateEstimate:
    """An Arrhenius quantity ``symmetry_factor * prefactor * exp(arrhenius / eps)``.

    ``time`` is that expression and ``rate`` its inverse. The asymptotic
    error term is kept as a note, never folded into the value.
    """

    arrhenius: float
    prefactor: float
    symmetry_factor: object = Fraction(1)
    eps: float = None
    error_note: str = ERROR_NOTE
    meta: dict = field(default_factory=dict)

    def time_at(self, eps):
        eps = check_eps(eps)
        return float(self.symmetry_factor) * self.prefactor * math.exp(self.arrhenius / eps)

    def rate_at(self, eps):
        return 1.0 / self.time_at(eps)

    @property
    def time(self):
        return self.time_at(self.eps)

    @property
    def rate(self):
        return self.rate_at(self.eps)

    def to_dict(self):
        sf = self.symmetry_factor
        out = {"arrhenius": float(self.arrhenius), "prefactor": float(self.prefactor),
               "symmetry_factor": str(sf) if isinstance(sf, Fraction) else float(sf),
               "eps": self.eps, "error_note": self.error_note, "meta": _jsonable(self.meta)}
        if self.eps is not None:
            out["time"] = self.time
            out["rate"] = self.rate
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def _spectrum(point):
    h = constrained_hessian(Params(point.n, point.gamma), point.coords)
    return h, h.spectrum()


def kramers_time(minimum, saddle, eps=None):
    """Eyring-Kramers mean time to cross ``saddle`` starting from ``minimum``.

    Determinants and the negative eigenvalue come from the numerically
    assembled constrained Hessians.
    """
    if minimum.n != saddle.n or abs(minimum.gamma - saddle.gamma) > 1e-14:
        raise InputError("minimum and saddle must share n and gamma")
    hm, wm = _spectrum(minimum)
    hs, ws = _spectrum(saddle)
    if morse_index(hm) != 0 or morse_index(hs) != 1:
        raise InputError("kramers_time needs an index-0 minimum and an index-1 saddle")
    det_m, det_s = float(np.prod(wm)), float(np.prod(ws))
    lam = float(ws[0])
    prefactor = 2 * math.pi / abs(lam) * math.sqrt(abs(det_s) / det_m)
    barrier = saddle.potential - minimum.potential
    return RateEstimate(barrier, prefactor, Fraction(1), None if eps is None else check_eps(eps),
                        meta={"lambda_minus": lam, "det_min": det_m, "det_saddle": det_s,
                              "gamma": minimum.gamma})


def closed_form_prefactor(m):
    """Time prefactor 2 pi / |lambda_-| sqrt(|det z| / det x) for B_0 -> C_1 at gamma = 0."""
    h = hessian_closed_forms(m)
    return 2 * math.pi / abs(float(h.lambda_minus)) * math.sqrt(abs(float(h.det_saddle)) / float(h.det_min))


def _saddle_above(n, k):
    """A C_k saddle and its B_k endpoint."""
    from .landscape import connect_saddle, representative
    z = representative(n, k, "C")
    _, upper = connect_saddle(z)
    return upper, z


def symmetric_transition_time(n, k, eps=None):
    """Mean time from a symmetric start on B_k to B_{k-1} at gamma = 0.

    Every B_k point has M + k saddles towards B_{k-1}, so the single-saddle
    time is divided by M + k.
    """
    n = check_size(n)
    if not 1 <= k <= n // 6:
        raise InputError(f"k={k} out of range 1..{n // 6} for n={n}")
    upper, z = _saddle_above(n, k)
    est = kramers_time(upper, z, eps)
    est.symmetry_factor = Fraction(1, n // 2 + k)
    est.meta["k"] = k
    return est


# ------------------------------------------------------------ group theory


@dataclass(frozen=True)
class IrrepSpec:
    kind: str
    rho: int = 0
    sigma: int = 0
    tau: int = 0
    ell: int = 0
    parity: int = 0
    n: int = 0

    @property
    def dim(self):
        return 1 if self.kind == "one_dim" else 2

    @property
    def name(self):
        if self.kind == "one_dim":
            sym = {1: "+", -1: "-"}
            return f"pi_{sym[self.rho]}{sym[self.sigma]}{sym[self.tau]}"
        return f"pi_{self.ell},{'+' if self.parity > 0 else '-'}"

    def character(self, g):
        i, j, k = g
        if self.kind == "one_dim":
            return float(self.rho ** i * self.sigma ** j * self.tau ** k)
        if j:
            return 0.0
        return 2 * math.cos(2 * i * self.ell * math.pi / self.n) * self.parity ** k


def irreps(n):
    n = check_size(n)
    out = [IrrepSpec("one_dim", r, s, t, n=n) for r in (1, -1) for s in (1, -1) for t in (1, -1)]
    out += [IrrepSpec("two_dim", ell=ell, parity=par, n=n)
            for ell in range(1, n // 2) for par in (1, -1)]
    return out


def gap_representatives(n, gamma=0.0, step=0.01):
    """x* in A_2, the 3-interface saddle z* and its B_1 endpoint y*."""
    from .landscape import connect_saddle, continue_to_gamma, point_from_labels
    m = check_size(n) // 2
    lab = np.array([1] * (m - 1) + [0] + [2] * m)
    z = point_from_labels(lab, (1, m - 1, m), 1)
    x, y = connect_saddle(z)
    if gamma:
        x, y, z = (continue_to_gamma(p, gamma, step=step) for p in (x, y, z))
    return x, y, z


def activity(irrep, point_coords, decimals=8):
    """Dimension count alpha = mean of the character over the stabiliser."""
    stab = stabiliser(point_coords, decimals=decimals)
    return sum(irrep.character(h) for h in stab) / len(stab)


def active_orbits(irrep, n):
    """Whether the orbits of x* and y* are active for ``irrep``."""
    x, y, _ = gap_representatives(n)
    ax, ay = activity(irrep, x.coords), activity(irrep, y.coords)
    return {"O_x": bool(round(ax, 9) > 0), "O_y": bool(round(ay, 9) > 0),
            "alpha_x": round(ax, 9) + 0.0, "alpha_y": round(ay, 9) + 0.0}


def parity_rule(irrep, n):
    """Activity predicted from the parity of M alone."""
    m = n // 2
    if irrep.kind == "one_dim":
        r, s, c = irrep.rho, irrep.sigma, irrep.tau
        if m % 2 == 0:
            return {"O_x": s == 1 and c == 1, "O_y": r == s}
        return {"O_x": r == s == c, "O_y": s == 1}
    return {"O_x": (irrep.ell % 2 == 0) if irrep.parity > 0 else (irrep.ell % 2 == 1), "O_y": True}


@dataclass(frozen=True)
class ReducedBlock:
    l_xx: np.ndarray
    l_yy: np.ndarray
    l_xy: np.ndarray
    l_yx: np.ndarray
    q_x: float
    q_y: float

    def schur(self):
        return self.l_xx - self.l_xy @ np.linalg.solve(self.l_yy, self.l_yx)

    def gap_eigenvalue(self):
        s = self.schur()
        return float(jacobi_eigh(0.5 * (s + s.T))[0])


def reduced_block(irrep, q_x, q_y):
    """Two-orbit generator restricted to a two-dimensional irrep."""
    if irrep.kind != "two_dim":
        raise InputError("reduced blocks exist for two-dimensional irreps only")
    if q_x <= 0 or q_y <= 0:
        raise InputError("q_x and q_y must be positive")
    chi = irrep.character((1, 0, 0))
    return ReducedBlock(
        l_xx=-q_x * 4 * np.eye(2), l_yy=-q_y * 2 * np.eye(2),
        l_xy=q_x * np.array([[2 * (chi + 1), 2], [-2, 2]]),
        l_yx=q_y * np.array([[1, -1], [1, chi + 1]]), q_x=q_x, q_y=q_y)


def two_orbit_generator(n, q_x, q_y):
    """Jump generator on the orbits of x* and y* built by acting with the group.

    Every image g z* of the saddle joins g x* to g y*; x-states leave at
    rate ``q_x`` per saddle and y-states at rate ``q_y``. Entries are
    mpmath numbers when ``q_x``/``q_y`` are.
    """
    x, y, z = gap_representatives(n)
    keys, index, nx = [], {}, 0
    for base in (x.coords, y.coords):
        for g in group_elements(n):
            key = tuple(np.round(act(g, base), 9) + 0.0)
            if key not in index:
                index[key] = len(keys)
                keys.append(key)
        nx = nx or len(keys)
    size = len(keys)
    zero = q_x * 0
    gen = np.array([[zero] * size for _ in range(size)], dtype=object)
    seen = set()
    for g in group_elements(n):
        zk = tuple(np.round(act(g, z.coords), 9) + 0.0)
        if zk in seen:
            continue
        seen.add(zk)
        a = index[tuple(np.round(act(g, x.coords), 9) + 0.0)]
        b = index[tuple(np.round(act(g, y.coords), 9) + 0.0)]
        gen[a, b] += q_x
        gen[b, a] += q_y
    for i in range(size):
        gen[i, i] = -sum(gen[i, j] for j in range(size) if j != i)
    return gen, nx


def generator_spectrum(gen, nx, q_x, q_y):
    """Ascending eigenvalues of -L after symmetrising with the stationary weights."""
    size = gen.shape[0]
    w = [q_y if i < nx else q_x for i in range(size)]  # stationary weights up to a constant
    import mpmath
    sym = np.array([[-gen[i, j] * mpmath.sqrt(w[i]) / mpmath.sqrt(w[j]) for j in range(size)]
                    for i in range(size)], dtype=object)
    sym = (sym + sym.T) / 2
    return jacobi_eigh(sym, tol=mpmath.mpf(10) ** (-(mpmath.mp.dps - 5)), max_sweeps=200)


def exact_small_eigenvalue(n, ell, q_x, q_y):
    """Smaller root of the 2x2 problem of the two-orbit chain in Fourier mode ell."""
    s2 = math.sin(ell * math.pi / n) ** 2
    b = 4 * q_x + 2 * q_y
    disc = b * b - 32 * q_x * q_y * s2
    # product of the roots is 8 q_x q_y s2; avoids cancellation when q_x << q_y
    return 16 * q_x * q_y * s2 / (b + math.sqrt(disc))


def gap_rates(n, gamma, eps, step=0.01):
    """q_x and q_y as Eyring-Kramers rates out of x* and y* through z*."""
    x, y, z = gap_representatives(n, gamma, step)
    return 1 / kramers_time(x, z, eps).time, 1 / kramers_time(y, z, eps).time, (x, y, z)


def spectral_gap(n, gamma=0.0, eps=0.05, q_y=None, step=0.01):
    """Smallest nonzero eigenvalue of the jump generator on the minima.

    Returns a RateEstimate whose ``rate`` is the gap. The metadata holds the
    first-order coefficient of the barrier computed from the 3-interface
    saddle next to the published coefficient, the sharp and asymptotic
    prefactor forms, and the reduced-block eigenvalue for the given q_y.
    """
    n = check_size(n)
    gamma = check_gamma(gamma)
    eps = check_eps(eps)
    m = n // 2
    d = m * m - 3 * m + 3
    x, y, z = gap_representatives(n, gamma, step)
    est = kramers_time(x, z, eps)
    s2 = math.sin(math.pi / n) ** 2
    est.symmetry_factor = 1 / (4 * s2)
    q_x = 1 / kramers_time(x, z, eps).time
    if q_y is None:
        q_y = 1 / kramers_time(y, z, eps).time
    block = reduced_block(IrrepSpec("two_dim", ell=1, parity=-1, n=n), q_x, q_y)
    from .hierarchy import saddle_first_order_exact
    ratio = abs(est.meta["lambda_minus"]) * math.sqrt(est.meta["det_min"] / abs(est.meta["det_saddle"]))
    est.meta.update({
        "n": n, "gamma": gamma, "q_x": q_x, "q_y": q_y,
        "reduced_block_gap": -block.gap_eigenvalue(),
        "barrier_zeroth_order": Fraction(m * (m - 1), 4 * d),
        "barrier_first_order": saddle_first_order_exact((1, 1, 1), n) - 2,
        "barrier_first_order_published": Fraction(m * m - 6 * m + 6, 2 * d),
        "barrier_limit": "1/4 + gamma/2 (published)",
        "prefactor_ratio": ratio,
        "prefactor_ratio_closed_form": closed_form_ratio(m),
        "prefactor_ratio_limit": math.sqrt(2),
    })
    return est


def closed_form_ratio(m):
    """|lambda_-| sqrt(det x / |det z|) at gamma = 0 in closed form."""
    d = m * m - 3 * m + 3
    return math.sqrt(2) * (d / ((m - 1.5) * math.sqrt(m * (m - 3)))) ** (m - 2)


def rate_table(n, gamma, eps, step=0.01):
    """Eyring-Kramers rows for every B_k -> B_{k-1} and the B_0 -> B_1 climb."""
    from .landscape import connect_saddle, continue_to_gamma, representative
    rows = []
    for k in range(1, n // 6 + 1):
        z0 = representative(n, k, "C")
        lo, hi = connect_saddle(z0)
        if gamma:
            lo, hi, z0 = (continue_to_gamma(p, gamma, step=step) for p in (lo, hi, z0))
        for name, start, target, sym in ((f"B_{k}->B_{k - 1}", hi, f"B_{k - 1}", Fraction(1, n // 2 + k)),
                                         (f"B_{k - 1}->B_{k}", lo, f"B_{k}", Fraction(1))):
            est = kramers_time(start, z0, eps)
            est.symmetry_factor = sym
            rows.append({"transition": name, "n": n, "gamma": gamma, "eps": eps,
                         "saddle": f"C_{k}", "target": target, **est.to_dict()})
    return rows


def _state_permutations(n, x, y):
    """Index map of every group element on the states of O_x and O_y."""
    keys, index = [], {}
    for base in (x, y):
        for g in group_elements(n):
            key = tuple(np.round(act(g, base), 9) + 0.0)
            if key not in index:
                index[key] = len(keys)
                keys.append(key)
    perms = {}
    for g in group_elements(n):
        perms[g] = np.array([index[tuple(np.round(act(g, np.array(k)), 9) + 0.0)] for k in keys])
    return keys, perms


def irrep_decomposition(n, gamma=0.0, eps=0.05, q_y=None, step=0.01):
    """Per-irrep activity and slowest nonzero rate of the two-orbit jump chain.

    The generator on O_x and O_y is symmetrised with its stationary weights
    and restricted to the isotypic subspace of each irrep through the
    character projector. Rates are in double precision, which resolves
    q_x / q_y down to about 1e-12.
    """
    q_x, q_y_default, (x, y, z) = gap_rates(n, gamma, eps, step)
    q_y = q_y_default if q_y is None else float(q_y)
    x0, y0, _ = gap_representatives(n)
    gen, nx = two_orbit_generator(n, q_x, q_y)
    gen = gen.astype(float)
    size = gen.shape[0]
    w = np.array([q_y if i < nx else q_x for i in range(size)])
    sym = -gen * np.sqrt(w)[:, None] / np.sqrt(w)[None, :]
    sym = 0.5 * (sym + sym.T)
    keys, perms = _state_permutations(n, x0.coords, y0.coords)
    rows = []
    for ir in irreps(n):
        proj = np.zeros((size, size))
        for g, perm in perms.items():
            proj[perm, np.arange(size)] += ir.character(g)
        proj *= ir.dim / (4 * n)
        u, s, _ = np.linalg.svd(proj)
        basis = u[:, s > 0.5]
        eig = []
        if basis.shape[1]:
            eig = [float(v) for v in jacobi_eigh(basis.T @ sym @ basis)]
        nonzero = [v for v in eig if v > 1e-12 * q_x]
        act_ = active_orbits(ir, n)
        rows.append({"irrep": ir.name, "dim": ir.dim, "alpha_x": act_["alpha_x"],
                     "alpha_y": act_["alpha_y"], "subspace_dim": int(basis.shape[1]),
                     "slowest_rate": min(nonzero) if nonzero else None,
                     "has_zero_mode": len(nonzero) < len(eig)})
    return {"n": n, "gamma": gamma, "eps": eps, "q_x": q_x, "q_y": q_y, "irreps": rows}
