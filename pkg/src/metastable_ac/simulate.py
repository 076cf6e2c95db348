"""Stochastic simulation: the constrained SDE and the interface jump chain.

Randomness follows one contract everywhere: replica ``r`` of a run seeded
with ``seed`` draws from ``Generator(Philox(SeedSequence([seed, r])))``, so
results do not depend on how replicas are batched.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_bits, check_eps, check_vector
from .errors import BlowUpError, InputError, NumericError
from .hierarchy import TYPE_CODES, classify_B0_state, h0_exact, table_moves
from .model import Params, constrained_drift, project_to_S
from .outputs import csv_text

MAX_DT = 0.01
MASS_TOL = 1e-12


def replica_rng(seed, replica=0):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(replica)])))


def step_em(params, x, dt, rng, eps=None):
    """One projected Euler-Maruyama step of dx = b(x) dt + sqrt(2 eps) dW on S."""
    if not 0 < dt <= MAX_DT:
        raise InputError(f"dt must lie in (0, {MAX_DT}], got {dt}")
    eps = params.eps if eps is None else eps
    x = check_vector(x, params.n)
    noise = project_to_S(rng.standard_normal(params.n)) if eps > 0 else 0.0
    y = x + constrained_drift(params, x) * dt + math.sqrt(2 * eps * dt) * noise
    y = y - y.mean()
    if not np.all(np.isfinite(y)):
        raise BlowUpError("non-finite state", step=0)
    return y


def _drift_batch(x, gamma):
    lap = np.roll(x, 1, axis=1) - 2 * x + np.roll(x, -1, axis=1)
    g = x ** 3 - x - 0.5 * gamma * lap
    return g.mean(axis=1, keepdims=True) - g


class _NormalStream:
    """Block-buffered standard normals from one replica's generator."""

    def __init__(self, rng, n, block=4096):
        self.rng, self.n, self.block = rng, n, block
        self.buf, self.pos = None, block

    def next(self):
        if self.pos == self.block:
            self.buf = self.rng.standard_normal((self.block, self.n))
            self.pos = 0
        self.pos += 1
        return self.buf[self.pos - 1]


# ------------------------------------------------------------------- SDE


@dataclass
class SdeRun:
    params: Params
    dt: float
    steps: int
    seed: int
    record_stride: int
    trajectory: list = field(default_factory=list)  # (t, x) pairs
    labels: list = field(default_factory=list)      # (t, p, label) rows

    def max_mass_error(self):
        return max((abs(float(np.sum(x))) for _, x in self.trajectory), default=0.0)

    def trajectory_csv(self):
        header = ["t"] + [f"i{k + 1}" for k in range(self.params.n)]
        return csv_text(header, ([repr(t)] + [repr(float(v)) for v in x] for t, x in self.trajectory))

    def labels_csv(self):
        return csv_text(["t", "p", "label"], ([repr(t), p, lab] for t, p, lab in self.labels))


def run_sde(params, x0, steps, dt=MAX_DT, seed=0, record_stride=1, classify=False):
    """Integrate one trajectory; record every ``record_stride`` steps."""
    if not 0 < dt <= MAX_DT:
        raise InputError(f"dt must lie in (0, {MAX_DT}], got {dt}")
    x = check_vector(x0, params.n).copy()
    if abs(x.sum()) > MASS_TOL:
        raise InputError("x0 must lie on the zero-sum hyperplane")
    stream = _NormalStream(replica_rng(seed, 0), params.n)
    run = SdeRun(params, dt, steps, seed, record_stride)
    scale = math.sqrt(2 * params.eps * dt)
    xb = x[None, :]

    def record(k, xv):
        t = k * dt
        run.trajectory.append((t, xv.copy()))
        if classify:
            lab = classify_configuration(xv, params.gamma)
            run.labels.append((t, lab.p if lab.p is not None else "", lab.name))

    record(0, x)
    for k in range(1, steps + 1):
        xi = stream.next()
        xb = xb + _drift_batch(xb, params.gamma) * dt + scale * (xi - xi.mean())
        xb = xb - xb.mean(axis=1, keepdims=True)
        if not np.all(np.isfinite(xb)):
            raise BlowUpError(f"non-finite state at step {k}", step=k)
        if k % record_stride == 0:
            record(k, xb[0])
    return run


@dataclass(frozen=True)
class ConfigLabel:
    kind: str          # "B0", "family" or "transient"
    name: str
    state: object = None

    @property
    def p(self):
        return None if self.state is None else self.state.p


_FAMILY_CACHE = {}


def _family_multisets(n, gamma):
    key = (n, round(gamma, 12))
    if key not in _FAMILY_CACHE:
        from .landscape import continue_to_gamma, representative
        out = []
        for k in range(1, n // 6 + 1):
            for sign in (1, -1):
                p = representative(n, k, "B", sign)
                if gamma:
                    p = continue_to_gamma(p, gamma)
                out.append((f"B_{k}", np.sort(p.coords)))
        _FAMILY_CACHE[key] = out
    return _FAMILY_CACHE[key]


def classify_configuration(x, gamma=0.0, b0_tol=0.3, family_tol=0.1):
    """Nearest stable family of a configuration.

    Within ``b0_tol`` of a +-1 word with balanced signs the word itself is
    returned; otherwise the sorted coordinates are compared with those of
    the B_k families (k >= 1); anything else is transient.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    s = np.where(x >= 0, 1, -1)
    if np.max(np.abs(x - s)) < b0_tol and s.sum() == 0:
        st = classify_B0_state(s)
        return ConfigLabel("B0", "".join("+" if v > 0 else "-" for v in s), st)
    if n % 2 == 0 and n % 3 and n >= 4:
        xs = np.sort(x)
        for name, ref in _family_multisets(n, gamma):
            if np.max(np.abs(xs - ref)) < family_tol:
                return ConfigLabel("family", name)
    return ConfigLabel("transient", "transient")


@dataclass
class ExitTimeStats:
    eps: float
    replicas: int
    times: np.ndarray
    censored: np.ndarray
    dt: float

    @property
    def finished(self):
        return self.times[~self.censored]

    @property
    def mean(self):
        f = self.finished
        return float(f.mean()) if f.size else math.nan

    @property
    def stderr(self):
        f = self.finished
        return float(f.std(ddof=1) / math.sqrt(f.size)) if f.size > 1 else math.nan

    def to_dict(self):
        def num(v):
            return None if math.isnan(v) else v
        return {"eps": self.eps, "replicas": self.replicas, "mean": num(self.mean),
                "stderr": num(self.stderr), "censored": int(self.censored.sum()), "dt": self.dt}


@dataclass
class ExitTimeStudy:
    stats: list
    slope: float
    intercept: float

    def to_dict(self):
        return {"slope": None if math.isnan(self.slope) else self.slope,
                "intercept": None if math.isnan(self.intercept) else self.intercept,
                "per_eps": [s.to_dict() for s in self.stats]}


class _TargetSet:
    """Max-norm balls around target points, located through sign patterns."""

    def __init__(self, targets, radius):
        t = np.atleast_2d(np.asarray(targets, dtype=float))
        self.points, self.radius = t, radius
        self.n = t.shape[1]
        self.fast = bool(np.min(np.abs(t)) > radius) and self.n <= 24
        if self.fast:
            self.weights = 1 << np.arange(self.n, dtype=np.int64)
            codes = (t > 0).astype(np.int64) @ self.weights
            if np.unique(codes).size != codes.size:
                self.fast = False
            else:
                self.lookup = np.full(1 << self.n, -1, dtype=np.int64)
                self.lookup[codes] = np.arange(len(t))

    def hit(self, x):
        if self.fast:
            idx = self.lookup[(x > 0).astype(np.int64) @ self.weights]
            ok = idx >= 0
            out = np.zeros(len(x), dtype=bool)
            if ok.any():
                d = np.max(np.abs(x[ok] - self.points[idx[ok]]), axis=1)
                out[ok] = d <= self.radius
            return out
        d = np.max(np.abs(x[:, None, :] - self.points[None, :, :]), axis=2)
        return np.min(d, axis=1) <= self.radius


def _exit_chunk(params, starts, target, replicas, seed, dt, max_steps, radius, block):
    n = params.n
    rngs = [replica_rng(seed, r) for r in replicas]
    x = np.empty((len(replicas), n))
    for a, rng in enumerate(rngs):
        x[a] = starts[rng.integers(len(starts))] if len(starts) > 1 else starts[0]
    times = np.full(len(replicas), math.nan)
    alive = np.arange(len(replicas))
    scale = math.sqrt(2 * params.eps * dt)
    step = 0
    while alive.size and step < max_steps:
        nb = min(block, max_steps - step)
        noise = np.stack([rngs[a].standard_normal((nb, n)) for a in alive], axis=1)
        noise -= noise.mean(axis=2, keepdims=True)
        xa = x[alive]
        done_at = np.full(alive.size, -1)
        for s in range(nb):
            xa = xa + _drift_batch(xa, params.gamma) * dt + scale * noise[s]
            xa -= xa.mean(axis=1, keepdims=True)
            hit = target.hit(xa) & (done_at < 0)
            if hit.any():
                done_at[hit] = step + s + 1
        if not np.all(np.isfinite(xa)):
            raise BlowUpError("non-finite state in exit-time run", step=step + nb)
        x[alive] = xa
        fin = done_at >= 0
        times[alive[fin]] = done_at[fin] * dt
        alive = alive[~fin]
        step += nb
    return times


def mean_exit_time(params, start, targets, eps_list, replicas=200, seed=0, dt=MAX_DT,
                   max_steps=10_000_000, radius=0.2, threads=1, block=256):
    """Mean first time to enter a max-norm ball of radius ``radius`` around a target.

    Parameters
    ----------
    start : array_like
        One start point, or several (each replica picks one uniformly).
    targets : array_like
        Target points, shape (T, n).
    eps_list : sequence of float
        Noise intensities; ``params.eps`` is ignored.

    Returns
    -------
    ExitTimeStudy
        Per-eps statistics and the least-squares slope of log(mean time)
        against 1/eps. Replicas that exceed ``max_steps`` are censored and
        left out of the means.
    """
    starts = np.atleast_2d(np.asarray(getattr(start, "coords", start), dtype=float))
    if starts.shape[1] != params.n:
        raise InputError("start has the wrong size")
    target = _TargetSet(targets, radius)
    if target.n != params.n:
        raise InputError("targets have the wrong size")
    stats = []
    for e_idx, eps in enumerate(eps_list):
        eps = check_eps(eps)
        p_eps = Params(params.n, params.gamma, eps)
        chunks = np.array_split(np.arange(replicas), max(1, int(threads)))
        # replica streams are keyed by (seed, eps index, replica) so runs at
        # different eps never share noise
        sub_seed = int(seed) * 1000 + e_idx
        args = [(p_eps, starts, target, list(c), sub_seed, dt, max_steps, radius, block)
                for c in chunks if len(c)]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=int(threads)) as pool:
                parts = list(pool.map(lambda a: _exit_chunk(*a), args))
        else:
            parts = [_exit_chunk(*a) for a in args]
        times = np.concatenate(parts)
        stats.append(ExitTimeStats(eps, replicas, np.nan_to_num(times, nan=max_steps * dt),
                                   np.isnan(times), dt))
    slope, intercept = arrhenius_fit([s.eps for s in stats], [s.mean for s in stats])
    return ExitTimeStudy(stats, slope, intercept)


def arrhenius_fit(eps, mean_times):
    """Least-squares slope and intercept of log(time) against 1/eps."""
    inv = 1 / np.asarray(eps, dtype=float)
    y = np.log(np.asarray(mean_times, dtype=float))
    if inv.size < 2 or not np.all(np.isfinite(y)):
        return math.nan, math.nan
    a = np.vstack([inv, np.ones_like(inv)]).T
    (slope, intercept), *_ = np.linalg.lstsq(a, y, rcond=None)
    return float(slope), float(intercept)


# ------------------------------------------------------------ jump chain


@dataclass
class RateModel:
    """Rates kappa * exp(-(H0 + gamma H1) / eps) for every particle/hole exchange."""

    n: int
    gamma: float
    eps: float
    kappa: float = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        check_eps(self.eps)
        if self.kappa is None:
            from .rates import closed_form_prefactor
            self.kappa = 1 / closed_form_prefactor(self.n // 2)
        self.base = self.kappa * math.exp(-float(h0_exact(self.n)) / self.eps)

    def moves(self, bits):
        key = bytes(np.asarray(bits, dtype=np.int8))
        hit = self._cache.get(key)
        if hit is None:
            i, j, code, dp, h1 = table_moves(bits)
            rate = self.base * np.exp(-self.gamma * h1 / self.eps)
            hit = (i, j, code, dp, rate, np.cumsum(rate))
            if len(self._cache) < 200_000:
                self._cache[key] = hit
        return hit


def kmc_step(state, rate_table, rng):
    """One Gillespie step: exponential waiting time, then a move chosen by rate.

    ``rate_table`` is a RateModel or a sequence of (rate, next_state) pairs.
    """
    if isinstance(rate_table, RateModel):
        b = np.asarray(state.bits if hasattr(state, "bits") else state, dtype=np.int8)
        i, j, code, dp, rate, cum = rate_table.moves(b)
        if cum.size == 0:
            raise NumericError("no move available")
        total = float(cum[-1])
        wait = rng.exponential(1 / total)
        k = min(int(np.searchsorted(cum, rng.random() * total, side="right")), cum.size - 1)
        nb = b.copy()
        nb[i[k]], nb[j[k]] = -1, 1
        return wait, nb, (int(i[k]), int(j[k]), TYPE_CODES[code[k]], int(dp[k]))
    pairs = list(rate_table)
    if not pairs:
        raise NumericError("no move available")
    rates = np.array([r for r, _ in pairs], dtype=float)
    cum = np.cumsum(rates)
    wait = rng.exponential(1 / cum[-1])
    k = min(int(np.searchsorted(cum, rng.random() * cum[-1], side="right")), len(pairs) - 1)
    return wait, pairs[k][1], None


@dataclass
class JumpRun:
    initial: tuple
    n: int
    gamma: float
    eps: float
    seed: int
    events: list = field(default_factory=list)  # (t_wait, i, j, type, delta_p)
    final: tuple = None

    def trace(self):
        """(time, p) after each event, starting with the initial state."""
        p = classify_B0_state(self.initial).p
        t = 0.0
        out = [(0.0, p)]
        for wait, _, _, _, dp in self.events:
            t += wait
            p += dp
            out.append((t, p))
        return out

    @property
    def total_time(self):
        return float(sum(e[0] for e in self.events))

    def state_at(self, t):
        """Configuration occupied at time ``t`` (the last one if t exceeds the run)."""
        b = np.array(self.initial, dtype=np.int8)
        now = 0.0
        for wait, i, j, _, _ in self.events:
            if now + wait > t:
                break
            now += wait
            b[i], b[j] = -1, 1
        return b

    def events_csv(self):
        return csv_text(["t_wait", "site_i", "site_j", "type", "delta_p"],
                        ([repr(w), i, j, ty, dp] for w, i, j, ty, dp in self.events))

    def trace_csv(self):
        """Rows (t, p, class) with the A-class of the configuration after each event."""
        b = np.array(self.initial, dtype=np.int8)
        rows = [[repr(0.0), classify_B0_state(b).p, classify_B0_state(b).klass]]
        t = 0.0
        for wait, i, j, _, _ in self.events:
            t += wait
            b[i], b[j] = -1, 1
            st = classify_B0_state(b)
            rows.append([repr(t), st.p, st.klass])
        return csv_text(["t", "p", "label"], rows)


def run_jump_chain(initial, gamma, eps, events, seed=0, rate_model=None, replica=0):
    b = check_bits(initial)
    n = b.size
    model = rate_model or RateModel(n, gamma, eps)
    rng = replica_rng(seed, replica)
    run = JumpRun(tuple(int(v) for v in b), n, gamma, eps, seed)
    for _ in range(int(events)):
        wait, b, mv = kmc_step(b, model, rng)
        run.events.append((wait, *mv))
    run.final = tuple(int(v) for v in b)
    return run


def alternating_word(n):
    return np.array([1 if k % 2 == 0 else -1 for k in range(n)], dtype=np.int8)


def run_interface_trace(n, gamma, eps, events, seed=0, start=None):
    """Coarsening trace (time, p) of the jump chain, by default from the alternating state."""
    b = alternating_word(n) if start is None else check_bits(start)
    run = run_jump_chain(b, gamma, eps, events, seed)
    return run.trace(), run


def ensemble_interface_counts(n, gamma, eps, events, seeds, checkpoints=None):
    """p after selected event counts for several seeds; returns (checkpoints, p array, runs)."""
    checkpoints = [events] if checkpoints is None else list(checkpoints)
    model = RateModel(n, gamma, eps)
    out = np.empty((len(seeds), len(checkpoints)), dtype=int)
    runs = []
    for a, seed in enumerate(seeds):
        run = run_jump_chain(alternating_word(n), gamma, eps, events, seed, rate_model=model)
        tr = run.trace()
        out[a] = [tr[c][1] for c in checkpoints]
        runs.append(run)
    return checkpoints, out, runs
