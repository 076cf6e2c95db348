import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from metastable_ac import Params
from metastable_ac import simulate as S
from metastable_ac.errors import InputError
from metastable_ac.hierarchy import classify_B0_state
from metastable_ac.landscape import continue_to_gamma, points_of_triple, representative


def test_replica_streams_are_reproducible_and_distinct():
    a = S.replica_rng(7, 0).standard_normal(5)
    assert np.array_equal(a, S.replica_rng(7, 0).standard_normal(5))
    assert not np.array_equal(a, S.replica_rng(7, 1).standard_normal(5))
    assert not np.array_equal(a, S.replica_rng(8, 0).standard_normal(5))


@given(st.integers(0, 2**32 - 1), st.floats(0.001, 0.2), st.floats(0.0, 0.2))
def test_em_step_stays_on_S(seed, eps, gamma):
    p = Params(8, gamma, eps)
    x = np.array([1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0])
    rng = S.replica_rng(seed)
    for _ in range(50):
        x = S.step_em(p, x, 0.01, rng)
    assert abs(x.sum()) <= 1e-12


def test_em_step_without_noise_is_gradient_flow():
    p = Params(4, 0.0, 0.05)
    x = np.array([0.5, 0.5, -0.5, -0.5])
    y = S.step_em(p, x, 0.01, S.replica_rng(0), eps=0.0)
    assert np.allclose(y, x - 0.01 * (x**3 - x))


def test_dt_is_capped():
    with pytest.raises(InputError):
        S.step_em(Params(8), np.zeros(8), 0.02, S.replica_rng(0))
    with pytest.raises(InputError):
        S.run_sde(Params(8), np.zeros(8), 10, dt=0.05)


def test_sde_run_is_deterministic_and_conserves_mass():
    p = Params(8, 0.0, 0.05)
    x0 = representative(8, 0, "B").coords
    a = S.run_sde(p, x0, 2000, seed=3, record_stride=100, classify=True)
    b = S.run_sde(p, x0, 2000, seed=3, record_stride=100, classify=True)
    assert a.trajectory_csv() == b.trajectory_csv()
    assert a.max_mass_error() <= 1e-12
    assert len(a.trajectory) == 21
    assert a.trajectory_csv().splitlines()[0] == "t," + ",".join(f"i{k}" for k in range(1, 9))
    assert a.labels_csv().splitlines()[0] == "t,p,label"
    assert a.labels[0][2] == "++++----"


def test_sde_rejects_start_off_S():
    with pytest.raises(InputError):
        S.run_sde(Params(4), [1.0, 0.0, 0.0, 0.0], 5)


def test_classification_of_stationary_points():
    b0 = representative(8, 0, "B")
    lab = S.classify_configuration(b0.coords)
    assert lab.kind == "B0" and lab.p == 2
    b1 = representative(8, 1, "B")
    assert S.classify_configuration(b1.coords).name == "B_1"
    b1g = continue_to_gamma(b1, 0.02)
    assert S.classify_configuration(b1g.coords, gamma=0.02).name == "B_1"
    assert S.classify_configuration(np.zeros(8)).kind == "transient"


def test_arrhenius_fit_recovers_slope():
    eps = np.array([0.1, 0.07, 0.05])
    slope, icpt = S.arrhenius_fit(eps, 2.0 * np.exp(0.4 / eps))
    assert slope == pytest.approx(0.4) and icpt == pytest.approx(math.log(2.0))
    assert math.isnan(S.arrhenius_fit([0.1], [1.0])[0])


def _b0_targets(start):
    pts = points_of_triple((0, 4, 4))
    return np.array([p.coords for p in pts if not np.allclose(p.coords, start)])


def test_exit_times_do_not_depend_on_threading():
    p = Params(8, 0.0)
    start = representative(8, 0, "B").coords
    tg = _b0_targets(start)
    one = S.mean_exit_time(p, start, tg, [0.15], replicas=8, seed=1)
    two = S.mean_exit_time(p, start, tg, [0.15], replicas=8, seed=1, threads=3, block=17)
    assert np.array_equal(one.stats[0].times, two.stats[0].times)
    assert one.stats[0].mean > 0 and one.to_dict()["per_eps"][0]["censored"] == 0


def test_exit_time_censoring():
    p = Params(8, 0.0)
    start = representative(8, 0, "B").coords
    st_ = S.mean_exit_time(p, start, _b0_targets(start), [0.02], replicas=3, max_steps=50)
    s = st_.stats[0]
    assert s.censored.all() and math.isnan(s.mean)
    assert st_.to_dict()["per_eps"][0]["mean"] is None


def test_target_lookup_agrees_with_distances():
    start = representative(8, 0, "B").coords
    tg = _b0_targets(start)
    ts = S._TargetSet(tg, 0.2)
    assert ts.fast
    rng = np.random.default_rng(0)
    x = tg[rng.integers(len(tg), size=300)] + rng.uniform(-0.3, 0.3, size=(300, 8))
    slow = np.min(np.max(np.abs(x[:, None] - tg[None]), axis=2), axis=1) <= 0.2
    assert np.array_equal(ts.hit(x), slow)


def bits_words(n):
    return st.permutations([1] * (n // 2) + [-1] * (n // 2)).map(np.array)


@given(st.sampled_from([8, 10, 14, 16]).flatmap(bits_words), st.floats(0.01, 0.2))
def test_jump_rates_satisfy_detailed_balance(b, gamma):
    # pi(x) proportional to exp(-gamma p(x) / eps)
    eps = 0.05
    model = S.RateModel(b.size, gamma, eps)
    p = classify_B0_state(b).p
    i, j, _, dp, rate, _ = model.moves(b)
    for a in range(len(i)):
        nb = b.copy()
        nb[i[a]], nb[j[a]] = -1, 1
        ri, rj, _, _, rback, _ = model.moves(nb)
        k = np.flatnonzero((ri == j[a]) & (rj == i[a]))[0]
        lhs = rate[a] * math.exp(-gamma * p / eps)
        rhs = rback[k] * math.exp(-gamma * (p + dp[a]) / eps)
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_jump_chain_is_reproducible_and_consistent():
    a = S.run_jump_chain(S.alternating_word(16), 0.095, 0.05, 500, seed=4)
    b = S.run_jump_chain(S.alternating_word(16), 0.095, 0.05, 500, seed=4)
    assert a.events_csv() == b.events_csv() and a.trace_csv() == b.trace_csv()
    tr = a.trace()
    assert tr[0] == (0.0, 16) and len(tr) == 501
    assert classify_B0_state(a.final).p == tr[-1][1]
    assert np.array_equal(a.state_at(a.total_time + 1), np.array(a.final))
    assert np.array_equal(a.state_at(0.0), np.array(a.initial))
    assert {e[4] for e in a.events} <= {-4, -2, 0, 2, 4}
    assert a.events_csv().splitlines()[0] == "t_wait,site_i,site_j,type,delta_p"


def test_kmc_step_with_explicit_table():
    rng = S.replica_rng(0)
    counts = {"a": 0, "b": 0}
    for _ in range(4000):
        _, nxt, _ = S.kmc_step(None, [(1.0, "a"), (3.0, "b")], rng)
        counts[nxt] += 1
    assert counts["b"] / 4000 == pytest.approx(0.75, abs=0.03)


def test_ensemble_counts_shape():
    cps, p, runs = S.ensemble_interface_counts(8, 0.1, 0.05, 100, seeds=[0, 1, 2],
                                               checkpoints=[0, 50, 100])
    assert cps == [0, 50, 100] and p.shape == (3, 3) and np.all(p[:, 0] == 8)
    assert len(runs) == 3


def test_bad_bits_rejected():
    with pytest.raises(InputError):
        S.run_jump_chain([1, 1, 1, -1], 0.1, 0.05, 1)
