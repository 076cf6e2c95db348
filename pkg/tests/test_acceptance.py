"""The eleven acceptance criteria at their stated tolerances and time limits.

Each test prints one PASS/FAIL line; the lines are collected again in the
"acceptance criteria" section of the pytest summary.
"""
import math
import time
from fractions import Fraction
from itertools import permutations

import mpmath
import numpy as np
import pytest

from metastable_ac import Params, constrained_hessian, potential, unconstrained_gradient
from metastable_ac import hierarchy as H
from metastable_ac import rates as R
from metastable_ac import simulate as S
from metastable_ac.errors import ContinuationError
from metastable_ac.horseshoe import check_domain, cubic_roots, periodic_solutions
from metastable_ac.landscape import (build_transition_graph, connect_saddle, continue_to_gamma,
                                     family_cardinality, points_of_triple, representative)
from metastable_ac.model import _gradient, basis_of_S, morse_index, restricted_hessian


def verdict(record, number, ok, detail, elapsed, limit=None):
    in_time = limit is None or elapsed < limit
    limit_txt = f" (limit {limit:g}s)" if limit is not None else ""
    ok = bool(ok and in_time)
    record(number, ok, f"{detail}; {elapsed:.2f}s{limit_txt}")
    assert ok, detail


def test_01_landscape_n4(acceptance):
    t0 = time.perf_counter()
    g = build_transition_graph(4)
    mins = {tuple(np.round(p.coords).astype(int)) for p in g.minima}
    sads = {tuple(np.round(p.coords).astype(int)) for p in g.saddles}
    exact = (all(np.array_equal(p.coords, np.round(p.coords)) for p in g.minima + g.saddles)
             and all(p.morse_index == 0 for p in g.minima)
             and all(p.morse_index == 1 for p in g.saddles))
    degrees = [g.degree(i) for i in range(len(g.minima))]
    ok = (len(g.minima) == 6 and len(g.saddles) == 12 and mins == set(permutations((1, 1, -1, -1)))
          and sads == set(permutations((1, -1, 0, 0))) and degrees == [4] * 6 and exact)
    verdict(acceptance, 1, ok, f"{len(g.minima)} minima, {len(g.saddles)} saddles, degrees {set(degrees)}",
            time.perf_counter() - t0, 1.0)


def test_02_closed_form_hessians(acceptance):
    t0 = time.perf_counter()
    worst = 0.0
    for m in (4, 5, 7, 8):
        n = 2 * m
        cf = R.hessian_closed_forms(m)
        z = representative(n, 1, "C")
        x, _ = connect_saddle(z)
        wz = np.linalg.eigvalsh(restricted_hessian(z.coords, 0.0).matrix)
        wx = np.linalg.eigvalsh(restricted_hessian(x.coords, 0.0).matrix)
        for got, want in ((np.prod(wx), cf.det_min), (np.prod(wz), cf.det_saddle),
                          (wz[0], cf.lambda_minus)):
            worst = max(worst, abs(got / float(want) - 1))
        assert cf.det_min == 2 ** (n - 1)
    verdict(acceptance, 2, worst <= 1e-10, f"max relative deviation {worst:.1e} (tol 1e-10)",
            time.perf_counter() - t0, 10.0)


def test_03_cardinalities_and_edges(acceptance):
    t0 = time.perf_counter()
    card = (family_cardinality(8, 0, "B"), family_cardinality(8, 1, "B"), family_cardinality(8, 1, "C"))
    g = build_transition_graph(8)
    fams = [p.family for p in g.minima]
    counted = (fams.count("B_0"), fams.count("B_1"), len(g.saddles))
    bridges = True
    for z in g.saddles:
        lo, hi = connect_saddle(z)
        bridges &= (lo.family, hi.family) == ("B_0", "B_1")
        bridges &= morse_index(restricted_hessian(lo.coords, 0.0)) == 0
        bridges &= morse_index(restricted_hessian(hi.coords, 0.0)) == 0
    ok = card == counted == (70, 112, 560) and card[2] == card[1] * 5 and bridges
    verdict(acceptance, 3, ok, f"|B0|,|B1|,|C1| = {counted}, closed forms {card}, "
            f"every saddle joins B_0 to B_1: {bridges}", time.perf_counter() - t0)


def test_04_finite_differences(acceptance):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_g = worst_h = 0.0
    for n in (4, 8, 10, 14):
        basis = basis_of_S(n)
        for gamma in (0.0, 0.05):
            p = Params(n, gamma)
            for _ in range(5):
                x = rng.normal(size=n)
                x -= x.mean()
                h = 1e-5
                fd = np.array([(potential(p, x + h * e) - potential(p, x - h * e)) / (2 * h)
                               for e in np.eye(n)])
                g = unconstrained_gradient(p, x)
                worst_g = max(worst_g, np.max(np.abs(g - fd)) / np.max(np.abs(fd)))
                hs = constrained_hessian(p, x).matrix
                fdh = np.column_stack([basis.T @ (unconstrained_gradient(p, x + h * basis[:, k])
                                                  - unconstrained_gradient(p, x - h * basis[:, k]))
                                       / (2 * h) for k in range(n - 1)])
                worst_h = max(worst_h, np.max(np.abs(hs - fdh)) / np.max(np.abs(fdh)))
    ok = worst_g <= 1e-6 and worst_h <= 1e-5
    verdict(acceptance, 4, ok, f"gradient {worst_g:.1e} (tol 1e-6), Hessian {worst_h:.1e} (tol 1e-5)",
            time.perf_counter() - t0)


def _symbols(p):
    roots = np.array(cubic_roots(p.lam))
    return ["-0+"[int(np.argmin(np.abs(roots - v)))] for v in p.coords]


def test_05_continuation_to_gamma_005(acceptance):
    t0 = time.perf_counter()
    g = build_transition_graph(8)
    total, failed, outside, folds = 0, {}, 0, set()
    for p in g.minima + g.saddles:
        total += 1
        try:
            q = continue_to_gamma(p, 0.05)
        except ContinuationError as exc:
            failed[p.family] = failed.get(p.family, 0) + 1
            folds.add(round(exc.last_good_gamma, 4))
            continue
        ok = (q.residual <= 1e-10
              and morse_index(restricted_hessian(q.coords, 0.05)) == p.morse_index)
        dom = check_domain(0.05, q.lam)
        ok &= all(dom.contains(s, v) for s, v in zip(_symbols(p), q.coords))
        outside += not ok
    ok = not failed and not outside
    detail = (f"{total - sum(failed.values()) - outside}/{total} points continued inside the strips; "
              f"branches ending before 0.05: {failed or 'none'}"
              + (f" (last good gamma {sorted(folds)})" if folds else ""))
    verdict(acceptance, 5, ok, detail, time.perf_counter() - t0, 30.0)


def test_06_horseshoe_count(acceptance):
    t0 = time.perf_counter()
    sols = periodic_solutions(5, 0.05, 0.0)
    d = np.max(np.abs(sols[:, None, :] - sols[None, :, :]), axis=2)
    np.fill_diagonal(d, np.inf)
    resid = max(np.max(np.abs(_gradient(s, 0.05))) for s in sols)
    ok = len(sols) == 243 and d.min() > 1e-6 and resid < 1e-10
    verdict(acceptance, 6, ok, f"{len(sols)} solutions, min distance {d.min():.3f}, "
            f"max residual {resid:.1e}", time.perf_counter() - t0, 30.0)


def test_07_barrier_chain(acceptance):
    t0 = time.perf_counter()
    bad, checked = [], 0
    for n in range(8, 201, 2):
        if n % 3 == 0:
            continue
        checked += 1
        adm = [a for a in range(n // 2, n // 3, -1)]  # a in (n/3, n/2], decreasing
        h = [H.barrier_functions(n, a) for a in sorted(adm)]
        h1 = [v[0] for v in h]
        h2 = [v[1] for v in h]
        chain = H.barrier_chain(n)
        ok = (all(a > b for a, b in zip(h1, h1[1:])) and all(a < b for a, b in zip(h2, h2[1:]))
              and all(a < b for a, b in zip(chain, chain[1:])))
        rep = H.verify_Bk_hierarchy(n)
        ok &= rep.theta > 0 and rep.blocks == [f"B_{k}" for k in range(n // 6 + 1)]
        if not ok:
            bad.append(n)
    verdict(acceptance, 7, not bad, f"{checked} admissible n in [8, 200], violations {bad or 'none'}, "
            f"theta(8) = {H.verify_Bk_hierarchy(8).theta}", time.perf_counter() - t0, 10.0)


def test_08_table_against_continued_saddles(acceptance):
    t0 = time.perf_counter()
    gamma = 0.02
    cache, worst = {}, {}
    for rep in H.state_orbits(8):
        st = H.classify_B0_state(rep)
        for mv in H.allowed_moves(st):
            direct = H.direct_comm_height(np.array(rep), *mv.site_pair, gamma, cache=cache)
            err = abs(direct - mv.comm_height.value(gamma))
            worst[mv.transition_type] = max(worst.get(mv.transition_type, 0.0), err)
    top = max(worst, key=worst.get)
    ok = max(worst.values()) <= 10 * gamma**2 and len(worst) == 13
    verdict(acceptance, 8, ok, f"{len(worst)} transition types, worst {worst[top]:.1e} ({top}), "
            f"tol {10 * gamma**2:.0e}", time.perf_counter() - t0, 60.0)


def test_09_spectral_gap_identities(acceptance):
    t0 = time.perf_counter()
    # (a) Schur complement on every two-dimensional irrep
    worst_a = 0.0
    for n in (8, 10, 14, 16, 100):
        for ir in R.irreps(n):
            if ir.kind != "two_dim":
                continue
            for qy in np.logspace(-3, 3, 7):
                s = R.reduced_block(ir, 1.0, qy).schur()
                want = -4 * math.sin(ir.ell * math.pi / n) ** 2
                worst_a = max(worst_a, float(np.max(np.abs(s - want * np.eye(2)))))
    ok_a = worst_a <= 1e-12
    # (b) the 24-state generator with Eyring-Kramers rates at eps = 0.01
    q_x, q_y, _ = R.gap_rates(8, 0.0, 0.01)
    with mpmath.workdps(30):
        qx, qy = mpmath.mpf(q_x), mpmath.mpf(q_y)
        gen, nx = R.two_orbit_generator(8, qx, qy)
        lam = R.generator_spectrum(gen, nx, qx, qy)
        want = 4 * mpmath.sin(mpmath.pi / 8) ** 2 * qx
        err_b = float(abs(lam[1] / want - 1))
        zero = float(abs(lam[0]) / qy)
    ok_b = gen.shape == (24, 24) and err_b <= 1e-10 and zero < 1e-20
    # (c) large-ring limits at n = 100
    m = 50
    expo = m * (m - 1) / (4 * (m * m - 3 * m + 3))
    g100 = R.spectral_gap(100, 0.0, 0.05)
    ratio = g100.meta["prefactor_ratio"]
    ok_c_expo = abs(expo - 0.25) <= 2 / 100 and g100.arrhenius == pytest.approx(expo, rel=1e-12)
    ok_c_pref = abs(ratio - math.sqrt(2)) <= 2 / 100
    detail = (f"(a) Schur max deviation {worst_a:.1e}: {'ok' if ok_a else 'FAIL'}; "
              f"(b) q_x/q_y={q_x / q_y:.1e}, relative error {err_b:.1e}: {'ok' if ok_b else 'FAIL'}; "
              f"(c) exponent {expo:.6f}, |.-1/4|={abs(expo - 0.25):.4f}: {'ok' if ok_c_expo else 'FAIL'}; "
              f"prefactor ratio {ratio:.5f}, |.-sqrt2|={abs(ratio - math.sqrt(2)):.4f} vs 2/N=0.02: "
              f"{'ok' if ok_c_pref else 'FAIL'}")
    verdict(acceptance, 9, ok_a and ok_b and ok_c_expo and ok_c_pref, detail,
            time.perf_counter() - t0, 10.0)


@pytest.mark.slow
def test_10_monte_carlo_arrhenius(acceptance):
    t0 = time.perf_counter()
    start = representative(8, 0, "B").coords
    targets = np.array([p.coords for p in points_of_triple((0, 4, 4))
                        if not np.allclose(p.coords, start)])
    study = S.mean_exit_time(Params(8, 0.0), start, targets, [0.09, 0.06, 0.045], replicas=200,
                             seed=10, radius=0.2)
    want = float(H.h0_exact(8))
    censored = sum(int(s.censored.sum()) for s in study.stats)
    ok = abs(study.slope / want - 1) <= 0.2 and censored == 0
    means = ", ".join(f"eps={s.eps}: {s.mean:.1f}+-{s.stderr:.1f}" for s in study.stats)
    verdict(acceptance, 10, ok, f"slope {study.slope:.4f} vs 3/7={want:.4f} "
            f"(rel {study.slope / want - 1:+.1%}, tol 20%); {means}; censored {censored}",
            time.perf_counter() - t0, 1800.0)


@pytest.mark.slow
def test_11_kmc_coarsening(acceptance):
    t0 = time.perf_counter()
    n, gamma, eps, events = 16, 0.095, 0.05, 10_000
    seeds = list(range(100))
    cps = [0, 100, 1000, 10_000]
    _, p, runs = S.ensemble_interface_counts(n, gamma, eps, events, seeds, checkpoints=cps)
    mean_p = p.mean(axis=0)
    dps = {e[4] for r in runs for e in r.events}
    horizon = min(r.total_time for r in runs)
    classes = [H.classify_B0_state(r.state_at(horizon)).klass for r in runs]
    counts = {c: classes.count(c) for c in set(classes)}
    mode = max(counts, key=counts.get)
    ok = (mean_p[0] == 16 and mean_p[-1] <= 6
          and dps <= {-4, -2, 0, 2, 4} and mode == "A_2")
    verdict(acceptance, 11, ok, f"mean p {' -> '.join(f'{v:.2f}' for v in mean_p)} at events {cps}; "
            f"delta p values {sorted(dps)}; class mode at t={horizon:.3g}: {mode} "
            f"({counts[mode]}/100)", time.perf_counter() - t0, 300.0)
