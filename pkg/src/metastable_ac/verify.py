"""Named invariant checks run by ``metastable verify``.

Each check compares two independent routes to the same quantity, so a
tampered constant shows up as a named failure.
"""
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import hierarchy, landscape, model, rates
from .horseshoe import periodic_solutions
from .model import Params


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name:<24} {self.detail} ({self.seconds:.2f}s)"


def _fd_gradient(params, x, h=1e-5):
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (model.potential(params, x + e) - model.potential(params, x - e)) / (2 * h)
    return g


def check_gradient():
    rng = np.random.default_rng(1)
    worst = 0.0
    for n in (4, 8, 10, 14):
        for gamma in (0.0, 0.05):
            p = Params(n, gamma)
            for _ in range(10):
                x = model.project_to_S(rng.normal(size=n))
                a, b = model.unconstrained_gradient(p, x), _fd_gradient(p, x)
                worst = max(worst, np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))
    return worst <= 1e-6, f"max relative error {worst:.2e}"


def check_hessian():
    rng = np.random.default_rng(2)
    worst = 0.0
    for n in (4, 8, 10):
        p = Params(n, 0.05)
        basis = model.basis_of_S(n)
        for _ in range(3):
            x = model.project_to_S(rng.normal(size=n))
            h = model.constrained_hessian(p, x).matrix
            fd = np.empty_like(h)
            for k in range(n - 1):
                e = basis[:, k] * 1e-5
                fd[:, k] = basis.T @ (model.unconstrained_gradient(p, x + e)
                                      - model.unconstrained_gradient(p, x - e)) / 2e-5
            worst = max(worst, np.max(np.abs(h - fd)) / np.max(np.abs(fd)))
    return worst <= 1e-5, f"max relative error {worst:.2e}"


def check_closed_form_hessians():
    worst = 0.0
    for m in (4, 5, 7, 8):
        n = 2 * m
        cf = rates.hessian_closed_forms(m)
        z = landscape.representative(n, 1, "C")
        lo, _ = landscape.connect_saddle(z)
        wz = model.constrained_hessian(Params(n), z.coords).spectrum()
        wx = model.constrained_hessian(Params(n), lo.coords).spectrum()
        pairs = ((float(np.prod(wx)), float(cf.det_min)), (float(np.prod(wz)), float(cf.det_saddle)),
                 (float(wz[0]), float(cf.lambda_minus)))
        worst = max(worst, max(abs(a / b - 1) for a, b in pairs))
    return worst <= 1e-10, f"max relative deviation {worst:.2e}"


def check_landscape_n4():
    g = landscape.build_transition_graph(4, "full")
    degrees = {g.degree(i) for i in range(len(g.minima))}
    ok = len(g.minima) == 6 and len(g.saddles) == 12 and degrees == {4}
    return ok, f"{len(g.minima)} minima, {len(g.saddles)} saddles, degrees {sorted(degrees)}"


def check_cardinalities_n8():
    card = [landscape.family_cardinality(8, 0, "B"), landscape.family_cardinality(8, 1, "B"),
            landscape.family_cardinality(8, 1, "C")]
    g = landscape.build_transition_graph(8, "full")
    fams = {(g.minima[lo].family, g.minima[hi].family) for _, lo, hi in g.edges}
    counted = [sum(p.family == f for p in g.minima) for f in ("B_0", "B_1")] + [len(g.saddles)]
    ok = card == [70, 112, 560] and counted == card and fams == {("B_0", "B_1")} and len(g.edges) == 560
    return ok, f"closed forms {card}, enumerated {counted}, edge classes {sorted(fams)}"


def check_family_potentials():
    worst = 0.0
    for n in (8, 10, 14, 16):
        for k in range(0, n // 6 + 1):
            p = landscape.representative(n, k, "B")
            worst = max(worst, abs(p.potential - float(hierarchy.family_potential_exact(n, k, "B"))))
        for k in range(1, n // 6 + 1):
            z = landscape.representative(n, k, "C")
            worst = max(worst, abs(z.potential - float(hierarchy.family_potential_exact(n, k, "C"))))
    return worst <= 1e-12, f"max |closed form - direct sum| = {worst:.2e}"


def check_barrier_chain():
    bad = []
    for n in range(8, 201, 2):
        if n % 3 == 0:
            continue
        m = n // 2
        adm = [a for a in range(m - n // 6, m + 1)]
        h = [hierarchy.barrier_functions(n, a) for a in adm]
        h1 = [v[0] for v in h]
        h2 = [v[1] for v in h]
        chain = hierarchy.barrier_chain(n)
        ok = (all(x > y for x, y in zip(h1, h1[1:])) and all(x < y for x, y in zip(h2, h2[1:]))
              and all(x < y for x, y in zip(chain, chain[1:])) and h1[-1] == h2[-1])
        if not ok:
            bad.append(n)
    return not bad, "all admissible n <= 200" if not bad else f"violated at n={bad}"


def check_bk_hierarchy():
    r = hierarchy.verify_Bk_hierarchy(8)
    want = Fraction(3, 7) - Fraction(1, 133)
    return r.theta == want, f"theta(8) = {r.theta}"


def check_a_hierarchy():
    out = []
    ok = True
    for n in (8, 10):
        a, b = hierarchy.verify_A_hierarchy(n), hierarchy.brute_force_A_hierarchy(n)
        ok &= a.theta == b.theta and a.escape == b.escape and a.theta > 0
        out.append(f"n={n}: {a.theta}")
    return ok, "closed form = minimax paths; " + ", ".join(out)


def check_move_table():
    mismatches = 0
    for n in (8, 10):
        _, info = hierarchy.state_graph(n)
        for st in info.values():
            for mv in hierarchy.allowed_moves(st):
                h = hierarchy.table_h1(mv.transition_type, st.p, n)
                mismatches += (mv.comm_height.h1 != h
                               or mv.delta_p != hierarchy.table_delta_p(mv.transition_type))
    return mismatches == 0, f"{mismatches} moves disagree with the table"


def check_horseshoe():
    sols = periodic_solutions(5, 0.05, 0.0)
    return len(sols) == 243, f"{len(sols)} distinct period-5 solutions"


def check_schur():
    worst = 0.0
    for n in (8, 10, 14):
        for ir in rates.irreps(n):
            if ir.kind != "two_dim":
                continue
            for qy in (1e-3, 1.0, 1e3):
                s = rates.reduced_block(ir, 1.0, qy).schur()
                want = -4 * math.sin(ir.ell * math.pi / n) ** 2
                worst = max(worst, float(np.max(np.abs(s - want * np.eye(2)))))
    return worst <= 1e-12, f"max deviation {worst:.2e}"


def check_irreps():
    ok = True
    for n in (8, 10):
        irs = rates.irreps(n)
        ok &= sum(i.dim ** 2 for i in irs) == 4 * n
        for ir in irs:
            a, p = rates.active_orbits(ir, n), rates.parity_rule(ir, n)
            ok &= a["O_x"] == p["O_x"] and a["O_y"] == p["O_y"]
    return ok, "dimension identity and parity rules for n=8, 10"


def check_gap_prefactor():
    worst = 0.0
    for m in (4, 5, 7, 8):
        g = rates.spectral_gap(2 * m, 0.0, 0.05)
        worst = max(worst, abs(g.meta["prefactor_ratio"] / g.meta["prefactor_ratio_closed_form"] - 1))
    return worst <= 1e-10, f"numeric vs closed-form ratio, max deviation {worst:.2e}"


CHECKS = {
    "gradient-fd": check_gradient,
    "hessian-fd": check_hessian,
    "hessian-closed-forms": check_closed_form_hessians,
    "landscape-n4": check_landscape_n4,
    "cardinalities-n8": check_cardinalities_n8,
    "family-potentials": check_family_potentials,
    "barrier-chain": check_barrier_chain,
    "bk-hierarchy": check_bk_hierarchy,
    "a-hierarchy": check_a_hierarchy,
    "move-table": check_move_table,
    "horseshoe-n5": check_horseshoe,
    "schur-complement": check_schur,
    "irreps": check_irreps,
    "gap-prefactor": check_gap_prefactor,
}


def run_checks(names=None):
    results = []
    for name in names or CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = CHECKS[name]()
        except Exception as exc:  # a crash is a failed check, reported by name
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
    return results
