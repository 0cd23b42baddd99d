"""Acceptance criteria: one test per criterion, stated tolerances.

Each test prints a single line "criterion N: PASS/FAIL (...)" so the suite
doubles as a checklist when run with pytest -v -s.
"""

import time

import numpy as np
import pytest

from kanform.chains import (TotalChain, bar_differential, face_differential,
                            retract_to_cellular, sharp_normalize,
                            total_differential)
from kanform.cyclelift import bar_lift, surface_cycle, threefold_cycle
from kanform.liegroup.groups import special_unitary, unitary
from kanform.liegroup.polynomials import chern_polynomial, trace_form
from kanform.liegroup.shulman import (assemble_omega, closedness_residuals,
                                      delta_natural, exterior_derivative_fd,
                                      restriction_residual, shulman_form)
from kanform.moduli import (ExtendedModuli, kirillov_check,
                            minimal_sweep_plot, momentum_identity_residual,
                            psi_one_form, surface_moduli, surface_two_form,
                            chern_simons, un_generator_catalog)
from kanform.pairing import (h_exterior_derivative, integrate_over_plot,
                             pair, pairing_identity_residuals,
                             random_rep_point, random_rep_tangent,
                             w_exterior_derivative)
from kanform.simplicial import builtin_surface, minimal_threefold
from kanform.testutil import random_chain
from kanform.words import gen_word

SU2 = special_unitary(2)
BASIC = trace_form("basic")


def report(n, ok, detail):
    print("criterion %d: %s (%s)" % (n, "PASS" if ok else "FAIL", detail))
    assert ok, detail


def elapsed_ok(t0, budget):
    return time.time() - t0 < budget


def test_criterion_1_exact_differentials():
    t0 = time.time()
    K = builtin_surface(1)
    rng = np.random.default_rng(101)
    checked = 0
    for k in range(1, 5):
        for q in range(0, 5 - k):
            if q > K.max_degree:
                continue
            for _ in range(500):
                c = TotalChain()
                c = random_chain(K, rng, k_max=k, q_max=q, terms=2)
                c = sharp_normalize(K, c)
                assert not bar_differential(bar_differential(c)).terms
                assert not face_differential(K, face_differential(K, c)).terms
                assert not total_differential(K, total_differential(K, c)).terms
                checked += 1
    ok = checked >= 500 * 10 and elapsed_ok(t0, 10)
    report(1, ok, "%d chains, %.1fs" % (checked, time.time() - t0))


def test_criterion_2_cellular_retraction():
    t0 = time.time()
    rng = np.random.default_rng(102)
    from kanform.chains import cell_complex

    failures = []
    for K in (builtin_surface(0), builtin_surface(1), builtin_surface(2),
              minimal_threefold()):
        C = cell_complex(K)
        for _ in range(30):
            c = random_chain(K, rng, k_max=1, q_max=min(3, K.max_degree))
            lhs = retract_to_cellular(K, total_differential(K, c))
            rhs = {}
            for cell, coeff in retract_to_cellular(K, c).items():
                for low, bc in C.boundary.get(cell, {}).items():
                    rhs[low] = rhs.get(low, 0) + coeff * bc
            rhs = {n: v for n, v in rhs.items() if v}
            if {n: v for n, v in lhs.items() if v} != rhs:
                failures.append("chain map fails on %s" % K.label)
        if K.max_degree >= 2 and any(K.base_generators(2)):
            chain, _ = threefold_cycle(K)
            top_dim = 3
        else:
            chain, _ = surface_cycle(K)
            top_dim = 2
        ret = retract_to_cellular(K, chain)
        vals = sorted(ret.values())
        if K.label == "genus 0":
            # the 2-cell of the genus-0 model has trivial attaching data
            top_ok = vals in ([], [1], [-1])
        else:
            top_ok = vals in ([1], [-1]) and all(d == top_dim for d, _ in ret)
        if not top_ok:
            failures.append("top-cell retraction fails on %s" % K.label)
    ok = not failures and elapsed_ok(t0, 5)
    report(2, ok, failures or "%.1fs" % (time.time() - t0))


def test_criterion_3_cycle_certificates():
    t0 = time.time()
    failures = []
    for genus in (0, 1, 2):
        K = builtin_surface(genus)
        chain, cert = surface_cycle(K)
        if total_differential(K, chain).terms or cert.residual().terms:
            failures.append("genus %d" % genus)
    K = builtin_surface(1)
    chain, cert = surface_cycle(K)
    c20 = TotalChain({t: c for t, c in chain.terms.items()
                      if t.k == 2 and t.q == 0})
    x = gen_word(next(g for g in K.base_generators(0) if g.name == "x1"))
    y = gen_word(next(g for g in K.base_generators(0) if g.name == "y1"))
    w = x * y * x.inverse() * y.inverse()
    target = bar_differential(c20)
    if list(target.terms) != [next(iter(target.terms))]:
        failures.append("c_{2,0} expansion")
    t_, c_ = next(iter(target.terms.items()))
    if not (t_.q == 0 and t_.entries == (w,) and c_ == 1):
        failures.append("c_{2,0} does not bound the relator word")
    for K3 in (minimal_threefold(),):
        chain, certs = threefold_cycle(K3)
        if total_differential(K3, chain).terms:
            failures.append("threefold cycle")
        if any(c.residual().terms for c in certs):
            failures.append("threefold certificates")
    ok = not failures and elapsed_ok(t0, 5)
    report(3, ok, failures or "%.1fs" % (time.time() - t0))


def test_criterion_4_shulman_ladder():
    t0 = time.time()
    rng = np.random.default_rng(104)
    lam1 = shulman_form(SU2, BASIC, 1)
    lam2 = shulman_form(SU2, BASIC, 2)
    dlam1 = exterior_derivative_fd(SU2, lam1)
    dlam2 = exterior_derivative_fd(SU2, lam2)
    nat = delta_natural(SU2, lam1)
    worst_top = 0.0
    worst_step = 0.0
    for _ in range(50):
        gs = [SU2.random_element(rng)]
        vs = [[SU2.random_algebra(rng)] for _ in range(4)]
        worst_top = max(worst_top, abs(dlam1(gs, None, vs)))
        gs2 = [SU2.random_element(rng) for _ in range(2)]
        vs2 = [[SU2.random_algebra(rng) for _ in range(2)] for _ in range(3)]
        worst_step = max(worst_step,
                         abs(dlam2(gs2, None, vs2) + nat(gs2, None, vs2)))
    ok = worst_top <= 1e-5 and worst_step <= 1e-5 and elapsed_ok(t0, 60)
    report(4, ok, "d(top) %.2e, ladder %.2e, %.1fs"
           % (worst_top, worst_step, time.time() - t0))


def test_criterion_5_equivariant_extension():
    t0 = time.time()
    omega = assemble_omega(SU2, BASIC)
    rng = np.random.default_rng(105)
    restrict = restriction_residual(omega, rng, samples=10)
    res = closedness_residuals(omega, rng, samples=10)
    worst = max(res.values())
    ok = restrict <= 1e-9 and worst <= 1e-5 and elapsed_ok(t0, 120)
    report(5, ok, "restriction %.2e, closedness %.2e over %d targets, %.1fs"
           % (restrict, worst, len(res), time.time() - t0))


def test_criterion_6_pairing_identity():
    t0 = time.time()
    K = builtin_surface(1)
    chain, _ = surface_cycle(K)
    omega = assemble_omega(SU2, BASIC)
    rng = np.random.default_rng(106)
    res = pairing_identity_residuals(omega, K, chain, rng, samples=10)
    worst = max(res.values())
    partial = TotalChain({t: c for t, c in chain.terms.items() if t.k == 1})
    assert total_differential(K, partial).terms
    res_neg = pairing_identity_residuals(omega, K, partial, rng, samples=3)
    worst_neg = max(res_neg.values())
    ok = worst <= 1e-5 and worst_neg <= 1e-5 and elapsed_ok(t0, 120)
    report(6, ok, "cycle %.2e (50 identities), control %.2e, %.1fs"
           % (worst, worst_neg, time.time() - t0))


def test_criterion_7_moduli_two_form():
    t0 = time.time()
    rng = np.random.default_rng(107)
    M, K = surface_moduli(SU2, 1)
    chain, _ = surface_cycle(K)
    omega = assemble_omega(SU2, BASIC)

    worst_mom = 0.0
    for _ in range(50):
        p = M.random_point(rng)
        data = surface_two_form(M, K, omega, chain, p)
        d = data.basis.shape[1]
        Z = SU2.random_algebra(rng)
        v = rng.standard_normal(d)
        v /= np.linalg.norm(v)
        worst_mom = max(worst_mom,
                        momentum_identity_residual(data, np.zeros(d), Z, v))

    p = M.random_point(rng)
    data = surface_two_form(M, K, omega, chain, p)
    d = data.basis.shape[1]
    dw = w_exterior_derivative(lambda u, X, vs: data.omega_c(u, vs))
    worst_dw = 0.0
    for _ in range(50):
        u = 0.01 * rng.standard_normal(d)
        vs = [rng.standard_normal(d) for _ in range(3)]
        vs = [w / np.linalg.norm(w) for w in vs]
        worst_dw = max(worst_dw, abs(dw(u, None, vs)))

    # a second lift of the bar-degree-2 column: same cycle class, and the
    # momentum function is unchanged because the moment-only component
    # vanishes identically
    c11 = TotalChain({t: c for t, c in chain.terms.items() if t.k == 1})
    alt = bar_lift(bar_differential(
        TotalChain({t: -c for t, c in chain.terms.items() if t.k == 2})),
        method="linear")
    chain2 = TotalChain(dict(c11.terms))
    for t, c in alt.solution.terms.items():
        chain2.add(t, -c)
    assert not total_differential(K, chain2).terms
    data2 = surface_two_form(M, K, omega, chain2, p)
    spread = 0.0
    for _ in range(5):
        u = 0.02 * rng.standard_normal(d)
        Z = SU2.random_algebra(rng)
        spread = max(spread, abs(data.mu_sharp(u, Z) - data2.mu_sharp(u, Z)))

    ok = (worst_mom <= 1e-5 and worst_dw <= 1e-5 and spread <= 1e-6
          and elapsed_ok(t0, 180))
    report(7, ok, "momentum %.2e (50 charts), d(omega_c) %.2e, "
           "lift shift spread %.2e, %.1fs"
           % (worst_mom, worst_dw, spread, time.time() - t0))


def test_criterion_8_circle_valued_function():
    t0 = time.time()
    omega = assemble_omega(SU2, BASIC)
    K, chain, plot, loop = minimal_sweep_plot(SU2)

    psi_hi = psi_one_form(omega, K, chain, plot, order=28)
    s = np.array([0.37, 0.13, 0.29])
    contraction = max(abs(psi_hi(s, None, [np.array([0.0, 1.0, 0.0])])),
                      abs(psi_hi(s, None, [np.array([0.0, 0.0, 1.0])])))
    dpsi = w_exterior_derivative(psi_hi, step=1e-3)
    v1 = np.array([1.0, 0.3, -0.2])
    v2 = np.array([0.2, -1.0, 0.5])
    closed = abs(dpsi(s, None, [v1, v2]))

    psi_lo = psi_one_form(omega, K, chain, plot, order=16)
    _, rep = chern_simons(omega, K, chain, plot, loop, n_steps=32,
                          order=16, psi=psi_lo)
    ok = (closed <= 1e-5 and contraction <= 1e-6
          and rep["nearest_integer"] != 0
          and rep["integer_distance"] <= 1e-3 and elapsed_ok(t0, 300))
    report(8, ok, "d(psi) %.2e, contraction %.2e, period %.4f "
           "(distance %.1e), %.1fs"
           % (closed, contraction, rep["raw"], rep["integer_distance"],
              time.time() - t0))


def test_criterion_9_un_catalog():
    t0 = time.time()
    G2 = unitary(2)
    rng = np.random.default_rng(109)
    entries = un_generator_catalog(1, 2)
    table = {e["name"]: e for e in entries}
    degree_ok = all([
        table["f_1"]["degree"] == 0, table["f_2"]["degree"] == 2,
        table["b_1^1"]["degree"] == 1, table["b_2^1"]["degree"] == 3,
        table["a_1"]["degree"] == 2, table["a_2"]["degree"] == 4])

    K = table["f_1"]["K"]
    from kanform.moduli import moduli_plot
    M = ExtendedModuli(G2, [g.name for g in K.base_generators(0)],
                       K.face_of_generator(
                           1, next(iter(K.base_generators(1))), 0))
    p = M.random_point(rng)
    chart, B = M.chart(p)
    plot = moduli_plot(M, K, chart, B.shape[1])
    d = B.shape[1]

    f1 = integrate_over_plot(table["f_1"]["collection"], plot, 0, 0)
    grad = w_exterior_derivative(lambda u, X, vs: np.real(f1(u, X, [])))
    worst_grad = 0.0
    for _ in range(3):
        v = rng.standard_normal(d)
        v /= np.linalg.norm(v)
        worst_grad = max(worst_grad,
                         abs(grad(np.zeros(d), None, [v])))

    f2 = integrate_over_plot(table["f_2"]["collection"], plot, 0, 2)
    df2 = w_exterior_derivative(lambda u, X, vs: np.real(f2(u, X, vs)))
    worst_df2 = 0.0
    for _ in range(2):
        vs = [rng.standard_normal(d) for _ in range(3)]
        vs = [w / np.linalg.norm(w) for w in vs]
        worst_df2 = max(worst_df2, abs(df2(np.zeros(d), None, vs)))

    worst_db = 0.0
    for name in ("b_1^1", "b_2^1"):
        form = table[name]["collection"].form(0, 0, table[name]["degree"])
        dform = h_exterior_derivative(G2, form)
        for _ in range(3):
            pt = random_rep_point(K, G2, 0, rng)
            vs = [random_rep_tangent(K, G2, 0, rng)
                  for _ in range(table[name]["degree"] + 1)]
            worst_db = max(worst_db, abs(dform.evaluator(pt, None, vs)))

    ok = (degree_ok and worst_grad <= 1e-6 and worst_df2 <= 1e-5
          and worst_db <= 1e-5 and elapsed_ok(t0, 180))
    report(9, ok, "degrees %s, grad(f_1) %.2e, d(f_2) %.2e, d(b) %.2e, %.1fs"
           % (degree_ok, worst_grad, worst_df2, worst_db, time.time() - t0))


def test_criterion_10_kirillov_orbit():
    t0 = time.time()
    X0 = 2j * np.pi * np.diag([1.0, -1.0])
    out = kirillov_check(SU2, X0, BASIC, np.random.default_rng(110),
                         samples=20)
    ok = (not out["orbit_trivial"] and out["spread"] <= 1e-4
          and elapsed_ok(t0, 60))
    report(10, ok, "ratio %.6f, spread %.2e over %d pairs, %.1fs"
           % (out["mean"], out["spread"], len(out["ratios"]),
              time.time() - t0))
