"""Acceptance criteria: one test per criterion, one printed verdict line each.

Each test prints ``criterion NN PASS/FAIL`` directly to the terminal (through
``sys.__stdout__`` so the line survives pytest's capture) and then asserts.
"""

import sys
from dataclasses import replace

import numpy as np
import pytest

from dislospec import bloch, bulk, coupling, dirac, dirac_line, edge, scenarios
from dislospec import potential as P
from dislospec import tight_binding as tb


def _report(num: int, ok: bool, msg: str) -> None:
    print(f"criterion {num:02d} {'PASS' if ok else 'FAIL'}: {msg}", file=sys.__stdout__)
    sys.__stdout__.flush()


# -- 1. bulk-edge triangle, tuned winding-3 scenario --------------------------

def test_criterion_01_tuned_triangle(tuned):
    rep = scenarios.verify_pipeline(tuned.sc)
    ok = (
        rep.verdict
        and rep.winding == -3
        and all(c == -3 for c in rep.chern.values())
        and rep.dirac_flow == -3
        and rep.edge_flow == -3
    )
    _report(
        1,
        ok,
        f"tuned-1-3: winding {rep.winding}, chern {sorted(rep.chern.values())}, "
        f"dirac flow {rep.dirac_flow}, edge flow {rep.edge_flow}",
    )
    assert ok


# -- 2. same triangle for the scaled scenarios --------------------------------

def test_criterion_02_scaled_triangles(n1, n3):
    rep1 = scenarios.verify_pipeline(n1.sc)
    rep3 = scenarios.verify_pipeline(n3.sc)
    ok = (
        rep1.verdict
        and rep1.winding == -1
        and {rep1.dirac_flow, rep1.edge_flow, *rep1.chern.values()} == {-1}
        and rep3.verdict
        and rep3.winding == +3      # sign factor (-1)^((n-1)/2) = -1 exercised
        and {rep3.dirac_flow, rep3.edge_flow, *rep3.chern.values()} == {-3}
    )
    _report(
        2,
        ok,
        f"scaled-n1 all -1 (winding {rep1.winding}); "
        f"scaled-n3 all -3 with winding {rep3.winding}",
    )
    assert ok


# -- 3. closed-form Dirac eigenvalue on the step profile ----------------------

def test_criterion_03_step_closed_form():
    theta_F = 0.05
    worst = 0.0
    for nu_sign in (1.0, -1.0):
        for t in np.linspace(0.05, 2 * np.pi - 0.05, 32):
            op = dirac_line.model_flow_operator(nu_sign, theta_F, 1, t, dirac_line.STEP)
            spec = dirac_line.dirac_bound_states(op)
            exact = dirac_line.step_eigenvalue(t, nu_sign, theta_F)
            worst = max(worst, abs(spec.eigenvalues[0] - exact))
    ok = worst < 1e-8
    _report(3, ok, f"shooting vs closed form, worst |diff| = {worst:.2e} (64 cases)")
    assert ok


# -- 4. tight-binding curvature integral --------------------------------------

def test_criterion_04_curvature_integral(tuned):
    total = tb.curvature_integral(tuned.cc.fourier)
    ok = abs(total - (-3.0)) < 1e-3
    _report(4, ok, f"(1/2 pi i) curvature integral = {total:.6f} vs winding -3")
    assert ok


# -- 5. gap-size law ----------------------------------------------------------

def test_criterion_05_gap_size_law(n1):
    delta = 0.01
    K = bloch.default_cutoff(n1.sc.V + n1.sc.W, 9)
    p = n1.sc.V + delta * P.translate(n1.sc.W, np.pi)
    vals = np.linalg.eigvalsh(bloch.assemble_bloch(p, np.pi, K).matrix)
    ratio = (vals[1] - vals[0]) / (2 * delta * n1.cc.theta_F)
    ok = 0.95 <= ratio <= 1.05
    _report(5, ok, f"gap ratio (lam2-lam1)/(2 delta theta_F) = {ratio:.6f}")
    assert ok


# -- 6. adiabatic seeding by the effective Dirac operator ---------------------

def test_criterion_06_adiabatic_seeding(n1):
    base = edge.EdgeProblem(V=n1.sc.V, W=n1.sc.W, n=1, profile=dirac_line.STEP)
    summary = []
    ok = True
    for t in (np.pi / 2, np.pi, 3 * np.pi / 2):
        rows = edge.theorem_scaling_table(base, n1.dd, n1.cc, t, [0.04, 0.02])
        # theorem_scaling_table raises CountMismatch unless the junction-state
        # count equals the Dirac bound-state count n(t) + 1 at every delta
        ratio = rows[1].ratio
        ok = ok and 3.0 <= ratio <= 5.0
        summary.append(f"t={t:.2f}: count {rows[0].count}, ratio {ratio:.2f}")
    _report(6, ok, "; ".join(summary))
    assert ok


# -- 7. enclosure property ----------------------------------------------------

def test_criterion_07_enclosure(n1):
    fam = tb.TightBindingFamily(dirac=n1.dd, theta=n1.cc, delta=0.02)
    exc = tb.enclosure_check(n1.sc.V, n1.sc.W, fam)
    ok = exc <= 1.0
    _report(7, ok, f"normalized excursion {exc:.4f} <= 1 on the 9x9 grid, delta 0.02")
    assert ok


# -- 8. robustness of the edge spectral flow ----------------------------------

def test_criterion_08_robustness(tuned):
    sel = bulk.gap_scan_h1(tuned.sc.V, tuned.sc.W, 1)
    E_ref = edge.reference_energy(sel)
    prob = edge.EdgeProblem(
        V=tuned.sc.V,
        W=tuned.sc.W,
        n=1,
        profile=dirac_line.TransitionProfile("tanh", 1.0),
    )
    half_gap = 0.5 * float(np.min(sel.band_edges[:, 1] - sel.band_edges[:, 0]))

    def wobbled(t):
        return E_ref(t) + 0.2 * half_gap * np.sin(t)

    runs = {
        "doubled matching window": lambda: edge.spectral_flow(
            prob, sel, window_factor=2.0
        ).total,
        "bump F height 5": lambda: edge.spectral_flow(
            replace(prob, F=edge.Bump(height=5.0, halfwidth=2.0)), sel
        ).total,
        "E_ref wobble 20% half-gap": lambda: edge.spectral_flow(prob, wobbled).total,
        "step profile": lambda: edge.spectral_flow(
            replace(prob, profile=dirac_line.STEP), sel
        ).total,
    }
    results = {name: fn() for name, fn in runs.items()}
    ok = all(v == -3 for v in results.values())
    _report(8, ok, "; ".join(f"{k}: {v}" for k, v in results.items()))
    assert ok


# -- 9. structural invariants suite -------------------------------------------

def test_criterion_09_structural_invariants(n1, n3, tuned):
    checks = []

    # antiperiodicity and odd winding for every coupling curve
    for bundle in (n1, n3, tuned):
        ts = np.linspace(0.0, np.pi, 64)
        th = coupling.theta_from_fourier(bundle.cc.fourier, ts)
        th_shift = coupling.theta_from_fourier(bundle.cc.fourier, ts + np.pi)
        checks.append(("antiperiodicity", float(np.max(np.abs(th + th_shift))) < 1e-10))
        checks.append(("winding odd", bundle.cc.winding % 2 == 1))

    # same-parity matrix elements of W vanish
    for bundle in (n1, tuned):
        checks.append(
            (
                "diagonal",
                max(
                    coupling.diagonal_check(bundle.dd, bundle.sc.W, t)
                    for t in (0.0, 1.1, np.pi)
                )
                < 1e-10,
            )
        )

    # Fermi-velocity sign law
    checks.append(("sign law", np.sign(n1.dd.nu_star) == 1 and np.sign(n3.dd.nu_star) == -1))

    # parity branches simple and monotone on a 64-point xi grid
    xis = np.linspace(0.1, np.pi - 1e-3, 64)
    branches = np.array([bloch.parity_spectra(n1.sc.V, xi, 20).mu_e[:4] for xi in xis])
    diffs = np.diff(branches, axis=0)
    mono = all(
        (diffs[:, j] > 1e-12).all() or (diffs[:, j] < -1e-12).all()
        for j in range(branches.shape[1])
    )
    checks.append(("parity monotone+simple", mono and np.diff(branches, axis=1).min() > 1e-6))

    # quasimode inequality on 1000 random trials
    rng = np.random.default_rng(7)
    op = bloch.assemble_bloch(P.cosine(1, 1.0) + P.cosine(2, 0.5), 1.0, 10)
    spec_vals = np.linalg.eigvalsh(op.matrix)
    dim = op.matrix.shape[0]
    quasi_ok = True
    for _ in range(1000):
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        E = float(rng.uniform(-5, 120))
        eta = float(np.linalg.norm(op.matrix @ psi - E * psi) / np.linalg.norm(psi))
        quasi_ok = quasi_ok and np.min(np.abs(spec_vals - E)) <= eta * (1 + 1e-10) + 1e-12
    checks.append(("quasimode x1000", quasi_ok))

    # FHS gauge invariance under random node phases (exact integer)
    field = bulk.torus_eigenframe(P.zero(), P.cosine(1, 2.0), 1.0, 1)
    c_ref = bulk.chern_fhs(field)
    field.frames = {
        k: F * np.exp(1j * rng.uniform(0, 2 * np.pi)) for k, F in field.frames.items()
    }
    checks.append(("FHS gauge invariance", bulk.chern_fhs(field, refine=False) == c_ref))

    ok = all(flag for _, flag in checks)
    failed = [name for name, flag in checks if not flag]
    _report(9, ok, f"{len(checks)} structural checks" + (f"; FAILED: {failed}" if failed else ""))
    assert ok


# -- 10. oracle equivalence ---------------------------------------------------

def test_criterion_10_oracle_equivalence():
    rng = np.random.default_rng(23)
    pairs = []
    for eps in (0.1, 0.08):
        sc = scenarios.scaled_pair(1, eps)
        dd = dirac.find_dirac_point(sc.V, 1)
        curve = coupling.coupling_curve(dd, sc.W)
        for t in rng.uniform(0.8, 2 * np.pi - 0.8, size=4):
            pairs.append((sc, dd, curve, float(t)))
    worst = 0.0
    ok = True
    for sc, dd, curve, t in pairs:
        prob = edge.EdgeProblem(
            V=sc.V,
            W=sc.W,
            n=1,
            profile=dirac_line.TransitionProfile("tanh", 1.0),
            discretization=edge.FiniteDifference(step=0.01),
        )
        roots = edge.wronskian_roots(prob, t)
        if roots.size == 0:
            continue
        # pick L so the wall truncation error sits far below 1e-6: the gap
        # state decays like exp(-kappa |x|), kappa = sqrt(|theta|^2 - mu^2)/nu
        th = abs(complex(coupling.theta_from_fourier(curve.fourier, t)))
        mu = float(np.max(np.abs(roots - dd.E_star)))
        kappa = np.sqrt(max(th * th - mu * mu, 1e-8)) / abs(dd.nu_star)
        L = float(np.clip(9.0 / kappa, 150.0, 1500.0))
        states = [
            s
            for s in edge.edge_spectrum_in_gap(replace(prob, L=L), t)
            if s.is_junction
        ]
        ok = ok and len(states) == roots.size
        for r in roots:
            diff = min(abs(s.energy - r) for s in states)
            worst = max(worst, diff)
    ok = ok and worst < 1e-6
    _report(10, ok, f"8 random (scenario, t) pairs, worst |oracle - truncated| = {worst:.2e}")
    assert ok
