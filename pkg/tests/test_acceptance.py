"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary
and then asserts at the criterion's tolerance.
"""
import numpy as np

import conftest
from anharm import DoubleWellParams, from_double_well, make_basis, make_model, scan_field, spectrum
from anharm.eigensolver import eigh
from anharm.field import uniform_grid
from anharm.hamiltonian import assemble
from anharm.perturbation import (asymptotic_fit, curvature_grid, curvature_oracle,
                                 fit_response_a, second_order_c1)
from anharm.scan import hellmann_feynman_check
from anharm.wavefunction import position_matrix
from oracles import jacobi_eigenvalues, quadrature_hamiltonian

SHALLOW = DoubleWellParams(-2.0, 1.0)
DEEP = DoubleWellParams(-4.0, 1.0)

REFERENCE = {  # N: (r0^2, E0, E1)
    10: (0.59, -0.299479413549, 0.046558837188),
    20: (0.45, -0.299521364979, 0.046371082733),
    30: (0.38, -0.299521367416, 0.046371082228),
    40: (0.34, -0.299521367416, 0.046371082228),
}
REFERENCE_C1 = -3.392128193573


def record(num, ok, detail):
    conftest.ACCEPTANCE_LINES.append((num, f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}"))
    assert ok, detail


def test_criterion_01_reference_spectrum():
    worst_e, worst_r = 0.0, 0.0
    for n, (r2, e0, e1) in REFERENCE.items():
        res = spectrum(SHALLOW, n)
        worst_e = max(worst_e, abs(res.eigenvalues[0] - e0), abs(res.eigenvalues[1] - e1))
        worst_r = max(worst_r, abs(res.basis.r0_squared - r2))
    record(1, worst_e <= 1e-9 and worst_r <= 0.005,
           f"max |dE| = {worst_e:.2e} (tol 1e-9), max |d r0^2| = {worst_r:.4f} (tol 0.005)")


def test_criterion_02_ground_pair_dipole(shallow40):
    q01 = position_matrix(shallow40, 2).q01_abs
    record(2, abs(q01 - 0.853104) <= 1e-5, f"|Q01| = {q01:.6f}, target 0.853104 +- 1e-5")


def test_criterion_03_second_order_coefficient(shallow40):
    full = second_order_c1(shallow40)
    fd = curvature_oracle(scan_field(SHALLOW, curvature_grid(), 40, 1))
    d_self, d_table = abs(full - fd), abs(full - REFERENCE_C1)
    record(3, d_self <= 1e-4 and d_table <= 1e-4,
           f"sum {full:.9f} vs curvature {fd:.9f} (diff {d_self:.1e}); "
           f"vs reference {REFERENCE_C1} diff {d_table:.1e} (tol 1e-4)")


def test_criterion_04_fitted_slope_window(shallow40):
    c1 = second_order_c1(shallow40)
    fits = {}
    for w in (0.4, 0.5, 0.6, 0.7, 0.8):
        fits[w] = fit_response_a(scan_field(SHALLOW, uniform_grid(0, w, 0.01), 40, 1), c1)
    ok = all(-0.96 <= a <= -0.90 for a in fits.values())
    shown = ", ".join(f"w={w}: {a:.4f}" for w, a in fits.items())
    record(4, ok, f"a in [-0.96, -0.90]? {shown}")


def test_criterion_05_deep_well_crossing(deep_crossing):
    ca = deep_crossing
    errs = [abs(ca.p1 - 0.70724) <= 1e-4, abs(ca.c2 + 39.30905) <= 0.05,
            abs(ca.q_lo + 0.05912) <= 2e-4, abs(ca.q_hi + 0.05902) <= 2e-4]
    record(5, all(errs), f"p1 = {ca.p1:.6f}, c2 = {ca.c2:.4f}, Q11 = {ca.q_lo:.5f}, Q22 = {ca.q_hi:.5f}")


def test_criterion_06_local_model_fidelity(deep_crossing):
    dp = np.linspace(-0.02, 0.02, 41)
    scan = scan_field(DEEP, deep_crossing.p1 + dp, 50, 3)
    lm = deep_crossing.models
    err = max(np.max(np.abs(scan.energies[1] - lm.lower(dp))),
              np.max(np.abs(scan.energies[2] - lm.upper(dp))))
    record(6, err <= 1e-3, f"max |E - model| over |dp| <= 0.02: {err:.2e} (tol 1e-3)")


def test_criterion_07_exact_limits():
    worst = 0.0
    n_basis = 40
    for lam2 in (0.5, 2.0):
        model = make_model([0, 0, lam2])
        omega = np.sqrt(2 * lam2)
        k = n_basis // 2 - 1
        exact = omega * (np.arange(k) + 0.5)
        for p in (0.0, 0.1, 0.3):
            e = spectrum(model, n_basis, p).eigenvalues[:k]
            worst = max(worst, np.max(np.abs(e - (exact - p * p / (4 * lam2)))))
    record(7, worst <= 1e-10, f"max deviation from shifted oscillator levels: {worst:.2e} (tol 1e-10)")


def test_criterion_08_invariants():
    model = from_double_well(SHALLOW)
    basis = make_basis(model, 40)
    checks = {}
    h0 = assemble(model, basis).entries
    checks["symmetry"] = (float(np.max(np.abs(h0 - h0.T))), 0.0)
    s, t = np.indices(h0.shape)
    res0 = eigh(h0)
    v = res0.eigenvectors
    checks["parity zeros"] = (max(float(np.max(np.abs(h0[(s - t) % 2 == 1]))),
                                  float(np.max(np.abs(v[1::2, 0::2])))), 1e-10)
    orth, resid = 0.0, 0.0
    for p in (0.0, 0.2, 0.70724):
        h = assemble(model.with_field(p), basis).entries
        r = eigh(h)
        w = r.eigenvectors
        orth = max(orth, float(np.max(np.abs(w.T @ w - np.eye(40)))))
        resid = max(resid, float(np.max(np.linalg.norm(h @ w - w * r.eigenvalues, axis=0)
                                        / (1 + np.abs(r.eigenvalues)))))
    checks["orthonormality"] = (orth, 1e-12)
    checks["residual"] = (resid, 1e-10)
    even = 0.0
    for p in (0.1, 0.2, 0.70724):
        even = max(even, float(np.max(np.abs(spectrum(SHALLOW, 40, p).eigenvalues[:10]
                                             - spectrum(SHALLOW, 40, -p).eigenvalues[:10]))))
    checks["even in p"] = (even, 1e-12)
    hf = hellmann_feynman_check(scan_field(SHALLOW, uniform_grid(0, 1, 0.01), 40, 2))
    checks["Hellmann-Feynman (0.01 grid)"] = (hf, 1e-4)
    ok = all(val <= tol for val, tol in checks.values())
    failing = [k for k, (val, tol) in checks.items() if val > tol]
    detail = "; ".join(f"{k} {val:.1e}" for k, (val, _) in checks.items())
    record(8, ok, detail + (f"  [over tolerance: {', '.join(failing)}]" if failing else ""))


def test_criterion_09_oracle_equivalence():
    worst_eig = 0.0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        n = 3 + seed % 10
        a = rng.normal(size=(n, n))
        a = a + a.T
        worst_eig = max(worst_eig, float(np.max(np.abs(eigh(a).eigenvalues - jacobi_eigenvalues(a)))))
    worst_el = 0.0
    for lambdas in ([0, 0, -1, 0, 0.25], [0, -0.2, -1, 0, 0.25], [0.3, 0.1, 0.5, -0.2, 0.1, 0, 0.01]):
        model = make_model(lambdas)
        for n in (2, 6, 10):
            b = make_basis(model, n)
            ref = quadrature_hamiltonian(model.lambdas, b.r0, n)
            worst_el = max(worst_el, float(np.max(np.abs(assemble(model, b).entries - ref))))
    record(9, worst_eig <= 1e-11 and worst_el <= 1e-8,
           f"eigenvalues vs Jacobi {worst_eig:.1e} (tol 1e-11); elements vs quadrature {worst_el:.1e} (tol 1e-8)")


def test_criterion_10_asymptotic_regime():
    fit = asymptotic_fit(scan_field(SHALLOW, np.linspace(20, 80, 13), 50, 1))
    target = -0.4725 / 0.25 ** (1 / 3)
    rel = abs(fit.B - target) / abs(target)
    record(10, rel <= 0.10, f"B = {fit.B:.5f} vs {target:.5f} (rel {rel:.3f}, tol 0.10)")
