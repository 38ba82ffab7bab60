import math

import numpy as np
import pytest

from anharm import DoubleWellParams, make_model, scan_field, spectrum
from anharm.field import uniform_grid
from anharm.perturbation import (AnalysisError, NoCrossingError, asymptotic_fit, curvature_grid,
                                 curvature_oracle, degenerate_slope, find_avoided_crossing,
                                 fit_response_a, golden_section, local_models, response_coefficients,
                                 response_model, second_order_c1, second_order_terms, single_term_c1)
from anharm.field import FieldScan

HARMONIC = make_model([0, 0, 0.5])


def test_golden_section_quadratic():
    assert golden_section(lambda x: (x - 0.3) ** 2, -1, 2, 1e-10) == pytest.approx(0.3, abs=1e-9)


def test_c1_harmonic_exact():
    res = spectrum(HARMONIC, 20)
    assert second_order_c1(res) == pytest.approx(-1 / (4 * 0.5), rel=1e-12)
    assert single_term_c1(res) == pytest.approx(second_order_c1(res), rel=1e-12)


def test_c1_full_sum_shallow(shallow40):
    # full second-order sum; the single-term value is the one that reproduces the reference -3.392128193573
    assert second_order_c1(shallow40) == pytest.approx(-3.404326261252, abs=1e-9)
    assert single_term_c1(shallow40) == pytest.approx(-3.392128193573, abs=1e-9)


def test_c1_only_odd_states_contribute(shallow40):
    terms = second_order_terms(shallow40)
    assert np.all(np.abs(terms[0::2]) <= 1e-12)
    assert np.all(terms[1::2] <= 0)


def test_single_term_negative(shallow):
    for n in (10, 30):
        assert single_term_c1(spectrum(shallow, n)) < 0


def test_curvature_oracle_matches_full_sum(shallow, shallow40):
    scan = scan_field(shallow, curvature_grid(), 40, 2)
    assert curvature_oracle(scan) == pytest.approx(second_order_c1(shallow40), abs=1e-6)
    assert curvature_oracle(scan, level=1) > 0


def test_curvature_oracle_harmonic():
    scan = scan_field(HARMONIC, curvature_grid(), 20, 1)
    assert curvature_oracle(scan) == pytest.approx(-0.5, abs=1e-8)


def test_curvature_oracle_needs_grid(shallow):
    scan = scan_field(shallow, [0.0, 0.1], 20, 1)
    with pytest.raises(AnalysisError):
        curvature_oracle(scan)


def test_degenerate_slope(shallow, shallow40):
    assert degenerate_slope(shallow40) == pytest.approx(-1.0831950565, abs=1e-9)
    assert degenerate_slope(spectrum(shallow, 40, 0.0)) == degenerate_slope(shallow40)


def test_degenerate_slope_deep_limit():
    res = spectrum(DoubleWellParams(-8, 1), 60)
    assert degenerate_slope(res) == pytest.approx(-math.sqrt(8), rel=0.05)


def test_response_model_limits():
    assert response_model(-0.3, -0.9, 3.7, 0.0) == -0.3
    p = 1e-4
    got = response_model(-0.3, -0.9, 3.7, p) - (-0.3)
    assert got == pytest.approx(-0.9 * 3.7 * p * p, rel=1e-7)


def test_response_model_with_degenerate_slope_parameters(shallow):
    p = uniform_grid(0, 0.3, 0.01)
    scan = scan_field(shallow, p, 40, 1)
    model = response_model(scan.energies[0, 0], -0.8531, 3.9762, p)
    assert np.max(np.abs(model - scan.energies[0])) <= 5e-3


def _synthetic_scan(a, c1, p):
    e = response_model(-0.3, a, c1 / a, p)
    return FieldScan(p, e[None, :], np.zeros((1, len(p))), None)


def test_fit_recovers_synthetic_slope():
    p = uniform_grid(0, 0.6, 0.01)
    assert fit_response_a(_synthetic_scan(-0.9, -3.4, p), -3.4) == pytest.approx(-0.9, abs=1e-8)


def test_fit_needs_points():
    with pytest.raises(AnalysisError):
        fit_response_a(_synthetic_scan(-0.9, -3.4, np.array([0, 0.1, 0.2])), -3.4)


def test_fit_shallow_window(shallow, shallow40):
    c1 = second_order_c1(shallow40)
    scan = scan_field(shallow, uniform_grid(0, 0.6, 0.01), 40, 1)
    a = fit_response_a(scan, c1)
    assert a == pytest.approx(-0.93, abs=0.02)
    # the fitted slope stays below the degenerate-limit slope |Q01| = 1.0832
    assert abs(a) < -degenerate_slope(shallow40)


def test_response_coefficients_parameter_free(shallow40):
    rc = response_coefficients(shallow40)
    assert rc.c1 < 0 and rc.a < 0 and rc.omega > 0
    assert rc.a == -rc.q01_abs
    assert rc.omega == pytest.approx(rc.c1 / rc.a)


def test_deep_crossing(deep_crossing):
    ca = deep_crossing
    assert ca.p1 == pytest.approx(0.70724, abs=1e-4)
    assert ca.gap_min > 0
    assert (ca.level_lo, ca.level_hi) == (1, 2)
    assert ca.q_lo == pytest.approx(-0.05912, abs=2e-4)
    assert ca.q_hi == pytest.approx(-0.05902, abs=2e-4)
    assert ca.c2 == pytest.approx(-39.30905, abs=0.05)


def test_local_model_signs(deep_crossing):
    lm = deep_crossing.models
    dp = 0.01
    assert lm.c2 < 0
    assert lm.lower(dp) + lm.lower(-dp) - 2 * lm.e_lo < 0
    assert lm.upper(dp) + lm.upper(-dp) - 2 * lm.e_hi > 0


def test_local_models_track_scan(deep, deep_crossing):
    dp = np.linspace(-0.015, 0.015, 31)
    scan = scan_field(deep, deep_crossing.p1 + dp, 50, 3)
    lm = deep_crossing.models
    assert np.max(np.abs(scan.energies[1] - lm.lower(dp))) <= 1e-3
    assert np.max(np.abs(scan.energies[2] - lm.upper(dp))) <= 1e-3


def test_local_model_slope_is_hellmann_feynman(deep, deep_crossing):
    h = 1e-5
    scan = scan_field(deep, deep_crossing.p1 + np.array([-h, 0, h]), 50, 3)
    slope = (scan.energies[1, 2] - scan.energies[1, 0]) / (2 * h)
    assert slope == pytest.approx(-deep_crossing.q_lo, abs=1e-6)


def test_no_crossing_harmonic():
    with pytest.raises(NoCrossingError):
        find_avoided_crossing(HARMONIC, 20, 0, (0.0, 1.0))


def test_shallow_gap_minimum_at_zero_field(shallow):
    ca = find_avoided_crossing(shallow, 30, 0, (-0.2, 0.2))
    assert ca.p1 == pytest.approx(0.0, abs=1e-6)
    assert ca.gap_min == pytest.approx(0.345892449644, abs=1e-8)


def test_shallow_gap_monotone_on_half_bracket(shallow):
    with pytest.raises(NoCrossingError):
        find_avoided_crossing(shallow, 30, 0, (0.0, 0.2))


def test_local_models_at_zero_field_have_no_slope(shallow40):
    lm = local_models(shallow40, 0)
    assert abs(lm.q_lo) <= 1e-10 and abs(lm.q_hi) <= 1e-10
    assert lm.c2 == pytest.approx(single_term_c1(shallow40), rel=1e-12)


def test_asymptotic_fit_shallow(shallow):
    scan = scan_field(shallow, np.linspace(20, 80, 13), 50, 1)
    A, B = asymptotic_fit(scan)
    assert B == pytest.approx(-0.4725 / 0.25 ** (1 / 3), rel=0.10)


def test_asymptotic_fit_pure_quartic():
    model = make_model([0, 0, 0, 0, 0.25])
    scan = scan_field(model, np.linspace(20, 80, 13), 60, 1)
    assert asymptotic_fit(scan).B == pytest.approx(-0.75 * (4 * 0.25) ** (-1 / 3), rel=0.02)


def test_asymptotic_residual_shrinks(shallow):
    res = [asymptotic_fit(scan_field(shallow, np.linspace(lo, lo + 10, 11), 50, 1)).max_residual
           for lo in (5, 20, 40, 70)]
    assert np.all(np.diff(res) < 0)


def test_asymptotic_fit_needs_points(shallow):
    with pytest.raises(AnalysisError):
        asymptotic_fit(scan_field(shallow, [20, 40, 60], 50, 1))
