"""Field response of the spectrum.

Three regimes for the ground state of a double well:

* small ``p``: second order, ``E0(p) ~ E0(0) + c1 p**2``;
* intermediate ``p``: the tunnelling doublet acts degenerate, ``E0(p) ~ E0(0) - |Q01| p``;
* large ``p``: ``E0(p) ~ A + B p**(4/3)`` set by the tilted quartic well.

``E0(0) + a p tanh(w p)`` with ``a w = c1`` interpolates the first two.
Pairs of levels that approach each other as ``p`` varies are analysed with
local quadratic models around the point of closest approach.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .eigensolver import SpectralResult
from .basis import make_basis
from .field import FieldScan, System, base_model, solve
from .wavefunction import position_matrix

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class AnalysisError(RuntimeError):
    pass


class NoCrossingError(AnalysisError):
    pass


@dataclass(frozen=True)
class ResponseCoefficients:
    e0_at_zero: float
    c1: float
    q01_abs: float
    a: float
    omega: float
    c1_single_term: float | None = None


@dataclass(frozen=True)
class LocalModels:
    """Quadratic expansions of two neighbouring levels about ``p1``.

    The linear term follows from ``dE_n/dp = -<psi_n|Q|psi_n>``.
    """
    p1: float
    e_lo: float
    e_hi: float
    q_lo: float
    q_hi: float
    c2: float

    def lower(self, dp):
        return self.e_lo - self.q_lo * dp + self.c2 * dp * dp

    def upper(self, dp):
        return self.e_hi - self.q_hi * dp - self.c2 * dp * dp


@dataclass(frozen=True)
class CrossingAnalysis:
    p1: float
    gap_min: float
    q_lo: float
    q_hi: float
    c2: float
    level_lo: int
    level_hi: int
    models: LocalModels
    result: SpectralResult = field(repr=False)


@dataclass(frozen=True)
class AsymptoticFit:
    A: float
    B: float
    max_residual: float

    def __iter__(self):
        return iter((self.A, self.B))


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10) -> float:
    """Minimize a unimodal ``f`` on ``[lo, hi]`` until the bracket is narrower than ``tol``."""
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
    return 0.5 * (lo + hi)


def second_order_terms(result: SpectralResult, level: int = 0) -> np.ndarray:
    """Per-state contributions ``|Q_lm|**2 / (E_l - E_m)``; the ``m = level`` entry is zero."""
    q = position_matrix(result).q_elements[level]
    e = result.eigenvalues
    terms = np.zeros_like(e)
    mask = np.arange(len(e)) != level
    terms[mask] = q[mask] ** 2 / (e[level] - e[mask])
    return terms


def second_order_c1(result: SpectralResult, level: int = 0) -> float:
    """Full second-order coefficient of ``E_level(p)`` in the field, summed over every basis state."""
    return float(np.sum(second_order_terms(result, level)))


def single_term_c1(result: SpectralResult) -> float:
    """Second-order coefficient keeping only the first excited state."""
    q = position_matrix(result, 2).q_elements
    e = result.eigenvalues
    return float(q[0, 1] ** 2 / (e[0] - e[1]))


def curvature_grid(delta: float = 1e-3) -> np.ndarray:
    return np.array([-delta, -delta / 2, 0.0, delta / 2, delta])


def curvature_oracle(scan: FieldScan, level: int = 0, delta: float = 1e-3) -> float:
    """Half second derivative of ``E_level`` at ``p = 0`` by finite differences.

    Central differences at ``delta`` and ``delta/2``, Richardson-combined.
    """
    try:
        i0, ip, im = (scan.index_of(x) for x in (0.0, delta, -delta))
        hp, hm = scan.index_of(delta / 2), scan.index_of(-delta / 2)
    except KeyError as exc:
        raise AnalysisError(f"scan lacks the points for a curvature estimate: {exc}") from exc
    e = scan.energies[level]
    c_full = (e[ip] - 2 * e[i0] + e[im]) / (2 * delta ** 2)
    c_half = (e[hp] - 2 * e[i0] + e[hm]) / (2 * (delta / 2) ** 2)
    return (4 * c_half - c_full) / 3


def degenerate_slope(result: SpectralResult) -> float:
    return -position_matrix(result, 2).q01_abs


def response_model(e0: float, a: float, omega: float, p):
    return e0 + a * p * np.tanh(omega * p)


def fit_response_a(scan: FieldScan, c1: float, bounds=(-3.0, -0.1), tol: float = 1e-10) -> float:
    """Least-squares slope ``a`` of the tanh model with ``omega = c1 / a`` held to the constraint.

    Uses every point of ``scan``; ``E0(0)`` is taken from its ``p = 0`` point.
    """
    if len(scan.p_values) < 5:
        raise AnalysisError("fit window needs at least 5 points")
    try:
        e0 = scan.energies[0, scan.index_of(0.0)]
    except KeyError as exc:
        raise AnalysisError("fit window must contain p = 0") from exc
    p = scan.p_values
    de = scan.energies[0] - e0

    def sse(a):
        return float(np.sum((de - a * p * np.tanh(c1 / a * p)) ** 2))

    return golden_section(sse, bounds[0], bounds[1], tol)


def response_coefficients(result: SpectralResult, window_scan: FieldScan | None = None) -> ResponseCoefficients:
    """Bundle the small/intermediate-field coefficients at ``p = 0``.

    Without ``window_scan`` the parameter-free choice ``a = -|Q01|`` is used.
    """
    c1 = second_order_c1(result)
    q01 = position_matrix(result, 2).q01_abs
    a = fit_response_a(window_scan, c1) if window_scan is not None else -q01
    return ResponseCoefficients(float(result.eigenvalues[0]), c1, q01, a, c1 / a,
                                single_term_c1(result))


def local_models(result: SpectralResult, level_lo: int, p1: float = 0.0) -> LocalModels:
    q = position_matrix(result, level_lo + 2).q_elements
    e = result.eigenvalues
    lo, hi = level_lo, level_lo + 1
    c2 = q[lo, hi] ** 2 / (e[lo] - e[hi])
    return LocalModels(p1, float(e[lo]), float(e[hi]), float(q[lo, lo]), float(q[hi, hi]), float(c2))


def find_avoided_crossing(system: System, n_basis: int, level_lo: int, bracket: Sequence[float],
                          pivot="half", coarse_points: int = 41, tol: float = 1e-7,
                          m: float = 1.0, hbar: float = 1.0) -> CrossingAnalysis:
    """Locate the minimum of ``E_{lo+1}(p) - E_lo(p)`` inside ``bracket``.

    A coarse scan picks the neighbourhood and golden-section search refines
    it.  Raises :class:`NoCrossingError` when the gap is monotone on the
    bracket or its minimum sits on an end point.
    """
    p_lo, p_hi = float(bracket[0]), float(bracket[1])
    if not p_lo < p_hi:
        raise ValueError("bracket must be increasing")
    base = base_model(system, m, hbar)
    basis = make_basis(base, n_basis, pivot)
    hi_level = level_lo + 1

    def gap(p):
        e = solve(base.with_field(p), basis).eigenvalues
        return e[hi_level] - e[level_lo]

    ps = np.linspace(p_lo, p_hi, coarse_points)
    gaps = np.array([gap(p) for p in ps])
    diffs = np.diff(gaps)
    flat = 1e-12 * max(1.0, float(np.max(np.abs(gaps))))
    if np.all(diffs >= -flat) or np.all(diffs <= flat):
        raise NoCrossingError(f"gap between levels {level_lo} and {hi_level} "
                              f"is monotone on [{p_lo}, {p_hi}]")
    j = int(np.argmin(gaps))
    if j in (0, coarse_points - 1):
        raise NoCrossingError(f"gap minimum lies on the bracket boundary p={ps[j]}")
    p1 = golden_section(gap, ps[j - 1], ps[j + 1], tol)
    res = solve(base.with_field(p1), basis)
    lm = local_models(res, level_lo, p1)
    e = res.eigenvalues
    return CrossingAnalysis(p1, float(e[hi_level] - e[level_lo]), lm.q_lo, lm.q_hi, lm.c2,
                            level_lo, hi_level, lm, res)


def asymptotic_fit(scan: FieldScan, level: int = 0) -> AsymptoticFit:
    """Linear least squares of ``E_level`` against ``p**(4/3)``."""
    if len(scan.p_values) < 5:
        raise AnalysisError("asymptotic fit needs at least 5 points")
    x = np.abs(scan.p_values) ** (4.0 / 3.0)
    y = scan.energies[level]
    design = np.column_stack([np.ones_like(x), x])
    (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
    return AsymptoticFit(float(a), float(b), float(np.max(np.abs(y - a - b * x))))
