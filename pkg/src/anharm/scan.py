"""Field sweeps, basis-size convergence tables and cross-checks on sweeps."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .field import FieldScan, System, base_model, scan_field, solve, spectrum, uniform_grid
from .basis import make_basis
from .perturbation import fit_response_a, second_order_c1, single_term_c1

__all__ = ["FieldScan", "scan_field", "spectrum", "uniform_grid", "ConvergenceRow",
           "ConvergenceTable", "convergence_study", "hellmann_feynman_check"]


@dataclass(frozen=True)
class ConvergenceRow:
    n_basis: int
    r0_squared: float
    e0: float
    e1: float
    c1: float
    c1_single_term: float
    a: float


@dataclass
class ConvergenceTable:
    rows: list[ConvergenceRow] = field(default_factory=list)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["N", "r0_sq", "E0", "E1", "c1", "c1_single", "a"])
            for r in self.rows:
                w.writerow([r.n_basis] + [f"{x:.12g}" for x in
                                          (r.r0_squared, r.e0, r.e1, r.c1, r.c1_single_term, r.a)])


def convergence_study(system: System, n_list: Sequence[int], fit_window: float = 0.6,
                      fit_step: float = 0.01, pivot="half", threads: int | None = None) -> ConvergenceTable:
    """One row per basis size: ``r0**2``, ``E0``, ``E1`` and ``c1`` at zero field, and ``a``
    fitted on ``p`` in ``[0, fit_window]``."""
    if list(n_list) != sorted(n_list):
        raise ValueError("basis sizes must be ascending")
    base = base_model(system)
    grid = uniform_grid(0.0, fit_window, fit_step)
    table = ConvergenceTable()
    for n in n_list:
        basis = make_basis(base, n, pivot)
        res = solve(base, basis)
        c1 = second_order_c1(res)
        window = scan_field(base, grid, n, levels=1, pivot=pivot, threads=threads)
        table.rows.append(ConvergenceRow(n, basis.r0_squared, float(res.eigenvalues[0]),
                                         float(res.eigenvalues[1]), c1, single_term_c1(res),
                                         fit_response_a(window, c1)))
    return table


def hellmann_feynman_check(scan: FieldScan) -> float:
    """Largest ``|dE_n/dp + Q_nn|`` over interior points of a uniform grid (central differences)."""
    p = scan.p_values
    if len(p) < 3:
        raise ValueError("need at least 3 grid points")
    h = np.diff(p)
    if not np.allclose(h, h[0], rtol=1e-9, atol=0):
        raise ValueError("grid must be uniform")
    slope = (scan.energies[:, 2:] - scan.energies[:, :-2]) / (p[2:] - p[:-2])
    return float(np.max(np.abs(slope + scan.q_diag[:, 1:-1])))
