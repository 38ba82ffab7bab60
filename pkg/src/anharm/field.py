"""Spectra as a function of the external field ``p``.

The basis scale ``r0`` does not depend on ``p``, so one basis serves a whole
sweep; each grid point is an independent assemble + diagonalize.
"""
from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .basis import BasisSpec, make_basis
from .eigensolver import EigensolverError, SpectralResult, eigh
from .hamiltonian import assemble
from .model import DoubleWellParams, Model, from_double_well
from .wavefunction import position_matrix

System = Union[Model, DoubleWellParams]


def base_model(system: System, m: float = 1.0, hbar: float = 1.0) -> Model:
    """Zero-field model of a system; a double well loses its own ``p``."""
    if isinstance(system, DoubleWellParams):
        return from_double_well(DoubleWellParams(system.alpha, system.beta, 0.0), m, hbar)
    return system


def default_threads() -> int:
    env = os.environ.get("ANHARM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class FieldScan:
    p_values: np.ndarray
    energies: np.ndarray
    q_diag: np.ndarray
    basis: BasisSpec

    @property
    def levels(self) -> int:
        return self.energies.shape[0]

    def index_of(self, p: float, tol: float = 1e-12) -> int:
        hits = np.nonzero(np.abs(self.p_values - p) <= tol)[0]
        if not len(hits):
            raise KeyError(f"field value {p} not on scan grid")
        return int(hits[0])

    def to_csv(self, path) -> None:
        k = self.levels
        header = (["p"] + [f"E{n}" for n in range(k)] + [f"Q{n}{n}" for n in range(k)])
        with open(path, "w", newline="") as fh:
            fh.write(f"# n_basis={self.basis.n_basis} pivot={self.basis.pivot} "
                     f"r0={self.basis.r0:.17g}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for j, p in enumerate(self.p_values):
                row = [p, *self.energies[:, j], *self.q_diag[:, j]]
                w.writerow([f"{x:.17g}" for x in row])

    @classmethod
    def from_csv(cls, path) -> "FieldScan":
        with open(path) as fh:
            meta = fh.readline().lstrip("# ").split()
            info = dict(item.split("=") for item in meta)
            rows = list(csv.reader(fh))
        header, data = rows[0], np.array(rows[1:], dtype=float)
        k = sum(1 for h in header if h.startswith("E"))
        basis = BasisSpec(int(info["n_basis"]), int(info["pivot"]), float(info["r0"]))
        return cls(data[:, 0], data[:, 1:1 + k].T.copy(), data[:, 1 + k:1 + 2 * k].T.copy(), basis)


def solve(model: Model, basis: BasisSpec) -> SpectralResult:
    return eigh(assemble(model, basis), basis)


def spectrum(system: System, n_basis: int, p: float = 0.0, pivot="half",
             m: float = 1.0, hbar: float = 1.0) -> SpectralResult:
    """Diagonalize ``H`` at field ``p`` in the optimized basis of size ``n_basis``."""
    base = base_model(system, m, hbar)
    basis = make_basis(base, n_basis, pivot)
    return solve(base.with_field(p), basis)


def scan_field(system: System, p_grid: Sequence[float], n_basis: int, levels: int = 2,
               pivot="half", threads: int | None = None, reoptimize: bool = False,
               m: float = 1.0, hbar: float = 1.0) -> FieldScan:
    """Lowest ``levels`` eigenvalues and ``<psi_n|Q|psi_n>`` over a field grid.

    Levels are matched across ``p`` by sorted order.  ``reoptimize`` redoes
    the basis optimization at every point (diagnostic; it cannot change ``r0``).
    Output order follows the grid whatever the thread count.
    """
    p_values = np.asarray(p_grid, dtype=float)
    if p_values.ndim != 1 or not len(p_values):
        raise ValueError("field grid must be a nonempty 1-D sequence")
    if levels < 1 or 4 * levels > n_basis:
        raise ValueError(f"levels={levels} needs n_basis >= {4 * levels}")
    base = base_model(system, m, hbar)
    basis = make_basis(base, n_basis, pivot)

    def point(p):
        model = base.with_field(p)
        b = make_basis(model, n_basis, pivot) if reoptimize else basis
        try:
            res = solve(model, b)
        except EigensolverError as exc:
            raise EigensolverError(f"at p={p}: {exc}") from exc
        q = position_matrix(res, levels)
        return res.eigenvalues[:levels], np.diag(q.q_elements).copy()

    threads = default_threads() if threads is None else threads
    if threads > 1 and len(p_values) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = list(pool.map(point, p_values))
    else:
        out = [point(p) for p in p_values]
    energies = np.array([e for e, _ in out]).T.copy()
    q_diag = np.array([q for _, q in out]).T.copy()
    return FieldScan(p_values, energies, q_diag, basis)


def uniform_grid(p_min: float, p_max: float, step: float) -> np.ndarray:
    """Inclusive grid ``p_min, p_min + step, ..., p_max`` without float drift."""
    if not step > 0 or p_max < p_min:
        raise ValueError("need step > 0 and p_max >= p_min")
    n = int(round((p_max - p_min) / step))
    return p_min + step * np.arange(n + 1)
