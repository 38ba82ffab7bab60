"""Position-space eigenstates and position-operator matrix elements."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigensolver import SpectralResult
from .hamiltonian import position_operator

DEFAULT_GRID = (-5.0, 5.0, 1001)


@dataclass(frozen=True)
class PositionGrid:
    q_min: float = DEFAULT_GRID[0]
    q_max: float = DEFAULT_GRID[1]
    n_points: int = DEFAULT_GRID[2]

    def __post_init__(self):
        if not self.q_min < self.q_max:
            raise ValueError(f"empty grid [{self.q_min}, {self.q_max}]")
        if self.n_points < 2:
            raise ValueError("grid needs at least 2 points")

    @property
    def q(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.n_points)


@dataclass(frozen=True)
class PositionMatrix:
    q_elements: np.ndarray

    def __getitem__(self, idx):
        return self.q_elements[idx]

    @property
    def q01_abs(self) -> float:
        return abs(float(self.q_elements[0, 1]))


def ho_functions(n_max: int, r0: float, q) -> np.ndarray:
    """Normalized oscillator eigenfunctions ``phi_0 .. phi_{n_max-1}`` on ``q``.

    Uses the recurrence on the normalized functions themselves,
    ``phi_{s+1} = sqrt(2/(s+1)) y phi_s - sqrt(s/(s+1)) phi_{s-1}``, ``y = q/r0``,
    which stays finite where raw Hermite polynomials overflow.
    """
    y = np.asarray(q, dtype=float) / r0
    out = np.empty((n_max,) + y.shape)
    out[0] = (math.pi * r0 * r0) ** -0.25 * np.exp(-0.5 * y * y)
    if n_max > 1:
        out[1] = math.sqrt(2.0) * y * out[0]
    for s in range(1, n_max - 1):
        out[s + 1] = math.sqrt(2.0 / (s + 1)) * y * out[s] - math.sqrt(s / (s + 1)) * out[s - 1]
    return out


def ho_function(s: int, r0: float, q):
    if s < 0 or not r0 > 0:
        raise ValueError("need s >= 0 and r0 > 0")
    v = ho_functions(s + 1, r0, q)[s]
    return v if v.ndim else float(v)


def eigenstate_on_grid(result: SpectralResult, n, grid: PositionGrid | np.ndarray | None = None) -> np.ndarray:
    """``psi_n(q) = sum_s c[s, n] phi_s(q)``; ``n`` may be an int or a list of levels."""
    if result.basis is None:
        raise ValueError("spectral result carries no basis")
    q = grid.q if isinstance(grid, PositionGrid) else (
        PositionGrid().q if grid is None else np.asarray(grid, dtype=float))
    phi = ho_functions(result.basis.n_basis, result.basis.r0, q)
    return result.eigenvectors[:, n].T @ phi


def position_matrix(result: SpectralResult, k: int | None = None) -> PositionMatrix:
    """``Q_mn = <psi_m|Q|psi_n>`` for the lowest ``k`` states, via ladder algebra."""
    if result.basis is None:
        raise ValueError("spectral result carries no basis")
    n = result.basis.n_basis
    k = n if k is None else k
    if not 0 < k <= n:
        raise ValueError(f"need 0 < k <= {n}, got {k}")
    v = result.eigenvectors[:, :k]
    q = v.T @ position_operator(result.basis) @ v
    return PositionMatrix(0.5 * (q + q.T))


def unconverged_states(result: SpectralResult, threshold: float = 1e-6) -> list[int]:
    """Levels with at least ``threshold`` of their norm in the top two basis functions."""
    tail = np.sum(result.eigenvectors[-2:, :] ** 2, axis=0)
    return [int(i) for i in np.nonzero(tail >= threshold)[0]]
