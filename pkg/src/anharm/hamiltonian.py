"""Matrix of H in a truncated harmonic-oscillator basis.

Powers of the position operator are normal ordered,

    (a + a^dag)**i = sum_k sum_j  i! / (2**k k! j! (i-2k-j)!)  (a^dag)**(i-2k-j) a**j,

so every matrix element is a finite sum of exact ladder-operator products.
Elements are built with the untruncated operator algebra and rows/columns
``>= N`` are then dropped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import BasisSpec
from .model import Model

EXACT_LIMIT = 20


@dataclass(frozen=True)
class OrderedTerm:
    dagger_power: int
    a_power: int
    coefficient: float


@dataclass(frozen=True)
class SymmetricBandMatrix:
    entries: np.ndarray
    bandwidth: int

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]


@lru_cache(maxsize=None)
def ordered_power(i: int) -> tuple[OrderedTerm, ...]:
    if i < 0:
        raise ValueError(f"power must be >= 0, got {i}")
    terms = []
    for k in range(i // 2 + 1):
        for j in range(i - 2 * k + 1):
            c = math.factorial(i) // (2 ** k * math.factorial(k)
                                      * math.factorial(j) * math.factorial(i - 2 * k - j))
            terms.append(OrderedTerm(i - 2 * k - j, j, float(c)))
    return tuple(terms)


def factorial_ratio(t: int, delta: int, j: int, rest: int) -> float:
    """``sqrt(t! (t+delta)!) / (j! (t-j)! rest!)``.

    Returns 0.0 when any factorial argument is negative: such a term comes
    from annihilating below the ground state and vanishes.  Small arguments
    use exact integers, larger ones go through ``lgamma``.
    """
    s = t + delta
    if min(t, s, j, t - j, rest) < 0:
        return 0.0
    if max(t, s) <= EXACT_LIMIT:
        den = math.factorial(j) * math.factorial(t - j) * math.factorial(rest)
        return math.sqrt(math.factorial(t) * math.factorial(s)) / den
    log = (0.5 * (math.lgamma(t + 1) + math.lgamma(s + 1))
           - math.lgamma(j + 1) - math.lgamma(t - j + 1) - math.lgamma(rest + 1))
    return math.exp(log)


def _column(model: Model, r0: float, t: int, n: int) -> dict[int, float]:
    """Nonzero elements ``<s|H|t>`` for ``s < n``."""
    col: dict[int, float] = {}
    kin = model.hbar ** 2 / (4 * model.mass * r0 * r0)
    col[t] = kin * (2 * t + 1)
    if t >= 2:
        col[t - 2] = -kin * math.sqrt(t * (t - 1))
    if t + 2 < n:
        col[t + 2] = -kin * math.sqrt((t + 1) * (t + 2))
    for i, lam in enumerate(model.lambdas):
        if lam == 0.0:
            continue
        scale = lam * r0 ** i / 2 ** (i / 2)
        for k in range(i // 2 + 1):
            pref = math.factorial(i) / (2 ** k * math.factorial(k))
            for j in range(min(i - 2 * k, t) + 1):
                rest = i - 2 * k - j
                delta = rest - j
                s = t + delta
                if s >= n:
                    continue
                col[s] = col.get(s, 0.0) + scale * pref * factorial_ratio(t, delta, j, rest)
    return col


def matrix_element(model: Model, r0: float, s: int, t: int) -> float:
    """Single element ``<s|H|t>``, evaluated from column ``t`` only."""
    return _column(model, r0, t, max(s, t) + 1).get(s, 0.0)


def assemble(model: Model, basis: BasisSpec | float, n_basis: int | None = None) -> SymmetricBandMatrix:
    """N x N matrix of ``H``; the lower triangle is computed and mirrored.

    ``basis`` is a :class:`BasisSpec` or a bare length scale together with
    ``n_basis``.
    """
    if isinstance(basis, BasisSpec):
        r0, n = basis.r0, basis.n_basis
    else:
        r0, n = float(basis), n_basis
    if n is None or n < 2:
        raise ValueError(f"basis needs at least 2 functions, got {n}")
    h = np.zeros((n, n))
    for t in range(n):
        for s, v in _column(model, r0, t, n).items():
            if s >= t:
                h[s, t] = v
                h[t, s] = v
    return SymmetricBandMatrix(h, max(2, model.degree))


def position_operator(basis: BasisSpec | float, n_basis: int | None = None) -> np.ndarray:
    """Truncated ``Q = r0/sqrt(2) (a + a^dag)``."""
    if isinstance(basis, BasisSpec):
        r0, n = basis.r0, basis.n_basis
    else:
        r0, n = float(basis), n_basis
    off = r0 / math.sqrt(2) * np.sqrt(np.arange(1, n))
    return np.diag(off, 1) + np.diag(off, -1)


def dump_matrix(matrix: SymmetricBandMatrix | np.ndarray, path) -> None:
    """Row-major plain text, 17 significant digits per entry."""
    h = matrix.entries if isinstance(matrix, SymmetricBandMatrix) else matrix
    np.savetxt(path, h, fmt="%.16e")
