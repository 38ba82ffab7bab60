"""Physical system: polynomial potentials, optionally tilted by a linear field.

The Hamiltonian is ``H = P**2 / (2 m) + sum_i lambdas[i] * Q**i``.  A double well
in an external field ``p`` is the special case

    V(Q) - p Q = alpha/2 Q**2 + beta/4 Q**4 - p Q,

i.e. ``lambdas = [0, -p, alpha/2, 0, beta/4]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class ModelError(ValueError):
    """Raised for physically invalid model parameters."""


@dataclass(frozen=True)
class Model:
    lambdas: tuple[float, ...]
    mass: float = 1.0
    hbar: float = 1.0

    @property
    def degree(self) -> int:
        return len(self.lambdas) - 1

    def coefficient(self, i: int) -> float:
        return self.lambdas[i] if 0 <= i < len(self.lambdas) else 0.0

    def with_field(self, p: float) -> "Model":
        """Same potential with ``-p Q`` added on top of the existing linear term."""
        lam = list(self.lambdas)
        lam[1] -= p
        return Model(tuple(lam), self.mass, self.hbar)

    @property
    def is_even(self) -> bool:
        return all(c == 0.0 for c in self.lambdas[1::2])


@dataclass(frozen=True)
class DoubleWellParams:
    alpha: float
    beta: float
    p: float = 0.0

    def __post_init__(self):
        if not self.alpha < 0:
            raise ModelError(f"double well needs alpha < 0, got {self.alpha}")
        if not self.beta > 0:
            raise ModelError("leading coefficient must be positive "
                             f"(beta > 0), got {self.beta}")


def make_model(lambdas: Sequence[float], m: float = 1.0, hbar: float = 1.0) -> Model:
    """Validate coefficients and build a :class:`Model`.

    Trailing zeros are dropped, so the degree is the index of the last
    nonzero coefficient.  The degree must be even with a positive leading
    coefficient, otherwise the potential is unbounded below.
    """
    lam = [float(c) for c in lambdas]
    if not lam:
        raise ModelError("coefficient list is empty")
    if not all(math.isfinite(c) for c in lam):
        raise ModelError("coefficients must be finite")
    if not m > 0:
        raise ModelError(f"mass must be positive, got {m}")
    if not hbar > 0:
        raise ModelError(f"hbar must be positive, got {hbar}")
    while len(lam) > 1 and lam[-1] == 0.0:
        lam.pop()
    degree = len(lam) - 1
    if degree < 2:
        raise ModelError("potential must be at least quadratic")
    if degree % 2:
        raise ModelError(f"degree {degree} is odd, potential unbounded below")
    if lam[-1] <= 0:
        raise ModelError("leading coefficient must be positive")
    return Model(tuple(lam), float(m), float(hbar))


def from_double_well(params: DoubleWellParams, m: float = 1.0, hbar: float = 1.0) -> Model:
    return make_model([0.0, -params.p, params.alpha / 2, 0.0, params.beta / 4], m, hbar)


def potential_value(model: Model, q):
    """Evaluate ``sum_i lambda_i q**i`` by Horner's rule (scalar or array ``q``)."""
    q = np.asarray(q, dtype=float)
    v = np.zeros_like(q)
    for c in reversed(model.lambdas):
        v = v * q + c
    return v if v.ndim else float(v)


def well_depth_asymptotic(lambda4: float, p: float) -> float:
    """Minimum of ``lambda4 q**4 - p q``, the large-field depth of a tilted quartic well.

    Equals ``-(3/4) (4 lambda4)**(-1/3) p**(4/3)``; the prefactor at unit
    ``lambda4`` is -0.47247.
    """
    if not lambda4 > 0:
        raise ModelError(f"lambda4 must be positive, got {lambda4}")
    if not p > 0:
        raise ModelError(f"field must be positive, got {p}")
    return -0.75 * (4.0 * lambda4) ** (-1.0 / 3.0) * p ** (4.0 / 3.0)
