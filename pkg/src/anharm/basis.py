"""Variational choice of the oscillator length scale ``r`` (``m w0 r**2 = hbar``).

The basis is the set of harmonic-oscillator eigenfunctions with scale ``r0``,
where ``r0`` minimises ``<t|H|t>`` for a chosen pivot level ``t``.  The
optimum never involves odd coefficients, so it is independent of a linear
field.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .model import Model


class OptimizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class BasisSpec:
    n_basis: int
    pivot: int
    r0: float

    def __post_init__(self):
        if self.n_basis < 2:
            raise ValueError(f"basis needs at least 2 functions, got {self.n_basis}")
        if not 0 <= self.pivot < self.n_basis:
            raise ValueError(f"pivot {self.pivot} outside [0, {self.n_basis})")
        if not self.r0 > 0:
            raise ValueError(f"r0 must be positive, got {self.r0}")

    @property
    def r0_squared(self) -> float:
        return self.r0 * self.r0

    @property
    def omega0(self) -> float:
        """Frequency of the basis oscillator for unit mass and hbar."""
        return 1.0 / self.r0_squared


@lru_cache(maxsize=None)
def _level_moment(i: int, t: int) -> float:
    """``<t|(a + a^dag)**i|t> / 2**(i/2)`` for even ``i``; this times ``r**i`` is ``<t|Q**i|t>``."""
    h = i // 2
    total = Fraction(0)
    for k in range(h + 1):
        rest = t - h + k
        if rest < 0:
            continue
        total += Fraction(math.factorial(i) * math.factorial(t),
                          2 ** (h + k) * math.factorial(k)
                          * math.factorial(h - k) ** 2 * math.factorial(rest))
    return float(total)


def _check_r(r: float):
    if not r > 0:
        raise ValueError(f"length scale must be positive, got {r}")


def expectation_in_level(model: Model, r: float, t: int) -> float:
    """``<t|H|t>`` in the oscillator basis of scale ``r``.

    Odd powers have zero diagonal elements; terms whose factorial argument
    ``t - i/2 + k`` would be negative vanish.
    """
    _check_r(r)
    e = model.hbar ** 2 * (2 * t + 1) / (4 * model.mass * r * r)
    for i in range(0, model.degree + 1, 2):
        lam = model.lambdas[i]
        if lam:
            e += lam * r ** i * _level_moment(i, t)
    return e


def stationarity_residual(model: Model, r: float, t: int) -> float:
    """Derivative of :func:`expectation_in_level` with respect to ``r**2``."""
    _check_r(r)
    res = -model.hbar ** 2 * (2 * t + 1) / (4 * model.mass * r ** 4)
    for i in range(2, model.degree + 1, 2):
        lam = model.lambdas[i]
        if lam:
            res += (i // 2) * lam * r ** (i - 2) * _level_moment(i, t)
    return res


def quartic_cubic(model: Model, t: int, x: float) -> float:
    """Stationarity condition of a quartic model written as a cubic in ``x = r0**2``.

    Equals ``4 x**2 * stationarity_residual(model, sqrt(x), t)``.
    """
    l2, l4 = model.coefficient(2), model.coefficient(4)
    return ((2 * t + 1) * (2 * l2 * x * x - model.hbar ** 2 / model.mass)
            + 6 * l4 * x ** 3 * (2 * t * t + 2 * t + 1))


def _solve_quartic(model: Model, t: int) -> float:
    l2, l4 = model.coefficient(2), model.coefficient(4)
    h2m = model.hbar ** 2 / model.mass
    if l4 == 0:
        return math.sqrt(h2m / (2 * l2))
    a3 = 6 * l4 * (2 * t * t + 2 * t + 1)
    a2 = 2 * (2 * t + 1) * l2
    a0 = -(2 * t + 1) * h2m

    def f(x):
        return ((a3 * x + a2) * x) * x + a0

    def df(x):
        return (3 * a3 * x + 2 * a2) * x

    # f(0) < 0 and f grows without bound, so a sign change brackets the root
    lo, hi = 0.0, math.sqrt(h2m / (2 * abs(l2))) if l2 else 1.0
    while f(hi) <= 0:
        lo, hi = hi, 2 * hi
    x = hi
    for _ in range(200):
        fx = f(x)
        if fx == 0 or abs(fx) <= 1e-15 * abs(a0):
            return x
        if fx < 0:
            lo = x
        else:
            hi = x
        if hi - lo <= 1e-15 * hi:
            return x
        d = df(x)
        step = x - fx / d if d > 0 else lo - 1.0
        x = step if lo < step < hi else 0.5 * (lo + hi)
    return x


def optimize_r(model: Model, t: int) -> float:
    """Optimal basis length scale ``r0`` for pivot level ``t``.

    Quartic and harmonic models solve a cubic in ``r0**2`` with safeguarded
    Newton steps.  Higher degrees bracket the root of
    :func:`stationarity_residual` by doubling or halving from ``r = 1`` and
    bisect it to 1e-14 relative.
    """
    if t < 0:
        raise ValueError(f"pivot level must be >= 0, got {t}")
    if model.degree <= 4:
        return math.sqrt(_solve_quartic(model, t))

    def g(r):
        return stationarity_residual(model, r, t)

    lo = hi = 1.0
    if g(1.0) < 0:
        for _ in range(60):
            hi *= 2
            if g(hi) > 0:
                break
        else:
            raise OptimizationError("no sign change in stationarity residual")
        lo = hi / 2
    else:
        for _ in range(60):
            lo /= 2
            if g(lo) < 0:
                break
        else:
            raise OptimizationError("no sign change in stationarity residual")
        hi = lo * 2
    while hi - lo > 1e-14 * hi:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def pivot_choice(n_basis: int) -> int:
    if n_basis < 2:
        raise ValueError(f"basis needs at least 2 functions, got {n_basis}")
    return n_basis // 2


def resolve_pivot(n_basis: int, rule="half") -> int:
    """Map a pivot rule (``"half"``, ``"zero"`` or an explicit level) to ``t``."""
    if rule == "half":
        return pivot_choice(n_basis)
    if rule == "zero":
        return 0
    if isinstance(rule, int) or (isinstance(rule, str) and rule.isdigit()):
        return int(rule)
    raise ValueError(f"unknown pivot rule {rule!r}")


def make_basis(model: Model, n_basis: int, pivot="half") -> BasisSpec:
    t = resolve_pivot(n_basis, pivot)
    return BasisSpec(n_basis, t, optimize_r(model, t))


def joint_minimum(model: Model, t_max: int) -> tuple[int, float, float]:
    """Minimise ``<t|H|t>`` over both ``r`` and ``t <= t_max``.

    Diagnostic only: returns ``(t, r, energy)``.  The resulting scale is
    usually a poor basis choice compared with the half-basis pivot.
    """
    best = None
    for t in range(t_max + 1):
        r = optimize_r(model, t)
        e = expectation_in_level(model, r, t)
        if best is None or e < best[2]:
            best = (t, r, e)
    return best
