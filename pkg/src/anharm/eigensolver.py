"""Dense symmetric eigensolver: Householder tridiagonalization + implicit-shift QL.

Deterministic for identical input.  Eigenvectors are returned as columns,
each with its largest-magnitude component made positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BasisSpec
from .hamiltonian import SymmetricBandMatrix

MAX_ITERATIONS = 50
EPS = np.finfo(float).eps


class EigensolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectralResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    basis: BasisSpec | None = None


def tridiagonalize(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Householder reduction ``a = z @ T @ z.T``.

    Returns the diagonal ``d``, the subdiagonal ``e`` (length ``n - 1``) and
    the orthogonal ``z``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    z = np.eye(n)
    for k in range(n - 2):
        x = a[k + 1:, k]
        tail = np.dot(x[1:], x[1:])
        if tail == 0.0:
            continue
        norm = math.sqrt(x[0] * x[0] + tail)
        alpha = -norm if x[0] >= 0 else norm
        v = x.copy()
        v[0] -= alpha
        v /= math.sqrt(np.dot(v, v))
        sub = a[k + 1:, k + 1:]
        p = sub @ v
        w = p - np.dot(v, p) * v
        sub -= 2.0 * (np.outer(v, w) + np.outer(w, v))
        a[k + 1:, k] = 0.0
        a[k, k + 1:] = 0.0
        a[k + 1, k] = a[k, k + 1] = alpha
        zk = z[:, k + 1:]
        zk -= 2.0 * np.outer(zk @ v, v)
    return np.diag(a).copy(), np.diag(a, -1).copy(), z


def _tql(d: list, e: list, zt: np.ndarray) -> None:
    """Implicit QL with Wilkinson-type shifts, in place.

    ``e[i]`` couples ``d[i]`` and ``d[i+1]``; ``zt`` holds eigenvectors as rows.
    """
    n = len(d)
    e = list(e) + [0.0]
    # absolute deflation threshold; the relative test alone stalls on tiny entries
    small = EPS * max(abs(x) + abs(y) for x, y in zip(d, e))
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd or abs(e[m]) <= small:
                    break
                m += 1
            if m == l:
                break
            if it == MAX_ITERATIONS:
                raise EigensolverError(
                    f"QL iteration did not converge for eigenvalue {l} "
                    f"after {MAX_ITERATIONS} sweeps")
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi, zn = zt[i], zt[i + 1]
                tmp = zn.copy()
                zn *= c
                zn += s * zi
                zi *= c
                zi -= s * tmp
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


def _fix_signs(v: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[idx, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return v * signs


def eigh(matrix: SymmetricBandMatrix | np.ndarray, basis: BasisSpec | None = None) -> SpectralResult:
    """Full spectrum of a real symmetric matrix, ascending, with orthonormal eigenvectors."""
    a = matrix.entries if isinstance(matrix, SymmetricBandMatrix) else np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise EigensolverError("matrix has non-finite entries")
    n = a.shape[0]
    if n == 1:
        return SpectralResult(a[0].copy(), np.ones((1, 1)), basis)
    d, e, z = tridiagonalize(a)
    d = d.tolist()
    zt = np.ascontiguousarray(z.T)
    _tql(d, e.tolist(), zt)
    w = np.array(d)
    order = np.argsort(w, kind="stable")
    vecs = _fix_signs(zt[order].T.copy())
    return SpectralResult(w[order], vecs, basis)


def ground_state_pair(result: SpectralResult) -> tuple[float, float, float]:
    """``(E0, E1, E1 - E0)``."""
    e0, e1 = float(result.eigenvalues[0]), float(result.eigenvalues[1])
    return e0, e1, e1 - e0
