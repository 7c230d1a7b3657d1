"""Quadrature rules for period integrals.

Two regimes:

- integrals along a branch-cut spine, with inverse-square-root or
  square-root endpoint behavior: Gauss-Jacobi rules with half-integer
  exponents, which have closed-form Chebyshev-type nodes and weights
  (no root-finding), escalated until two consecutive sizes agree;
- integrals along contour pieces staying away from all singularities:
  Gauss-Legendre panels with one refinement comparison and bisection.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# escalation ladder for the spine rules
SPINE_SIZES = (12, 20, 32, 52, 84, 136, 220, 356, 576)


class QuadratureError(RuntimeError):
    """Raised when the escalation ladder ends without convergence.

    ``achieved`` carries the last defect estimate.
    """

    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved {achieved:.3e})")
        self.achieved = achieved


@lru_cache(maxsize=None)
def jacobi_rule(n: int, alpha: float, beta: float):
    """Nodes/weights for integral of (1-t)^alpha (1+t)^beta g(t) on [-1,1].

    Only the four Chebyshev-family exponent pairs are supported; they
    cover every endpoint behavior produced by square roots of
    polynomials and simple poles at cut ends.
    """
    key = (float(alpha), float(beta))
    k = np.arange(1, n + 1)
    if key == (-0.5, -0.5):
        th = (2 * k - 1) * np.pi / (2 * n)
        return np.cos(th), np.full(n, np.pi / n)
    if key == (0.5, 0.5):
        th = k * np.pi / (n + 1)
        return np.cos(th), (np.pi / (n + 1)) * np.sin(th) ** 2
    if key == (-0.5, 0.5):
        th = (2 * k - 1) * np.pi / (2 * n + 1)
        x = np.cos(th)
        return x, (2 * np.pi / (2 * n + 1)) * (1 + x)
    if key == (0.5, -0.5):
        th = 2 * k * np.pi / (2 * n + 1)
        x = np.cos(th)
        return x, (2 * np.pi / (2 * n + 1)) * (1 - x)
    raise ValueError(f"unsupported Jacobi exponents {key}")


def spine_integral(g, alpha: float, beta: float, tol: float = 1e-12):
    """Escalating Gauss-Jacobi evaluation of
    integral over [-1,1] of (1-t)^alpha (1+t)^beta g(t) dt.

    ``g`` receives a float array of interior nodes and must return
    complex values; it is smooth whenever the caller extracted the
    endpoint behavior correctly.  Returns (value, defect-estimate).
    """
    prev = None
    last_defect = np.inf
    for n in SPINE_SIZES:
        t, w = jacobi_rule(n, alpha, beta)
        val = complex(np.sum(w * np.asarray(g(t), dtype=complex)))
        if prev is not None:
            last_defect = abs(val - prev)
            if last_defect <= tol * max(1.0, abs(val)):
                return val, last_defect
        prev = val
    raise QuadratureError("spine quadrature did not converge", last_defect)


@lru_cache(maxsize=None)
def legendre_rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel(f, a: float, b: float, n: int):
    x, w = legendre_rule(n)
    mid, half = (a + b) / 2.0, (b - a) / 2.0
    vals = np.asarray(f(mid + half * x), dtype=complex)
    return half * complex(np.sum(w * vals)), abs(half) * float(
        np.sum(np.abs(w) * np.abs(vals))
    )


def adaptive_line(f, a: float = 0.0, b: float = 1.0, tol: float = 1e-11,
                  depth: int = 32, _floor=None):
    """Adaptive Gauss-Legendre integral of f over the real parameter
    interval [a, b]; f takes a float array, returns complex values.

    Bisection tightens the tolerance per level, but acceptance is
    floored at roundoff relative to the integrand's L1 mass (both the
    local panel's and the top-level one's): once two rules agree to
    machine precision for values of that size, splitting further
    cannot help."""
    coarse, _ = _panel(f, a, b, 24)
    fine, mass = _panel(f, a, b, 48)
    if _floor is None:
        _floor = 1e-13 * mass
    err = abs(fine - coarse)
    accept = max(tol, _floor, 1e-13 * mass)
    if err <= accept or depth == 0:
        if depth == 0 and err > accept:
            raise QuadratureError("contour panel did not converge", err)
        return fine
    mid = (a + b) / 2.0
    left = adaptive_line(f, a, mid, tol / 1.9, depth - 1, _floor)
    right = adaptive_line(f, mid, b, tol / 1.9, depth - 1, _floor)
    return left + right
