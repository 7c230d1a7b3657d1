"""Period integrals over the cycle system.

Differentials that change sign under the hyperelliptic involution,
written f(x) dx / yhat with f rational and regular at the branch
points, reduce on every loop to twice a spine integral with the
inverse-square-root endpoint weight; the orientation factor of each
loop is calibrated once against a coarse contour integral.  Everything
else (in practice the tau-function integrands, whose poles at branch
points are non-integrable on the spine) is integrated along the actual
stadium pieces with sheet tracking.

Per-loop values are cached, so every cycle period, including those of
a transformed basis, is an integer combination of cached numbers.
"""

from __future__ import annotations

import numpy as np

from .cycles import CycleSystem, GeometryError
from .quadrature import QuadratureError, adaptive_line, spine_integral


class Differential:
    """mu-odd differential f(x) dx / yhat; ``fn`` maps complex arrays
    to complex arrays and must be regular at branch points."""

    def __init__(self, key, fn):
        self.key = key
        self.fn = fn


def holo_diff(j: int) -> Differential:
    return Differential(("holo", j), lambda x, j=j: np.asarray(x) ** j)


def v_diff(curve) -> Differential:
    """v = sqrt(scale) * yhat dx / m with m = prod(x - p_j); as
    f dx/yhat this is f = sqrt(scale) * R/m, regular at branch points
    because R picks up each pole's linear factor."""
    cfg = curve.config
    if cfg is None:
        raise ValueError("v needs a configuration-backed curve")
    pref = complex(np.sqrt(complex(cfg.scale)))
    mpoly = np.poly(np.array(cfg.poles, dtype=complex))
    rpoly = curve.rhs_coeffs

    def fn(x):
        return pref * np.polyval(rpoly, x) / np.polyval(mpoly, x)

    return Differential(("v",), fn)


class PeriodEngine:
    def __init__(self, cycles: CycleSystem, tol: float = 1e-11):
        self.cycles = cycles
        self.curve = cycles.curve
        self.ev = cycles.evaluator
        self.tol = tol
        self._scale = max(abs(b) for b in self.curve.branch_points) + 1.0
        self._loop_cache = {}
        self._contour_cache = {}
        self._sigmas = None
        self._norm = None

    # spine geometry of a loop: midpoint, half-vector, and whether the
    # spine lies on a cut (boundary values) or in the open plane
    def _spine(self, loop_idx):
        lp = self.cycles.loops[loop_idx]
        pts = self.curve.branch_points
        if lp.kind == "cut":
            i, j = self.cycles._pairs[lp.index]
        else:
            i, j = self.cycles._gap_ends[lp.index]
        a, b = pts[i], pts[j]
        return (a + b) / 2.0, (b - a) / 2.0, lp.kind == "cut", lp.index

    def _spine_y(self, loop_idx, t):
        mid, half, on_cut, idx = self._spine(loop_idx)
        if on_cut:
            return self.ev.y_oncut(idx, t, +1)
        return self.ev.y(mid + t * half)

    def spine_half_period(self, diff: Differential, loop_idx: int):
        """Integral of f dx/yhat along the loop's spine (one pass)."""
        mid, half, on_cut, idx = self._spine(loop_idx)

        def g(t):
            x = mid + t * half
            y = self._spine_y(loop_idx, t)
            return diff.fn(x) * half * np.sqrt((1.0 - t) * (1.0 + t)) / y

        val, _ = spine_integral(g, -0.5, -0.5, tol=self.tol)
        return val

    def sigma(self, loop_idx: int) -> int:
        """Orientation factor: loop period = 2*sigma*spine integral."""
        if self._sigmas is None:
            self._sigmas = [None] * len(self.cycles.loops)
        if self._sigmas[loop_idx] is None:
            g = self.curve.genus
            for j in range(g):
                diff = holo_diff(j)
                spine = self.spine_half_period(diff, loop_idx)
                if abs(spine) < 1e-8:
                    continue
                contour = self.contour_loop_period(
                    lambda x, sheet, d=diff: d.fn(x) / self.ev.y(x, sheet),
                    loop_idx,
                    tol=1e-6 * abs(spine),
                )
                ratio = contour / (2.0 * spine)
                sig = 1 if ratio.real > 0 else -1
                if abs(ratio - sig) > 1e-2:
                    raise GeometryError(
                        f"orientation calibration off: ratio {ratio}"
                    )
                self._sigmas[loop_idx] = sig
                break
            else:
                raise GeometryError("no usable differential for calibration")
        return self._sigmas[loop_idx]

    def loop_period(self, diff: Differential, loop_idx: int):
        key = (diff.key, loop_idx)
        if key not in self._loop_cache:
            try:
                val = 2.0 * self.sigma(loop_idx) * self.spine_half_period(
                    diff, loop_idx
                )
            except QuadratureError:
                # foreign branch points too close to the spine for the
                # Jacobi ladder; integrate along the actual stadium
                val = self.contour_loop_period(
                    lambda x, sheet: diff.fn(x) / self.ev.y(x, sheet),
                    loop_idx,
                )
            self._loop_cache[key] = val
        return self._loop_cache[key]

    def loop_periods(self, diff: Differential):
        return np.array(
            [self.loop_period(diff, i) for i in range(len(self.cycles.loops))]
        )

    def combo_period(self, diff: Differential, combo):
        vals = self.loop_periods(diff)
        return complex(np.asarray(combo, dtype=float) @ vals)

    def alpha_periods(self, diff: Differential):
        vals = self.loop_periods(diff)
        return self.cycles.alpha_mat @ vals

    def beta_periods(self, diff: Differential):
        vals = self.loop_periods(diff)
        return self.cycles.beta_mat @ vals

    # contour route for integrands with non-integrable spine behavior;
    # fn(x, sheet) is the full coefficient of dx
    def contour_loop_period(self, fn, loop_idx: int, tol=None):
        lp = self.cycles.loops[loop_idx]
        tol = self.tol * self._scale if tol is None else tol
        total = 0.0 + 0.0j
        for pi, piece in enumerate(lp.pieces):
            cuts = sorted(s for (qi, s, _c) in lp.crossings if qi == pi)
            breaks = [0.0] + cuts + [1.0]
            for s0, s1 in zip(breaks, breaks[1:]):
                if s1 - s0 < 1e-13:
                    continue
                sheet = lp.sheet_at(pi, 0.5 * (s0 + s1))
                total += adaptive_line(
                    lambda s: fn(piece.point(s), sheet) * piece.tangent(s),
                    s0,
                    s1,
                    tol=tol / (2.0 * len(lp.pieces)),
                )
        return total

    def contour_combo_period(self, fn, combo, key=None, tol=None):
        total = 0.0 + 0.0j
        for i, c in enumerate(np.asarray(combo)):
            if c == 0:
                continue
            if key is not None:
                k = (key, i)
                if k not in self._contour_cache:
                    self._contour_cache[k] = self.contour_loop_period(fn, i, tol)
                val = self._contour_cache[k]
            else:
                val = self.contour_loop_period(fn, i, tol)
            total += int(c) * val
        return total

    # normalized holomorphic basis and the period matrix
    def normalized_basis(self, alpha_mat=None, beta_mat=None):
        """Coefficient matrix N and period matrix for the basis dual to
        the given alpha cycles: row k of N gives omega_k = sum_j N[k,j]
        x^j dx/yhat with alpha_l(omega_k) = delta_kl; Omega[k,l] =
        beta_l(omega_k)."""
        default = alpha_mat is None and beta_mat is None
        if default and self._norm is not None:
            return self._norm
        g = self.curve.genus
        am = self.cycles.alpha_mat if alpha_mat is None else alpha_mat
        bm = self.cycles.beta_mat if beta_mat is None else beta_mat
        raw = np.array([self.loop_periods(holo_diff(j)) for j in range(g)])
        A = raw @ am.T  # A[j, l] = alpha_l period of x^j dx/yhat
        if np.linalg.cond(A) > 1e12:
            raise GeometryError("alpha-period matrix is numerically singular")
        N = np.linalg.inv(A)
        B = raw @ bm.T
        omega = N @ B
        defect = np.max(np.abs(omega - omega.T)) / max(1.0, np.max(np.abs(omega)))
        if defect > 1e-7:
            raise GeometryError(f"period matrix asymmetry {defect:.2e}")
        self.omega_defect = defect
        omega = 0.5 * (omega + omega.T)
        out = (N, omega)
        if default:
            self._norm = out
        return out

    def period_matrix(self):
        return self.normalized_basis()[1]

    def homological_coordinates(self, diff=None):
        """(alpha periods, beta periods) of v by default."""
        d = v_diff(self.curve) if diff is None else diff
        return self.alpha_periods(d), self.beta_periods(d)
