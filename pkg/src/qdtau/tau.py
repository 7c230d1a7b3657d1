"""Connection forms for the two tau functions on genus-zero configurations.

The square root v of the quadratic differential lives on the double
cover; its flat coordinate induces a projective connection S_v with
rational coefficient in the base chart.  Subtracting either of the two
kernel-induced connections (the even one vanishes identically in this
chart, the odd one is -12 t) and dividing by v yields a meromorphic
one-form phi on the cover for each sign.  Periods of phi paired with
derivatives of periods of v give the logarithmic derivative of the
corresponding tau function along any path in the configuration space:

    dlog tau(del) = sum_i [ -PhiB_i * d/ds VA_i + PhiA_i * d/ds VB_i ]

Contraction with the scaling field recovers the kappa weight of the
stratum; shrinking a paired cut recovers the boundary exponents; a
symplectic basis change shifts the odd branch by 48 dlog det(C Omega + D)
and leaves the even branch alone.

phi has double-pole growth at branch points, so its periods go through
the stadium contours, never the inter-endpoint spine shortcut.
"""
from __future__ import annotations

import cmath
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .curves import QDConfigG0, build_cover
from .cycles import build_cycles_robust
from .periods import PeriodEngine, v_diff
from .bergman import BergmanEvaluator

# phi = PHI_PREF * (S_v - S_B) / v, coefficient form
PHI_PREF = 2.0 / (1j * np.pi)

# relative sign between the phi x v pairing and the kappa weights,
# pinned on the reference configuration against the stratum constants
DUAL_SIGN = 1.0

# candidate correction powers for the boundary-exponent fit
P_GRID = (1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0, 4.0 / 3.0, 1.5, 2.0)


def sv_coeff(config: QDConfigG0):
    """Coefficient of the projective connection of the flat coordinate
    of v, via the logarithmic derivative L of the v coefficient:
    S_v = L' - L^2/2 with L = (1/2) d/dx log q."""
    zs = [complex(z) for z in config.zeros]
    ps = [complex(p) for p in config.poles]

    def coeff(x):
        x = np.asarray(x, dtype=complex)
        L = 0.5 * sum(1.0 / (x - z) for z in zs)
        L = L - 0.5 * sum(1.0 / (x - p) for p in ps)
        Lp = -0.5 * sum(1.0 / (x - z) ** 2 for z in zs)
        Lp = Lp + 0.5 * sum(1.0 / (x - p) ** 2 for p in ps)
        return Lp - 0.5 * L * L

    return coeff


def phi_fn(bergman: BergmanEvaluator, config: QDConfigG0, branch: int):
    """fn(x, sheet) for the one-form phi of the given branch (+1 even,
    -1 odd), suitable for the contour period routes."""
    sv = sv_coeff(config)
    sqrt_c = np.sqrt(complex(config.scale))
    mco = np.poly([complex(p) for p in config.poles])

    def fn(x, sheet):
        s = sv(x)
        if branch < 0:
            s = s + 12.0 * bergman.t_coeff(x)
        return PHI_PREF * s * np.polyval(mco, x) / (sqrt_c * bergman.ev.y(x, sheet))

    return fn


class TauConnection:
    """Periods of phi+- and v over one symplectic basis.

    The kernel evaluator is built lazily: plain v-period work (the bulk
    of any finite-difference sweep) never pays for the probe solve.
    `tag` keys the engine's contour cache; two connections sharing one
    engine (a basis change) must carry distinct tags.
    """

    def __init__(self, engine: PeriodEngine, config: QDConfigG0,
                 bergman=None, alpha_mat=None, beta_mat=None, tag="base"):
        self.pe = engine
        self.config = config
        self._be = bergman
        self.alpha_mat = engine.cycles.alpha_mat if alpha_mat is None else alpha_mat
        self.beta_mat = engine.cycles.beta_mat if beta_mat is None else beta_mat
        self.tag = tag
        self._phi = {}

    @property
    def be(self) -> BergmanEvaluator:
        if self._be is None:
            self._be = BergmanEvaluator(self.pe)
        return self._be

    def v_periods(self):
        vals = self.pe.loop_periods(v_diff(self.pe.cycles.curve))
        return self.alpha_mat @ vals, self.beta_mat @ vals

    def phi_periods(self, branch: int):
        if branch not in self._phi:
            fn = phi_fn(self.be, self.config, branch)
            key = ("phi", branch, self.tag)
            pa = np.array(
                [self.pe.contour_combo_period(fn, r, key=key) for r in self.alpha_mat]
            )
            pb = np.array(
                [self.pe.contour_combo_period(fn, r, key=key) for r in self.beta_mat]
            )
            self._phi[branch] = (pa, pb)
        return self._phi[branch]

    def euler_pairing(self, branch: int) -> complex:
        """Contraction of dlog tau with the scaling field; equals the
        kappa weight of the stratum."""
        va, vb = self.v_periods()
        pa, pb = self.phi_periods(branch)
        return DUAL_SIGN * 0.5 * complex(np.sum(pa * vb - pb * va))


def build_connection(config: QDConfigG0, pairing=None) -> TauConnection:
    curve = build_cover(config)
    cycles = build_cycles_robust(curve, pairing=pairing)
    return TauConnection(PeriodEngine(cycles), config)


def _richardson(f, h):
    def d(hh):
        return (f(hh) - f(-hh)) / (2.0 * hh)

    return (4.0 * d(h / 2) - d(h)) / 3.0


def _side_engines(make_config, s, h, pairing, workers=None):
    steps = (h, -h, h / 2, -h / 2)

    def one(st):
        curve = build_cover(make_config(s + st))
        return st, PeriodEngine(build_cycles_robust(curve, pairing=pairing))

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return dict(ex.map(one, steps))
    return dict(one(st) for st in steps)


def _workers_from_env():
    try:
        return int(os.environ.get("QDTAU_THREADS", "0"))
    except ValueError:
        return 0


def dlog_tau_along(make_config, s: float, branches=(1, -1), h=1e-5,
                   pairing=None, center: TauConnection = None):
    """Directional derivative of log tau+- along s -> make_config(s).

    Central differences with one Richardson sweep on the v-periods;
    phi-periods enter only at the center point.  Returns {branch: value}.
    """
    if center is None:
        center = build_connection(make_config(s), pairing=pairing)
    sides = _side_engines(make_config, s, h, pairing, _workers_from_env())
    vper = {}
    for st, pe in sides.items():
        vals = pe.loop_periods(v_diff(pe.cycles.curve))
        vper[st] = (center.alpha_mat @ vals, center.beta_mat @ vals)
    dva = _richardson(lambda st: vper[st][0], h)
    dvb = _richardson(lambda st: vper[st][1], h)
    out = {}
    for branch in branches:
        pa, pb = center.phi_periods(branch)
        out[branch] = complex(np.sum(-pb * dva + pa * dvb))
    return out


def scaling_check(config: QDConfigG0, pairing=None, h=1e-5):
    """Euler pairing vs. an honest finite-difference run along the
    scaling path; returns {branch: (pairing, fd_value)}."""
    conn = build_connection(config, pairing=pairing)

    def scaled(s):
        return QDConfigG0(
            zeros=config.zeros,
            poles=config.poles,
            scale=complex(config.scale) * cmath.exp(s),
            tolerance=config.tolerance,
            pairing=config.pairing,
        )

    fd = dlog_tau_along(scaled, 0.0, h=h, pairing=pairing, center=conn)
    return {b: (conn.euler_pairing(b), fd[b]) for b in (1, -1)}


def basis_change_residual(make_config, s: float, sigma, h=1e-5, pairing=None):
    """How far the two branches deviate from their transformation laws
    under the symplectic basis change sigma along the given path:
    the even branch must not move, the odd branch must shift by
    48 dlog det(C Omega + D).  Returns (plus_residual, minus_residual)."""
    center = build_connection(make_config(s), pairing=pairing)
    g = center.pe.cycles.genus
    sig = np.asarray(sigma, dtype=int)
    a, b = sig[:g, :g], sig[:g, g:]
    c, d = sig[g:, :g], sig[g:, g:]
    am2 = d @ center.alpha_mat + c @ center.beta_mat
    bm2 = b @ center.alpha_mat + a @ center.beta_mat
    moved = TauConnection(
        center.pe,
        center.config,
        bergman=center.be.transformed(sig),
        alpha_mat=am2,
        beta_mat=bm2,
        tag=("sigma", sig.tobytes()),
    )

    sides = _side_engines(make_config, s, h, pairing, _workers_from_env())
    base_am, base_bm = center.alpha_mat, center.beta_mat
    vper = {}
    omegas = {}
    for st, pe in sides.items():
        vals = pe.loop_periods(v_diff(pe.cycles.curve))
        vper[st] = vals
        omegas[st] = pe.normalized_basis(base_am, base_bm)[1]

    def dtau(conn):
        dva = _richardson(lambda st: conn.alpha_mat @ vper[st], h)
        dvb = _richardson(lambda st: conn.beta_mat @ vper[st], h)
        pa, pb = conn.phi_periods(-1)
        minus = complex(np.sum(-pb * dva + pa * dvb))
        pa, pb = conn.phi_periods(1)
        plus = complex(np.sum(-pb * dva + pa * dvb))
        return plus, minus

    plus0, minus0 = dtau(center)
    plus2, minus2 = dtau(moved)

    omega0 = center.pe.normalized_basis(base_am, base_bm)[1]
    d_omega = _richardson(lambda st: omegas[st], h)
    # branch-free d/ds log det(C Omega + D)
    dlogdet = complex(np.trace(np.linalg.inv(c @ omega0 + d) @ c @ d_omega))

    return abs(plus2 - plus0), abs((minus2 - minus0) - 48.0 * dlogdet)


def flatness_defect(make_config, n_samples=16, h=1e-5, pairing=None,
                    branches=(1, -1)):
    """Closed-loop integral of dlog tau around s in [0, 1); the
    connection is flat, so anything above quadrature noise is a defect.
    Returns {branch: |integral|}."""
    totals = {b: 0.0 + 0.0j for b in branches}
    for k in range(n_samples):
        s = k / n_samples
        vals = dlog_tau_along(make_config, s, branches=branches, h=h,
                              pairing=pairing)
        for b in branches:
            totals[b] += vals[b] / n_samples
    return {b: abs(totals[b]) for b in branches}


@dataclass
class DegenerationFamily:
    """One-parameter pinch: two paired branch points collide as d -> 0."""

    name: str
    config: callable  # d -> QDConfigG0
    pairing: list
    collide: frozenset  # branch-point indices of the shrinking cut
    schedule: tuple = field(
        default_factory=lambda: tuple(0.1 * 0.5**k for k in range(11))
    )

    def collapsing_loop(self, cycles):
        for k, pr in enumerate(cycles._pairs):
            if set(pr) == set(self.collide):
                return cycles.loop_index("cut", k)
        raise KeyError("collapsing cut not found in the built pairing")


def zero_pole_family() -> DegenerationFamily:
    """A simple zero chases the pole it is paired with into the origin."""

    def mk(d):
        p1 = 0.5 * d * cmath.exp(0.4j)
        return QDConfigG0(zeros=[-p1], poles=[1.0, -1.0, 1j, -1j, p1])

    return DegenerationFamily(
        name="zero-pole",
        config=mk,
        pairing=[(0, 5), (2, 4), (3, 1)],
        collide=frozenset({0, 5}),
    )


def zero_zero_family() -> DegenerationFamily:
    """The two simple zeros of a 6-pole configuration collide."""
    poles = [2.0, -2.0, -1.0 - 1.5j, -1.0 + 1.5j, 1.0 + 1.5j, 1.0 - 1.5j]

    def mk(d):
        z1 = 0.5 * d * cmath.exp(0.4j)
        return QDConfigG0(zeros=[z1, -z1], poles=poles)

    return DegenerationFamily(
        name="zero-zero",
        config=mk,
        pairing=[(0, 1), (3, 4), (5, 6), (7, 2)],
        collide=frozenset({0, 1}),
    )


def degeneration_rows(family: DegenerationFamily, branches=(1, -1)):
    """Per-schedule-point diagnostics: the collapsing period t, the
    slopes dlog tau+-/dd, and the running boundary exponents
    t * (dlog tau/dd) / (dt/dd)."""

    def one(d):
        conn = build_connection(family.config(d), pairing=family.pairing)
        pe = conn.pe
        idx = family.collapsing_loop(pe.cycles)
        t_here = pe.loop_period(v_diff(pe.cycles.curve), idx)
        h = 1e-3 * d
        sides = _side_engines(family.config, d, h, family.pairing)
        vper = {}
        tper = {}
        for st, spe in sides.items():
            vals = spe.loop_periods(v_diff(spe.cycles.curve))
            vper[st] = (conn.alpha_mat @ vals, conn.beta_mat @ vals)
            tper[st] = vals[idx]
        dva = _richardson(lambda st: vper[st][0], h)
        dvb = _richardson(lambda st: vper[st][1], h)
        dt = _richardson(lambda st: tper[st], h)
        row = {"d": d, "t": complex(t_here), "dt": complex(dt)}
        for branch in branches:
            pa, pb = conn.phi_periods(branch)
            slope = complex(np.sum(-pb * dva + pa * dvb))
            row[("dlog", branch)] = slope
            row[("gamma", branch)] = float((slope * t_here / dt).real)
        return row

    workers = _workers_from_env()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(one, family.schedule))
    return [one(d) for d in family.schedule]


def fit_exponent(ds, gammas, tail=8):
    """Extrapolate gamma(d) = gamma_inf + C d^p over the power grid;
    the best-residual power wins.  Returns (gamma_inf, p, residual)."""
    ds = np.asarray(ds, dtype=float)[-tail:]
    gs = np.asarray(gammas, dtype=float)[-tail:]
    best = None
    for p in P_GRID:
        design = np.vstack([np.ones_like(ds), ds**p]).T
        coef, *_ = np.linalg.lstsq(design, gs, rcond=None)
        resid = float(np.linalg.norm(design @ coef - gs))
        if best is None or resid < best[2]:
            best = (float(coef[0]), p, resid)
    return best


def degeneration_exponent(family: DegenerationFamily, branches=(1, -1)):
    """(exponents, rows): the extrapolated boundary exponent per branch
    plus the raw schedule rows for reporting."""
    rows = degeneration_rows(family, branches=branches)
    ds = [r["d"] for r in rows]
    out = {}
    for branch in branches:
        g_inf, p, resid = fit_exponent(ds, [r[("gamma", branch)] for r in rows])
        out[branch] = g_inf
    return out, rows
