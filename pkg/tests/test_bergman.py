"""Bergman kernel: normalization, pullback identity, projective connections."""
import numpy as np
import pytest

from qdtau.curves import QDConfigG0, build_cover, hyperelliptic_model
from qdtau.cycles import build_cycles_robust
from qdtau.periods import PeriodEngine
from qdtau.bergman import BergmanEvaluator
from qdtau.cover_homology import random_symplectic
from qdtau.quadrature import adaptive_line


REF = dict(zeros=[0.0], poles=[1.0, -1.0, 2.0, -2.0, 0.5])


@pytest.fixture(scope="module")
def ref_bergman():
    curve = build_cover(QDConfigG0(**REF))
    pe = PeriodEngine(build_cycles_robust(curve))
    return BergmanEvaluator(pe)


@pytest.fixture(scope="module")
def elliptic_bergman():
    curve = hyperelliptic_model([-1.0, 0.0, 1.0])
    pe = PeriodEngine(build_cycles_robust(curve))
    return BergmanEvaluator(pe)


def test_correction_is_symmetric(ref_bergman):
    C = ref_bergman.correction()
    assert np.max(np.abs(C - C.T)) == 0.0  # symmetrized after the residual check
    assert ref_bergman.correction_defect < 1e-10


def test_alpha_periods_vanish_off_probe(ref_bergman):
    # the defining property, checked at points the solve never saw
    for x0 in (0.9 + 2.4j, -2.6 - 1.1j, 3.3 + 0.2j):
        for k in range(2):
            assert abs(ref_bergman.alpha_residual(x0, k)) < 1e-9


def test_pullback_identity(ref_bergman):
    # summing the kernel over the two points above w collapses it to
    # the rational kernel of the base sphere, exactly in the coefficients
    rng = np.random.default_rng(21)
    be = ref_bergman
    for _ in range(200):
        x = complex(rng.normal() * 2.5, rng.normal() * 2.5)
        w = complex(rng.normal() * 2.5, rng.normal() * 2.5)
        if abs(x - w) < 0.1:
            continue
        sx = 1 if rng.random() < 0.5 else -1
        sw = 1 if rng.random() < 0.5 else -1
        tot = be.bhat_coeff(x, sx, w, sw) + be.bhat_coeff(x, sx, w, -sw)
        assert abs(tot - 1.0 / (x - w) ** 2) < 1e-6 * max(1.0, abs(x - w) ** -2)


def test_kernel_is_symmetric(ref_bergman):
    be = ref_bergman
    pts = [(1.7 + 1.1j, 1), (-0.4 + 2.0j, -1), (2.8 - 1.5j, 1)]
    for (x, sx) in pts:
        for (w, sw) in pts:
            if x == w:
                continue
            assert abs(be.bhat_coeff(x, sx, w, sw) - be.bhat_coeff(w, sw, x, sx)) < 1e-12


def test_kernel_invariant_under_joint_sheet_flip(ref_bergman):
    be = ref_bergman
    x, w = 1.3 + 0.8j, -1.1 + 1.6j
    a = be.bhat_coeff(x, 1, w, -1)
    b = be.bhat_coeff(x, -1, w, 1)
    assert abs(a - b) < 1e-13 * max(1.0, abs(a))


def _fd_schwarzian(be, x, sheet, h=0.02):
    """Diagonal limit 3*(B(x,x+h) - 1/h^2) with Richardson in h^2."""

    def v(hh):
        p = be.bhat_coeff(x, sheet, x + hh, sheet) - 1.0 / hh**2
        m = be.bhat_coeff(x, sheet, x - hh, sheet) - 1.0 / hh**2
        return 3.0 * (p + m)

    return (4.0 * v(h / 2) - v(h)) / 3.0


def test_diagonal_expansion_matches_closed_form(ref_bergman):
    be = ref_bergman
    for x in (0.9 + 1.4j, -1.6 + 0.7j, 2.6 + 2.2j):
        want = complex(-6.0 * be.t_coeff(x))
        got = _fd_schwarzian(be, x, 1)
        assert abs(got - want) < 1e-6 * max(1.0, abs(want))


def test_connection_split(ref_bergman):
    be = ref_bergman
    xs = np.array([0.7 + 1.9j, -2.2 + 0.4j, 1.8 - 1.3j])
    sb = be.s_bhat(xs)
    sp = be.s_plus(xs)
    sm = be.s_minus(xs)
    assert np.max(np.abs(sp)) == 0.0
    assert np.max(np.abs(sp + sm - 2 * sb)) == 0.0


def test_elliptic_correction_is_pi(elliptic_bergman):
    C = elliptic_bergman.correction()
    assert C.shape == (1, 1)
    assert abs(C[0, 0] - np.pi) < 1e-10


# frozen lemniscatic constants for y^2 = x^3 - x
OMEGA1 = 1.3110287771460603
ETA1 = 0.5990701173677964


def _weierstrass_p(u, w1, w2, radius=160):
    ns = np.arange(-radius, radius + 1)
    M, N = np.meshgrid(ns, ns)
    lat = M * (2 * w1) + N * (2 * w2)
    mask = (np.abs(lat) <= radius * min(abs(w1), abs(w2))) & ~((M == 0) & (N == 0))
    om = lat[mask]
    return 1.0 / u**2 + np.sum(1.0 / (u - om) ** 2 - 1.0 / om**2)


def test_kernel_matches_elliptic_closed_form(elliptic_bergman):
    # in the flat coordinate z the kernel is wp(z1 - z2) + eta1/omega1
    be = elliptic_bergman
    ev = be.ev

    def zdiff(x1, x2):
        return adaptive_line(
            lambda s: (x2 - x1) / (2 * ev.y(x1 + s * (x2 - x1))), 0.0, 1.0, tol=1e-12
        )

    w2 = OMEGA1 * 1j  # square lattice
    pairs = [(0.5 + 1.2j, -0.8 + 1.5j), (1.4 + 0.9j, 0.3 + 2.1j)]
    for x1, x2 in pairs:
        bzz = be.bhat_coeff(x1, 1, x2, 1) * (2 * ev.y(x1)) * (2 * ev.y(x2))
        u = zdiff(x2, x1)
        const = complex(bzz) - _weierstrass_p(complex(u), OMEGA1, w2)
        assert abs(const - ETA1 / OMEGA1) < 1e-4
    assert abs(ETA1 / OMEGA1 - 0.4569465810444637) < 1e-15


def test_branch_chart_connection_cocycle(ref_bergman):
    # near a branch point b the chart is x = b + s^2; the connection must
    # transform with the schwarzian of the chart map: -6t*(4s^2) - 3/(2s^2)
    be = ref_bergman
    b = be.curve.branch_points[2]
    for s in (0.31 + 0.12j, 0.18 - 0.23j):
        x = b + s * s
        chart = complex(-6.0 * be.t_coeff(x)) * 4 * s * s - 1.5 / (s * s)
        # finite differences of the kernel in the s chart, fixed sheet lift
        h = 0.02 * abs(s)

        def lift(ss):
            return b + ss * ss

        def v(hh):
            tot = 0.0 + 0.0j
            for sgn in (+1, -1):
                sp = s + sgn * hh
                val = be.bhat_coeff(lift(s), 1, lift(sp), 1)
                # pull both kernel legs back to the s chart
                val = val * (2 * s) * (2 * sp)
                tot += 3.0 * (val - 1.0 / (s - sp) ** 2)
            return tot

        fd = (4.0 * v(h / 2) - v(h)) / 3.0
        assert abs(fd - chart) < 1e-5 * max(1.0, abs(chart))


def test_transformed_kernel_shift(ref_bergman):
    be = ref_bergman
    rng = np.random.default_rng(5)
    for _ in range(3):
        sig = random_symplectic(2, rng, steps=5)
        be2 = be.transformed(sig)
        shift = be.moved_kernel_shift(sig)
        for x, sx, w, sw in (
            (2.3 + 1.4j, 1, -1.2 + 0.8j, -1),
            (0.4 + 2.2j, -1, 3.0 + 0.3j, 1),
        ):
            delta = complex(be2.bhat_coeff(x, sx, w, sw) - be.bhat_coeff(x, sx, w, sw))
            pred = complex(shift(x, sx, w, sw))
            assert abs(delta - pred) < 1e-10 * max(1.0, abs(delta))


def test_transformed_period_matrix_law(ref_bergman):
    be = ref_bergman
    rng = np.random.default_rng(9)
    sig = random_symplectic(2, rng, steps=5)
    a, b, c, d = sig[:2, :2], sig[:2, 2:], sig[2:, :2], sig[2:, 2:]
    be2 = be.transformed(sig)
    pred = (a @ be.omega + b) @ np.linalg.inv(c @ be.omega + d)
    assert np.max(np.abs(be2.omega - pred)) < 1e-10
