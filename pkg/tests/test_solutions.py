import math

import numpy as np
import pytest

from conftest import log_sample_indices, loglog_slope, power
from critjac import ansatz, coeffs, solutions
from critjac.errors import OnSpectrum, OutsideAC, OutsideDomain, WindowMismatch


def test_jost_window_residual(laguerre0):
    m, p = laguerre0
    win = solutions.jost(ansatz.at_plus(1.0), p, m, N=20_000)
    assert win.n_lo == -1
    assert solutions.recurrence_residual(win) < 1e-9


def test_wronskian_with_growing_partner(laguerre0):
    m, p = laguerre0
    zp = ansatz.interior(1 + 1j)
    f = solutions.jost(zp, p, m, N=20_000)
    g = solutions.growing(zp, p, m, f=f)
    W, dev, count = solutions.wronskian_detail(f, g)
    assert abs(W - 1.0) < 1e-10
    assert count > 19_000
    assert abs(g.meta["w_check_0"] - 1.0) < 1e-8
    assert solutions.recurrence_residual(g) < 1e-9


def test_wronskian_self_is_zero(laguerre0):
    m, p = laguerre0
    f = solutions.jost(ansatz.interior(1 + 1j), p, m, N=5000)
    W = solutions.wronskian(f, f)
    assert abs(W) < 1e-12


def test_wronskian_window_mismatch(laguerre0):
    m, p = laguerre0
    f1 = solutions.jost(ansatz.interior(1 + 1j), p, m, N=3000)
    f2 = solutions.jost(ansatz.interior(2 + 1j), p, m, N=3000)
    with pytest.raises(WindowMismatch):
        solutions.wronskian(f1, f2)


def test_conjugation_symmetry(laguerre0):
    m, p = laguerre0
    z = 1.2 + 0.7j
    f_up = solutions.jost(ansatz.interior(z), p, m, N=4000)
    f_dn = solutions.jost(ansatz.interior(z.conjugate()), p, m, N=4000)
    for n in (-1, 0, 5, 100, 2000):
        assert f_dn.complex_at(n) == pytest.approx(
            f_up.complex_at(n).conjugate(), rel=1e-12)


def test_growing_requires_regular_point(laguerre0):
    m, p = laguerre0
    with pytest.raises(OnSpectrum):
        solutions.growing(ansatz.at_plus(1.0), p, m, N=2000)


def test_growing_envelope_matches_phase():
    # log|g_n| tracks -rho ln n + Im phi_n
    m, p = power(1.25, 0.0, -0.875)   # tau = -0.5
    zp = ansatz.interior(1j)
    f = solutions.jost(zp, p, m, N=30_000)
    g = solutions.growing(zp, p, m, f=f)
    acc = ansatz.PhaseAccumulator(zp, p)
    vals = [g.log_abs(n) + p.rho * math.log(n) - acc.phi(n).imag
            for n in (1000, 5000, 20_000)]
    assert max(vals) - min(vals) < 0.05


def test_sigma_three_halves_growing_power():
    # at sigma = 3/2, tau < 0 the partners behave like n^(-1/2 +- eps1)
    # with eps1 = eps / (2 sqrt(|tau|))
    m, p = power(1.5, 0.0, -1.25)     # tau = -1
    eps = 0.3
    zp = ansatz.interior(0.5 + eps * 1j)
    f = solutions.jost(zp, p, m, N=200_000)
    g = solutions.growing(zp, p, m, f=f)
    ns = log_sample_indices(2e3, 1.5e5, 25)
    slope_f = loglog_slope(ns, np.exp([f.log_abs(int(n)) for n in ns]))
    slope_g = loglog_slope(ns, np.exp([g.log_abs(int(n)) for n in ns]))
    eps1 = eps / 2.0
    assert slope_f == pytest.approx(-0.5 - eps1, abs=0.03)
    assert slope_g == pytest.approx(-0.5 + eps1, abs=0.03)


def test_l2_membership_off_spectrum(laguerre0):
    m, p = laguerre0
    f = solutions.jost(ansatz.interior(1 + 0.5j), p, m, N=40_000)
    lm = f.logmag[2:]
    half = len(lm) // 2
    total = np.sum(np.exp(2 * (lm - lm.max())))
    tail = np.sum(np.exp(2 * (lm[half:] - lm.max())))
    assert tail / total < 1e-10


def test_jost_uniqueness_proxy(laguerre0):
    # different (n0, N) rescale the Jost solution by a constant (the
    # dropped phase terms); ratios of entries and on-spectrum moduli are
    # normalization-free and must agree within the truncation budget
    m, p = laguerre0
    zp = ansatz.at_plus(2.0)
    w1 = solutions.jost(zp, p, m, N=50_000)
    w2 = solutions.jost(zp, p, m, n0=ansatz.default_n_start(zp, p) + 12,
                        N=100_000)
    r1 = w1.complex_at(5) / w1.complex_at(0)
    r2 = w2.complex_at(5) / w2.complex_at(0)
    assert abs(r1 - r2) <= 1e-5 * abs(r1)
    assert abs(w1.log_abs(0) - w2.log_abs(0)) < 1e-4


def test_reflection_of_jost():
    m, p = power(1.0, 0.0, -0.75)     # tau = -0.5, gamma = 1
    mr = coeffs.reflect(m)
    pr = coeffs.classify(mr)
    z = 0.8 + 0.6j
    f = solutions.jost(ansatz.interior(z), p, m, N=3000)
    fr = solutions.jost(ansatz.interior(-z), pr, mr, N=3000)
    # f^sharp_n(-z) = (-1)^n f_n(z), exactly with matching windows
    for n in (0, 1, 7, 100, 999):
        lhs = fr.complex_at(n)
        rhs = (-1) ** n * f.complex_at(n)
        assert lhs == pytest.approx(rhs, rel=1e-12)


class TestOmega:
    def test_schwarz_reflection(self, laguerre0):
        m, p = laguerre0
        om_up = solutions.omega(ansatz.interior(1 + 1j), p, m, N=4000)
        om_dn = solutions.omega(ansatz.interior(1 - 1j), p, m, N=4000)
        assert om_dn == pytest.approx(om_up.conjugate(), rel=1e-12)

    def test_real_off_spectrum(self, laguerre0):
        m, p = laguerre0
        om = solutions.omega(ansatz.interior(-2.0), p, m, N=20_000)
        assert abs(om.imag) < 1e-12 * abs(om.real)

    def test_nonvanishing_on_ac(self, laguerre0):
        # |Omega| anchored through the classical weight: the density
        # relation gives kappa = sqrt(w e^lambda sqrt(lambda) / pi ...)
        # for the weight e^-lambda, i.e. kappa^2 = sqrt(lambda) e^lambda / pi
        m, p = laguerre0
        for lam in (0.5, 1.0, 2.0, 4.0):
            om = solutions.omega(ansatz.at_plus(lam), p, m, N=100_000)
            kappa_ref = math.sqrt(math.sqrt(lam) * math.exp(lam) / math.pi)
            assert abs(om) > 0.3
            assert abs(om) == pytest.approx(kappa_ref, rel=2e-4)


class TestVarkappa:
    def test_sigma_one(self, laguerre0):
        _, p = laguerre0
        assert solutions.varkappa(ansatz.at_plus(1.0), p) == pytest.approx(1.0)
        assert solutions.limit_wronskian(1.0, p) == pytest.approx(1.0)

    def test_sigma_above_one(self):
        _, p = power(1.25, 0.0, -0.75)   # tau = -0.25
        assert solutions.varkappa(ansatz.at_plus(3.0), p) == pytest.approx(0.5)
        assert solutions.varkappa(ansatz.at_minus(3.0), p) == pytest.approx(-0.5)
        assert solutions.limit_wronskian(-7.0, p) == pytest.approx(0.5)

    def test_positive_tau_constant(self):
        _, p = power(1.25, 0.0, 0.0)     # tau = 1.25
        val = solutions.varkappa(ansatz.interior(0.3 + 2j), p)
        assert val == pytest.approx(1j * math.sqrt(1.25))

    def test_outside_domain(self):
        _, p = power(0.5, 0.0, 0.0)
        with pytest.raises(OutsideDomain):
            solutions.varkappa(ansatz.at_plus(-1.0), p)
        with pytest.raises(OutsideAC):
            solutions.limit_wronskian(-1.0, p)

    def test_numeric_wronskian_matches_closed_form(self):
        cases = [power(1.25, 0.0, -0.875), power(0.5, 0.0, 0.0),
                 (coeffs.laguerre_model(1.0), coeffs.classify(coeffs.laguerre_model(1.0)))]
        grids = {1.25: (-1.0, 0.5, 2.0), 0.5: (0.5, 1.5, 3.0), 1.0: (1.0, 2.5)}
        for m, p in cases:
            for lam in grids[p.sigma]:
                f = solutions.jost(ansatz.at_plus(lam), p, m, N=120_000)
                w_num = solutions.wronskian(f, f.conjugated()) / 2j
                w_ref = solutions.limit_wronskian(lam, p)
                assert abs(w_num.real / w_ref - 1.0) < 1e-3
                assert abs(w_num.imag) < 1e-6 * w_ref
