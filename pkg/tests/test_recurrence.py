import math

import numpy as np
import pytest
import sympy

from conftest import power
from critjac import ansatz, coeffs, recurrence, solutions
from critjac.errors import OnSpectrum, OutsideAC


def test_boundary_conditions(laguerre0):
    m, _ = laguerre0
    P = recurrence.poly_eval(m, 2.5, 4)
    assert P.value(-1).is_zero
    assert P.complex_at(0) == 1.0
    assert P.complex_at(1) == pytest.approx(1.5)  # (z - b_0)/a_0 = z - 1


def test_leading_coefficient_symbolic(laguerre0):
    # P_3(z) = z^3/(a0 a1 a2) + lower order, checked with symbolic z
    m, _ = laguerre0
    z = sympy.Symbol("z")
    a = [sympy.sqrt(sympy.Integer((n + 1) * (n + 1))) for n in range(3)]
    b = [sympy.Integer(2 * n + 1) for n in range(3)]
    P = [sympy.Integer(0), sympy.Integer(1)]  # P_{-1}, P_0
    a_prev = sympy.Integer(1)
    for n in range(3):
        P.append(sympy.expand(((z - b[n]) * P[-1] - a_prev * P[-2]) / a[n]))
        a_prev = a[n]
    lead = sympy.Poly(P[4], z).LC()
    assert sympy.simplify(lead - 1 / (a[0] * a[1] * a[2])) == 0
    # numeric evaluation agrees with the symbolic polynomial
    num = recurrence.poly_eval(m, 1.7, 3).complex_at(3)
    assert num == pytest.approx(float(P[4].subs(z, sympy.Rational(17, 10))))


def test_real_z_gives_real_values(laguerre0):
    m, _ = laguerre0
    P = recurrence.poly_eval(m, 3.7, 500)
    for n in (3, 57, 499):
        assert P.value(n).unit.imag == 0.0


def test_recurrence_residual_small(laguerre0):
    m, _ = laguerre0
    P = recurrence.poly_eval(m, -4.0, 1000)
    assert solutions.recurrence_residual(P) < 1e-12


def test_two_by_two_eigenvalues(laguerre0):
    m, _ = laguerre0
    eigs = recurrence.truncated_matrix_eigs(m, 2)
    assert eigs == pytest.approx([2 - math.sqrt(2), 2 + math.sqrt(2)])
    assert recurrence.truncated_matrix_eigs(m, 1) == pytest.approx([1.0])


def test_eigenvalues_simple_and_interlacing(laguerre0):
    m, _ = laguerre0
    for N in (5, 20, 40):
        e1 = recurrence.truncated_matrix_eigs(m, N)
        e2 = recurrence.truncated_matrix_eigs(m, N + 1)
        assert np.all(np.diff(e1) > 1e-10)
        # interlacing: e2[k] < e1[k] < e2[k+1]
        assert np.all(e2[:-1] <= e1 + 1e-10)
        assert np.all(e1 <= e2[1:] + 1e-10)


@pytest.mark.parametrize("N", [10, 30, 50])
def test_polynomial_roots_are_truncation_eigenvalues(laguerre0, N):
    m, _ = laguerre0
    eigs = recurrence.truncated_matrix_eigs(m, N)
    # P_N vanishes at the eigenvalues of the N x N truncation
    for lam in eigs:
        P = recurrence.poly_eval(m, float(lam), N)
        scale = max(abs(P.complex_at(N - 1)), 1.0)
        assert abs(P.complex_at(N)) < 1e-8 * scale


def test_reflection_identity():
    models = [coeffs.laguerre_model(0.0), coeffs.laguerre_model(1.0),
              coeffs.power_model(0.8, 0.2, -0.3, 1.0)]
    for m in models:
        mr = coeffs.reflect(m)
        for z in (0.7, -1.3 + 0.4j):
            P = recurrence.poly_eval(m, z, 1000)
            Pr = recurrence.poly_eval(mr, -z, 1000)
            for n in (1, 10, 100, 1000):
                lhs = Pr.value(n)
                rhs = P.value(n)
                ratio = (lhs / rhs).to_complex() * (-1.0) ** n
                assert abs(ratio - 1.0) < 1e-12


def test_ac_asymptotics_envelope(laguerre0):
    m, p = laguerre0
    lam = 1.0
    from critjac import spectral
    kappa, eta = spectral.amplitude_phase(lam, p, m, N=50_000)
    w = solutions.limit_wronskian(lam, p)
    acc = ansatz.PhaseAccumulator(ansatz.at_plus(lam), p)
    for n in (500, 2000, 8000):
        pred = recurrence.poly_asymptotic_ac(n, lam, kappa, eta, p, acc)
        assert abs(pred) <= kappa / w * n ** (-p.rho) + 1e-15
    with pytest.raises(OutsideAC):
        recurrence.poly_asymptotic_ac(100, -3.0, kappa, eta, p)


def test_regular_asymptotics_ratio(laguerre0):
    m, p = laguerre0
    zp = ansatz.interior(-1.0)
    om = solutions.omega(zp, p, m, N=100_000)
    P = recurrence.poly_eval(m, -1.0, 10_000)
    acc = ansatz.PhaseAccumulator(zp, p)
    pred = recurrence.poly_asymptotic_regular(10_000, zp, om, p, acc)
    ratio = (P.value(10_000) / pred).to_complex()
    assert abs(ratio - 1.0) < 0.02
    # prediction grows off the spectrum
    lm1 = recurrence.poly_asymptotic_regular(5000, zp, om, p, acc).logmag
    lm2 = recurrence.poly_asymptotic_regular(9000, zp, om, p, acc).logmag
    assert lm2 > lm1
    with pytest.raises(OnSpectrum):
        recurrence.poly_asymptotic_regular(100, ansatz.at_plus(1.0), om, p)


def test_eigenvalue_kills_prediction():
    # at an eigenvalue Omega = 0 the growing branch drops out: the
    # prediction vanishes identically, and the polynomial runs far below
    # the generic growing envelope (it follows the decaying branch until
    # the residual eigenvalue-location error ~1e-9 leaks back in)
    m, p = power(1.0, 0.0, 0.0)   # tau = 1, discrete spectrum below 1
    from critjac import spectral
    zeros = spectral.discrete_eigenvalues(-3.0, 0.9, p, m, N=40_000)
    assert zeros
    lam0 = zeros[0]
    zp = ansatz.interior(lam0)
    acc = ansatz.PhaseAccumulator(zp, p)
    pred0 = recurrence.poly_asymptotic_regular(1000, zp, 0.0, p, acc)
    assert pred0.is_zero
    envelope = recurrence.poly_asymptotic_regular(1000, zp, 1.0, p, acc)
    P = recurrence.poly_eval(m, lam0, 1000)
    assert P.log_abs(1000) < envelope.logmag - 5.0
