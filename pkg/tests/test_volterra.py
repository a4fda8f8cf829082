import numpy as np
import pytest

from conftest import loglog_slope, power
from critjac import ansatz, volterra
from critjac.errors import TruncationTooShort


def test_zero_kernel_gives_unit_solution():
    K = 500
    lam = np.full(K + 1, 0.97 + 0.01j)
    rr = np.zeros(K + 1, dtype=complex)
    u = volterra.sweep_from_arrays(lam, rr)
    assert np.all(u == 1.0)


def test_sweep_matches_iteration_series():
    # the backward sweep must reproduce the converged successive
    # approximations on a window where the series converges
    rng = np.random.default_rng(5)
    K = 120
    lam = 1.0 + 0.02 * (rng.normal(size=K + 1) + 1j * rng.normal(size=K + 1))
    rr = 0.01 * (rng.normal(size=K + 1) + 1j * rng.normal(size=K + 1)) / \
        (2.0 + np.arange(K + 1.0)) ** 1.5
    u_sweep = volterra.sweep_from_arrays(lam, rr)
    u_series = volterra.iterate_series(lam, rr)
    assert np.max(np.abs(u_sweep - u_series)) < 1e-12


def test_kernel_factor_examples(laguerre0):
    m, p = laguerre0
    zp = ansatz.at_plus(2.0)
    # Lambda_n -> 1 at the phase rate ~ 2 theta_n ~ n^-nu
    lam3, rr3 = volterra.kernel_factors(1000, zp, p, m)
    assert abs(lam3 - 1.0) < 4.0 * 1000.0 ** (-p.nu)
    lam4, _ = volterra.kernel_factors(4000, zp, p, m)
    assert abs(lam4 - 1.0) < abs(lam3 - 1.0)
    # |Rcal_n| within a factor 2 of |r_n|
    r = ansatz.remainder(1000, zp, p, m)
    assert 0.5 <= abs(rr3) / abs(r) <= 2.0


def test_x_prod_empty_and_closed_form(laguerre0):
    m, p = laguerre0
    zp = ansatz.interior(2 + 1j)
    ctx = ansatz.phase_context(zp, p)
    n0 = ctx.n_start
    x0 = volterra.x_prod(n0, zp, p, m)
    assert x0.to_complex() == pytest.approx(1.0)
    # X_n * kappa_n e^{-i bold(phi)_n} is one fixed constant across n
    acc = ansatz.PhaseAccumulator(zp, p)
    vals = []
    for n in range(n0 + 1, n0 + 400, 40):
        X = volterra.x_prod(n, zp, p, m)
        kap = n ** p.rho * (n + 1) ** p.rho / m.a(n)
        phase = acc.phi(n) + acc.phi(n + 1)
        from critjac.logcomplex import LogComplex
        closed = LogComplex.from_complex(kap) * LogComplex(
            phase.imag, complex(np.exp(-1j * phase.real)))
        vals.append((X * closed).to_complex())
    vals = np.array(vals)
    assert np.max(np.abs(vals - vals[0])) < 1e-9 * abs(vals[0])


def test_kernel_g_diagonal_is_one(laguerre0):
    m, p = laguerre0
    zp = ansatz.at_plus(2.0)
    for n in (20, 57, 400):
        g = volterra.kernel_g(n, n + 1, zp, p, m)
        assert g.to_complex() == pytest.approx(1.0, abs=1e-12)


def test_kernel_g_growth_bound(laguerre0):
    # |G_{n,m}| <= C m^nu on the spectrum
    m, p = laguerre0
    zp = ansatz.interior(2 + 1j)
    ctx = ansatz.phase_context(zp, p)
    kern = volterra.VolterraKernel(ctx, m, ctx.n_start, 10_000)
    ms = np.arange(ctx.n_start + 1, 10_001, 7)
    worst = 0.0
    for n in (ctx.n_start, 100, 1000):
        sel = ms[ms > n]
        ratios = kern.g_row_abs(n, sel) * sel ** (-p.nu)
        worst = max(worst, float(np.max(ratios)))
    assert worst < 25.0


def test_tail_bound_power_law(laguerre0):
    m, p = laguerre0
    zp = ansatz.at_plus(1.0)
    hs = [volterra.tail_bound(N, zp, p, m) for N in (10_000, 40_000, 160_000)]
    slope = loglog_slope([10_000, 40_000, 160_000], hs)
    assert slope == pytest.approx(p.nu - p.delta + 1.0, abs=0.1)
    assert hs[2] < hs[1] < hs[0]


class TestSolve:
    @pytest.mark.parametrize("tail_init", ["unit", "asymptotic"])
    def test_residual_and_bound(self, laguerre0, tail_init):
        m, p = laguerre0
        sol = volterra.solve(ansatz.at_plus(1.0), p, m, N=30_000,
                             tail_init=tail_init)
        assert sol.residual < 1e-10
        assert np.all(np.abs(sol.u - 1.0) <= np.expm1(sol.H) + 1e-14)
        if tail_init == "unit":
            assert abs(sol.u_at(sol.N) - 1.0) == 0.0

    def test_derivative_bound(self, laguerre0):
        m, p = laguerre0
        sol = volterra.solve(ansatz.at_plus(1.0), p, m, N=30_000)
        ns = np.arange(sol.n0, sol.N, dtype=float)
        du = np.abs(np.diff(sol.u)) * ns ** (p.delta - 1.0)
        # constant in |u_{n+1} - u_n| <= C n^{1-delta} stable across halves
        first = du[: len(du) // 2].max()
        second = du[len(du) // 2:].max()
        assert second < 10.0 * first

    def test_doubling_stability(self, laguerre0):
        m, p = laguerre0
        zp = ansatz.at_plus(1.0)
        s1 = volterra.solve(zp, p, m, N=20_000)
        s2 = volterra.solve(zp, p, m, N=40_000)
        budget = np.expm1(s1.tail_bound) + np.expm1(s2.tail_bound)
        assert abs(s1.u_at(s1.n0) - s2.u_at(s1.n0)) <= budget

    def test_conjugate_point(self):
        m, p = power(1.25, 0.0, -0.375)   # tau = 0.5
        z = 0.3 + 0.2j
        s_up = volterra.solve(ansatz.interior(z), p, m, N=4000)
        s_dn = volterra.solve(ansatz.interior(z.conjugate()), p, m, N=4000)
        assert np.max(np.abs(s_dn.u - s_up.u.conjugate())) < 1e-13

    def test_boundary_continuity(self, laguerre0):
        m, p = laguerre0
        lam = 1.5
        ref = volterra.solve(ansatz.at_plus(lam), p, m, N=30_000)
        diffs = []
        for eps in (1e-2, 1e-3, 1e-4):
            s = volterra.solve(ansatz.interior(lam + 1j * eps), p, m,
                               n0=ref.n0, N=30_000)
            diffs.append(abs(s.u_at(ref.n0) - ref.u_at(ref.n0)))
        assert diffs[0] > diffs[1] > diffs[2]
        assert diffs[2] < 1e-3

    def test_truncation_too_short(self):
        m, p = power(1.25, 0.0, -0.875)   # quarter-power tail on the axis
        with pytest.raises(TruncationTooShort):
            volterra.solve(ansatz.at_plus(-2.0), p, m, N=2100)

    def test_extrapolated_run_keeps_residual(self, laguerre0):
        # Richardson in N targets the smooth off-spectrum truncation error;
        # isolate it with the bare unit tail
        m, p = laguerre0
        zp = ansatz.interior(-1.0)
        plain_hi = volterra.solve(zp, p, m, N=160_000, tail_init="unit")
        rich = volterra.solve(zp, p, m, N=20_000, extrapolate=True,
                              tail_init="unit")
        assert rich.residual < 1e-10
        plain_lo = volterra.solve(zp, p, m, N=20_000, tail_init="unit")
        err_plain = abs(plain_lo.u_at(plain_lo.n0) - plain_hi.u_at(plain_lo.n0))
        err_rich = abs(rich.u_at(rich.n0) - plain_hi.u_at(rich.n0))
        assert err_rich < 0.2 * err_plain


def test_u_decay_rate_on_spectrum(laguerre0):
    # |u_n - 1| decays like n^(nu - delta + 1) = n^(-1/2) for this model
    m, p = laguerre0
    sol = volterra.solve(ansatz.at_plus(1.0), p, m, N=200_000)
    ns = np.array([1000, 4000, 16_000, 64_000])
    dev = np.array([abs(sol.u_at(int(n)) - 1.0) for n in ns])
    slope = loglog_slope(ns, dev)
    assert -0.8 < slope < -0.3


def test_x_prod_monotone_off_axis(laguerre0):
    # Im z > 0 makes Im of the phase sum increase, so |X_n| ~ n^nu
    # e^{-Im(phase)} decays monotonically at large n and |X_n^{-1}| grows
    m, p = laguerre0
    ctx = ansatz.phase_context(ansatz.interior(1 + 1j), p)
    kern = volterra.VolterraKernel(ctx, m, ctx.n_start, 3000)
    assert np.all(np.diff(kern.logX[200:]) < 0)


def test_tail_bound_zero_for_zero_kernel(laguerre0):
    m, p = laguerre0
    ctx = ansatz.phase_context(ansatz.at_plus(1.0), p)
    kern = volterra.VolterraKernel(ctx, m, ctx.n_start, 3000)
    kern.rr[:] = 0.0
    kern.h[:] = 0.0
    kern._fit_tail(p.nu, p.delta)
    assert kern.tail_beyond == 0.0


def test_diagnostics_csv(laguerre0):
    m, p = laguerre0
    sol = volterra.solve(ansatz.at_plus(1.0), p, m, N=5000)
    text = volterra.diagnostics_csv(sol, stride=500)
    lines = text.strip().split("\n")
    assert lines[0] == "n,abs_u_minus_1,bound"
    for line in lines[1:]:
        _, du, bd = line.split(",")
        assert float(du) <= float(bd) + 1e-14
