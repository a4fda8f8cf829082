"""Spectral outputs: a.c. density, amplitude/phase, resolvent, eigenvalues.

The density on the a.c. set is

    xi(lambda) = w(lambda) / (pi |Omega(lambda +- i0)|^2),

with w the half-Wronskian of the two boundary Jost solutions and Omega
the Jost function.  The constant is pinned by two independent anchors:
the Stieltjes inversion of the resolvent (Privalov route) and the
quadrature orthonormality of the classical Laguerre case.  Eigenvalues
off the a.c. set are real zeros of Omega, cross-checked against a
truncated-matrix eigensolver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import recurrence, solutions, volterra
from .ansatz import SpectralPoint, at_plus, interior
from .coeffs import CoefficientModel, CriticalParams, RealInterval
from .errors import (
    EigenvalueHit,
    InvalidParameter,
    OutsideAC,
    OverlapsAC,
    RefineGrid,
    ThresholdPoint,
)

DENSITY_N_DEFAULT = 200_000
EIG_XTOL = 1e-9
EIG_CROSS_TOL = 1e-6


@dataclass(frozen=True)
class SpectrumClassification:
    """Where the spectrum is absolutely continuous and where discrete."""

    kind: str                       # whole_line_ac | all_discrete | half_line_ac
    ac: RealInterval | None
    discrete: RealInterval | None   # region that may carry eigenvalues

    def __str__(self):
        ac = str(self.ac) if self.ac else "empty"
        disc = str(self.discrete) if self.discrete else "empty"
        return f"{self.kind}: ac={ac}, discrete region={disc}"


@dataclass(frozen=True)
class DensitySample:
    """One a.c.-density sample; xi = w / (pi * kappa^2) exactly as stored."""

    lam: float
    xi: float
    kappa: float
    eta: float
    w: float


def classify_spectrum(params: CriticalParams) -> SpectrumClassification:
    """Regime table: sigma in (1,3/2] splits on the sign of tau; for
    sigma <= 1 a half line is a.c. and the complement is discrete."""
    s, tau, gamma = params.sigma, params.tau, params.gamma
    if s > 1.0:
        if tau < 0:
            return SpectrumClassification("whole_line_ac",
                                          RealInterval(-np.inf, np.inf), None)
        return SpectrumClassification("all_discrete", None,
                                      RealInterval(-np.inf, np.inf))
    ac = params.ac_set
    disc = (RealInterval(-np.inf, ac.lo) if gamma > 0
            else RealInterval(ac.hi, np.inf))
    return SpectrumClassification("half_line_ac", ac, disc)


def _guard_band(params: CriticalParams, lam: float) -> float:
    return 1e-3 * max(1.0, abs(params.tau), abs(lam))


def _require_in_ac(lam: float, params: CriticalParams):
    ac = params.ac_set
    if ac is None or not ac.contains(lam):
        raise OutsideAC(f"lambda = {lam:g} is outside the a.c. set")
    for thr in params.thresholds():
        if abs(lam - thr) < _guard_band(params, lam):
            raise ThresholdPoint(
                f"lambda = {lam:g} inside the guard band around threshold {thr:g}"
            )


def amplitude_phase(lam: float, params: CriticalParams, model: CoefficientModel,
                    N: int | None = None, n0: int | None = None,
                    tol: float = volterra.DEFAULT_TOL) -> tuple[float, float]:
    """Limit amplitude kappa = |Omega(lambda+i0)| and principal-branch
    phase eta = arg Omega(lambda+i0); unwrap along sweeps externally."""
    _require_in_ac(lam, params)
    om = solutions.omega(at_plus(lam), params, model, N=N, n0=n0, tol=tol)
    return abs(om), math.atan2(om.imag, om.real)


def density(lam: float, params: CriticalParams, model: CoefficientModel,
            N: int | None = None, n0: int | None = None,
            tol: float = volterra.DEFAULT_TOL) -> DensitySample:
    """One density sample xi = w / (pi kappa^2) at lambda in the a.c. set."""
    kappa, eta = amplitude_phase(lam, params, model, N=N, n0=n0, tol=tol)
    w = solutions.limit_wronskian(lam, params)
    return DensitySample(lam=float(lam), xi=w / (math.pi * kappa * kappa),
                         kappa=kappa, eta=eta, w=w)


def density_sweep(lams, params: CriticalParams, model: CoefficientModel,
                  N: int | None = None, tol: float = volterra.DEFAULT_TOL) -> list[DensitySample]:
    """Density over a lambda grid with eta continued by nearest branch."""
    out: list[DensitySample] = []
    prev_eta = None
    for lam in lams:
        s = density(float(lam), params, model, N=N, tol=tol)
        eta = s.eta
        if prev_eta is not None:
            eta += 2.0 * math.pi * round((prev_eta - eta) / (2.0 * math.pi))
            s = DensitySample(s.lam, s.xi, s.kappa, eta, s.w)
        prev_eta = eta
        out.append(s)
    return out


# -- resolvent ------------------------------------------------------------


def resolvent_element(n: int, m: int, zp: SpectralPoint,
                      params: CriticalParams, model: CoefficientModel,
                      N: int | None = None,
                      tol: float = volterra.DEFAULT_TOL) -> complex:
    """<R(z) e_n, e_m> = Omega(z)^{-1} P_min(z) f_max(z).

    Defined for Im z != 0, for boundary values lambda +- i0 on the a.c.
    set, and for real z in the resolvent set (EigenvalueHit at real
    zeros of Omega).
    """
    if n < 0 or m < 0:
        raise InvalidParameter("resolvent indices must be nonnegative")
    lo, hi = min(n, m), max(n, m)
    win = solutions.jost(zp, params, model, N=N, tol=tol)
    om = solutions.omega_from_window(win)
    z = complex(zp.z)
    if z.imag == 0.0 and zp.side == "interior":
        scale = max(1.0, abs(win.complex_at(0)), abs(win.complex_at(1)))
        if abs(om) < 1e-8 * scale:
            raise EigenvalueHit(f"Omega vanishes at z = {z.real:g}")
    P = recurrence.poly_eval(model, z, lo)
    return (P.value(lo) * win.value(hi)).to_complex() / om


def projector_density(n: int, m: int, lam: float, params: CriticalParams,
                      model: CoefficientModel, N: int | None = None,
                      tol: float = volterra.DEFAULT_TOL) -> float:
    """d<E(lambda) e_n, e_m>/dlambda = pi^{-1} w |Omega|^{-2} P_n P_m."""
    _require_in_ac(lam, params)
    s = density(lam, params, model, N=N, tol=tol)
    P = recurrence.poly_eval(model, lam, max(n, m))
    pn = P.complex_at(n).real
    pm = P.complex_at(m).real
    return s.xi * pn * pm


# -- discrete spectrum -------------------------------------------------------


def _omega_real(lam: float, params: CriticalParams, model: CoefficientModel,
                N: int | None, tol: float) -> float:
    om = solutions.omega(interior(complex(lam)), params, model, N=N, tol=tol,
                         extrapolate=True)
    return om.real


def matrix_eigs_adaptive(model: CoefficientModel, window: tuple[float, float],
                         start_N: int = 400, cap: int = 200_000,
                         settle: float = 1e-8) -> tuple[np.ndarray, int]:
    """Eigenvalues of growing truncations until the in-window set settles.

    Doubles N until every eigenvalue in the window moves less than
    `settle` and the count is stable; below the a.c. threshold the
    truncation converges fast, so this terminates quickly.
    """
    N = start_N
    prev = None
    while True:
        eigs = recurrence.truncated_matrix_eigs(model, N, window=window)
        if prev is not None and len(prev) == len(eigs):
            if len(eigs) == 0 or np.max(np.abs(prev - eigs)) < settle:
                return eigs, N
        if N >= cap:
            return eigs, N
        prev = eigs
        N = min(2 * N, cap)


def discrete_eigenvalues(lo: float, hi: float, params: CriticalParams,
                         model: CoefficientModel, N: int | None = None,
                         tol: float = volterra.DEFAULT_TOL,
                         grid_points: int = 64) -> list[float]:
    """Real zeros of Omega on [lo, hi] (disjoint from the a.c. closure).

    Sign-change scan refined around matrix-oracle predictions, then
    Brent root-finding to 1e-9.  If two predicted eigenvalues cannot be
    separated by the refined grid the search raises RefineGrid rather
    than silently merging them.
    """
    return eigenvalue_report(lo, hi, params, model, N=N, tol=tol,
                             grid_points=grid_points)["omega_zeros"]


def eigenvalue_report(lo: float, hi: float, params: CriticalParams,
                      model: CoefficientModel, N: int | None = None,
                      tol: float = volterra.DEFAULT_TOL,
                      grid_points: int = 64,
                      cross_tol: float = EIG_CROSS_TOL) -> dict:
    """Eigenvalues by both routes plus deviations (dict for JSON export)."""
    if hi <= lo:
        raise InvalidParameter("need lo < hi")
    ac = params.ac_set
    if ac is not None and not (hi <= ac.lo or lo >= ac.hi):
        raise OverlapsAC(f"[{lo:g}, {hi:g}] intersects the a.c. closure {ac}")

    ref, N_mat = matrix_eigs_adaptive(model, (lo, hi))

    # scan grid: uniform points plus midpoints between predicted eigenvalues
    pts = set(np.linspace(lo, hi, grid_points))
    for i in range(len(ref) + 1):
        a = lo if i == 0 else ref[i - 1]
        b = hi if i == len(ref) else ref[i]
        pts.add(0.5 * (a + b))
    grid = np.array(sorted(pts))
    om = np.array([_omega_real(x, params, model, N, tol) for x in grid])

    zeros: list[float] = []
    for i in range(len(grid) - 1):
        if om[i] == 0.0:
            zeros.append(float(grid[i]))
        elif om[i] * om[i + 1] < 0.0:
            root = brentq(_omega_real, grid[i], grid[i + 1],
                          args=(params, model, N, tol), xtol=EIG_XTOL)
            zeros.append(float(root))
    if om[-1] == 0.0:
        zeros.append(float(grid[-1]))

    if len(zeros) < len(ref):
        # a grid cell may hold an even number of zeros; refine around the
        # missed predictions before giving up
        for r in ref:
            if all(abs(r - z) > 1e-7 for z in zeros):
                half = min((hi - lo) / (4 * grid_points), 1e-3)
                a, b = max(lo, r - half), min(hi, r + half)
                fa = _omega_real(a, params, model, N, tol)
                fb = _omega_real(b, params, model, N, tol)
                if fa * fb < 0.0:
                    zeros.append(float(brentq(_omega_real, a, b,
                                              args=(params, model, N, tol),
                                              xtol=EIG_XTOL)))
                else:
                    raise RefineGrid(
                        f"cannot separate a sign change near lambda = {r:g}; "
                        "refine the scan grid"
                    )
        zeros.sort()

    deviations = [float(min(abs(z - r) for r in ref)) if len(ref) else np.inf
                  for z in zeros]
    return {
        "interval": [float(lo), float(hi)],
        "omega_zeros": zeros,
        "matrix_eigenvalues": [float(x) for x in ref],
        "deviations": deviations,
        "matrix_N": int(N_mat),
        "agree": bool(len(zeros) == len(ref)
                      and all(d <= cross_tol for d in deviations)),
    }
