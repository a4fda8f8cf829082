"""Independent oracles: direct recurrence evaluation and matrix eigenvalues.

poly_eval runs the three-term recurrence forward with per-step
renormalization, so orthonormal polynomial values are available far off
the spectrum where they grow like exp(c n^power).  truncated_matrix_eigs
diagonalizes the N x N leading principal submatrix.  Both are pure
oracles: they never touch the Ansatz/Volterra machinery they are used to
check.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .ansatz import PhaseAccumulator, SpectralPoint, at_plus, phase_context
from .coeffs import CoefficientModel, CriticalParams
from .errors import InvalidParameter, OnSpectrum, OutsideAC
from .logcomplex import LogComplex
from .solutions import SolutionWindow, kappa_phase, limit_wronskian

_RENORM = 1e120


def poly_eval(model: CoefficientModel, z: complex, N: int) -> SolutionWindow:
    """Orthonormal polynomials P_n(z) for n in [-1, N], P_-1 = 0, P_0 = 1.

    Real z is evaluated in real arithmetic, so values stay exactly real.
    The window is renormalized every step and the cumulative log scale
    recorded, which keeps the recurrence safe up to n ~ 10^7.
    """
    if N < 0:
        raise InvalidParameter("poly_eval needs N >= 0")
    a = model.a_range(0, N + 1).tolist()
    b = model.b_range(0, N + 1).tolist()
    real = complex(z).imag == 0.0
    zv = complex(z).real if real else complex(z)
    lm = np.empty(N + 2)
    unit = np.empty(N + 2, dtype=complex)
    lm[0], unit[0] = -np.inf, 1.0 + 0.0j   # P_{-1}
    lm[1], unit[1] = 0.0, 1.0 + 0.0j       # P_0
    p_prev, p_cur = 0.0 if real else 0.0j, 1.0 if real else (1.0 + 0.0j)
    scale = 0.0
    a_prev = 1.0  # a_{-1}, arbitrary since P_{-1} = 0
    for n in range(N):
        p_next = ((zv - b[n]) * p_cur - a_prev * p_prev) / a[n]
        mag = abs(p_next)
        if mag == 0.0:
            lm[n + 2], unit[n + 2] = -np.inf, 1.0 + 0.0j
        else:
            lm[n + 2] = scale + math.log(mag)
            unit[n + 2] = p_next / mag
        big = max(mag, abs(p_cur))
        if big > _RENORM:
            p_next /= big
            p_cur /= big
            scale += math.log(big)
        p_prev, p_cur, a_prev = p_cur, p_next, a[n]
    zp = SpectralPoint(complex(z), "plus" if real else "interior")
    return SolutionWindow("polynomial", -1, lm, unit, zp, model,
                          meta={"N": N})


def truncated_matrix_eigs(model: CoefficientModel, N: int,
                          k: int | None = None,
                          window: tuple[float, float] | None = None) -> np.ndarray:
    """Eigenvalues of the N x N leading principal submatrix, sorted.

    Returns the k smallest, the ones inside `window`, or all N.  The
    submatrix is real symmetric tridiagonal with positive off-diagonal,
    so all eigenvalues are real and simple.
    """
    if N < 1:
        raise InvalidParameter("matrix truncation needs N >= 1")
    d = model.b_range(0, N)
    e = model.a_range(0, N - 1)
    if k is not None:
        if not 1 <= k <= N:
            raise InvalidParameter("need 1 <= k <= N")
        if N == 1:
            return d.copy()
        return eigh_tridiagonal(d, e, select="i", select_range=(0, k - 1),
                                eigvals_only=True)
    if window is not None:
        if N == 1:
            lo, hi = window
            return d.copy() if lo < d[0] < hi else np.empty(0)
        return eigh_tridiagonal(d, e, select="v", select_range=window,
                                eigvals_only=True)
    if N == 1:
        return d.copy()
    return eigh_tridiagonal(d, e, eigvals_only=True)


# -- closed-form asymptotics for comparison tests ----------------------------


def poly_asymptotic_ac(n: int, lam: float, kappa: float, eta: float,
                       params: CriticalParams,
                       phases: PhaseAccumulator | None = None) -> float:
    """Oscillatory asymptotic value on the a.c. set:

        kappa w^-1 (-gamma)^n n^-rho sin(Phi_n - eta),

    with Phi_n the (real) accumulated phase at lambda + i0.  kappa and
    eta must come from the same phase window (same n_start) as `phases`;
    by default both use the standard start index, which keeps them
    consistent.
    """
    ac = params.ac_set
    if ac is None or not ac.contains(lam):
        raise OutsideAC(f"lambda = {lam:g} outside the a.c. set")
    if phases is None:
        phases = PhaseAccumulator(at_plus(lam), params)
    w = limit_wronskian(lam, params)
    Phi = phases.phi(n)
    sign = 1.0 if params.gamma < 0 or n % 2 == 0 else -1.0
    return kappa / w * sign * float(n) ** (-params.rho) * math.sin(Phi.real - eta)


def poly_asymptotic_regular(n: int, zp: SpectralPoint, omega_value: complex,
                            params: CriticalParams,
                            phases: PhaseAccumulator | None = None) -> LogComplex:
    """Growing asymptotic value at a regular point:

        -Omega(z) * (i / (2 varkappa)) * (-gamma)^{n+1} n^-rho e^{-i phi_n(gamma z)}.

    The prefactor i/(2 varkappa) is pinned by W[f, g] = 1 and verified
    against the recurrence oracle.
    """
    z = complex(zp.z)
    ac = params.ac_set
    if z.imag == 0.0 and ac is not None and ac.closure_contains(z.real):
        raise OnSpectrum("regular-point asymptotics need z off the a.c. set")
    if phases is None:
        phases = PhaseAccumulator(zp, params)
    kap = kappa_phase(phase_context(zp, params), params)
    pref = -complex(omega_value) * 1j / (2.0 * kap)
    if pref == 0:
        return LogComplex.zero()
    ph = phases.phi(n)
    sign = -1.0 if params.gamma > 0 and n % 2 == 0 else 1.0
    if params.gamma < 0:
        sign = 1.0
    unit = sign * np.exp(-1j * ph.real) * pref / abs(pref)
    logmag = math.log(abs(pref)) - params.rho * math.log(n) + ph.imag
    return LogComplex(logmag, complex(unit / abs(unit)))
