"""WKB-type Ansatz for Jacobi difference equations with growing coefficients.

The approximate solution is

    A_n(z) = (-gamma)^n n^(-rho) exp(i phi_n(gamma z)),
    phi_n  = sum of theta_m over the window, theta_n = sqrt(T_n),
    T_n    = t_n + p_2 t_n^2 + ... + p_L t_n^L,
    t_n    = -tau/n + (gamma z)/n^sigma,

with the square-root branch fixed by Im sqrt >= 0 on the plane cut along
the positive reals.  Boundary values from below the cut, and points with
Im(gamma z) < 0, are produced by conjugation: the whole pipeline computes
at the canonical (upper) point and conjugates final values, so a single
branch is ever evaluated.

All operations are pure given (n, point, params, model); the only mutable
object is the PhaseAccumulator memo, which is lock-protected.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .coeffs import CoefficientModel, CriticalParams
from .errors import BranchPoint, InvalidParameter
from .logcomplex import LogComplex

PLUS = "plus"
MINUS = "minus"
INTERIOR = "interior"


@dataclass(frozen=True)
class SpectralPoint:
    """Complex z with the boundary-side tag fixing every square root.

    side = plus / minus means the limit onto the real axis from the upper
    or lower half-plane (Im z must be 0); side = interior is an ordinary
    point (off the real axis, or real in the resolvent region).
    """

    z: complex
    side: str = INTERIOR

    def __post_init__(self):
        if self.side not in (PLUS, MINUS, INTERIOR):
            raise InvalidParameter(f"unknown side tag {self.side!r}")
        if self.side != INTERIOR and complex(self.z).imag != 0.0:
            raise InvalidParameter("side=plus/minus requires Im z = 0")

    def conjugate(self) -> "SpectralPoint":
        flip = {PLUS: MINUS, MINUS: PLUS, INTERIOR: INTERIOR}
        return SpectralPoint(complex(self.z).conjugate(), flip[self.side])


def at_plus(lam: float) -> SpectralPoint:
    return SpectralPoint(complex(lam), PLUS)


def at_minus(lam: float) -> SpectralPoint:
    return SpectralPoint(complex(lam), MINUS)


def interior(z: complex) -> SpectralPoint:
    return SpectralPoint(complex(z), INTERIOR)


# -- square roots ------------------------------------------------------------


def sqrt_cut(t: complex, side: str = INTERIOR) -> complex:
    """sqrt on the plane cut along [0, inf), branch Im sqrt >= 0.

    On the cut itself only the +i0 limit is returned (side=plus gives
    +sqrt(t) for t > 0); lower-side boundary values are produced by
    conjugating whole solutions, never here.
    """
    t = complex(t)
    if t == 0:
        raise BranchPoint("square root evaluated at the branch point t = 0")
    if t.imag == 0.0 and t.real > 0.0:
        if side == MINUS:
            raise InvalidParameter(
                "minus-side values on the cut are obtained by conjugation "
                "at the solution level"
            )
        return complex(math.sqrt(t.real), 0.0)
    r = np.sqrt(t)
    return complex(-r) if r.imag < 0 else complex(r)


def branch_sqrt(T: np.ndarray) -> np.ndarray:
    """Vectorized Im >= 0 square root; +i0 limit on the positive reals."""
    T = np.asarray(T, dtype=complex)
    if np.any(T == 0):
        raise BranchPoint("phase argument hit the branch point (threshold)")
    r = np.sqrt(T)
    return np.where(r.imag < 0, -r, r)


# -- canonical phase context ------------------------------------------------


@dataclass(frozen=True)
class PhaseContext:
    """Canonicalized phase argument for one spectral point.

    w is gamma*z moved to the closed upper half-plane; conj records
    whether final values must be conjugated back.
    """

    w: complex
    conj: bool
    n_start: int
    params: CriticalParams

    @property
    def z_canonical(self) -> complex:
        return self.params.gamma * self.w


def _asymptotically_on_cut(w: complex, params: CriticalParams) -> bool:
    """True when t_n(w) > 0 for all large n (real w on the oscillatory side)."""
    if w.imag != 0.0:
        return False
    x = w.real
    if params.sigma > 1:
        return params.tau < 0
    if params.sigma == 1:
        return x > params.tau
    return x > 0


def _turning_index(w: float, params: CriticalParams) -> float:
    """Largest n at which t_n(w) changes sign for real w, or 0 if none."""
    tau, sigma = params.tau, params.sigma
    if tau == 0.0 or sigma == 1.0 or w == 0.0:
        return 0.0
    ratio = w / tau
    if ratio <= 0.0:
        return 0.0
    return ratio ** (1.0 / (sigma - 1.0))


def default_n_start(zp: SpectralPoint, params: CriticalParams) -> int:
    """First index of the phase sum.

    Keeps |t_n| <= 1/2 on the window and, for real arguments, clears the
    sign change of t_n with a wide margin so T_n stays away from the cut.
    A finite number of dropped leading terms only rescales the Jost
    solution by a constant.
    """
    w = params.gamma * complex(zp.z)
    base = max(
        8,
        math.ceil((4.0 * abs(w)) ** (1.0 / params.sigma)),
        math.ceil(4.0 * abs(params.tau)) + 1,
    )
    if w.imag == 0.0:
        nstar = _turning_index(w.real, params)
        if nstar > 0.0:
            base = max(base, math.ceil(8.0 * nstar))
    return base


def phase_context(zp: SpectralPoint, params: CriticalParams,
                  n_start: int | None = None) -> PhaseContext:
    """Canonicalize a spectral point; validates threshold and side rules."""
    z = complex(zp.z)
    w = params.gamma * z
    conj = False
    if zp.side == INTERIOR:
        if w.imag < 0.0:
            w = w.conjugate()
            conj = True
        elif w.imag == 0.0 and _asymptotically_on_cut(w, params):
            raise InvalidParameter(
                "real z inside the a.c. set needs an explicit side tag "
                "(+i0 or -i0), not side=interior"
            )
    else:
        eff_plus = (zp.side == PLUS) == (params.gamma > 0)
        conj = not eff_plus
        w = complex(w.real, 0.0)
    if w.imag == 0.0:
        if params.sigma == 1.0 and w.real == params.tau:
            raise BranchPoint("z at the spectral threshold gamma*tau")
        if params.sigma < 1.0 and w.real == 0.0:
            raise BranchPoint("z at the spectral threshold 0")
    if n_start is None:
        n_start = default_n_start(zp, params)
    return PhaseContext(w=w, conj=conj, n_start=int(n_start), params=params)


# -- phases -------------------------------------------------------------------


def t_values(ns: np.ndarray, w: complex, params: CriticalParams) -> np.ndarray:
    ns = np.asarray(ns, dtype=float)
    return -params.tau / ns + w * ns ** (-params.sigma)


def theta_window(ctx: PhaseContext, n0: int, n1: int) -> np.ndarray:
    """theta_n for n in [n0, n1) at the canonical point (no conjugation)."""
    ns = np.arange(n0, n1, dtype=float)
    p = ctx.params
    if p.sigma == 1.0:
        # explicit sqrt(gamma z - tau) n^{-1/2}; avoids cancellation in t_n
        root = sqrt_cut(ctx.w - p.tau, PLUS if ctx.w.imag == 0.0 else INTERIOR)
        return root / np.sqrt(ns)
    t = t_values(ns, ctx.w, p)
    T = t.copy()
    if p.L > 1:
        acc = np.zeros_like(t)
        for pl in reversed(p.p):
            acc = (acc + float(pl)) * t
        T = t + acc * t  # t + p2 t^2 + ... + pL t^L via Horner
    return branch_sqrt(T)


def t_seq(n: int, zp: SpectralPoint, params: CriticalParams) -> complex:
    """The sequence -tau/n + (gamma z)/n^sigma driving all phases."""
    if n < 1:
        raise InvalidParameter("t_n needs n >= 1")
    return complex(-params.tau / n + params.gamma * complex(zp.z) * float(n) ** (-params.sigma))


class PhaseAccumulator:
    """Memoized theta_n and prefix sums phi_n for one spectral point.

    phi(n_start) = 0 and phi(n+1) - phi(n) = theta(n) exactly as stored.
    Growth of the memo is lock-protected; distinct points never share
    state.
    """

    def __init__(self, zp: SpectralPoint, params: CriticalParams,
                 n_start: int | None = None):
        self.ctx = phase_context(zp, params, n_start)
        self.params = params
        self.n_start = self.ctx.n_start
        self._theta = np.empty(0, dtype=complex)
        self._phi = np.zeros(1, dtype=complex)  # phi[k] = phi_{n_start+k}
        self._lock = threading.Lock()

    def _grow(self, n: int):
        need = n - self.n_start + 1
        if len(self._theta) >= need:
            return
        with self._lock:
            have = len(self._theta)
            if have >= need:
                return
            new = theta_window(self.ctx, self.n_start + have,
                               self.n_start + max(need, 2 * have, 64))
            self._theta = np.concatenate([self._theta, new])
            self._phi = np.concatenate([[0.0], np.cumsum(self._theta)])

    def theta(self, n: int) -> complex:
        if n < self.n_start:
            raise InvalidParameter(f"phase window starts at n = {self.n_start}")
        self._grow(n)
        val = self._theta[n - self.n_start]
        return complex(-val.conjugate()) if self.ctx.conj else complex(val)

    def phi(self, n: int) -> complex:
        if n < self.n_start:
            raise InvalidParameter(f"phase window starts at n = {self.n_start}")
        self._grow(n)
        val = self._phi[n - self.n_start]
        return complex(-val.conjugate()) if self.ctx.conj else complex(val)

    def phi_array(self, n0: int, n1: int) -> np.ndarray:
        """phi_n for n in [n0, n1), canonical-and-conjugated as needed."""
        self._grow(n1 - 1)
        sl = self._phi[n0 - self.n_start: n1 - self.n_start]
        return -sl.conjugate() if self.ctx.conj else sl.copy()


def theta(n: int, zp: SpectralPoint, params: CriticalParams,
          n_start: int | None = None) -> complex:
    """Branch-correct phase increment; Im theta >= 0 for every point."""
    ctx = phase_context(zp, params, n_start)
    if n < ctx.n_start and n >= 1:
        ctx = PhaseContext(ctx.w, ctx.conj, n, params)
    val = complex(theta_window(ctx, n, n + 1)[0])
    return -val.conjugate() if ctx.conj else val


def phi(n: int, zp: SpectralPoint, params: CriticalParams,
        n_start: int | None = None) -> complex:
    """Prefix sum of theta from n_start (phi(n_start) = 0).

    For sweeps over many n build one PhaseAccumulator instead; this
    convenience evaluates a fresh window each call.
    """
    return PhaseAccumulator(zp, params, n_start).phi(n)


# -- the Ansatz and its remainder ---------------------------------------


def _signed_unit(n: int, gamma: float) -> complex:
    return complex((-gamma) ** (n % 2) if gamma in (1.0, -1.0) else (-gamma) ** n)


def ansatz_value(n: int, zp: SpectralPoint, params: CriticalParams,
                 n_start: int | None = None) -> LogComplex:
    """A_n = (-gamma)^n n^(-rho) e^{i phi_n(gamma z)} as a LogComplex."""
    acc = PhaseAccumulator(zp, params, n_start)
    if n < acc.n_start:
        raise InvalidParameter(f"Ansatz window starts at n = {acc.n_start}")
    ph = acc.phi(n)
    logmag = -params.rho * math.log(n) - ph.imag
    unit = _signed_unit(n, params.gamma) * complex(math.cos(ph.real), math.sin(ph.real))
    return LogComplex(logmag, unit / abs(unit))


def ansatz_ratio_window(ctx: PhaseContext, n0: int, n1: int) -> np.ndarray:
    """B_n = A_{n+1}/A_n = (-gamma) (n+1)^(-rho) n^rho e^{i theta_n},
    for n in [n0, n1), at the canonical point."""
    ns = np.arange(n0, n1, dtype=float)
    th = theta_window(ctx, n0, n1)
    p = ctx.params
    return (-p.gamma) * (ns / (ns + 1.0)) ** p.rho * np.exp(1j * th)


def remainder_window(ctx: PhaseContext, model: CoefficientModel,
                     n0: int, n1: int) -> np.ndarray:
    """Relative recurrence defect r_n of the Ansatz for n in [n0, n1).

    Evaluated through the neighbor ratios B_n only -- the raw A_n under-
    or overflow, the ratios are O(1):

        r_n = sqrt(a_{n-1}/a_n) / B_{n-1} + sqrt(a_n/a_{n-1}) B_n
              + (b_n - z)/sqrt(a_{n-1} a_n).

    Requires n0 >= n_start + 1 so that B_{n-1} is inside the window.
    """
    if n0 < ctx.n_start + 1:
        raise InvalidParameter("remainder needs n >= n_start + 1")
    z = ctx.z_canonical
    B = ansatz_ratio_window(ctx, n0 - 1, n1)
    ns = np.arange(n0, n1, dtype=float)
    a_n = model.a_fn(ns)
    a_nm1 = model.a_fn(ns - 1.0)
    b_n = model.b_fn(ns)
    ratio = np.sqrt(a_n / a_nm1)
    return B[:-1] ** -1 / ratio + ratio * B[1:] + (b_n - z) / np.sqrt(a_n * a_nm1)


def remainder(n: int, zp: SpectralPoint, params: CriticalParams,
              model: CoefficientModel, n_start: int | None = None) -> complex:
    """r_n for a single index (see remainder_window)."""
    ctx = phase_context(zp, params, n_start)
    if n < ctx.n_start + 1:
        raise InvalidParameter(f"remainder needs n >= {ctx.n_start + 1}")
    val = complex(remainder_window(ctx, model, n, n + 1)[0])
    return val.conjugate() if ctx.conj else val


def remainder_samples(model: CoefficientModel, params: CriticalParams,
                      zp: SpectralPoint, ns: np.ndarray) -> np.ndarray:
    """|r_n| on scattered sample points (for decay-slope fits)."""
    ctx = phase_context(zp, params)
    out = np.empty(len(ns))
    for i, n in enumerate(np.asarray(ns, dtype=int)):
        out[i] = abs(remainder_window(ctx, model, int(n), int(n) + 1)[0])
    return out


# -- closed-form phase asymptotics (test oracles) ----------------------------


def asymptotic_phase(n: int, lam: float, params: CriticalParams) -> complex:
    """Displayed leading terms of phi_n(gamma*(lam+i0)), without the
    unknown additive constant.  Regime selects the formula:

      sigma = 1        : 2 sqrt(w - tau) n^{1/2}
      sigma in (1,3/2) : 2 sqrt(|tau| n) +- w/(sqrt(|tau|)(3-2 sigma)) n^{3/2-sigma}
      sigma = 3/2      : same with the power replaced by ln n
      sigma < 1        : 2 sqrt(w) (2-sigma)^{-1} n^{1-sigma/2}

    with w = gamma*lam and upper-side square roots.
    """
    s, tau = params.sigma, params.tau
    w = params.gamma * float(lam)
    if s == 1.0:
        return 2.0 * sqrt_cut(w - tau, PLUS) * math.sqrt(n)
    if s > 1.0:
        grow = math.log(n) if s == 1.5 else n ** (1.5 - s) / (3.0 - 2.0 * s)
        if tau < 0:
            return 2.0 * math.sqrt(-tau * n) + w / math.sqrt(-tau) * grow
        return 2.0j * math.sqrt(tau * n) - 1.0j * w / math.sqrt(tau) * grow
    return 2.0 * sqrt_cut(w, PLUS) / (2.0 - s) * n ** (1.0 - s / 2.0)
