"""Exact rational coefficients for the discrete eikonal equation.

The phase increments are theta_n = sqrt(T_n) with

    T_n = t_n + sum_{l=2}^{L} p_l t_n^l,

and the p_l are fixed by requiring that the even part of the exponential
expansion,

    Theta(theta^2) = 2 * sum_{l=1}^{L} (-1)^{l+1} theta^{2l} / (2l)!,

matches t up to terms of order t^{L+1}.  Writing theta^2 = t + P(t) this
is the condition

    P(t) + sum_{k=2}^{L} a_k (P(t) + t)^k  in  t^{L+1} * (polynomials),
    a_k = 2 (-1)^{k+1} / (2k)!,

which determines p_2, ..., p_L one at a time: if Q_L is the defect built
from P_L, then p_{L+1} = -a_{L+1} - q_{L+1} with q_{L+1} the coefficient
of t^{L+1} in Q_L.  Everything here is exact Fraction arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction

# Polynomials are lists of Fractions, index = power of t.


def _poly_mul(p: list[Fraction], q: list[Fraction], cut: int) -> list[Fraction]:
    """Product of two polynomials, truncated beyond degree `cut`."""
    out = [Fraction(0)] * min(len(p) + len(q) - 1, cut + 1)
    for i, ci in enumerate(p):
        if ci == 0 or i > cut:
            continue
        for j, cj in enumerate(q):
            if i + j > cut:
                break
            out[i + j] += ci * cj
    return out


def _poly_add(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    n = max(len(p), len(q))
    return [
        (p[i] if i < len(p) else Fraction(0)) + (q[i] if i < len(q) else Fraction(0))
        for i in range(n)
    ]


def _poly_pow(p: list[Fraction], k: int, cut: int) -> list[Fraction]:
    out = [Fraction(1)]
    for _ in range(k):
        out = _poly_mul(out, p, cut)
    return out


def exp_even_coefficient(k: int) -> Fraction:
    """a_k = 2 (-1)^(k+1) / (2k)! from the even part of 2 cos(theta)."""
    return Fraction(2 * (-1) ** (k + 1), math.factorial(2 * k))


def _defect(p_coeffs: dict[int, Fraction], L: int, cut: int) -> list[Fraction]:
    """Q(t) = P(t) + sum_{k=2}^{L} a_k (P(t)+t)^k truncated at degree cut."""
    P = [Fraction(0)] * (L + 1)
    for l, c in p_coeffs.items():
        P[l] = c
    Pt = _poly_add(P, [Fraction(0), Fraction(1)])  # P(t) + t
    out = list(P)
    for k in range(2, L + 1):
        term = _poly_pow(Pt, k, cut)
        out = _poly_add(out, [exp_even_coefficient(k) * c for c in term])
    out += [Fraction(0)] * (cut + 1 - len(out))
    return out[: cut + 1]


def eikonal_coefficients(L: int) -> tuple[Fraction, ...]:
    """Exact rationals (p_2, ..., p_L); empty for L = 1.

    Built by the constructive recursion p_{M+1} = -a_{M+1} - q_{M+1}.
    """
    if L < 1:
        raise ValueError("L must be a positive integer")
    p: dict[int, Fraction] = {}
    for M in range(1, L):
        q = _defect(p, M, M + 1)
        p[M + 1] = -exp_even_coefficient(M + 1) - q[M + 1]
    return tuple(p[l] for l in range(2, L + 1))


def eikonal_defect(L: int) -> list[Fraction]:
    """Coefficients of 2*sum_{l<=L} (-1)^(l+1) theta^(2l)/(2l)! - t with
    theta^2 = t + sum p_l t^l substituted, as exact fractions.

    Entries at powers t^1..t^L must vanish; this is the certificate the
    test suite checks.  The full polynomial has degree L^2.
    """
    ps = eikonal_coefficients(L)
    T = [Fraction(0), Fraction(1)] + list(ps)  # theta^2 as polynomial in t
    cut = L * L
    out = [Fraction(0)] * (cut + 1)
    # 2 cos-type even sum: coefficient of theta^{2l} is 2(-1)^{l+1}/(2l)!
    for l in range(1, L + 1):
        term = _poly_pow(T, l, cut)
        a = Fraction(2 * (-1) ** (l + 1), math.factorial(2 * l))
        for i, c in enumerate(term):
            out[i] += a * c
    out[1] -= 1
    return out


def coefficients_as_strings(L: int) -> dict[str, str]:
    """Exact fraction strings {"p2": "1/12", ...} for JSON export."""
    ps = eikonal_coefficients(L)
    return {f"p{l}": str(c) for l, c in zip(range(2, L + 1), ps)}
