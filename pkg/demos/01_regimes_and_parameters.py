"""Coefficient models and regime classification.

A Jacobi matrix with entries growing like n^sigma sits in the critical
regime when the diagonal and off-diagonal parts compete exactly:
b_n / (2 sqrt(a_{n-1} a_n)) -> +-1.  Everything downstream is organized
by a handful of derived parameters; this script builds a few models and
prints them.
"""

from fractions import Fraction

from critjac import classify, classify_spectrum, laguerre_model, power_model, reflect

models = {
    "laguerre p=0": laguerre_model(0.0),
    "laguerre p=1": laguerre_model(1.0),
    "power s=1.25, tau<0": power_model(1.25, 0.0, -0.875, 1.0),
    "power s=1.25, tau>0": power_model(1.25, 0.0, 0.3, 1.0),
    "power s=0.5": power_model(0.5, 0.0, 0.0, 1.0),
    "power s=0.4 (deep eikonal)": power_model(0.4, 0.0, 0.0, 1.0),
    "reflected laguerre": reflect(laguerre_model(0.0)),
}

print(f"{'model':28s} {'tau':>6s} {'rho':>6s} {'nu':>5s} {'delta':>6s} "
      f"{'L':>2s}  {'a.c. set':12s} spectrum")
for name, m in models.items():
    p = classify(m)
    spec = classify_spectrum(p)
    ac = str(p.ac_set) if p.ac_set else "empty"
    print(f"{name:28s} {p.tau:6.2f} {p.rho:6.3f} {p.nu:5.2f} {p.delta:6.2f} "
          f"{p.L:2d}  {ac:12s} {spec.kind}")

print()
print("Eikonal corrections for slow growth (sigma <= 2/3): the squared")
print("phase increment is t + p2 t^2 + ... with exact rational p's:")
p = classify(power_model(0.4, 0.0, 0.0, 1.0))
for l, c in zip(range(2, p.L + 1), p.p):
    assert isinstance(c, Fraction)
    print(f"  p{l} = {c}")

print()
print("Universal amplitude/phase balance: 2*rho + varsigma = 1 holds in")
print("every regime (exact rational arithmetic):")
for name, m in models.items():
    p = classify(m)
    print(f"  {name:28s} 2*{p.rho:.3f} + {p.varsigma:.3f} = "
          f"{2 * p.rho + p.varsigma:.1f}")
