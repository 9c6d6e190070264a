"""
Degree detection from the growth of weighted spherical means.

For each polynomial we sample M_1(r, f^+) on a geometric radius grid, fit
the log-log slope and compare the verdict with the symbolic degree.
"""
from fractions import Fraction

from dunklpoly import DunklContext, SphericalIntegrator, build_named, classify
from dunklpoly.cli import parse_polynomial

ws = build_named("Z2", 2, [Fraction(1, 2), Fraction(1, 2)])
ctx = DunklContext(ws)
intg = SphericalIntegrator(ws, samples=200_000)

cases = [
    ("1", 1, 0),
    ("x1*x2", 1, 0),
    ("x1*x2", 1, 2),
    ("x1^2", 2, 2),
    ("x1^3*x2 - x1*x2^3 + 4", 1, 5),
    ("x1^2*x2^2 - x1", 3, 4),
]
print(f"{'f':<24} p  s  slope    target  verdict")
for text, p, s in cases:
    f = parse_polynomial(text, 2)
    rep = classify(ctx, intg, f, p, s)
    slope = "-" if rep.fitted_exponent is None else f"{rep.fitted_exponent:.3f}"
    flag = "" if rep.consistent else "  (!)"
    print(f"{text:<24} {p}  {s}  {slope:<8} {rep.target_exponent:<7.1f} {rep.verdict}{flag}")
