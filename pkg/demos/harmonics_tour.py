"""
A short walk through Dunkl operators on Z2^2.

Builds the sign-change group with multiplicities (1/2, 1/2), applies the
operators to a few monomials, then splits x1^4 into h-harmonic pieces and
checks the mean value property on each piece.
"""
from fractions import Fraction

from dunklpoly import (
    DunklContext,
    Polynomial,
    SphericalIntegrator,
    build_named,
    dunkl_apply,
    dunkl_laplacian,
    h_harmonic_decompose,
    mean_value_check,
)

half = Fraction(1, 2)
ws = build_named("Z2", 2, [half, half])
ctx = DunklContext(ws)
x1, x2 = Polynomial.variable(2, 0), Polynomial.variable(2, 1)

print(f"gamma = {ws.gamma}")
for f in (x1, x1**2, x1**3, x1 * x2):
    print(f"D_1({f}) = {dunkl_apply(ctx, 0, f)}")

r2 = Polynomial.norm_squared(2)
print(f"Delta_h |x|^2 = {dunkl_laplacian(ctx, r2)}   (2(n + 2 gamma) = {2 * (2 + 2 * ws.gamma)})")

# x1^4 = h4 + |x|^2 h2 + |x|^4 h0
dec = h_harmonic_decompose(ctx, x1**4)
for j, h in dec.parts:
    print(f"  |x|^{2 * j} * ({h})")
assert dec.reconstruct(2) == x1**4

intg = SphericalIntegrator(ws)
print(f"c = int h^2 dsigma = {intg.constant().value}")
for _, h in dec.parts:
    rep = mean_value_check(intg, h, ctx)
    print(f"  mean value: {rep.lhs} vs {rep.rhs}  ok={rep.passed}")
