"""
Almansi expansion of a random polyharmonic polynomial over B2.

The polynomial is assembled from known h-harmonic parts; the decomposition
has to hand the very same parts back.
"""
import random
from fractions import Fraction

from dunklpoly import DunklContext, almansi_decompose, build_named, polyharmonic_order
from dunklpoly.liouville import random_polyharmonic

ws = build_named("B", 2, [Fraction(1, 3), 1])
ctx = DunklContext(ws)
rng = random.Random(17)

f, truth = random_polyharmonic(ctx, rng, max_degree=5, max_p=3)
p = polyharmonic_order(ctx, f)
print(f"f = {f}")
print(f"polyharmonic order {p} (built with {truth.order} parts)")

dec = almansi_decompose(ctx, f, truth.order)
for m, phi in enumerate(dec.phi):
    print(f"phi_{m} = {phi}")
print("recovered exactly:", dec.phi == truth.phi)
print("reconstructs f:   ", dec.reconstruct() == f)
