"""h-harmonic and Almansi decompositions of polynomials.

A homogeneous polynomial ``p`` of degree ``m`` splits uniquely as
``p = sum_j |x|^(2j) h_(m-2j)`` with every ``h`` annihilated by the Dunkl
Laplacian.  Regrouping these parts over the homogeneous components of a
polyharmonic ``f`` gives ``f = sum_m |x|^(2m) phi_m``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .dunkl import is_negligible, laplacian_power
from .errors import NotHomogeneous, NotPolyharmonic, SingularSystem
from .polycore import Polynomial, as_scalar


def shift_factor(a, d, n, gamma):
    """Scalar ``c`` in ``Delta_h(|x|^(2a) q) = |x|^(2a) Delta_h q + c |x|^(2a-2) q``."""
    return 2 * a * (2 * a + 2 * d + n + 2 * gamma - 2)


def laplacian_shift(ctx, a, q):
    """``Delta_h(|x|^(2a) q)`` for homogeneous ``q`` via the shift identity."""
    if a < 1:
        raise ValueError("a must be a positive integer")
    if not q:
        return q
    if not q.is_homogeneous():
        raise NotHomogeneous("laplacian_shift needs a homogeneous polynomial")
    d = q.degree
    r2 = Polynomial.norm_squared(ctx.n)
    c = shift_factor(a, d, ctx.n, ctx.gamma)
    return r2**a * ctx.laplacian(q) + r2 ** (a - 1) * q * c


@dataclass(frozen=True)
class HarmonicDecomposition:
    """``p = sum_j |x|^(2j) parts[j][1]`` with ``parts[j] = (j, h_(m-2j))``."""

    degree: int
    parts: tuple

    def part(self, j):
        return self.parts[j][1]

    def reconstruct(self, n):
        r2 = Polynomial.norm_squared(n)
        total = Polynomial.zero(n)
        for j, h in self.parts:
            total = total + r2**j * h
        return total


@dataclass(frozen=True)
class AlmansiDecomposition:
    """``f = sum_m |x|^(2m) phi[m]`` for ``m < order``."""

    order: int
    phi: tuple
    n: int

    def reconstruct(self):
        return reconstruct(self)


def _collapse(ctx, a, j, d):
    # Delta_h^a (|x|^(2j) h) = C |x|^(2(j-a)) h for h h-harmonic of degree d
    c = as_scalar(1)
    for i in range(a):
        c = c * shift_factor(j - i, d, ctx.n, ctx.gamma)
    return c


def h_harmonic_decompose(ctx, p):
    """Split a homogeneous polynomial into h-harmonic parts.

    Works by back substitution: ``Delta_h^k p`` only sees the parts with
    ``j >= k``, so applying ``Delta_h`` ``J = floor(m/2)`` times isolates
    ``h_(m-2J)`` and each lower power of the Laplacian then reveals one more
    part.

    Raises
    ------
    SingularSystem
        If one of the shift factors vanishes (only possible for negative
        multiplicities).
    """
    if not p.is_homogeneous():
        raise NotHomogeneous("h_harmonic_decompose needs a homogeneous polynomial")
    n = ctx.n
    if not p:
        return HarmonicDecomposition(0, ((0, p),))
    m = int(p.degree)
    J = m // 2
    powers = [p]
    for _ in range(J):
        powers.append(ctx.laplacian(powers[-1]))
    r2 = Polynomial.norm_squared(n)
    parts = {}
    for k in range(J, -1, -1):
        rhs = powers[k]
        for j in range(k + 1, J + 1):
            h = parts[j]
            if h:
                rhs = rhs - r2 ** (j - k) * h * _collapse(ctx, k, j, m - 2 * j)
        c = _collapse(ctx, k, k, m - 2 * k)
        if c == 0:
            raise SingularSystem(
                f"shift factor vanishes at degree {m - 2 * k}, j = {k}; "
                "the decomposition does not exist for this multiplicity"
            )
        parts[k] = rhs / c
    return HarmonicDecomposition(m, tuple((j, parts[j]) for j in range(J + 1)))


def almansi_decompose(ctx, f, p):
    """Almansi parts ``phi_0 .. phi_(p-1)`` of a polynomial with ``Delta_h^p f = 0``.

    Extra parts beyond those needed are zero polynomials.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if not is_negligible(ctx, laplacian_power(ctx, f, p), f):
        raise NotPolyharmonic(f"Delta_h^{p} f is not zero")
    n = ctx.n
    phi = [Polynomial.zero(n) for _ in range(p)]
    for _, comp in f.homogeneous_components():
        for j, h in h_harmonic_decompose(ctx, comp).parts:
            if j < p:
                phi[j] = phi[j] + h
            elif not is_negligible(ctx, h, f):
                # cannot happen when Delta_h^p f = 0 holds exactly
                raise NotPolyharmonic(f"component needs |x|^{2 * j} with p = {p}")
    return AlmansiDecomposition(p, tuple(phi), n)


def reconstruct(dec):
    r2 = Polynomial.norm_squared(dec.n)
    total = Polynomial.zero(dec.n)
    for m, phi in enumerate(dec.phi):
        if phi:
            total = total + r2**m * phi
    return total
