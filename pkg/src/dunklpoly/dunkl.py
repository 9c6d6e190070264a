"""Dunkl operators and the Dunkl Laplacian acting on polynomials.

For a weighted root system ``(R, kappa)`` the ``j``-th Dunkl operator is::

    D_j f = df/dx_j + sum_{v in R+} kappa_v * (f - f o sigma_v) / <x, v> * v_j

and ``Delta_h = sum_j D_j^2``.  Coordinate indices ``j`` are 0-based.
"""
from __future__ import annotations

from .errors import DimensionMismatch
from .polycore import LinearForm, Polynomial, divide_by_linear_form

#: Relative coefficient tolerance for harmonicity tests in float mode.
FLOAT_HARMONIC_RTOL = 1e-8
_FLOAT_CHOP = 1e-12


class DunklContext:
    """A weighted root system prepared for applying Dunkl operators."""

    def __init__(self, ws):
        self.ws = ws
        self.n = ws.n
        self._terms = [
            (refl, LinearForm(v), k, v) for v, refl, k in ws.positive_terms() if k != 0
        ]

    @property
    def gamma(self):
        return self.ws.gamma

    def _check(self, f):
        if f.n != self.n:
            raise DimensionMismatch(f"polynomial has {f.n} variables, context has {self.n}")

    def difference_quotients(self, f):
        """``[(v, kappa_v, (f - f o sigma_v) / <x, v>)]`` over positive roots."""
        self._check(f)
        out = []
        exact = f.is_exact() and self.ws.root_system.is_exact
        for refl, form, k, v in self._terms:
            diff = f - refl.compose(f)
            if not exact:
                # round-off left by an invariant part would not be divisible
                diff = diff.chop(_FLOAT_CHOP * f.coeff_norm())
            out.append((v, k, divide_by_linear_form(diff, form) if diff else diff))
        return out

    def apply(self, j, f):
        if not 0 <= j < self.n:
            raise IndexError(f"coordinate index {j} out of range 0..{self.n - 1}")
        self._check(f)
        result = f.diff(j)
        for v, k, q in self.difference_quotients(f):
            if v[j] != 0 and q:
                result = result + q * (k * v[j])
        return result

    def gradient(self, f):
        """All ``D_j f`` sharing one set of difference quotients."""
        self._check(f)
        quots = self.difference_quotients(f)
        out = []
        for j in range(self.n):
            g = f.diff(j)
            for v, k, q in quots:
                if v[j] != 0 and q:
                    g = g + q * (k * v[j])
            out.append(g)
        return out

    def laplacian(self, f):
        total = Polynomial.zero(self.n)
        for j, g in enumerate(self.gradient(f)):
            total = total + self.apply(j, g)
        return total


def dunkl_apply(ctx, j, f):
    """``D_j f`` (``j`` is 0-based)."""
    return ctx.apply(j, f)


def dunkl_laplacian(ctx, f):
    return ctx.laplacian(f)


def laplacian_power(ctx, f, p):
    for _ in range(p):
        if not f:
            break
        f = ctx.laplacian(f)
    return f


def is_negligible(ctx, g, reference):
    """Zero test used throughout: exact in rational mode, relative in float mode."""
    if not g:
        return True
    if g.is_exact() and reference.is_exact():
        return False
    return g.coeff_norm() < FLOAT_HARMONIC_RTOL * max(reference.coeff_norm(), 1.0)


def is_h_harmonic(ctx, f):
    return is_negligible(ctx, ctx.laplacian(f), f)


def polyharmonic_order(ctx, f, max_p=None):
    """Smallest ``p <= max_p`` with ``Delta_h^p f = 0``, else ``None``.

    ``max_p`` defaults to ``floor(deg f / 2) + 1``, which always suffices.
    """
    if max_p is None:
        max_p = int(f.degree) // 2 + 1 if f else 1
    if max_p < 1:
        raise ValueError("max_p must be at least 1")
    g = f
    for p in range(1, max_p + 1):
        g = ctx.laplacian(g)
        if is_negligible(ctx, g, f):
            return p
    return None
