"""Integration on the unit sphere against the weight ``h_kappa^2``.

Two routes are available:

* exact: for sign-change groups (all roots on coordinate axes) the weight
  is ``prod |x_i|^(2 kappa_i)`` and monomial integrals have the closed form
  ``2 prod Gamma((a_i + 1)/2) / Gamma((n + sum a)/2)``.  With integer
  exponents the result is a rational multiple of an integer power of pi,
  kept exact as :class:`PiRational`.
* numeric: a product rule (Gauss-Jacobi in the polar variables, midpoint
  in the azimuth) for smooth integrands, and stratified Monte Carlo for
  integrands containing ``|f|`` or ``f^+``.

``M_1(r, f)`` and ``M_1(r, f^+)`` use the change of variables ``y = r u``
which pulls out ``r^(n - 1 + 2 gamma)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy.special import betaincinv, roots_jacobi

from .coxeter import weight_many
from .dunkl import DunklContext, is_h_harmonic
from .errors import ExactModeUnavailable, NotHarmonic
from .polycore import Polynomial, as_scalar

DEFAULT_SEED = 20081106
DEFAULT_SAMPLES = 1_000_000
_DEFAULT_ORDERS = {2: 2048, 3: 160, 4: 48}


@dataclass(frozen=True)
class PiRational:
    """The exact real number ``rational * pi**pi_power``."""

    rational: Fraction
    pi_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rational", Fraction(self.rational))
        if self.rational == 0:
            object.__setattr__(self, "pi_power", 0)

    def __float__(self):
        return float(self.rational) * math.pi**self.pi_power

    def __bool__(self):
        return self.rational != 0

    def _lift(self, other):
        if isinstance(other, PiRational):
            return other
        if isinstance(other, (int, Fraction)):
            return PiRational(Fraction(other), 0)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return float(self) + other
        if not o:
            return self
        if not self:
            return o
        if o.pi_power != self.pi_power:
            return float(self) + float(o)
        return PiRational(self.rational + o.rational, self.pi_power)

    __radd__ = __add__

    def __neg__(self):
        return PiRational(-self.rational, self.pi_power)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return float(self) * other
        return PiRational(self.rational * o.rational, self.pi_power + o.pi_power)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return float(self) / other
        return PiRational(self.rational / o.rational, self.pi_power - o.pi_power)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented if not isinstance(other, float) else float(self) == other
        return self.rational == o.rational and (
            self.rational == 0 or self.pi_power == o.pi_power
        )

    def __hash__(self):
        return hash((self.rational, self.pi_power))

    def __lt__(self, other):
        return float(self) < float(other)

    def __gt__(self, other):
        return float(self) > float(other)

    def __abs__(self):
        return PiRational(abs(self.rational), self.pi_power)

    def __str__(self):
        if self.pi_power == 0 or self.rational == 0:
            return str(self.rational)
        return f"{self.rational}*pi^{self.pi_power}"


class Integral(NamedTuple):
    value: object
    error: float
    method: str

    def __float__(self):
        return float(self.value)

    @property
    def exact(self):
        return self.method == "exact"


def _half_gamma(k):
    """``Gamma(k/2)`` for a positive integer ``k`` as ``(rational, sqrt_pi_count)``."""
    if k % 2 == 0:
        return Fraction(math.factorial(k // 2 - 1)), 0
    j = (k - 1) // 2
    return Fraction(math.factorial(2 * j), 4**j * math.factorial(j)), 1


def _integer(a):
    if isinstance(a, int):
        return a
    if isinstance(a, Fraction) and a.denominator == 1:
        return int(a)
    if isinstance(a, float) and a.is_integer():
        return int(a)
    return None


def exact_monomial_integral(alpha):
    """``int_{S^(n-1)} prod |y_i|^alpha_i dsigma(y)``.

    Returns a :class:`PiRational` when every exponent is an integer and a
    float otherwise.

    >>> exact_monomial_integral((0, 0))
    PiRational(rational=Fraction(2, 1), pi_power=1)
    """
    alpha = [as_scalar(a) for a in alpha]
    if not alpha:
        raise ValueError("need at least one exponent")
    if any(a <= -1 for a in alpha):
        raise ValueError("every exponent must exceed -1")
    n = len(alpha)
    ints = [_integer(a) for a in alpha]
    if all(i is not None for i in ints):
        num, sq = Fraction(2), 0
        for a in ints:
            g, s = _half_gamma(a + 1)
            num *= g
            sq += s
        g, s = _half_gamma(n + sum(ints))
        sq -= s
        # the numerator and denominator sqrt(pi) counts always share parity
        return PiRational(num / g, sq // 2)
    total = sum(float(a) for a in alpha)
    log = math.log(2) + sum(math.lgamma((float(a) + 1) / 2) for a in alpha)
    return math.exp(log - math.lgamma((n + total) / 2))


def sphere_area(n):
    return exact_monomial_integral((0,) * n)


def _axis_data(ws):
    """Per-coordinate weight exponents and the constant prefactor, or ``None``.

    Only defined when every root lies on a coordinate axis.
    """
    n = ws.n
    exps = [Fraction(0)] * n
    scale = Fraction(1)
    for v, _, k in ws.positive_terms():
        nz = [i for i, a in enumerate(v) if a != 0]
        if len(nz) != 1:
            return None
        i = nz[0]
        exps[i] = exps[i] + 2 * k
        if k != 0:
            c = abs(v[i])
            e = 2 * k
            if isinstance(c, Fraction) and isinstance(e, Fraction) and e.denominator == 1:
                scale = scale * c ** int(e)
            else:
                scale = float(scale) * float(c) ** float(e)
    return exps, scale


def _sphere_points(U, n):
    """Area-preserving map from ``[0, 1)^(n-1)`` onto ``S^(n-1)``."""
    N = U.shape[0]
    X = np.empty((N, n))
    rho = np.ones(N)
    for k in range(n - 2):
        a = (n - k - 3) / 2
        t = 2 * betaincinv(a + 1, a + 1, U[:, k]) - 1
        X[:, k] = rho * t
        rho = rho * np.sqrt(np.clip(1 - t * t, 0, None))
    phi = 2 * np.pi * U[:, n - 2]
    X[:, n - 2] = rho * np.cos(phi)
    X[:, n - 1] = rho * np.sin(phi)
    return X


def _product_rule(n, order):
    """Points and weights of the spherical product rule of the given order.

    Midpoint rule with ``2 * order`` nodes on the circle, then one
    Gauss-Jacobi factor per added dimension: ``x = (t, sqrt(1 - t^2) u)``
    carries the weight ``(1 - t^2)^((dim - 3) / 2)``.
    """
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.ones(2)
    M = 2 * order
    phi = 2 * np.pi * (np.arange(M) + 0.5) / M
    X = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    W = np.full(M, 2 * np.pi / M)
    for dim in range(3, n + 1):
        a = (dim - 3) / 2
        t, w = roots_jacobi(order, a, a)
        P = len(W)
        s = np.sqrt(1 - t * t)
        X = np.concatenate(
            [np.repeat(t, P)[:, None], np.repeat(s, P)[:, None] * np.tile(X, (order, 1))],
            axis=1,
        )
        W = np.repeat(w, P) * np.tile(W, order)
    return X, W


def sign_definite(f):
    """``+1`` / ``-1`` if every term is an even monomial with coefficients of one sign.

    Such polynomials are nonnegative (nonpositive) everywhere, so
    ``|f| = +-f`` and ``M_1`` can be integrated without absolute values.
    Returns ``None`` when the test is inconclusive.
    """
    if not f:
        return None
    if any(e % 2 for m in f.terms for e in m):
        return None
    signs = {c > 0 for c in f.terms.values()}
    if signs == {True}:
        return 1
    if signs == {False}:
        return -1
    return None


def radial_power(r, k):
    """``r**k``, exact when ``r`` is rational and ``k`` an integer."""
    ki = _integer(k)
    if isinstance(r, Fraction) and ki is not None:
        return r**ki
    return float(r) ** float(k)


class SphericalIntegrator:
    """Weighted integration over ``S^(n-1)`` for one weighted root system.

    Parameters
    ----------
    ws : WeightedRootSystem
    mode : {"auto", "exact", "numeric"}
        ``auto`` picks the exact route when all roots lie on coordinate axes.
    quad_order : int, optional
        Nodes per polar variable of the product rule (the azimuth gets twice
        as many).  Defaults depend on the dimension.
    samples : int
        Minimum Monte Carlo sample count (two jittered points per stratum).
    seed : int
        Seed of the Monte Carlo sampler; results are reproducible.
    """

    def __init__(self, ws, mode="auto", quad_order=None, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED):
        self.ws = ws
        self.n = ws.n
        self._axis = _axis_data(ws)
        if mode not in ("auto", "exact", "numeric"):
            raise ValueError(f"unknown mode {mode!r}")
        if mode == "exact" and self._axis is None:
            raise ExactModeUnavailable(
                "exact integration needs a sign-change group (all roots on coordinate axes)"
            )
        if mode == "auto":
            mode = "exact" if self._axis is not None else "numeric"
        self.mode = mode
        self.quad_order = quad_order or _DEFAULT_ORDERS.get(self.n, 24)
        self.samples = int(samples)
        self.seed = int(seed)
        self.gamma = ws.gamma
        self.radial_exponent = self.n - 1 + 2 * ws.gamma

    # -- numeric rules ----------------------------------------------------

    def _rule(self, order):
        X, W = _product_rule(self.n, order)
        return X, W * weight_many(self.ws, X)

    @cached_property
    def _rules(self):
        return self._rule(self.quad_order), self._rule(max(self.quad_order // 2, 2))

    @cached_property
    def _mc(self):
        """Stratified sample set: points of shape (C, 2, n), weights (C, 2), area."""
        n = self.n
        area = float(sphere_area(n))
        if n == 1:
            X = np.array([[[1.0], [-1.0]]])
            return X, weight_many(self.ws, X.reshape(-1, 1)).reshape(1, 2), 1.0
        dim = n - 1
        m = max(1, math.ceil((self.samples / 2) ** (1 / dim)))
        while (m - 1) ** dim * 2 >= self.samples and m > 1:
            m -= 1
        while m**dim * 2 < self.samples:
            m += 1
        rng = np.random.default_rng(self.seed)
        cells = np.stack(
            np.meshgrid(*[np.arange(m)] * dim, indexing="ij"), axis=-1
        ).reshape(-1, dim)
        C = cells.shape[0]
        U = (cells[:, None, :] + rng.random((C, 2, dim))) / m
        X = _sphere_points(U.reshape(-1, dim), n)
        H = weight_many(self.ws, X)
        return X.reshape(C, 2, n), H.reshape(C, 2), area / C

    def mc_points(self):
        X, _, _ = self._mc
        return X.reshape(-1, self.n)

    def _mc_estimate(self, values):
        """Stratified mean of ``values * h^2`` over the sample set, with its standard error."""
        _, H, cell = self._mc
        y = values.reshape(H.shape) * H
        est = cell * float(np.sum(y.mean(axis=1)))
        if self.n == 1:
            return est, 0.0
        se = cell * math.sqrt(float(np.sum((y[:, 0] - y[:, 1]) ** 2))) / 2
        return est, se

    def _quadrature(self, values_fn):
        (X, W), (Xh, Wh) = self._rules
        v = values_fn(X)
        q = float(np.sum(W * v))
        qh = float(np.sum(Wh * values_fn(Xh)))
        err = abs(q - qh) + 1e-14 * float(np.sum(np.abs(W * v)))
        return q, err

    # -- public integrals -------------------------------------------------

    def constant(self):
        """``c = int h^2 dsigma``; the mean value constant."""
        return self.integrate(Polynomial.constant(self.n, 1))

    def _exact(self, g):
        exps, scale = self._axis
        total = PiRational(0)
        for mono, coef in g.items():
            if any(e % 2 for e in mono):
                continue
            val = exact_monomial_integral([e + a for e, a in zip(mono, exps)])
            total = total + val * coef
        return total * scale

    def integrate(self, g, use_abs=False):
        """``int g h^2 dsigma`` (``|g|`` with ``use_abs``) over the unit sphere."""
        if isinstance(g, Polynomial):
            if g.n != self.n:
                raise ValueError("dimension mismatch")
            if not use_abs and self.mode == "exact":
                return Integral(self._exact(g), 0.0, "exact")
            fn = g.evaluate_many
        else:
            fn = g
        if use_abs:
            val, se = self._mc_estimate(np.abs(fn(self.mc_points())))
            return Integral(val, se, "monte-carlo")
        val, err = self._quadrature(fn)
        return Integral(val, err, "quadrature")

    def profile(self, f, radii):
        """Sampled ``M_1(r, f^+)``, ``M_1(r, f)`` and signed means over ``radii``.

        Each homogeneous component is evaluated once on the sample set; the
        values at radius ``r`` are recombined as ``sum r^d F_d``.
        Returns a dict of float arrays (values and standard errors).
        """
        radii = [float(r) for r in radii]
        if any(r <= 0 for r in radii):
            raise ValueError("radii must be positive")
        comps = f.homogeneous_components()
        out = {k: np.zeros(len(radii)) for k in ("pos", "pos_err", "abs", "abs_err", "signed")}
        if not comps:
            return out
        sign = sign_definite(f)
        if sign is not None:
            parts = [(d, self.integrate(c)) for d, c in comps]
            for i, r in enumerate(radii):
                val = sum(float(res.value) * r ** (d + float(self.radial_exponent)) for d, res in parts)
                err = sum(res.error * r ** (d + float(self.radial_exponent)) for d, res in parts)
                out["signed"][i] = val
                out["abs"][i] = sign * val
                out["abs_err"][i] = err
                out["pos"][i] = val if sign > 0 else 0.0
                out["pos_err"][i] = err if sign > 0 else 0.0
            return out
        X = self.mc_points()
        top = comps[-1][0]
        F = [(d, c.evaluate_many(X)) for d, c in comps]
        for i, r in enumerate(radii):
            vals = sum(r ** (d - top) * Fd for d, Fd in F)
            scale = r ** (top + float(self.radial_exponent))
            pos, pos_err = self._mc_estimate(np.maximum(vals, 0.0))
            ab, ab_err = self._mc_estimate(np.abs(vals))
            signed, _ = self._mc_estimate(vals)
            # 2 f^+ = |f| + f pointwise, so the estimates must agree
            if abs(2 * pos - ab - signed) > 1e-9 * max(ab, 1e-300):
                raise ArithmeticError("positive-part identity violated")
            out["pos"][i] = pos * scale
            out["pos_err"][i] = pos_err * scale
            out["abs"][i] = ab * scale
            out["abs_err"][i] = ab_err * scale
            out["signed"][i] = signed * scale
        return out


def exact_capable(ws):
    return _axis_data(ws) is not None


def integrate_sphere(intg, g, use_abs=False):
    return intg.integrate(g, use_abs)


def _check_radius(r):
    r = as_scalar(r)
    if r <= 0:
        raise ValueError("radius must be positive")
    return r


def _definite_m1(intg, r, f):
    # |f| = sign * f: integrate each homogeneous component without |.|
    total = 0
    err = 0.0
    exact = True
    for d, comp in f.homogeneous_components():
        res = intg.integrate(comp)
        exact = exact and res.exact
        err += res.error * float(radial_power(r, d + intg.radial_exponent))
        total = total + res.value * radial_power(r, d + intg.radial_exponent)
    return total, err, exact


def m1(intg, r, f):
    """``M_1(r, f) = int_{|y| = r} |f(y)| h^2(y) dsigma(y)``."""
    r = _check_radius(r)
    if not f:
        return Integral(Fraction(0), 0.0, "exact")
    sign = sign_definite(f)
    if sign is not None:
        total, err, exact = _definite_m1(intg, r, f)
        if sign < 0:
            total = -total
        return Integral(total, err, "exact" if exact else "quadrature")
    if f.is_homogeneous():
        base = intg.integrate(f, use_abs=True)
        s = radial_power(r, f.degree + intg.radial_exponent)
        return Integral(base.value * float(s), base.error * float(s), base.method)
    prof = intg.profile(f, [r])
    return Integral(float(prof["abs"][0]), float(prof["abs_err"][0]), "monte-carlo")


def positive_part_m1(intg, r, f):
    """``M_1(r, f^+)`` with ``f^+ = (|f| + f) / 2``."""
    r = _check_radius(r)
    if not f:
        return Integral(Fraction(0), 0.0, "exact")
    sign = sign_definite(f)
    if sign == 1:
        return m1(intg, r, f)
    if sign == -1:
        return Integral(Fraction(0), 0.0, "exact")
    prof = intg.profile(f, [r])
    return Integral(float(prof["pos"][0]), float(prof["pos_err"][0]), "monte-carlo")


@dataclass(frozen=True)
class MeanValueReport:
    lhs: object
    rhs: object
    passed: bool
    error: float

    def to_dict(self):
        def enc(v):
            return str(v) if isinstance(v, (PiRational, Fraction)) else float(v)

        return {
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "lhs_float": float(self.lhs),
            "rhs_float": float(self.rhs),
            "passed": self.passed,
            "error": self.error,
        }


def mean_value_check(intg, f, ctx=None):
    """Compare ``int f h^2 dsigma`` with ``c f(0)`` for an h-harmonic ``f``."""
    ctx = ctx or DunklContext(intg.ws)
    if not is_h_harmonic(ctx, f):
        raise NotHarmonic("the mean value property needs an h-harmonic polynomial")
    lhs = intg.integrate(f)
    c = intg.constant()
    f0 = f.evaluate([0] * f.n)
    rhs = c.value * f0
    if lhs.exact and c.exact and f.is_exact():
        return MeanValueReport(lhs.value, rhs, lhs.value == rhs, 0.0)
    bound = lhs.error + c.error * abs(float(f0)) + 1e-12 * (abs(float(rhs)) + f.coeff_norm())
    return MeanValueReport(lhs.value, rhs, abs(float(lhs.value) - float(rhs)) <= bound, bound)
