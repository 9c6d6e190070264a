"""Sparse multivariate polynomials with exact rational (or float) coefficients.

A :class:`Polynomial` in ``n`` variables ``x1 .. xn`` stores a mapping from
exponent tuples to nonzero coefficients.  Coefficients are
:class:`fractions.Fraction` in exact mode and ``float`` in float mode; the
two may meet (a float coefficient turns the result into float mode) but a
single computation is expected to stay in one mode.

Besides ring arithmetic the module provides the two operations Dunkl
operators are built from: composition with an orthogonal reflection and
exact division by a linear form.
"""
from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType

import numpy as np

from .errors import DimensionMismatch, NonFiniteValue, NotDivisible, ZeroRoot

#: Degree of the zero polynomial.  Compares below every integer degree.
NEG_INF = float("-inf")

#: Relative residual allowed when dividing in float mode.
FLOAT_DIVISION_RTOL = 1e-10


def as_scalar(value):
    """Coerce ``value`` to a library scalar (``Fraction`` or finite ``float``)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise NonFiniteValue(f"non-finite scalar {value!r}")
        return value
    if isinstance(value, np.integer):
        return Fraction(int(value))
    raise TypeError(f"cannot use {type(value).__name__} as a scalar")


def is_exact(value):
    return isinstance(value, Fraction)


def _check_finite(value):
    if isinstance(value, float) and not math.isfinite(value):
        raise NonFiniteValue("polynomial arithmetic produced a non-finite coefficient")
    return value


def _add_into(acc, terms, scale=1):
    for mono, c in terms.items():
        v = acc.get(mono, 0) + scale * c
        if v == 0:
            acc.pop(mono, None)
        else:
            acc[mono] = v


def _mul_terms(a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            mono = tuple(i + j for i, j in zip(ma, mb))
            v = out.get(mono, 0) + ca * cb
            if v == 0:
                out.pop(mono, None)
            else:
                out[mono] = v
    return out


class Polynomial:
    """Immutable sparse polynomial in ``n`` variables.

    Parameters
    ----------
    n : int
        Ambient dimension (number of variables).
    terms : mapping, optional
        ``{exponent tuple: coefficient}``.  Zero coefficients are dropped and
        integer coefficients are promoted to ``Fraction``.
    """

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n, terms=None):
        if n < 1:
            raise ValueError("dimension must be at least 1")
        self.n = int(n)
        clean = {}
        if terms:
            for mono, c in terms.items():
                mono = tuple(int(e) for e in mono)
                if len(mono) != self.n:
                    raise DimensionMismatch(
                        f"monomial {mono} does not have {self.n} exponents"
                    )
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in {mono}")
                c = as_scalar(c)
                if c != 0:
                    clean[mono] = clean.get(mono, 0) + c
                    if clean[mono] == 0:
                        del clean[mono]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n, terms):
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.n = n
        obj._terms = terms
        obj._hash = None
        for c in terms.values():
            _check_finite(c)
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, n):
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n, c):
        c = as_scalar(c)
        return cls._raw(n, {(0,) * n: c} if c != 0 else {})

    @classmethod
    def variable(cls, n, i):
        """The coordinate function ``x_{i+1}`` (``i`` is 0-based)."""
        if not 0 <= i < n:
            raise IndexError(f"variable index {i} out of range for dimension {n}")
        mono = [0] * n
        mono[i] = 1
        return cls._raw(n, {tuple(mono): Fraction(1)})

    @classmethod
    def norm_squared(cls, n):
        """``|x|^2 = x1^2 + ... + xn^2``."""
        terms = {}
        for i in range(n):
            mono = [0] * n
            mono[i] = 2
            terms[tuple(mono)] = Fraction(1)
        return cls._raw(n, terms)

    @classmethod
    def linear(cls, coeffs):
        """The linear form ``x -> <x, coeffs>``."""
        coeffs = [as_scalar(c) for c in coeffs]
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c != 0:
                mono = [0] * n
                mono[i] = 1
                terms[tuple(mono)] = c
        return cls._raw(n, terms)

    # -- basic queries ----------------------------------------------------

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    @property
    def degree(self):
        """Total degree; :data:`NEG_INF` for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(sum(m) for m in self._terms)

    def is_homogeneous(self):
        return len({sum(m) for m in self._terms}) <= 1

    def is_exact(self):
        return all(isinstance(c, Fraction) for c in self._terms.values())

    def coefficient(self, mono):
        return self._terms.get(tuple(mono), Fraction(0))

    def coeff_norm(self):
        """Euclidean norm of the coefficient vector (as a float)."""
        return math.sqrt(sum(float(c) ** 2 for c in self._terms.values()))

    # -- arithmetic -------------------------------------------------------

    def _check_dim(self, other):
        if self.n != other.n:
            raise DimensionMismatch(f"dimensions {self.n} and {other.n} differ")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check_dim(other)
            return other
        try:
            return Polynomial.constant(self.n, other)
        except TypeError:
            return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        _add_into(out, other._terms)
        return Polynomial._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        _add_into(out, other._terms, -1)
        return Polynomial._raw(self.n, out)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = as_scalar(c)
        if c == 0:
            return Polynomial.zero(self.n)
        return Polynomial._raw(self.n, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check_dim(other)
            return Polynomial._raw(self.n, _mul_terms(self._terms, other._terms))
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            return NotImplemented
        other = as_scalar(other)
        if other == 0:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self.scale(1 / other)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Polynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n == other.n and self._terms == other._terms
        try:
            other = Polynomial.constant(self.n, other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and structure --------------------------------------------

    def diff(self, i):
        """Partial derivative with respect to ``x_{i+1}``."""
        if not 0 <= i < self.n:
            raise IndexError(f"variable index {i} out of range")
        out = {}
        for mono, c in self._terms.items():
            e = mono[i]
            if e:
                m = list(mono)
                m[i] = e - 1
                out[tuple(m)] = c * e
        return Polynomial._raw(self.n, out)

    def homogeneous_components(self):
        """List of ``(degree, component)`` sorted by degree."""
        buckets = defaultdict(dict)
        for mono, c in self._terms.items():
            buckets[sum(mono)][mono] = c
        return [(d, Polynomial._raw(self.n, buckets[d])) for d in sorted(buckets)]

    def homogeneous_part(self, d):
        return Polynomial._raw(
            self.n, {m: c for m, c in self._terms.items() if sum(m) == d}
        )

    def evaluate(self, x):
        x = list(x)
        if len(x) != self.n:
            raise DimensionMismatch(f"point of length {len(x)} for dimension {self.n}")
        x = [as_scalar(v) for v in x]
        total = Fraction(0)
        for mono, c in self._terms.items():
            term = c
            for xi, e in zip(x, mono):
                if e:
                    term = term * xi**e
            total = total + term
        return _check_finite(total)

    __call__ = evaluate

    def evaluate_many(self, X):
        """Evaluate at the rows of the float array ``X`` of shape ``(N, n)``."""
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n:
            raise DimensionMismatch(f"expected points of shape (N, {self.n})")
        out = np.zeros(X.shape[0])
        if not self._terms:
            return out
        top = max(max(m) for m in self._terms)
        powers = [[np.ones(X.shape[0])] for _ in range(self.n)]
        for i in range(self.n):
            for _ in range(top):
                powers[i].append(powers[i][-1] * X[:, i])
        for mono, c in self._terms.items():
            term = np.full(X.shape[0], float(c))
            for i, e in enumerate(mono):
                if e:
                    term *= powers[i][e]
            out += term
        return out

    def compose_linear(self, matrix):
        """Return ``x -> p(M x)`` for an ``n x n`` matrix ``M`` (row sequences)."""
        return LinearSubstitution(matrix).apply(self)

    def to_float(self):
        return Polynomial._raw(self.n, {m: float(c) for m, c in self._terms.items()})

    def chop(self, tol):
        """Drop coefficients with absolute value at most ``tol``."""
        return Polynomial._raw(
            self.n, {m: c for m, c in self._terms.items() if abs(c) > tol}
        )

    # -- text -------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for k, (mono, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            factors = [
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                for i, e in enumerate(mono)
                if e
            ]
            if isinstance(mag, Fraction):
                coef = str(mag)
            else:
                coef = repr(mag)
            if factors and mag == 1:
                body = "*".join(factors)
            elif factors:
                body = coef + "*" + "*".join(factors)
            else:
                body = coef
            if k == 0:
                pieces.append(("-" if sign == "-" else "") + body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __repr__(self):
        return f"Polynomial({self.n}, {str(self)!r})"


class LinearSubstitution:
    """Composition ``p -> p(M x)`` with monomial images cached.

    The cache makes repeated application (as in iterated Dunkl operators)
    cheap; it never changes results.
    """

    def __init__(self, matrix):
        rows = [[as_scalar(a) for a in row] for row in matrix]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("substitution matrix must be square")
        self.n = n
        self.matrix = tuple(tuple(r) for r in rows)
        self._rows = [Polynomial.linear(r) for r in rows]
        self._powers = [[Polynomial.constant(n, 1)] for _ in range(n)]
        self._images = {}

    def _power(self, i, e):
        pw = self._powers[i]
        while len(pw) <= e:
            pw.append(pw[-1] * self._rows[i])
        return pw[e]

    def monomial_image(self, mono):
        img = self._images.get(mono)
        if img is None:
            img = Polynomial.constant(self.n, 1)
            for i, e in enumerate(mono):
                if e:
                    img = img * self._power(i, e)
            self._images[mono] = img
        return img

    def apply(self, p):
        if p.n != self.n:
            raise DimensionMismatch(f"dimensions {p.n} and {self.n} differ")
        out = {}
        for mono, c in p.items():
            _add_into(out, self.monomial_image(mono)._terms, c)
        return Polynomial._raw(self.n, out)


class Reflection:
    """Orthogonal reflection in the hyperplane perpendicular to ``v``.

    ``sigma(x) = x - 2 <x, v> / |v|^2 * v``.  The map only depends on the
    direction of ``v``.
    """

    def __init__(self, v):
        v = tuple(as_scalar(a) for a in v)
        if all(a == 0 for a in v):
            raise ZeroRoot("reflection vector must be nonzero")
        self.v = v
        self.n = len(v)
        self.norm2 = sum(a * a for a in v)
        self.matrix = tuple(
            tuple(
                (1 if i == k else 0) - 2 * v[i] * v[k] / self.norm2
                for k in range(self.n)
            )
            for i in range(self.n)
        )
        self._subst = LinearSubstitution(self.matrix)

    def apply(self, x):
        x = [as_scalar(a) for a in x]
        t = 2 * sum(a * b for a, b in zip(x, self.v)) / self.norm2
        return tuple(a - t * b for a, b in zip(x, self.v))

    __call__ = apply

    def compose(self, p):
        return self._subst.apply(p)

    def __repr__(self):
        return f"Reflection({self.v!r})"


class LinearForm:
    """``x -> <x, coeffs>``; used as a divisor."""

    def __init__(self, coeffs):
        self.coeffs = tuple(as_scalar(c) for c in coeffs)
        self.n = len(self.coeffs)

    def as_polynomial(self):
        return Polynomial.linear(self.coeffs)

    def __repr__(self):
        return f"LinearForm({self.coeffs!r})"


# -- functional interface ------------------------------------------------


def add(p, q):
    return p + q


def mul(p, q):
    return p * q


def evaluate(p, x):
    return p.evaluate(x)


def homogeneous_components(p):
    return p.homogeneous_components()


def compose_reflection(p, sigma):
    """``p o sigma`` for a :class:`Reflection` (or a root vector)."""
    if not isinstance(sigma, Reflection):
        sigma = Reflection(sigma)
    if p.n != sigma.n:
        raise DimensionMismatch(f"dimensions {p.n} and {sigma.n} differ")
    return sigma.compose(p)


def divide_by_linear_form(p, form):
    """Exact quotient ``q`` with ``q * form == p``.

    Division runs against the variable ``x_k`` with the largest coefficient
    in the form (any nonzero one works exactly; the largest keeps float
    round-off in check):
    writing ``p = sum_e x_k^e P_e`` and ``form = c x_k + M`` the quotient
    coefficients follow from ``P_e = c Q_{e-1} + M Q_e`` solved from the top
    power down.  Whatever is left in ``P_0 - M Q_0`` is the remainder.

    Raises
    ------
    NotDivisible
        If the remainder is nonzero (exact) or larger than
        ``FLOAT_DIVISION_RTOL * |p|`` (float mode).
    """
    if not isinstance(form, LinearForm):
        form = LinearForm(form)
    if form.n != p.n:
        raise DimensionMismatch(f"dimensions {p.n} and {form.n} differ")
    n = p.n
    k = max(range(n), key=lambda i: abs(form.coeffs[i]))
    if form.coeffs[k] == 0:
        raise ZeroDivisionError("division by the zero linear form")
    lead = form.coeffs[k]
    rest = Polynomial.linear(
        [0 if i == k else c for i, c in enumerate(form.coeffs)]
    )._terms

    slices = defaultdict(dict)
    for mono, c in p.items():
        m = list(mono)
        e = m[k]
        m[k] = 0
        slices[e][tuple(m)] = c
    if not slices:
        return Polynomial.zero(n)
    top = max(slices)

    quotient = {}
    q_next = {}
    for e in range(top, 0, -1):
        # Q_{e-1} = (P_e - M Q_e) / c
        acc = dict(slices.get(e, {}))
        if q_next:
            _add_into(acc, _mul_terms(rest, q_next), -1)
        q_cur = {m: c / lead for m, c in acc.items()}
        for m, c in q_cur.items():
            mm = list(m)
            mm[k] = e - 1
            quotient[tuple(mm)] = c
        q_next = q_cur
    remainder = dict(slices.get(0, {}))
    if q_next:
        _add_into(remainder, _mul_terms(rest, q_next), -1)

    if remainder:
        exact = p.is_exact() and all(is_exact(c) for c in form.coeffs)
        size = math.sqrt(sum(float(c) ** 2 for c in remainder.values()))
        if exact or size >= FLOAT_DIVISION_RTOL * max(p.coeff_norm(), 1e-300):
            raise NotDivisible(
                f"remainder of norm {size:.3g} when dividing by {form.coeffs}"
            )
    return Polynomial._raw(n, quotient)
