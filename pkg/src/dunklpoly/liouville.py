"""Growth of weighted spherical means and the Liouville degree test.

For ``Delta_h^p f = 0`` and ``s >= 2(p - 1)`` the limit inferior of
``M_1(r, f^+) / r^(s + n - 1 + 2 gamma)`` decides whether ``f`` is a
polynomial of degree at most ``s``; for ``s > 2(p - 1)`` a zero limit means
degree below ``s`` and a positive finite one degree exactly ``s``.

Everything here samples a finite radius grid, so verdicts are estimates.
For polynomial inputs the verdict is cross-checked against the symbolic
degree and the outcome is part of the report.
"""
from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .almansi import AlmansiDecomposition, h_harmonic_decompose, reconstruct
from .dunkl import is_negligible, laplacian_power
from .errors import AllZero, HypothesisViolated, NotPolyharmonic
from .polycore import Polynomial

DEFAULT_GRID = tuple(2.0**k for k in range(4, 13))
RATIO_WINDOW = (1e-3, 1e3)

DEG_LE_S = "deg_le_s"
DEG_LT_S = "deg_lt_s"
DEG_EQ_S = "deg_eq_s"
DEG_GT_S = "deg_gt_s"
VERDICTS = (DEG_LE_S, DEG_LT_S, DEG_EQ_S, DEG_GT_S)


def _check_grid(grid):
    grid = [float(r) for r in grid]
    if len(grid) < 4:
        raise ValueError("the radius grid needs at least 4 radii")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("the radius grid must be strictly increasing")
    if grid[0] <= 0 or grid[-1] / grid[0] < 100:
        raise ValueError("the radius grid must span at least two decades")
    return grid


def _top_half(k):
    return slice(k // 2, k)


def _fit(grid, values):
    sl = _top_half(len(grid))
    x = np.log(np.asarray(grid)[sl])
    y = np.log(np.asarray(values)[sl])
    slope, icpt = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + icpt)) ** 2)))
    return float(slope), resid


def top_part_scale(intg, f):
    """Max of ``|top homogeneous part|`` over the sample sphere (1 for f = 0)."""
    if not f:
        return 1.0
    top = f.homogeneous_part(int(f.degree))
    vals = np.abs(top.evaluate_many(intg.mc_points()))
    m = float(vals.max())
    return m if m > 0 else 1.0


def growth_exponent(intg, f, grid=DEFAULT_GRID):
    """Least-squares slope of ``log M_1(r, f^+)`` against ``log r``.

    Fitted over the top half of ``grid``.  Returns ``(slope, residual)``.

    Raises
    ------
    AllZero
        When ``f^+`` vanishes on every sample (``f <= 0``).
    """
    grid = _check_grid(grid)
    prof = intg.profile(f, grid)
    if not np.all(prof["pos"][_top_half(len(grid))] > 0):
        raise AllZero("f^+ vanishes on the sampled sphere; the growth exponent is undefined")
    return _fit(grid, prof["pos"])


@dataclass
class GrowthReport:
    """Outcome of :func:`classify`; serialises with :meth:`to_dict`."""

    p: int
    s: int
    n: int
    gamma: float
    grid: list
    m1_positive: list
    m1_positive_err: list
    m1_abs: list
    m1_abs_err: list
    fitted_exponent: float | None
    fit_residual: float | None
    target_exponent: float
    ratios: list
    limit_ratio: float
    liminf_estimate: float
    normalization: float
    normalized_ratio: float
    all_zero: bool
    verdict: str
    symbolic_degree: int | None
    consistent: bool | None
    notes: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def expected_verdict(degree, p, s):
    """Verdict the theorem predicts for a polynomial of the given degree."""
    if s == 2 * (p - 1):
        return DEG_LE_S if degree <= s else DEG_GT_S
    if degree < s:
        return DEG_LT_S
    if degree == s:
        return DEG_EQ_S
    return DEG_GT_S


def _check_hypotheses(ctx, f, p, s):
    if p < 1:
        raise HypothesisViolated("p must be a positive integer")
    if s < 2 * (p - 1):
        raise HypothesisViolated(f"s = {s} is below 2(p - 1) = {2 * (p - 1)}")
    if not is_negligible(ctx, laplacian_power(ctx, f, p), f):
        raise NotPolyharmonic(f"Delta_h^{p} f is not zero")


def classify(ctx, intg, f, p, s, grid=DEFAULT_GRID, profile=None):
    """Estimate the liminf of ``M_1(r, f^+) / r^(s + n - 1 + 2 gamma)`` and decide.

    The exponent of the ratio is ``fitted_exponent - target_exponent``; for a
    polynomial it sits near the integer ``deg f - s``.  The ratio counts as
    positive finite when that gap rounds to zero and the normalised ratio at
    ``r_max`` lies inside :data:`RATIO_WINDOW`; otherwise the sign of the gap
    decides between a zero and a divergent limit.
    """
    _check_hypotheses(ctx, f, p, s)
    grid = _check_grid(grid)
    n = intg.n
    gamma = float(intg.gamma)
    target = s + n - 1 + 2 * gamma
    prof = profile if profile is not None else intg.profile(f, grid)
    pos = np.asarray(prof["pos"], dtype=float)
    scale = top_part_scale(intg, f)
    ratios = pos / np.asarray(grid) ** target
    top = _top_half(len(grid))
    all_zero = not np.all(pos[top] > 0)
    notes = []
    if all_zero:
        slope = resid = None
        gap = -math.inf
        notes.append("f^+ vanishes on the sampled sphere")
    else:
        slope, resid = _fit(grid, pos)
        gap = slope - target
    normalized = float(ratios[-1] / scale)
    lo, hi = RATIO_WINDOW
    if all_zero:
        finite, positive = True, False
    elif abs(gap) < 0.5:
        finite, positive = True, True
        if not lo <= normalized <= hi:
            positive = normalized > hi
            finite = normalized <= hi
            notes.append("ratio outside the positive-finite window despite a flat slope")
    else:
        finite, positive = gap < 0, False

    if s == 2 * (p - 1):
        verdict = DEG_LE_S if finite else DEG_GT_S
    elif not finite:
        verdict = DEG_GT_S
    else:
        verdict = DEG_EQ_S if positive else DEG_LT_S

    degree = None if not f else int(f.degree)
    if degree is None:
        consistent = verdict in (DEG_LE_S, DEG_LT_S)
    else:
        consistent = verdict == expected_verdict(degree, p, s)
    return GrowthReport(
        p=p,
        s=s,
        n=n,
        gamma=gamma,
        grid=list(grid),
        m1_positive=pos.tolist(),
        m1_positive_err=np.asarray(prof["pos_err"], dtype=float).tolist(),
        m1_abs=np.asarray(prof["abs"], dtype=float).tolist(),
        m1_abs_err=np.asarray(prof["abs_err"], dtype=float).tolist(),
        fitted_exponent=slope,
        fit_residual=resid,
        target_exponent=target,
        ratios=ratios.tolist(),
        limit_ratio=float(ratios[-1]),
        liminf_estimate=float(ratios[top].min()),
        normalization=scale,
        normalized_ratio=normalized,
        all_zero=all_zero,
        verdict=verdict,
        symbolic_degree=degree,
        consistent=consistent,
        notes=notes,
    )


# -- corpus checks -------------------------------------------------------


def random_homogeneous(n, d, rng, coeff_range=5, density=0.7):
    """Random homogeneous polynomial with small integer coefficients."""
    from itertools import combinations_with_replacement

    terms = {}
    for combo in combinations_with_replacement(range(n), d):
        if rng.random() < density:
            mono = [0] * n
            for i in combo:
                mono[i] += 1
            terms[tuple(mono)] = rng.randint(-coeff_range, coeff_range)
    return Polynomial(n, terms)


def random_h_harmonic(ctx, d, rng, tries=20):
    """Nonzero h-harmonic homogeneous polynomial of degree ``d``."""
    for _ in range(tries):
        q = random_homogeneous(ctx.n, d, rng)
        if not q:
            continue
        h = h_harmonic_decompose(ctx, q).part(0)
        if h:
            return h
    raise RuntimeError(f"could not generate an h-harmonic polynomial of degree {d}")


def random_polyharmonic(ctx, rng, max_degree=6, max_p=3):
    """``(f, decomposition)`` with a nonzero top Almansi part.

    Part ``m`` is a sum of random h-harmonics of degrees ``j`` with
    ``2m + j <= max_degree``.
    """
    p = rng.randint(1, min(max_p, max_degree // 2 + 1))
    phi = []
    for m in range(p):
        budget = max_degree - 2 * m
        part = Polynomial.zero(ctx.n)
        for j in range(budget + 1):
            if rng.random() < 0.5:
                part = part + random_h_harmonic(ctx, j, rng)
        if m == p - 1 and not part:
            part = random_h_harmonic(ctx, rng.randint(0, budget), rng)
        phi.append(part)
    dec = AlmansiDecomposition(p, tuple(phi), ctx.n)
    return reconstruct(dec), dec


@dataclass
class SuiteRow:
    index: int
    f: str
    p: int
    s: int
    degree: int
    verdict: str
    expected: str
    agree: bool


@dataclass
class SuiteSummary:
    rows: list
    agreement_rate: float | None
    orthogonality_checks: int
    orthogonality_failures: int
    settings: dict

    def to_dict(self):
        return asdict(self)


def orthogonality_spot_check(intg, dec, j0, g):
    """Check that only ``j0``-degree h-harmonic parts of ``f`` see ``g``.

    ``int f g h^2`` over the unit sphere must equal the sum over ``m`` of
    ``int g_{m, j0} g h^2``, and on the sphere of radius ``r`` every such
    term scales as ``r^(2m + 2 j0 + n - 1 + 2 gamma)``; the check is done at
    ``r = 1`` and ``r = 2``.
    """
    f = reconstruct(dec)
    n = dec.n
    predicted = {1: 0, 2: 0}
    for m, phi in enumerate(dec.phi):
        g_mj = phi.homogeneous_part(j0)
        if not g_mj:
            continue
        val = intg.integrate(g_mj * g).value
        for r in (1, 2):
            e = 2 * m + 2 * j0 + intg.radial_exponent
            predicted[r] = predicted[r] + val * _rpow(r, e)
    ok = True
    for r in (1, 2):
        # integrand f(r u) g(r u) on the unit sphere, times r^(n - 1 + 2 gamma)
        scaled = Polynomial(n, {m: c * Fraction(r) ** sum(m) for m, c in (f * g).items()})
        res = intg.integrate(scaled)
        e = intg.radial_exponent
        lhs = res.value * _rpow(r, e)
        if res.exact:
            ok = ok and lhs == predicted[r]
        else:
            tol = 1e-7 * (abs(float(lhs)) + abs(float(predicted[r])) + 1) + res.error * 10
            ok = ok and abs(float(lhs) - float(predicted[r])) <= tol
    return ok


def _rpow(r, e):
    if isinstance(e, int) or (isinstance(e, Fraction) and e.denominator == 1):
        return Fraction(r) ** int(e)
    return float(r) ** float(e)


def theorem_consistency_suite(ctx, intg, n_polys=50, max_degree=6, max_p=3, s_max=8, seed=0, grid=DEFAULT_GRID):
    """Classify a seeded corpus of polyharmonic polynomials for all admissible ``s``.

    Every row compares the numeric verdict with the one predicted from the
    symbolic degree.  One orthogonality spot check runs per corpus entry.
    """
    rng = random.Random(seed)
    rows = []
    ortho = ortho_fail = 0
    for idx in range(n_polys):
        f, dec = random_polyharmonic(ctx, rng, max_degree, max_p)
        p = dec.order
        prof = intg.profile(f, grid)
        for s in range(2 * (p - 1), s_max + 1):
            rep = classify(ctx, intg, f, p, s, grid, profile=prof)
            exp = expected_verdict(int(f.degree), p, s) if f else DEG_LT_S
            rows.append(
                SuiteRow(idx, str(f), p, s, int(f.degree) if f else -1, rep.verdict, exp, rep.verdict == exp)
            )
        nonzero = [(m, j) for m, phi in enumerate(dec.phi) for j, _ in phi.homogeneous_components()]
        if nonzero:
            m0, j0 = nonzero[rng.randrange(len(nonzero))]
            g = dec.phi[m0].homogeneous_part(j0)
            ortho += 1
            if not orthogonality_spot_check(intg, dec, j0, g):
                ortho_fail += 1
    rate = sum(r.agree for r in rows) / len(rows) if rows else None
    settings = {
        "seed": seed,
        "n_polys": n_polys,
        "max_degree": max_degree,
        "max_p": max_p,
        "s_max": s_max,
        "grid": list(grid),
        "mc_samples": intg.samples,
        "mc_seed": intg.seed,
        "integrator_mode": intg.mode,
    }
    return SuiteSummary(rows, rate, ortho, ortho_fail, settings)
