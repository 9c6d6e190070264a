"""Root systems, finite reflection groups and multiplicity functions.

Roots are tuples of scalars.  Named families use exact rational
coordinates whenever that is possible; dihedral groups whose roots need
irrational coordinates are built in float mode.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .errors import ClosureExplosion, InvalidRootSystem, ZeroRoot
from .polycore import Reflection, as_scalar

DEFAULT_CLOSURE_CAP = 10_000
_FLOAT_DIGITS = 9
_FLOAT_TOL = 1e-12


def _is_exact_vec(v):
    return all(isinstance(a, Fraction) for a in v)


def root_key(v):
    """Hashable identity of a vector, tolerant to float round-off."""
    if _is_exact_vec(v):
        return tuple(v)
    return tuple(round(float(a), _FLOAT_DIGITS) + 0.0 for a in v)


def fmt_vector(v):
    return "(" + ", ".join(str(a) for a in v) + ")"


def _neg(v):
    return tuple(-a for a in v)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _is_zero(a):
    return a == 0 if isinstance(a, Fraction) else abs(a) <= _FLOAT_TOL


def lex_positive(v):
    for a in v:
        if not _is_zero(a):
            return a > 0
    return False


def _parallel(u, v):
    n = len(u)
    return all(
        _is_zero(u[i] * v[j] - u[j] * v[i]) for i in range(n) for j in range(i + 1, n)
    )


def _as_root(v):
    v = tuple(as_scalar(a) for a in v)
    if all(_is_zero(a) for a in v):
        raise ZeroRoot("roots must be nonzero vectors")
    return v


class RootSystem:
    """A finite set of roots together with a chosen positive subsystem.

    The constructor does not enforce the root system axioms; use
    :func:`validate` for that.  If ``positive`` is omitted the
    lexicographically positive roots are used.
    """

    def __init__(self, roots, positive=None):
        roots = [_as_root(v) for v in roots]
        if not roots:
            raise InvalidRootSystem("a root system needs at least one root")
        n = len(roots[0])
        if any(len(v) != n for v in roots):
            raise InvalidRootSystem("roots have inconsistent dimensions")
        self.dimension = n
        self.roots = tuple(roots)
        self._index = {root_key(v): i for i, v in enumerate(self.roots)}
        if positive is None:
            positive = [v for v in self.roots if lex_positive(v)]
        self.positive = tuple(_as_root(v) for v in positive)
        self._reflections = {}

    @property
    def is_exact(self):
        return all(_is_exact_vec(v) for v in self.roots)

    def __contains__(self, v):
        return root_key(v) in self._index

    def __len__(self):
        return len(self.roots)

    def reflection(self, v):
        key = root_key(v)
        r = self._reflections.get(key)
        if r is None:
            r = self._reflections[key] = Reflection(v)
        return r

    def with_positive(self, direction):
        """Same roots, positive subsystem ``{v : <direction, v> > 0}``."""
        direction = [as_scalar(a) for a in direction]
        pos = []
        for v in self.roots:
            t = _dot(direction, v)
            if _is_zero(t):
                raise InvalidRootSystem(
                    f"direction {fmt_vector(direction)} is orthogonal to root {fmt_vector(v)}"
                )
            if t > 0:
                pos.append(v)
        return RootSystem(self.roots, pos)

    def orbits(self):
        """Orbits of the roots under the reflection group, in listing order."""
        seen = set()
        orbits = []
        for v in self.roots:
            if root_key(v) in seen:
                continue
            orbit = [v]
            seen.add(root_key(v))
            frontier = [v]
            while frontier:
                w = frontier.pop()
                for u in self.roots:
                    img = self.reflection(u).apply(w)
                    k = root_key(img)
                    if k not in seen and k in self._index:
                        seen.add(k)
                        orbit.append(self.roots[self._index[k]])
                        frontier.append(img)
            orbits.append(orbit)
        return orbits

    def __repr__(self):
        return f"RootSystem(dimension={self.dimension}, roots={len(self.roots)})"


@dataclass(frozen=True, eq=False)
class WeightedRootSystem:
    """Root system plus multiplicity function ``kappa`` (keyed by root).

    ``gamma`` is the sum of ``kappa`` over the positive roots.
    """

    root_system: RootSystem
    kappa: dict
    unchecked_kappa: bool = False
    name: str = "custom"
    gamma: object = field(init=False)

    def __post_init__(self):
        kappa = {root_key(v): as_scalar(k) for v, k in self.kappa.items()}
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(
            self,
            "gamma",
            sum(
                (kappa.get(root_key(v), Fraction(0)) for v in self.root_system.positive),
                Fraction(0),
            ),
        )

    @property
    def n(self):
        return self.root_system.dimension

    @property
    def is_exact(self):
        return self.root_system.is_exact and all(
            isinstance(k, Fraction) for k in self.kappa.values()
        )

    def kappa_of(self, v):
        try:
            return self.kappa[root_key(v)]
        except KeyError:
            raise InvalidRootSystem(f"no multiplicity assigned to root {fmt_vector(v)}") from None

    def positive_terms(self):
        """``(root, reflection, kappa)`` for each positive root."""
        rs = self.root_system
        return [(v, rs.reflection(v), self.kappa_of(v)) for v in rs.positive]

    def with_positive(self, direction):
        return WeightedRootSystem(
            self.root_system.with_positive(direction),
            {v: self.kappa_of(v) for v in self.root_system.roots},
            self.unchecked_kappa,
            self.name,
        )

    def rescaled(self, factors):
        """Replace each positive root ``v`` by ``factor * v`` (same multiplicities)."""
        factors = list(factors)
        pos = self.root_system.positive
        if len(factors) != len(pos):
            raise ValueError("need one factor per positive root")
        new_pos = [tuple(as_scalar(f) * a for a in v) for f, v in zip(factors, pos)]
        roots = new_pos + [_neg(v) for v in new_pos]
        kappa = {}
        for f, v, w in zip(factors, pos, new_pos):
            kappa[w] = kappa[_neg(w)] = self.kappa_of(v)
        return WeightedRootSystem(
            RootSystem(roots, new_pos), kappa, self.unchecked_kappa, self.name + "-rescaled"
        )

    def __repr__(self):
        return f"WeightedRootSystem({self.name}, n={self.n}, gamma={self.gamma})"


# -- construction ------------------------------------------------------


def closure_under_reflections(seeds, cap=DEFAULT_CLOSURE_CAP):
    """Smallest reflection-closed set containing ``+-seeds``."""
    seeds = [_as_root(v) for v in seeds]
    roots = []
    index = set()

    def push(v):
        k = root_key(v)
        if k not in index:
            index.add(k)
            roots.append(v)
            if len(roots) > cap:
                raise ClosureExplosion(
                    f"reflection closure exceeded {cap} roots; the group is not finite"
                )
            return True
        return False

    for v in seeds:
        push(v)
        push(_neg(v))
    changed = True
    while changed:
        changed = False
        refl = [Reflection(v) for v in roots]
        for r in refl:
            for v in list(roots):
                if push(r.apply(v)):
                    changed = True
    return RootSystem(roots)


def _unit(n, i, sign=1):
    v = [Fraction(0)] * n
    v[i] = Fraction(sign)
    return tuple(v)


def _family_roots(family, param):
    family = family.upper()
    if family in ("Z2", "Z2N", "A1N"):
        n = param
        if n < 1:
            raise InvalidRootSystem("Z2^n needs n >= 1")
        roots = []
        for i in range(n):
            roots += [_unit(n, i), _unit(n, i, -1)]
        return f"Z2^{n}", roots
    if family == "A":
        n = param
        if n < 2:
            raise InvalidRootSystem("A_{n-1} needs ambient dimension n >= 2")
        roots = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    v = [Fraction(0)] * n
                    v[i], v[j] = Fraction(1), Fraction(-1)
                    roots.append(tuple(v))
        return f"A_{n - 1}", roots
    if family in ("B", "D"):
        n = param
        if n < 2:
            raise InvalidRootSystem(f"{family}_n needs n >= 2")
        roots = []
        if family == "B":
            for i in range(n):
                roots += [_unit(n, i), _unit(n, i, -1)]
        for i in range(n):
            for j in range(i + 1, n):
                for si in (1, -1):
                    for sj in (1, -1):
                        v = [Fraction(0)] * n
                        v[i], v[j] = Fraction(si), Fraction(sj)
                        roots.append(tuple(v))
        return f"{family}_{n}", roots
    if family in ("I2", "I"):
        m = param
        if m < 1:
            raise InvalidRootSystem("I2(m) needs m >= 1")
        exact = {
            1: [(1, 0)],
            2: [(1, 0), (0, 1)],
            4: [(1, 0), (1, 1), (0, 1), (-1, 1)],
        }
        if m in exact:
            pos = [tuple(Fraction(a) for a in v) for v in exact[m]]
        else:
            pos = [
                (math.cos(math.pi * k / m), math.sin(math.pi * k / m)) for k in range(m)
            ]
        roots = []
        for v in pos:
            roots += [v, _neg(v)]
        return f"I2({m})", roots
    raise InvalidRootSystem(f"unknown family {family!r}")


def build_named(family, param, kappa, unchecked_kappa=False, check=True):
    """Build and validate a named weighted root system.

    Parameters
    ----------
    family : {"Z2", "A", "B", "D", "I2"}
        ``Z2`` is the sign-change group with roots ``+-e_i``; ``A`` is
        ``A_{n-1}`` inside ``R^n``; ``B`` and ``D`` are the usual
        hyperoctahedral families; ``I2`` is the dihedral group of order ``2m``.
    param : int
        Ambient dimension ``n``, or ``m`` for ``I2``.
    kappa : scalar or sequence
        One multiplicity per orbit, orbits ordered as the roots are listed:
        ``Z2`` one value per coordinate, ``B`` short then long roots,
        ``I2(m)`` with even ``m`` the orbit of ``(1, 0)`` first.  A single
        scalar is used for every orbit.
    check : bool
        Raise :class:`InvalidRootSystem` when validation fails.
    """
    name, roots = _family_roots(family, int(param))
    rs = RootSystem(roots)
    orbits = rs.orbits()
    if isinstance(kappa, (list, tuple)):
        values = [as_scalar(k) for k in kappa]
        if len(values) != len(orbits):
            raise InvalidRootSystem(
                f"{name} has {len(orbits)} root orbit(s) but {len(values)} kappa values were given"
            )
    else:
        values = [as_scalar(kappa)] * len(orbits)
    kmap = {}
    for orbit, k in zip(orbits, values):
        for v in orbit:
            kmap[v] = k
    ws = WeightedRootSystem(rs, kmap, unchecked_kappa, name)
    report = validate(ws) if check else None
    if report is not None and not report.passed:
        raise InvalidRootSystem("; ".join(c.detail for c in report.failures))
    return ws


def from_json(data, check=True):
    """Build a custom weighted system from the JSON document schema.

    ``{"dimension": n, "roots": [[...], ...], "kappa": [...], "unchecked_kappa": bool}``
    Numbers may be JSON numbers or rational strings such as ``"1/2"``.
    """

    def scalar(x):
        return as_scalar(str(x)) if isinstance(x, (int, float)) else as_scalar(x)

    n = int(data["dimension"])
    roots = [tuple(scalar(a) for a in v) for v in data["roots"]]
    if any(len(v) != n for v in roots):
        raise InvalidRootSystem("root length does not match dimension")
    kappas = data.get("kappa", [0] * len(roots))
    if len(kappas) != len(roots):
        raise InvalidRootSystem("need one kappa value per listed root")
    rs = RootSystem(roots)
    kmap = {}
    for v, k in zip(roots, kappas):
        kmap[v] = scalar(k)
    ws = WeightedRootSystem(rs, kmap, bool(data.get("unchecked_kappa", False)), "custom")
    if check:
        report = validate(ws)
        if not report.passed:
            raise InvalidRootSystem("; ".join(c.detail for c in report.failures))
    return ws


# -- validation --------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


def _separating(positive):
    if not positive:
        return True
    A = -np.array([[float(a) for a in v] for v in positive])
    n = A.shape[1]
    res = linprog(
        np.zeros(n), A_ub=A, b_ub=-np.ones(len(positive)), bounds=[(None, None)] * n
    )
    return res.status == 0


def validate(ws):
    """Check every root system and multiplicity axiom; never raises."""
    rs = ws.root_system
    checks = []
    roots = rs.roots

    bad = [v for v in roots if all(_is_zero(a) for a in v)]
    checks.append(Check("nonzero", not bad, f"zero roots: {[fmt_vector(v) for v in bad]}" if bad else ""))

    missing = []
    for u in roots:
        r = rs.reflection(u)
        for v in roots:
            img = r.apply(v)
            if img not in rs:
                missing.append((u, v))
    checks.append(
        Check(
            "closure",
            not missing,
            f"reflection closure fails, e.g. sigma_{fmt_vector(missing[0][0])} applied to {fmt_vector(missing[0][1])}"
            if missing
            else "",
        )
    )

    nonreduced = []
    for i, u in enumerate(roots):
        for v in roots[i + 1 :]:
            if _parallel(u, v) and root_key(v) not in (root_key(u), root_key(_neg(u))):
                nonreduced.append((u, v))
    checks.append(
        Check(
            "reduced",
            not nonreduced,
            f"reducedness fails: {fmt_vector(nonreduced[0][0])} and {fmt_vector(nonreduced[0][1])} are parallel"
            if nonreduced
            else "",
        )
    )

    pos_keys = {root_key(v) for v in rs.positive}
    neg_keys = {root_key(_neg(v)) for v in rs.positive}
    all_keys = {root_key(v) for v in roots}
    partition = (
        pos_keys | neg_keys == all_keys
        and not (pos_keys & neg_keys)
        and len(pos_keys) == len(rs.positive)
    )
    checks.append(
        Check("positive_partition", partition, "" if partition else "R != R+ u -R+ disjointly")
    )
    sep = partition and _separating(rs.positive)
    checks.append(
        Check("separating_hyperplane", sep, "" if sep else "no hyperplane separates R+ from -R+")
    )

    undefined = [v for v in roots if root_key(v) not in ws.kappa]
    checks.append(
        Check("kappa_defined", not undefined, f"kappa missing for {[fmt_vector(v) for v in undefined]}" if undefined else "")
    )

    variant = []
    if not undefined:
        for u in roots:
            r = rs.reflection(u)
            for v in roots:
                img = r.apply(v)
                k = root_key(img)
                if k in ws.kappa and ws.kappa[k] != ws.kappa[root_key(v)]:
                    variant.append((u, v))
    checks.append(
        Check(
            "kappa_invariant",
            not variant,
            f"kappa is not G-invariant: kappa{fmt_vector(variant[0][1])} differs from its image under sigma_{fmt_vector(variant[0][0])}"
            if variant
            else "",
        )
    )

    negative = [k for k in ws.kappa.values() if k < 0]
    if ws.unchecked_kappa:
        checks.append(
            Check(
                "kappa_nonnegative",
                True,
                "unchecked: negative kappa allowed; regular-parameter membership is not verified"
                if negative
                else "",
            )
        )
    else:
        checks.append(
            Check(
                "kappa_nonnegative",
                not negative,
                f"negative kappa values {[str(k) for k in negative]} need unchecked_kappa" if negative else "",
            )
        )

    if not undefined:
        recomputed = sum((ws.kappa_of(v) for v in rs.positive), Fraction(0))
        ok = recomputed == ws.gamma
    else:
        ok = False
    checks.append(Check("gamma", ok, "" if ok else "gamma does not match sum over R+"))
    return ValidationReport(tuple(checks))


# -- weight and group --------------------------------------------------


def weight(ws, x):
    """``h_kappa(x)^2 = prod_{v in R+} |<v, x>|^(2 kappa_v)``.

    Exact when every ``2 kappa_v`` is an integer and ``x`` is rational.
    """
    x = [as_scalar(a) for a in x]
    if len(x) != ws.n:
        raise ValueError(f"point of length {len(x)} for dimension {ws.n}")
    total = Fraction(1)
    for v, _, k in ws.positive_terms():
        if k == 0:
            continue
        t = abs(_dot(v, x))
        e = 2 * k
        if isinstance(t, Fraction) and isinstance(e, Fraction) and e.denominator == 1:
            total = total * t ** int(e)
        else:
            total = float(total) * float(t) ** float(e)
    return total


def weight_many(ws, X):
    """Vectorised float ``h_kappa^2`` at the rows of ``X``."""
    X = np.asarray(X, dtype=float)
    out = np.ones(X.shape[0])
    for v, _, k in ws.positive_terms():
        if k == 0:
            continue
        out *= np.abs(X @ np.array([float(a) for a in v])) ** (2 * float(k))
    return out


def _matmul(A, B):
    n = len(A)
    return tuple(
        tuple(sum(A[i][l] * B[l][j] for l in range(n)) for j in range(n)) for i in range(n)
    )


def _matrix_key(M):
    return tuple(root_key(row) for row in M)


def group_elements(ws, cap=DEFAULT_CLOSURE_CAP):
    """All elements of the reflection group as matrices (tuples of rows)."""
    rs = ws.root_system if isinstance(ws, WeightedRootSystem) else ws
    n = rs.dimension
    identity = tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )
    gens = [rs.reflection(v).matrix for v in rs.positive]
    elements = [identity]
    seen = {_matrix_key(identity)}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _matmul(s, g)
                k = _matrix_key(h)
                if k not in seen:
                    seen.add(k)
                    elements.append(h)
                    nxt.append(h)
                    if len(elements) > cap:
                        raise ClosureExplosion(f"group order exceeds {cap}")
        frontier = nxt
    return elements


def act(g, x):
    """Apply the matrix ``g`` to the vector ``x``."""
    return tuple(sum(a * b for a, b in zip(row, x)) for row in g)
