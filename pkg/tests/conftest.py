import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from dunklpoly import DunklContext, Polynomial, SphericalIntegrator, build_named
from dunklpoly.liouville import random_homogeneous

HALF = Fraction(1, 2)


def x(n, i):
    """Coordinate x_{i} (1-based, as in the text format)."""
    return Polynomial.variable(n, i - 1)


def random_poly(rng, n, max_degree):
    f = Polynomial.zero(n)
    for d in range(max_degree + 1):
        f = f + random_homogeneous(n, d, rng)
    return f


def polynomials(n, max_degree=4, max_terms=6):
    mono = st.tuples(*[st.integers(0, max_degree) for _ in range(n)]).filter(
        lambda m: sum(m) <= max_degree
    )
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(mono, coeff, max_size=max_terms).map(lambda t: Polynomial(n, t))


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture(scope="session")
def z2_half():
    return build_named("Z2", 2, [HALF, HALF])


@pytest.fixture(scope="session")
def z2_ctx(z2_half):
    return DunklContext(z2_half)


@pytest.fixture(scope="session")
def z2_exact(z2_half):
    return SphericalIntegrator(z2_half)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[num])
