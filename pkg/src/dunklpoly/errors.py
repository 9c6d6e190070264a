"""Exception hierarchy.

Every library error carries a stable ``code`` string; the command line
front end reports it verbatim.
"""


class DunklError(Exception):
    code = "dunkl_error"


class DimensionMismatch(DunklError, ValueError):
    code = "dimension_mismatch"


class NonFiniteValue(DunklError, ArithmeticError):
    code = "non_finite"


class NotDivisible(DunklError, ArithmeticError):
    code = "not_divisible"


class ZeroRoot(DunklError, ValueError):
    code = "zero_root"


class ClosureExplosion(DunklError):
    code = "closure_explosion"


class InvalidRootSystem(DunklError, ValueError):
    code = "invalid_root_system"


class NotHomogeneous(DunklError, ValueError):
    code = "not_homogeneous"


class SingularSystem(DunklError, ArithmeticError):
    code = "singular_system"


class NotPolyharmonic(DunklError, ValueError):
    code = "not_polyharmonic"


class NotHarmonic(DunklError, ValueError):
    code = "not_harmonic"


class ExactModeUnavailable(DunklError, ValueError):
    code = "exact_mode_unavailable"


class HypothesisViolated(DunklError, ValueError):
    code = "hypothesis_violated"


class AllZero(DunklError):
    """Raised when the positive part of ``f`` vanishes on every sample."""

    code = "all_zero"


class PolynomialSyntaxError(DunklError, ValueError):
    code = "syntax_error"

    def __init__(self, offset, expected, text=""):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        self.text = text
        super().__init__(
            f"syntax error at offset {offset}: expected one of {', '.join(self.expected)}"
        )


class UnknownVariable(DunklError, ValueError):
    code = "unknown_variable"
