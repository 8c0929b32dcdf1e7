"""Exception types shared across the package."""


class QteichError(Exception):
    """Base class for all package errors."""


class EulerMismatch(QteichError):
    """Gluing data is inconsistent with the Euler characteristic of the surface."""


class NonInvolutiveGluing(QteichError):
    """Side gluing table is not a fixed-point-free involution."""


class OrientationConflict(QteichError):
    """Explicit corner matching contradicts the orientation convention."""


class Unsupported(QteichError):
    """A move or transform cannot be applied to the given object."""

    def __init__(self, move, reason):
        super().__init__(f"{move}: {reason}")
        self.move = move
        self.reason = reason


class BudgetExceeded(QteichError):
    """Exploration exceeded its object budget (partial result attached)."""

    def __init__(self, partial):
        super().__init__("object budget exceeded")
        self.partial = partial


class FrozenDirection(QteichError):
    """Mutation requested at a frozen vertex."""


class AmbiguousEdge(QteichError):
    """A quiver edge carries inconsistent ratio readings."""


class DepthBudgetExceeded(QteichError):
    """Expression tree exceeded the configured depth budget."""


class SingularDenominator(QteichError):
    """A denominator evaluated to a singular matrix; retry with a new seed."""


class NoRootOfUnity(QteichError):
    """The prime does not admit the required root of unity."""


class NonNilpotentQuadratic(QteichError):
    """Quadratic exponent whose adjoint action is not nilpotent of small order."""


class FractionalShift(QteichError):
    """A dilog crossing produced a non-integer argument shift."""


class NonAffineWord(QteichError):
    """Operator word contains dilog factors where an affine word is required."""


class ConfigError(QteichError):
    """Invalid run configuration."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
