"""Exception types shared across the package.

Every error raised deliberately by subcrit derives from SubcritError so
callers can catch the package's failures with a single except clause.
Budget overruns in simulators are reported as truncated results, not
exceptions; BudgetExceeded is reserved for the probe/orchestration layer
where a hard stop is the contract.
"""


class SubcritError(Exception):
    """Base class for all errors raised by subcrit."""


class DimensionMismatch(SubcritError):
    """Operands have incompatible dimensions."""


class ZeroProduct(SubcritError):
    """A matrix product was annihilated (norm exactly zero)."""


class ZeroMatrix(SubcritError):
    """Operation undefined on the zero matrix."""


class NonPositive(SubcritError):
    """Operation requires an entrywise positive matrix."""


class NotPrimitive(SubcritError):
    """Matrix failed the primitivity check."""


class DegenerateEnsemble(SubcritError):
    """Ensemble admits no jointly positive product (an atom has a zero column)."""


class SupportTooLarge(SubcritError):
    """Exhaustive product enumeration would exceed the configured budget."""


class Unsupported(SubcritError):
    """Analytic quantity is not available for this law kind."""


class PopulationOverflow(SubcritError):
    """Branching population exceeded its cap (supercritical or miscapped run)."""


class CriticalRho(SubcritError):
    """Frog walk-survival root is >= 1; no subcritical verdict possible."""


class NonpositiveDrift(SubcritError):
    """Exchange process drift E[T_1] <= 0."""


class WrongRegime(SubcritError):
    """Cookie-walk classification requires E[ln rho_0] > 0."""


class ZeroAnchor(SubcritError):
    """Series anchor y has P[||Y_1|| <= y] = 0; every partial product vanishes."""


class AnchorDisagreement(SubcritError):
    """Verdicts differ across the anchor grid (numerical truncation artifact)."""

    def __init__(self, message: str, verdicts=None):
        super().__init__(message)
        self.verdicts = verdicts or []


class ConfigError(SubcritError):
    """Scenario configuration failed validation."""

    def __init__(self, field: str, message: str):
        super().__init__(f"config field '{field}': {message}")
        self.field = field


class BudgetExceeded(SubcritError):
    """A run would exceed the configured simulation budget."""
