"""Exception hierarchy shared across the package.

Every failure mode callers are expected to branch on gets its own class;
anything else surfaces as a plain ValueError/TypeError from the stdlib.
"""


class GraphAllocError(Exception):
    """Base class for all errors raised by this package."""


# --- problem configuration ------------------------------------------------

class ConfigError(GraphAllocError):
    """A problem configuration violates a structural invariant."""


class EmptyDependencySet(ConfigError):
    """A demand has no required resource; its production rule is undefined."""


class IndexOutOfRange(ConfigError):
    """A dependency or objective references a resource/demand that does not exist."""


class FewerThanTwoObjectives(ConfigError):
    """Multi-objective problems need at least two objectives."""


class NegativeBudget(ConfigError):
    """Resource budgets must be non-negative integers."""


class InvalidHorizon(ConfigError):
    """Episode horizon must be a positive integer."""


class UnknownProblem(GraphAllocError):
    """No shipped problem file or generator manifest matches the requested id."""


class InvalidSpec(GraphAllocError):
    """A generator spec field is outside its valid range."""


# --- episode dynamics -----------------------------------------------------

class EpisodeOver(GraphAllocError):
    """step() was called after the episode reached its horizon."""


class DimensionMismatch(GraphAllocError):
    """A vector has the wrong length for the problem at hand."""


class InvalidPreference(GraphAllocError):
    """Preference components must lie in [0, 1] and sum to 1."""


class ZeroBudget(GraphAllocError):
    """Resource utilization is undefined when the total budget is zero."""


# --- objective expressions ------------------------------------------------

class ExpressionError(GraphAllocError):
    """An objective expression node cannot be parsed."""


class UnknownPrimitive(ExpressionError):
    """Expression node names an operation the DSL does not define."""


class ArityError(ExpressionError):
    """Expression node has missing/extra operands or parameters."""


class NonFiniteConstant(ExpressionError):
    """Expression constants and parameters must be finite numbers."""


# --- scalarization ----------------------------------------------------------

class NegativeObjective(GraphAllocError):
    """Objective vectors entering the normalizer must be non-negative."""


class NonPositiveMu(GraphAllocError):
    """The smooth-Tchebycheff smoothness parameter must be positive."""


class NegativeTheta(GraphAllocError):
    """The boundary-intersection penalty must be non-negative."""


# --- preference sampling ----------------------------------------------------

class NonPositiveAlpha(GraphAllocError):
    """Dirichlet concentration must be positive."""


# --- metrics ----------------------------------------------------------------

class EmptyInput(GraphAllocError):
    """Metric requires at least one point."""


class LengthMismatch(GraphAllocError):
    """Paired sequences must have equal length."""


class DegenerateAfterRanking(GraphAllocError):
    """Rank correlation is undefined when a side has zero rank variance."""


class PointBelowReference(GraphAllocError):
    """Hypervolume points must weakly dominate the reference point."""


class UnsupportedDimension(GraphAllocError):
    """Exact hypervolume is limited to 8 objectives; no silent approximation."""


class ZeroIdealHV(GraphAllocError):
    """The hypervolume ratio is undefined for a zero ideal hypervolume."""


# --- oracle enumeration -----------------------------------------------------

class TooLarge(GraphAllocError):
    """Feasible-set cardinality exceeds the enumeration guard."""
