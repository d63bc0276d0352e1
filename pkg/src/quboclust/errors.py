"""Exception types shared across the package.

Every domain error derives from :class:`QuboClustError` (itself a
``ValueError``) so callers can catch either the specific condition or the
whole family.
"""


class QuboClustError(ValueError):
    """Base class for all quboclust errors."""


# --- profile ingestion / preprocessing ---------------------------------

class RaggedTable(QuboClustError):
    """Input table has rows of unequal length."""


class NonNumericCell(QuboClustError):
    """Input table contains a cell that does not parse as a number."""


class TooFewProfiles(QuboClustError):
    """Fewer than two profiles after orientation."""


class IndivisibleLength(QuboClustError):
    """Profile length is not divisible by the averaging block size."""


class NonPositiveSigma(QuboClustError):
    """Kernel bandwidth must be strictly positive."""


class DegenerateRange(QuboClustError):
    """Matrix has a single distinct value; cannot map onto [0, 1]."""


# --- model construction / evaluation -----------------------------------

class LengthMismatch(QuboClustError):
    """Bit or spin vector length does not match the model."""


class DimensionMismatch(QuboClustError):
    """Matrix/assignment dimensions are inconsistent."""


class KindMismatch(QuboClustError):
    """Similarity matrix has the wrong kind for this operation."""


class NonPositiveLambda(QuboClustError):
    """Penalty coefficients must be strictly positive."""


class GroupCountExceedsProfiles(QuboClustError):
    """Need n_profiles > n_groups >= 1."""


class BadGroupCount(QuboClustError):
    """Group count outside [1, n_profiles]."""


class SingleCluster(QuboClustError):
    """Fewer than two non-empty groups; silhouette undefined."""


# --- solvers ------------------------------------------------------------

class TooManyVariables(QuboClustError):
    """Model exceeds the exhaustive-search variable cap."""


class InvalidSchedule(QuboClustError):
    """Solver schedule parameters are inconsistent."""


class DivergedAmplitudes(QuboClustError):
    """Simulated Ising-machine amplitudes exceeded the clamp budget."""
