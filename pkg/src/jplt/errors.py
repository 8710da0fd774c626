"""Exception types shared across the package.

Every error raised by the library derives from JpltError, so callers (and
the CLI) can catch one base class and still report the precise condition
by the exception's class name.
"""


class JpltError(Exception):
    """Base class for all library errors."""


class InvalidField(JpltError):
    """Field modulus rejected: not prime, or outside the supported range."""


class ZeroInverse(JpltError):
    """Multiplicative inverse of zero requested."""


class DimensionMismatch(JpltError):
    """Operands have incompatible shapes or lengths."""


class Inconsistent(JpltError):
    """Linear system has no solution."""


class RowsExceedCols(JpltError):
    """Matrix has more rows than columns where a wide matrix is required."""


class NotMds(JpltError):
    """Matrix fails the MDS requirement (some maximal minor is singular)."""


class NotGrs(JpltError):
    """Coefficient matrix does not generate a generalized Reed-Solomon code."""


class SpecInvalid(JpltError):
    """GRS parameters are malformed (zero multiplier, repeated point, bad dims)."""


class FieldTooSmall(JpltError):
    """Field cannot supply enough distinct evaluation points."""


class ExtensionFailed(JpltError):
    """Could not extend a parity matrix to an MDS matrix within the retry cap."""


class WorkLimitExceeded(JpltError):
    """Requested enumeration exceeds the configured work limit."""


class RecoveryCheckFailed(JpltError):
    """Recovery combiners do not reproduce the demand rows exactly."""


class ParamMismatch(JpltError):
    """Two sides of an exchange disagree on (p, m, K) or related parameters."""


class ParamInvalid(JpltError):
    """Parameter combination violates 1 <= L <= D <= K or similar constraints."""


class Malformed(JpltError):
    """Serialized bytes are truncated, non-canonical, or mislabeled."""
