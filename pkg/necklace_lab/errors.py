# ------------------------------------------------------------------------------
# File: errors.py
#
# Purpose:
#     One exception hierarchy for the whole lab. Every class also derives from
#     the builtin a caller would naturally catch (ValueError, IndexError,
#     RuntimeError) and carries the process exit code the CLI maps it to.
#
# Exit codes:
#     0  success
#     1  unexpected failure
#     2  usage / input error
#     3  domain, range, resource or diagnostic error
#     4  consistency failure (a verified identity did not hold)
# ------------------------------------------------------------------------------

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_CONSISTENCY = 4


class NecklaceLabError(Exception):
    """Base class for every error raised by necklace_lab."""

    exit_code = EXIT_FAILURE


class InputError(NecklaceLabError, ValueError):
    """Bad argument supplied by a caller (n too small, gap out of range, ...)."""

    exit_code = EXIT_USAGE


class UsageError(InputError):
    """Operands that cannot be combined (indeterminate or order mismatch)."""


class DomainError(NecklaceLabError, ValueError):
    """Arguments outside the mathematical domain of an operation."""

    exit_code = EXIT_DOMAIN


class PoleError(DomainError):
    """Denominator numerically indistinguishable from zero."""


class RangeError(NecklaceLabError, IndexError):
    """Index beyond a table or coefficient beyond a truncation order."""

    exit_code = EXIT_DOMAIN


class ResourceError(NecklaceLabError):
    """Request exceeds an exponential-size guard."""

    exit_code = EXIT_DOMAIN


class DiagnosticError(NecklaceLabError):
    """A statistical diagnostic cannot be computed from the given data."""

    exit_code = EXIT_DOMAIN


class ConsistencyError(NecklaceLabError, RuntimeError):
    """An identity the lab verifies turned out false."""

    exit_code = EXIT_CONSISTENCY
