"""Exception hierarchy shared across the package.

CLI exit-code mapping: input-side errors (schema, symmetry, dimension,
domain) exit 2; resource/numeric failures exit 3.
"""


class VqeBenchError(Exception):
    """Base class for all package errors."""


class DimensionError(VqeBenchError):
    """Mismatched qubit counts, vector lengths, or parameter slots."""


class DomainError(VqeBenchError):
    """Arguments outside an operation's documented domain."""


class SchemaError(VqeBenchError):
    """Malformed input file (moldata JSON / FCIDUMP / noise profile)."""


class SymmetryError(VqeBenchError):
    """Integral symmetry violation or operator incompatible with a Z2 reduction."""


class UnsupportedMetricError(VqeBenchError):
    """Requested metric needs data the input does not carry (e.g. dipoles)."""


class UnsupportedGateError(VqeBenchError):
    """Gradient rule applied to a gate without a two-eigenvalue generator."""


class ResourceLimitError(VqeBenchError):
    """Operation would exceed the configured memory/size guard."""


class NumericError(VqeBenchError):
    """NaN/Inf encountered where a finite value is required."""
