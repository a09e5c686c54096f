"""Exception types shared across the package.

Each error that can reach the command line carries the process exit code
the CLI should return for it.
"""

from typing import Any, Optional


class CertError(Exception):
    """Base class for all errors raised by the certification engine."""

    exit_code = 1


class SpecError(CertError, ValueError):
    """A variety specification is malformed or violates a parameter constraint."""

    exit_code = 2


class KnowledgeBaseError(CertError):
    """The knowledge-base file is missing, unreadable or fails schema validation."""

    exit_code = 2


class DimensionError(CertError, ValueError):
    """Matrix or vector shapes do not fit together."""

    exit_code = 2


class PreconditionError(CertError, ValueError):
    """An operation was called with inputs outside its contract."""

    exit_code = 2


class CapacityError(CertError):
    """A probe would exceed the configured matrix-entry cap."""

    exit_code = 3

    def __init__(self, message: str, entries: int = 0, cap: int = 0):
        super().__init__(message)
        self.entries = entries
        self.cap = cap


class InapplicableError(CertError):
    """The twd probe has no normal functionals to work with (M_A fills the ambient space)."""

    exit_code = 3


class ContradictionError(CertError):
    """A fact and its negation were asserted for the same variety."""

    exit_code = 4

    def __init__(self, message: str, existing: Optional[Any] = None, incoming: Optional[Any] = None):
        super().__init__(message)
        self.existing = existing
        self.incoming = incoming


class ReportError(CertError):
    """An output document fails its schema or the provenance lint."""

    exit_code = 1
