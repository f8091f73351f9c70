"""Exception types shared across the workbench.

The CLI and service map these onto exit codes / HTTP error codes, so new
domain failures should subclass one of the families below rather than
raising bare ValueError.
"""

from __future__ import annotations


class RigidbenchError(Exception):
    """Base class for all workbench-specific failures."""


class FieldMismatchError(RigidbenchError):
    """Two scalars or matrices live in incompatible entry domains."""


class FormatError(RigidbenchError):
    """A scalar token, matrix file, or perturbation file failed to parse."""


class ResourceLimitError(RigidbenchError):
    """A requested computation exceeds the configured desk-scale guards."""


class CertificateError(RigidbenchError):
    """Base class for lower-bound certificate failures (CLI exit code 3)."""


class CertificateInapplicableError(CertificateError):
    """The certificate's preconditions do not hold for this matrix."""


class CertificateFailedError(CertificateError):
    """Block-rank evidence could not be established (some block is deficient)."""


class CertificateMismatchError(RigidbenchError):
    """A certificate was presented for a different matrix or target rank."""


class RefutationNotGuaranteedError(RigidbenchError):
    """The perturbation weight reaches the certified bound, so the counting
    argument says nothing about it (CLI exit code 4)."""


class IntervalInversionError(RigidbenchError):
    """A verified lower bound exceeded a verified upper bound.

    This is never a valid outcome; it indicates an implementation bug in
    whichever side produced the tighter claim.
    """
