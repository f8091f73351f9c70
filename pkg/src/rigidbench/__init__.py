"""Workbench for matrix rigidity at desk scale.

Exact construction of Sylvester and Fourier matrices, rational and
cyclotomic rank computation, machine-checkable rigidity lower-bound
certificates with a constructive refuter, and definition-level rigidity
search.  A FastAPI service wraps the operations; the bundled CLI is a
thin client over it.
"""

from .certificates import (
    LowerBoundCertificate,
    RefutationWitness,
    best_lower_bound,
    certificate_candidates,
    dft_decomposition_mismatch,
    full_rank_partition_certificate,
    refute_perturbation,
    sylvester_bound_value,
    trivial_lower_bound,
    verify_dft_decomposition,
)
from .errors import (
    CertificateError,
    CertificateFailedError,
    CertificateInapplicableError,
    CertificateMismatchError,
    FieldMismatchError,
    FormatError,
    IntervalInversionError,
    RefutationNotGuaranteedError,
    ResourceLimitError,
    RigidbenchError,
)
from .formats import (
    format_matrix,
    format_perturbation,
    matrix_digest,
    parse_matrix,
    parse_perturbation,
)
from .matrices import (
    BlockPartition,
    Matrix,
    Perturbation,
    SignMatrix,
    apply_perturbation,
    bit_reversal_columns,
    bit_reversal_permutation,
    block,
    dft,
    evens_first,
    evens_first_permutation,
    is_hadamard,
    kronecker,
    permute_columns,
    sylvester,
    weight_diff,
)
from .rank import exact_rank, numerical_rank, rank_lower_bound_after_changes
from .scalars import DEFAULT_TOLERANCE, Cyclotomic, format_scalar_token, parse_scalar_token
from .search import (
    CrossValidationReport,
    SearchResult,
    cross_validate,
    exact_rigidity_rank1,
    rank_one_completion,
    upper_bound_search,
)

__version__ = "0.1.0"

__all__ = [
    "BlockPartition",
    "CertificateError",
    "CertificateFailedError",
    "CertificateInapplicableError",
    "CertificateMismatchError",
    "CrossValidationReport",
    "Cyclotomic",
    "DEFAULT_TOLERANCE",
    "FieldMismatchError",
    "FormatError",
    "IntervalInversionError",
    "LowerBoundCertificate",
    "Matrix",
    "Perturbation",
    "RefutationNotGuaranteedError",
    "RefutationWitness",
    "ResourceLimitError",
    "RigidbenchError",
    "SearchResult",
    "SignMatrix",
    "apply_perturbation",
    "best_lower_bound",
    "bit_reversal_columns",
    "bit_reversal_permutation",
    "block",
    "certificate_candidates",
    "cross_validate",
    "dft",
    "dft_decomposition_mismatch",
    "evens_first",
    "evens_first_permutation",
    "exact_rank",
    "exact_rigidity_rank1",
    "format_matrix",
    "format_perturbation",
    "format_scalar_token",
    "full_rank_partition_certificate",
    "is_hadamard",
    "kronecker",
    "matrix_digest",
    "numerical_rank",
    "parse_matrix",
    "parse_perturbation",
    "parse_scalar_token",
    "permute_columns",
    "rank_lower_bound_after_changes",
    "rank_one_completion",
    "refute_perturbation",
    "sylvester",
    "sylvester_bound_value",
    "trivial_lower_bound",
    "upper_bound_search",
    "verify_dft_decomposition",
    "weight_diff",
]
