"""Rank computation: exact over the entry's fraction field, tolerance-based
for approximate matrices.

Exact integer matrices go through fraction-free (Bareiss-style)
elimination, which keeps intermediate entries polynomially bounded;
rational and cyclotomic matrices use ordinary elimination with exact
division.  Pivoting is first-nonzero in exact mode (determinism; magnitude
is irrelevant when arithmetic is exact) and largest-magnitude in
approximate mode (stability).
"""

from __future__ import annotations

from fractions import Fraction

from .matrices import Matrix, SignMatrix
from .scalars import DEFAULT_TOLERANCE, numeric_value, scalar_is_zero


def exact_rank(m) -> int:
    """Rank over the fraction field of the entry domain.

    Only exact entry kinds are accepted; approximate matrices must go
    through :func:`numerical_rank` instead.
    """
    if isinstance(m, SignMatrix):
        return _bareiss_rank(m.to_matrix().to_lists(), m.n, m.n)
    if not isinstance(m, Matrix):
        raise TypeError(f"expected a matrix, got {type(m).__name__}")
    if m.kind == "approx":
        raise TypeError("approximate matrices have no exact rank; use numerical_rank")
    if m.kind == "int":
        return _bareiss_rank(m.to_lists(), m.rows, m.cols)
    if m.kind == "rat":
        return _field_rank(m.to_lists(), m.rows, m.cols, lambda x: Fraction(1) / x)
    return _field_rank(m.to_lists(), m.rows, m.cols, lambda x: x.inverse())


def _bareiss_rank(a, rows, cols) -> int:
    prev = 1
    pr = 0
    for pc in range(cols):
        piv = None
        for i in range(pr, rows):
            if a[i][pc] != 0:
                piv = i
                break
        if piv is None:
            continue  # free column
        if piv != pr:
            a[pr], a[piv] = a[piv], a[pr]
        pivot = a[pr][pc]
        prow = a[pr]
        for i in range(pr + 1, rows):
            row = a[i]
            f = row[pc]
            for j in range(pc + 1, cols):
                # Exact by Sylvester's identity: the quotient is a minor.
                row[j] = (row[j] * pivot - f * prow[j]) // prev
            row[pc] = 0
        prev = pivot
        pr += 1
        if pr == rows:
            break
    return pr


def _field_rank(a, rows, cols, invert) -> int:
    pr = 0
    for pc in range(cols):
        piv = None
        for i in range(pr, rows):
            if not scalar_is_zero(a[i][pc]):
                piv = i
                break
        if piv is None:
            continue
        if piv != pr:
            a[pr], a[piv] = a[piv], a[pr]
        inv = invert(a[pr][pc])
        prow = a[pr]
        for j in range(pc, cols):
            prow[j] = prow[j] * inv
        for i in range(pr + 1, rows):
            f = a[i][pc]
            if scalar_is_zero(f):
                continue
            row = a[i]
            for j in range(pc, cols):
                row[j] = row[j] - f * prow[j]
        pr += 1
        if pr == rows:
            break
    return pr


def numerical_rank(m, tol: float = DEFAULT_TOLERANCE) -> int:
    """Pivots with magnitude above ``tol`` during magnitude-pivoted
    elimination.  Exact matrices are embedded numerically first."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if isinstance(m, SignMatrix):
        m = m.to_matrix()
    a = [[numeric_value(v) for v in m.row_values(i)] for i in range(m.rows)]
    rows, cols = m.rows, m.cols
    pr = 0
    for pc in range(cols):
        piv = max(range(pr, rows), key=lambda i: abs(a[i][pc]), default=None)
        if piv is None or abs(a[piv][pc]) <= tol:
            continue
        if piv != pr:
            a[pr], a[piv] = a[piv], a[pr]
        prow = a[pr]
        pivot = prow[pc]
        for i in range(pr + 1, rows):
            f = a[i][pc] / pivot
            if f == 0:
                continue
            row = a[i]
            for j in range(pc, cols):
                row[j] -= f * prow[j]
        pr += 1
        if pr == rows:
            break
    return pr


def rank_lower_bound_after_changes(block_rank: int, changes: int) -> int:
    """Valid rank floor for any matrix differing from a rank-``block_rank``
    matrix in ``changes`` entries: one entry change moves rank by at most 1."""
    if block_rank < 0 or changes < 0:
        raise ValueError("arguments must be non-negative")
    return max(0, block_rank - changes)
