"""Rigidity from the definition: feasible points of the minimization
min { weight(M - N) : rank(N) <= r }.

Exact values exist only for target rank 1, where feasibility of a fixed
change support reduces to propagating multiplicative constraints through
a bipartite graph (:func:`rank_one_completion`) and the supports can be
enumerated outright on desk-scale matrices.  For general r the module
offers verified upper bounds: every witness it returns has been applied
to the matrix and had its rank re-checked independently of how the
search found it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy

from .certificates import LowerBoundCertificate, certificate_candidates
from .errors import IntervalInversionError, ResourceLimitError
from .matrices import Matrix, Perturbation, SignMatrix, apply_perturbation, weight_diff
from .rank import exact_rank, numerical_rank
from .scalars import (
    DEFAULT_TOLERANCE,
    Cyclotomic,
    format_scalar_token,
    scalar_is_zero,
    scalars_equal,
)

EXACT_VALUE = "ExactValue"
UPPER_BOUND_ONLY = "UpperBoundOnly"

SUPPORT_ENUMERATION = "SupportEnumeration"
SIGN_PATTERN_SCAN = "SignPatternScan"
ALTERNATING_DESCENT = "AlternatingDescent"

_METHOD_PREFERENCE = {SUPPORT_ENUMERATION: 0, SIGN_PATTERN_SCAN: 1, ALTERNATING_DESCENT: 2}

ENUMERATION_MAX_SIDE = 6

_EXHAUSTIVE_WORK_LIMIT = 2_000_000
_PRUNE_MAX_SIDE = 16
_DESCENT_MAX_SIDE = 24
_DESCENT_DENOMINATOR_CAPS = (1, 16)


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a rigidity computation at a fixed target rank.

    ``weight`` and ``witness`` are absent only for the bound-exceeded
    outcome of support enumeration; ``verification`` records whether the
    witness rank was re-checked exactly or at a numerical tolerance.
    """

    target_rank: int
    kind: str
    weight: int | None
    witness: Perturbation | None
    method: str
    verification: str

    def to_json_dict(self) -> dict:
        witness = None
        if self.witness is not None:
            witness = [
                {"row": row, "col": col, "value": format_scalar_token(value)}
                for row, col, value in self.witness.changes
            ]
        return {
            "targetRank": self.target_rank,
            "kind": self.kind,
            "weight": self.weight,
            "witness": witness,
            "method": self.method,
            "verification": self.verification,
        }


def _as_matrix(m) -> Matrix:
    return m.to_matrix() if isinstance(m, SignMatrix) else m


def _field_constants(m: Matrix):
    if m.kind == "cyclo":
        return Cyclotomic.one(m.order), Cyclotomic.zero(m.order)
    return Fraction(1), Fraction(0)


def _lift(value, m: Matrix):
    if m.kind == "cyclo":
        return value
    return Fraction(value)


def rank_one_completion(m, support):
    """Rank <= 1 matrix agreeing with ``m`` outside ``support``, or None.

    A rank-1 matrix is an outer product u v^T, so each constrained nonzero
    entry forces u_i * v_j = m_ij.  Walking the bipartite graph with one
    edge per such entry fixes every factor up to one reference scale per
    connected component; rows and columns touched by no constraint keep
    factor 0.  A final pass over all constrained entries (including zeros,
    which no single edge can express) accepts or rejects the assignment.
    """
    m = _as_matrix(m)
    if m.kind == "approx":
        raise TypeError("rank-one completion requires exact entries")
    in_support = set()
    for i, j in support:
        if not (0 <= i < m.rows and 0 <= j < m.cols):
            raise ValueError(f"support position ({i}, {j}) out of bounds")
        in_support.add((i, j))
    one, zero = _field_constants(m)
    row_edges = [[] for _ in range(m.rows)]
    col_edges = [[] for _ in range(m.cols)]
    for i in range(m.rows):
        for j, value in enumerate(m.row_values(i)):
            if (i, j) in in_support or scalar_is_zero(value):
                continue
            lifted = _lift(value, m)
            row_edges[i].append((j, lifted))
            col_edges[j].append((i, lifted))
    u = [None] * m.rows
    v = [None] * m.cols
    # Every component with an edge contains a row vertex, so seeding from
    # rows alone reaches all constrained vertices.
    for start in range(m.rows):
        if u[start] is not None or not row_edges[start]:
            continue
        u[start] = one
        queue = deque([(True, start)])
        while queue:
            is_row, idx = queue.popleft()
            if is_row:
                for j, value in row_edges[idx]:
                    if v[j] is None:
                        v[j] = value / u[idx]
                        queue.append((False, j))
            else:
                for i, value in col_edges[idx]:
                    if u[i] is None:
                        u[i] = value / v[idx]
                        queue.append((True, i))
    u = [zero if f is None else f for f in u]
    v = [zero if f is None else f for f in v]
    for i in range(m.rows):
        for j, value in enumerate(m.row_values(i)):
            if (i, j) not in in_support and u[i] * v[j] != _lift(value, m):
                return None
    kind = "cyclo" if m.kind == "cyclo" else "rat"
    return Matrix.build(m.rows, m.cols, lambda i, j: u[i] * v[j], kind=kind, order=m.order)


def exact_rigidity_rank1(m, max_weight: int) -> SearchResult:
    """Exact rigidity at target rank 1 by enumerating change supports in
    order of size (lexicographic within a size); stops at ``max_weight``."""
    m = _as_matrix(m)
    if m.kind == "approx":
        raise TypeError("exact search requires exact entries")
    if max(m.rows, m.cols) > ENUMERATION_MAX_SIDE:
        raise ResourceLimitError(
            f"support enumeration is capped at side {ENUMERATION_MAX_SIDE}, "
            f"got {m.rows}x{m.cols}"
        )
    if max_weight < 0:
        raise ValueError("max weight must be >= 0")
    cells = [(i, j) for i in range(m.rows) for j in range(m.cols)]
    for w in range(min(max_weight, len(cells)) + 1):
        for support in combinations(cells, w):
            completion = rank_one_completion(m, support)
            if completion is None:
                continue
            changes = [(i, j, completion[i, j]) for i, j in support]
            witness = Perturbation(changes)
            # At the first feasible size every support position really
            # changes; otherwise the same completion would have been
            # feasible one size earlier.
            assert all(
                completion[i, j] != _lift(m[i, j], m) for i, j in support
            ), "completion agrees on a support position despite minimality"
            assert exact_rank(completion) <= 1
            return SearchResult(
                target_rank=1,
                kind=EXACT_VALUE,
                weight=w,
                witness=witness,
                method=SUPPORT_ENUMERATION,
                verification="exact",
            )
    return SearchResult(
        target_rank=1,
        kind=UPPER_BOUND_ONLY,
        weight=None,
        witness=None,
        method=SUPPORT_ENUMERATION,
        verification="exact",
    )


def _is_pm_one(m: Matrix) -> bool:
    if m.kind not in ("int", "rat", "approx"):
        return False
    return all(value == 1 or value == -1 for value in m.entries())


def _sign_options(m: Matrix):
    if m.kind == "cyclo":
        return tuple(Cyclotomic.root_power(m.order, t) for t in range(m.order))
    return (1, -1)


def _nonzero_positions(row_values):
    return [j for j, value in enumerate(row_values) if not scalar_is_zero(value)]


def _greedy_spread_rows(grid, rows: int, r: int):
    """Deterministic farthest-point pick of r representative rows."""
    chosen = [0]
    while len(chosen) < r:
        best = None
        for i in range(rows):
            if i in chosen:
                continue
            nearest = min(
                sum(1 for a, b in zip(grid[i], grid[k]) if a != b) for k in chosen
            )
            if best is None or nearest > best[0]:
                best = (nearest, i)
        chosen.append(best[1])
    return chosen


def _row_replacement_candidate(m: Matrix, r: int):
    """Keep r rows and rewrite every other row as a signed copy of a kept
    row (or the zero row), whichever disagrees least; the result has rank
    at most r by construction."""
    rows, cols = m.rows, m.cols
    if r >= rows:
        return None
    grid = [list(m.row_values(i)) for i in range(rows)]
    signs = _sign_options(m)
    scaled = {}

    def scaled_row(k: int, s: int):
        if (k, s) not in scaled:
            scaled[(k, s)] = [signs[s] * value for value in grid[k]]
        return scaled[(k, s)]

    subsets = comb(rows, r)
    work = subsets * (rows - r) * r * len(signs) * cols
    if work <= _EXHAUSTIVE_WORK_LIMIT:
        kept_sets = combinations(range(rows), r)
    else:
        kept_sets = [tuple(range(r)), tuple(sorted(_greedy_spread_rows(grid, rows, r)))]
    best = None
    for kept in kept_sets:
        total = 0
        plan = {}
        for i in range(rows):
            if i in kept:
                continue
            zero_cost = len(_nonzero_positions(grid[i]))
            row_best = (zero_cost, None, None)
            for k in kept:
                for s in range(len(signs)):
                    cost = sum(
                        1 for a, b in zip(grid[i], scaled_row(k, s)) if a != b
                    )
                    if cost < row_best[0]:
                        row_best = (cost, k, s)
            total += row_best[0]
            plan[i] = row_best
            if best is not None and total >= best[0]:
                break
        else:
            if best is None or total < best[0]:
                best = (total, plan)
    if best is None:
        return None
    changes = []
    for i, (_, k, s) in best[1].items():
        if k is None:
            for j in _nonzero_positions(grid[i]):
                changes.append((i, j, _zero_like(m)))
        else:
            replacement_row = scaled_row(k, s)
            for j in range(cols):
                if grid[i][j] != replacement_row[j]:
                    changes.append((i, j, replacement_row[j]))
    return Perturbation(changes), SIGN_PATTERN_SCAN


def _zero_like(m: Matrix):
    if m.kind == "cyclo":
        return Cyclotomic.zero(m.order)
    if m.kind == "approx":
        return 0.0
    return 0


def _sign_vector_scan(m: Matrix):
    """Best rank-1 approximation of a +-1 matrix by an outer product of
    sign vectors; exhaustive over the 2^rows row patterns, with the column
    pattern chosen per column."""
    rows, cols = m.rows, m.cols
    col_bits = [
        sum(1 << i for i in range(rows) if m[i, j] == -1) for j in range(cols)
    ]
    best_weight = rows * cols + 1
    best_mask = 0
    for mask in range(1 << rows):
        weight = 0
        for bits in col_bits:
            flipped = bin(bits ^ mask).count("1")
            weight += min(flipped, rows - flipped)
            if weight >= best_weight:
                break
        if weight < best_weight:
            best_weight = weight
            best_mask = mask
    s = [-1 if best_mask >> i & 1 else 1 for i in range(rows)]
    lift = float if m.kind == "approx" else int
    changes = []
    for j, bits in enumerate(col_bits):
        flipped = bin(bits ^ best_mask).count("1")
        t = 1 if flipped <= rows - flipped else -1
        for i in range(rows):
            if m[i, j] != s[i] * t:
                changes.append((i, j, lift(s[i] * t)))
    return Perturbation(changes), SIGN_PATTERN_SCAN


def _als_factors(values, r: int, budget: int, seed: int):
    a = numpy.array(values)
    rng = numpy.random.default_rng(seed)
    u = rng.standard_normal((a.shape[0], r))
    if numpy.iscomplexobj(a):
        u = u.astype(complex)
    for _ in range(max(budget, 1)):
        v = numpy.linalg.lstsq(u, a, rcond=None)[0]
        u = numpy.linalg.lstsq(v.conj().T, a.conj().T, rcond=None)[0].conj().T
    return u, v


def _alternating_descent_exact(m: Matrix, r: int, budget: int, seed: int):
    """Numerical rank-r fit, factors rounded to small rationals so the
    product has rank <= r exactly, then reverted entry by entry wherever
    the original value can return without raising the rank past r."""
    if max(m.rows, m.cols) > _DESCENT_MAX_SIDE or budget <= 0:
        return None
    values = [[float(v) for v in m.row_values(i)] for i in range(m.rows)]
    u, v = _als_factors(values, r, budget, seed)
    best = None
    for cap in _DESCENT_DENOMINATOR_CAPS:
        uq = [[Fraction(float(x)).limit_denominator(cap) for x in row] for row in u]
        vq = [[Fraction(float(x)).limit_denominator(cap) for x in row] for row in v]
        fitted = [
            [sum(uq[i][k] * vq[k][j] for k in range(r)) for j in range(m.cols)]
            for i in range(m.rows)
        ]
        if max(m.rows, m.cols) <= _PRUNE_MAX_SIDE:
            for i in range(m.rows):
                for j, value in enumerate(m.row_values(i)):
                    if fitted[i][j] == value:
                        continue
                    kept = fitted[i][j]
                    fitted[i][j] = Fraction(value)
                    if exact_rank(Matrix.from_rows(fitted, kind="rat")) > r:
                        fitted[i][j] = kept
        changes = [
            (i, j, fitted[i][j])
            for i in range(m.rows)
            for j, value in enumerate(m.row_values(i))
            if fitted[i][j] != value
        ]
        if best is None or len(changes) < best.weight:
            best = Perturbation(changes)
    return best, ALTERNATING_DESCENT


def _alternating_descent_numeric(m: Matrix, r: int, budget: int, seed: int, tol: float):
    values = [list(m.row_values(i)) for i in range(m.rows)]
    u, v = _als_factors(values, r, budget, seed)
    fitted = (numpy.asarray(u) @ numpy.asarray(v)).tolist()
    is_complex = any(isinstance(x, complex) for row in fitted for x in row)
    if max(m.rows, m.cols) <= _PRUNE_MAX_SIDE:
        for i in range(m.rows):
            for j, value in enumerate(m.row_values(i)):
                if scalars_equal(value, fitted[i][j], tol):
                    continue
                kept = fitted[i][j]
                fitted[i][j] = value
                if numerical_rank(Matrix.from_rows(fitted, kind="approx"), tol) > r:
                    fitted[i][j] = kept
    changes = []
    for i in range(m.rows):
        for j, value in enumerate(m.row_values(i)):
            if not scalars_equal(value, fitted[i][j], tol):
                new = complex(fitted[i][j]) if is_complex else float(fitted[i][j])
                changes.append((i, j, new))
    return Perturbation(changes), ALTERNATING_DESCENT


def _drop_noop_changes(m: Matrix, witness: Perturbation, tol: float) -> Perturbation:
    """Strip listed changes within tolerance of the original entry so the
    recorded weight matches the tolerance-based difference count."""
    kept = [
        (i, j, value)
        for i, j, value in witness.changes
        if not scalars_equal(m[i, j], value, tol)
    ]
    if len(kept) == len(witness.changes):
        return witness
    return Perturbation(kept)


def _zero_baseline(m: Matrix, tol: float):
    changes = [
        (i, j, _zero_like(m))
        for i in range(m.rows)
        for j, value in enumerate(m.row_values(i))
        if not scalar_is_zero(value, tol)
    ]
    return Perturbation(changes), SIGN_PATTERN_SCAN


def upper_bound_search(
    m, r: int, budget: int = 200, seed: int = 0, tol: float = DEFAULT_TOLERANCE
) -> SearchResult:
    """Lowest-weight verified witness the heuristics can find for reaching
    rank <= r; deterministic for fixed (budget, seed)."""
    m = _as_matrix(m)
    if r < 1:
        raise ValueError(f"target rank must be >= 1, got {r}")
    approximate = m.kind == "approx"
    rank_of = (lambda x: numerical_rank(x, tol)) if approximate else exact_rank
    verification = "numerical" if approximate else "exact"
    if rank_of(m) <= r:
        return SearchResult(
            target_rank=r,
            kind=UPPER_BOUND_ONLY,
            weight=0,
            witness=Perturbation.empty(),
            method=SUPPORT_ENUMERATION,
            verification=verification,
        )
    candidates = [_zero_baseline(m, tol)]
    replacement = _row_replacement_candidate(m, r)
    if replacement is not None:
        candidates.append(replacement)
    if r == 1 and m.rows <= _PRUNE_MAX_SIDE and _is_pm_one(m):
        candidates.append(_sign_vector_scan(m))
    if approximate:
        candidates.append(_alternating_descent_numeric(m, r, budget, seed, tol))
    elif m.kind in ("int", "rat"):
        descent = _alternating_descent_exact(m, r, budget, seed)
        if descent is not None:
            candidates.append(descent)
    best = None
    for witness, method in candidates:
        if approximate:
            witness = _drop_noop_changes(m, witness, tol)
        perturbed = apply_perturbation(m, witness)
        assert rank_of(perturbed) <= r, f"unverified witness from {method}"
        assert weight_diff(m, perturbed, tol) == witness.weight
        key = (witness.weight, _METHOD_PREFERENCE[method])
        if best is None or key < best[0]:
            best = (key, witness, method)
    _, witness, method = best
    return SearchResult(
        target_rank=r,
        kind=UPPER_BOUND_ONLY,
        weight=witness.weight,
        witness=witness,
        method=method,
        verification=verification,
    )


@dataclass(frozen=True)
class CrossValidationReport:
    """Rigidity interval [lower, upper] from the strongest certificate and
    the best search witness, with every pair checked for consistency."""

    target_rank: int
    lower: int
    upper: int
    exact: bool
    certificate: LowerBoundCertificate | None
    search: SearchResult

    def interval(self):
        return (self.lower, self.upper)

    def to_json_dict(self) -> dict:
        return {
            "targetRank": self.target_rank,
            "interval": [self.lower, self.upper],
            "exact": self.exact,
            "certificate": None if self.certificate is None else self.certificate.to_json_dict(),
            "search": self.search.to_json_dict(),
        }


def cross_validate(
    m,
    r: int,
    budget: int = 200,
    seed: int = 0,
    tol: float = DEFAULT_TOLERANCE,
    exact: bool = False,
) -> CrossValidationReport:
    """Run certificates and search on (m, r) and report the rigidity
    interval; any certificate bound above a verified witness weight is a
    fatal implementation bug, never a valid outcome.

    ``exact`` opts into full support enumeration (rank 1, side at most
    ``ENUMERATION_MAX_SIDE``); it is never entered silently because its
    cost is exponential in the first feasible support size.
    """
    work = _as_matrix(m)
    certificates = []
    if work.is_square() and work.kind != "approx" and r <= work.rows:
        certificates = certificate_candidates(m, r)
    if exact:
        if r != 1 or work.kind == "approx" or max(work.rows, work.cols) > ENUMERATION_MAX_SIDE:
            raise ValueError(
                "exact mode needs target rank 1, exact entries, and side at most "
                f"{ENUMERATION_MAX_SIDE}"
            )
        result = exact_rigidity_rank1(m, work.rows * work.cols)
        assert result.kind == EXACT_VALUE, "full-support search cannot be infeasible"
        lower = upper = result.weight
        exact = True
    else:
        result = upper_bound_search(m, r, budget=budget, seed=seed, tol=tol)
        upper = result.weight
        lower = max((c.bound for c in certificates), default=0)
        exact = lower == upper
    for certificate in certificates:
        if certificate.bound > upper:
            raise IntervalInversionError(
                f"{certificate.kind} bound {certificate.bound} exceeds the verified "
                f"upper bound {upper} at target rank {r}"
            )
    best_certificate = certificates[0] if certificates else None
    return CrossValidationReport(
        target_rank=r,
        lower=lower,
        upper=upper,
        exact=exact,
        certificate=best_certificate,
        search=result,
    )
