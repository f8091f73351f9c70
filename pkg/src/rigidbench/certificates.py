"""Machine-checkable lower bounds on matrix rigidity.

Two certificate kinds:

* ``Trivial`` -- for a full-rank n x n matrix, rigidity at target rank r is
  at least n - r, because changing one entry moves the rank by at most 1.
* ``FullRankPartition`` -- divide the matrix (after an optional column
  permutation) into an aligned grid of 2r x 2r blocks and verify every
  block has full rank 2r.  Any perturbation of weight below
  (n/2r)^2 * r = n^2/(4r) must, by counting, leave some block with fewer
  than r changes; that block then has rank above 2r - r = r, and so does
  the whole matrix.  The refuter makes the counting step constructive by
  exhibiting the lightly-touched block.

Column permutations are sound to record in a certificate because an
entry-wise bijection preserves both the weight of a difference and the
rank of every candidate matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CertificateError,
    CertificateFailedError,
    CertificateInapplicableError,
    CertificateMismatchError,
    RefutationNotGuaranteedError,
)
from .formats import matrix_digest
from .matrices import (
    Matrix,
    SignMatrix,
    apply_perturbation,
    bit_reversal_permutation,
    block,
    dft,
    evens_first,
    permute_columns,
)
from .rank import exact_rank
from .scalars import Cyclotomic, format_scalar_token, scalars_equal

TRIVIAL = "Trivial"
FULL_RANK_PARTITION = "FullRankPartition"

IDENTITY = "identity"
BIT_REVERSAL = "bit-reversal"
PERMUTATIONS = (IDENTITY, BIT_REVERSAL)


@dataclass(frozen=True)
class LowerBoundCertificate:
    """A verified claim that rigidity at target rank ``r`` is >= ``bound``."""

    matrix_digest: str
    n: int
    r: int
    bound: int
    kind: str
    permutation: str | None = None
    block_size: int | None = None
    grid_side: int | None = None
    blocks: tuple = ()

    def to_json_dict(self) -> dict:
        doc = {
            "matrixDigest": self.matrix_digest,
            "n": self.n,
            "r": self.r,
            "kind": self.kind,
            "bound": self.bound,
            "permutation": self.permutation,
            "blocks": [{"i": i, "j": j, "rank": rk} for i, j, rk in self.blocks],
        }
        if self.kind == FULL_RANK_PARTITION:
            doc["blockSize"] = self.block_size
            doc["gridSide"] = self.grid_side
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "LowerBoundCertificate":
        return cls(
            matrix_digest=doc["matrixDigest"],
            n=doc["n"],
            r=doc["r"],
            bound=doc["bound"],
            kind=doc["kind"],
            permutation=doc.get("permutation"),
            block_size=doc.get("blockSize"),
            grid_side=doc.get("gridSide"),
            blocks=tuple((b["i"], b["j"], b["rank"]) for b in doc.get("blocks", ())),
        )


@dataclass(frozen=True)
class RefutationWitness:
    """The lightly-touched block showing a perturbation cannot reach the
    target rank: its change count keeps the block rank above r."""

    block_row: int
    block_col: int
    changes_in_block: int
    claimed_rank_floor: int
    perturbation_weight: int
    perturbed_rank: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "blockRow": self.block_row,
            "blockCol": self.block_col,
            "changesInBlock": self.changes_in_block,
            "claimedRankFloor": self.claimed_rank_floor,
            "perturbationWeight": self.perturbation_weight,
            "perturbedRank": self.perturbed_rank,
        }


def _require_square_exact(m):
    if isinstance(m, SignMatrix):
        return m.n
    if not m.is_square():
        raise ValueError(f"certificates need a square matrix, got {m.rows}x{m.cols}")
    if m.kind == "approx":
        raise TypeError("certificates require exact entries")
    return m.rows


def trivial_lower_bound(m, r: int) -> LowerBoundCertificate:
    """Certificate with bound n - r, applicable only to full-rank matrices."""
    n = _require_square_exact(m)
    if not 0 <= r <= n:
        raise ValueError(f"target rank must be in [0, {n}], got {r}")
    rank = exact_rank(m)
    if rank < n:
        raise CertificateInapplicableError(
            f"matrix has rank {rank} < {n}; the n-r bound needs full rank"
        )
    return LowerBoundCertificate(
        matrix_digest=matrix_digest(m), n=n, r=r, bound=n - r, kind=TRIVIAL
    )


def sylvester_bound_value(n: int, r: int) -> int:
    """The certified bound n^2/(4r) for the iterated +-1 construction;
    preconditions make it an exact integer."""
    if n < 2 or n & (n - 1):
        raise ValueError(f"side n={n} must be a power of two >= 2")
    if r < 1 or r & (r - 1):
        raise ValueError(f"target rank r={r} must be a power of two >= 1")
    if 2 * r > n:
        raise ValueError(f"target rank r={r} must satisfy r <= n/2 = {n // 2}")
    return (n * n) // (4 * r)


def _column_permutation(name: str, n: int):
    if name == IDENTITY:
        return list(range(n))
    if name == BIT_REVERSAL:
        return bit_reversal_permutation(n)
    raise ValueError(f"unknown column permutation {name!r}; expected one of {PERMUTATIONS}")


def full_rank_partition_certificate(
    m, r: int, col_perm: str = IDENTITY
) -> LowerBoundCertificate:
    """Verify that every aligned 2r x 2r block (after ``col_perm``) has full
    rank, certifying the bound (n/2r)^2 * r."""
    n = _require_square_exact(m)
    if r < 1:
        raise ValueError(f"target rank must be >= 1, got {r}")
    size = 2 * r
    if n % size != 0:
        raise CertificateInapplicableError(f"block size 2r={size} does not divide n={n}")
    perm = _column_permutation(col_perm, n)
    permuted = m if col_perm == IDENTITY else permute_columns(m, perm)
    grid = n // size
    blocks = []
    for i in range(grid):
        for j in range(grid):
            rk = exact_rank(block(permuted, i, j, size))
            if rk < size:
                raise CertificateFailedError(
                    f"block ({i}, {j}) has rank {rk} < {size} under {col_perm} ordering"
                )
            blocks.append((i, j, rk))
    return LowerBoundCertificate(
        matrix_digest=matrix_digest(m),
        n=n,
        r=r,
        bound=grid * grid * r,
        kind=FULL_RANK_PARTITION,
        permutation=col_perm,
        block_size=size,
        grid_side=grid,
        blocks=tuple(blocks),
    )


def refute_perturbation(m, p, r: int, cert: LowerBoundCertificate) -> RefutationWitness:
    """Exhibit the block with the fewest changes (ties broken row-major) and
    its rank floor 2r - c > r; cross-checks the perturbed matrix's exact
    rank against the target."""
    if cert.kind != FULL_RANK_PARTITION:
        raise CertificateMismatchError("refutation needs a FullRankPartition certificate")
    n = _require_square_exact(m)
    if cert.n != n or cert.r != r or cert.matrix_digest != matrix_digest(m):
        raise CertificateMismatchError("certificate was issued for a different matrix or rank")
    base = m.to_matrix() if isinstance(m, SignMatrix) else m
    perturbed = apply_perturbation(base, p)
    changed = [
        (i, j)
        for i in range(n)
        for j, (x, y) in enumerate(zip(base.row_values(i), perturbed.row_values(i)))
        if not scalars_equal(x, y)
    ]
    weight = len(changed)
    if weight >= cert.bound:
        raise RefutationNotGuaranteedError(
            f"perturbation weight {weight} reaches the certified bound {cert.bound}; "
            "the counting argument does not apply"
        )
    perm = _column_permutation(cert.permutation, n)
    inverse = [0] * n
    for dst, src in enumerate(perm):
        inverse[src] = dst
    size = cert.block_size
    counts = {}
    for i, j in changed:
        key = (i // size, inverse[j] // size)
        counts[key] = counts.get(key, 0) + 1
    best = None
    for bi in range(cert.grid_side):
        for bj in range(cert.grid_side):
            c = counts.get((bi, bj), 0)
            if best is None or c < best[0]:
                best = (c, bi, bj)
    c, bi, bj = best
    assert c < r, "counting argument violated; certificate bookkeeping is broken"
    perturbed_rank = exact_rank(perturbed)
    assert perturbed_rank > r, (
        f"perturbed rank {perturbed_rank} <= {r} contradicts a verified certificate"
    )
    return RefutationWitness(
        block_row=bi,
        block_col=bj,
        changes_in_block=c,
        claimed_rank_floor=2 * r - c,
        perturbation_weight=weight,
        perturbed_rank=perturbed_rank,
    )


def dft_decomposition_mismatch(n: int, exponent_offset: int = 0):
    """First entry where evens-first column reordering of the Fourier matrix
    deviates from the two-by-two block form built from the half-size matrix
    with diagonal scalings +-w^(row + exponent_offset); None if they agree.

    Offset 0 is the convention that actually holds; a nonzero offset is
    useful to demonstrate that shifted-row scalings fail.
    """
    if n < 4 or n & (n - 1):
        raise ValueError(f"need a power-of-two side >= 4, got {n}")
    half = n // 2
    reordered = evens_first(dft(n))
    sub = dft(half)
    row_scalars = [Cyclotomic.root_power(n, a + exponent_offset) for a in range(half)]
    for i in range(n):
        a = i % half
        sign = 1 if i < half else -1
        for j in range(n):
            if j < half:
                want = sub[a, j].promote(n)
            else:
                want = sub[a, j - half].promote(n) * row_scalars[a] * sign
            got = reordered[i, j]
            if got != want:
                return {
                    "row": i,
                    "col": j,
                    "got": format_scalar_token(got),
                    "want": format_scalar_token(want),
                }
    return None


def verify_dft_decomposition(n: int, exponent_offset: int = 0) -> bool:
    """True iff the evens-first reordering of the n x n Fourier matrix equals
    the stacked half-size block form (see :func:`dft_decomposition_mismatch`)."""
    return dft_decomposition_mismatch(n, exponent_offset) is None


_KIND_PREFERENCE = {FULL_RANK_PARTITION: 0, TRIVIAL: 1}
_PERM_PREFERENCE = {IDENTITY: 0, BIT_REVERSAL: 1, None: 2}


def _gather_certificates(m, r: int):
    n = _require_square_exact(m)
    if not 0 <= r <= n:
        raise ValueError(f"target rank must be in [0, {n}], got {r}")
    candidates = []
    failures = []
    try:
        candidates.append(trivial_lower_bound(m, r))
    except CertificateError as exc:
        failures.append(str(exc))
    if r >= 1 and n % (2 * r) == 0:
        perms = [IDENTITY]
        if n & (n - 1) == 0:
            perms.append(BIT_REVERSAL)
        for name in perms:
            try:
                candidates.append(full_rank_partition_certificate(m, r, name))
            except CertificateError as exc:
                failures.append(str(exc))
    else:
        failures.append(f"block size 2r={2 * r} does not divide n={n}")
    candidates.sort(
        key=lambda c: (-c.bound, _KIND_PREFERENCE[c.kind], _PERM_PREFERENCE[c.permutation])
    )
    return candidates, failures


def certificate_candidates(m, r: int):
    """Every certificate that verifies for (m, r), strongest bound first;
    may be empty."""
    return _gather_certificates(m, r)[0]


def best_lower_bound(m, r: int) -> LowerBoundCertificate:
    """Largest verifiable bound among the trivial certificate and the
    partition certificate under both supported column orderings."""
    candidates, failures = _gather_certificates(m, r)
    if not candidates:
        raise CertificateInapplicableError(
            "no certificate applies: " + "; ".join(failures)
        )
    return candidates[0]
