"""Dense exact matrices, the classic +-1 and root-of-unity constructions,
and the block/permutation machinery the lower-bound certificates run on.

Indexing is 0-based everywhere.  Matrices are immutable after construction
and every operation returns a fresh value.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldMismatchError, ResourceLimitError
from .scalars import (
    DEFAULT_TOLERANCE,
    Cyclotomic,
    scalar_kind,
    scalars_equal,
)

# Hard cap on generated matrix side; keeps desk-scale memory honest.
MAX_SIDE = 2**13


def _unify_kind(kind_a, order_a, kind_b, order_b):
    """Common entry domain for two matrices, or raise.

    Exact kinds promote along int -> rat -> cyclo (orders merge to the
    larger, legal because both are powers of two).  Approximate entries only
    combine with approximate entries.
    """
    if kind_a == "approx" or kind_b == "approx":
        if kind_a != kind_b:
            raise FieldMismatchError(f"cannot mix {kind_a} and {kind_b} entries")
        return "approx", None
    if kind_a == "cyclo" or kind_b == "cyclo":
        if kind_a == kind_b and order_a != order_b:
            order = max(order_a, order_b)
            if order % min(order_a, order_b) != 0:
                raise FieldMismatchError(
                    f"incompatible cyclotomic orders {order_a} and {order_b}"
                )
            return "cyclo", order
        return "cyclo", order_a if kind_a == "cyclo" else order_b
    if kind_a == "rat" or kind_b == "rat":
        return "rat", None
    return "int", None


def _coerce_entry(value, kind, order):
    """Coerce a scalar into the given entry domain (may raise)."""
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise FieldMismatchError(f"expected integer entry, got {value!r}")
        return value
    if kind == "rat":
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int) and not isinstance(value, bool):
            return Fraction(value)
        raise FieldMismatchError(f"expected rational entry, got {value!r}")
    if kind == "cyclo":
        if isinstance(value, Cyclotomic):
            return value.promote(order) if value.order != order else value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return Cyclotomic.from_rational(order, value)
        raise FieldMismatchError(f"expected cyclotomic entry, got {value!r}")
    if kind == "approx":
        if isinstance(value, (complex, float, int)) and not isinstance(value, bool):
            return complex(value)
        raise FieldMismatchError(f"expected numeric entry, got {value!r}")
    raise ValueError(f"unknown entry kind {kind!r}")


class Matrix:
    """Immutable dense matrix with a uniform entry domain.

    ``kind`` is one of ``int``, ``rat``, ``cyclo``, ``approx``; cyclotomic
    matrices additionally carry the shared ``order``.
    """

    __slots__ = ("rows", "cols", "kind", "order", "_entries")

    def __init__(self, rows: int, cols: int, entries, kind: str | None = None, order: int | None = None):
        entries = list(entries)
        if rows <= 0 or cols <= 0:
            raise ValueError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        if kind is None:
            kind, order = _infer_kind(entries)
        if kind == "cyclo" and order is None:
            orders = {v.order for v in entries if isinstance(v, Cyclotomic)}
            if not orders:
                raise ValueError("cyclo matrices need an explicit order")
            order = max(orders)
        entries = [_coerce_entry(v, kind, order) for v in entries]
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "order", order if kind == "cyclo" else None)
        object.__setattr__(self, "_entries", tuple(entries))

    def __setattr__(self, name, value):
        raise AttributeError("Matrix values are immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, row_lists, kind: str | None = None, order: int | None = None) -> "Matrix":
        row_lists = [list(r) for r in row_lists]
        rows = len(row_lists)
        cols = len(row_lists[0]) if rows else 0
        if any(len(r) != cols for r in row_lists):
            raise ValueError("ragged rows")
        flat = [v for r in row_lists for v in r]
        return cls(rows, cols, flat, kind=kind, order=order)

    @classmethod
    def build(cls, rows: int, cols: int, fn, kind: str | None = None, order: int | None = None) -> "Matrix":
        flat = [fn(i, j) for i in range(rows) for j in range(cols)]
        return cls(rows, cols, flat, kind=kind, order=order)

    @classmethod
    def identity(cls, n: int, kind: str = "int", order: int | None = None) -> "Matrix":
        return cls.build(n, n, lambda i, j: 1 if i == j else 0, kind=kind, order=order)

    # -- access ------------------------------------------------------------

    def __getitem__(self, pos):
        i, j = pos
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) out of range for {self.rows}x{self.cols}")
        return self._entries[i * self.cols + j]

    def row_values(self, i: int):
        return self._entries[i * self.cols : (i + 1) * self.cols]

    def entries(self):
        return self._entries

    def to_lists(self):
        return [list(self.row_values(i)) for i in range(self.rows)]

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- derived matrices --------------------------------------------------

    def transpose(self) -> "Matrix":
        return Matrix.build(
            self.cols, self.rows, lambda i, j: self[j, i], kind=self.kind, order=self.order
        )

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions do not match")
        kind, order = _unify_kind(self.kind, self.order, other.kind, other.order)
        a = self.to_lists()
        b = other.to_lists()
        out = []
        for i in range(self.rows):
            arow = a[i]
            for j in range(other.cols):
                acc = arow[0] * b[0][j]
                for k in range(1, self.cols):
                    acc = acc + arow[k] * b[k][j]
                out.append(acc)
        return Matrix(self.rows, other.cols, out, kind=kind, order=order)

    def __matmul__(self, other):
        return self.matmul(other)

    def scale(self, factor) -> "Matrix":
        return Matrix(
            self.rows,
            self.cols,
            [factor * v for v in self._entries],
            kind=None,
        )

    def __neg__(self) -> "Matrix":
        return Matrix(
            self.rows, self.cols, [-v for v in self._entries], kind=self.kind, order=self.order
        )

    def to_kind(self, kind: str, order: int | None = None) -> "Matrix":
        """Re-express entries in a wider domain."""
        if kind == self.kind and (kind != "cyclo" or order in (None, self.order)):
            return self
        if kind == "approx":
            from .scalars import numeric_value

            return Matrix(
                self.rows, self.cols, [numeric_value(v) for v in self._entries], kind="approx"
            )
        return Matrix(self.rows, self.cols, list(self._entries), kind=kind, order=order)

    def to_approx(self) -> "Matrix":
        return self.to_kind("approx")

    def __eq__(self, other):
        if isinstance(other, SignMatrix):
            other = other.to_matrix()
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return all(a == b for a, b in zip(self._entries, other._entries))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} {self.kind})"


def _infer_kind(entries):
    kinds = {scalar_kind(v) for v in entries}
    if "approx" in kinds:
        if "cyclo" in kinds:
            raise FieldMismatchError("cannot mix cyclotomic and approximate entries")
        return "approx", None
    if "cyclo" in kinds:
        orders = {v.order for v in entries if isinstance(v, Cyclotomic)}
        order = max(orders)
        if any(order % o for o in orders):
            raise FieldMismatchError(f"incompatible cyclotomic orders {sorted(orders)}")
        return "cyclo", order
    if "rat" in kinds:
        return "rat", None
    return "int", None


class SignMatrix:
    """Square +-1 matrix packed one bit per entry (bit set means -1)."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: int):
        if n <= 0:
            raise ValueError("side must be positive")
        if bits < 0 or bits >> (n * n):
            raise ValueError("bit pattern does not fit an n*n matrix")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("SignMatrix values are immutable")

    @classmethod
    def from_rows(cls, row_lists) -> "SignMatrix":
        n = len(row_lists)
        bits = 0
        for i, row in enumerate(row_lists):
            if len(row) != n:
                raise ValueError("sign matrices are square")
            for j, v in enumerate(row):
                if v == -1:
                    bits |= 1 << (i * n + j)
                elif v != 1:
                    raise ValueError(f"sign entries must be +-1, got {v!r}")
        return cls(n, bits)

    @classmethod
    def from_matrix(cls, m: Matrix) -> "SignMatrix":
        if not m.is_square():
            raise ValueError("sign matrices are square")
        return cls.from_rows(m.to_lists())

    def __getitem__(self, pos):
        i, j = pos
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"entry ({i}, {j}) out of range for side {self.n}")
        return -1 if (self.bits >> (i * self.n + j)) & 1 else 1

    def row_bits(self, i: int) -> int:
        return (self.bits >> (i * self.n)) & ((1 << self.n) - 1)

    def to_matrix(self) -> Matrix:
        return Matrix.build(self.n, self.n, lambda i, j: self[i, j], kind="int")

    def sub(self, grid_i: int, grid_j: int, size: int) -> "SignMatrix":
        """Aligned size x size block at grid position (grid_i, grid_j)."""
        if self.n % size != 0:
            raise ValueError(f"block size {size} does not divide side {self.n}")
        grid = self.n // size
        if not (0 <= grid_i < grid and 0 <= grid_j < grid):
            raise ValueError(f"grid position ({grid_i}, {grid_j}) out of range")
        bits = 0
        mask = (1 << size) - 1
        for a in range(size):
            row = (self.row_bits(grid_i * size + a) >> (grid_j * size)) & mask
            bits |= row << (a * size)
        return SignMatrix(size, bits)

    def __neg__(self) -> "SignMatrix":
        return SignMatrix(self.n, self.bits ^ ((1 << (self.n * self.n)) - 1))

    def transpose(self) -> "SignMatrix":
        bits = 0
        for i in range(self.n):
            for j in range(self.n):
                if (self.bits >> (i * self.n + j)) & 1:
                    bits |= 1 << (j * self.n + i)
        return SignMatrix(self.n, bits)

    def __eq__(self, other):
        if isinstance(other, Matrix):
            return self.to_matrix() == other
        if not isinstance(other, SignMatrix):
            return NotImplemented
        return self.n == other.n and self.bits == other.bits

    def __hash__(self):
        return hash((self.n, self.bits))

    def __repr__(self):
        return f"SignMatrix({self.n}x{self.n})"


@dataclass(frozen=True)
class Perturbation:
    """Sparse set of entry changes; positions are distinct, 0-based.

    ``weight`` counts listed changes; the number of entries that actually
    differ from the base matrix is measured by :func:`weight_diff`.
    """

    changes: tuple

    def __init__(self, changes):
        normalized = []
        seen = set()
        for row, col, value in changes:
            if (row, col) in seen:
                raise ValueError(f"duplicate perturbation position ({row}, {col})")
            seen.add((row, col))
            normalized.append((int(row), int(col), value))
        normalized.sort(key=lambda c: (c[0], c[1]))
        object.__setattr__(self, "changes", tuple(normalized))

    @property
    def weight(self) -> int:
        return len(self.changes)

    def positions(self):
        return [(r, c) for r, c, _ in self.changes]

    @classmethod
    def empty(cls) -> "Perturbation":
        return cls(())


@dataclass(frozen=True)
class BlockPartition:
    """Uniform division of an n x n matrix into an aligned square grid."""

    n: int
    block_size: int
    grid_side: int

    @classmethod
    def of(cls, n: int, block_size: int) -> "BlockPartition":
        if block_size <= 0 or n % block_size != 0:
            raise ValueError(f"block size {block_size} does not divide side {n}")
        return cls(n=n, block_size=block_size, grid_side=n // block_size)

    @classmethod
    def for_target_rank(cls, n: int, r: int) -> "BlockPartition":
        """Blocks of side 2r, the division the counting argument uses."""
        if r <= 0:
            raise ValueError("target rank must be positive")
        return cls.of(n, 2 * r)

    def block_index(self, row: int, col: int):
        return row // self.block_size, col // self.block_size

    def iter_blocks(self):
        for i in range(self.grid_side):
            for j in range(self.grid_side):
                yield i, j


# -- constructions ---------------------------------------------------------


def kronecker(a, b) -> Matrix:
    """Kronecker product laid out as p x q blocks with block (k, l) equal
    to b[k, l] * A, for A of size m x n and B of size p x q.

    Note the block scalars come from the *second* operand, which is the
    transpose of the layout many texts use; with the symmetric 2x2 seed the
    iterated construction below is unaffected.
    """
    if isinstance(a, SignMatrix):
        a = a.to_matrix()
    if isinstance(b, SignMatrix):
        b = b.to_matrix()
    kind, order = _unify_kind(a.kind, a.order, b.kind, b.order)
    m, n = a.rows, a.cols
    p, q = b.rows, b.cols
    out = [None] * (m * p * n * q)
    width = n * q
    for k in range(p):
        for l in range(q):
            factor = b[k, l]
            for i in range(m):
                base = (k * m + i) * width + l * n
                arow = a.row_values(i)
                for j in range(n):
                    out[base + j] = factor * arow[j]
    return Matrix(m * p, n * q, out, kind=kind, order=order)


def sylvester(k: int) -> SignMatrix:
    """The +-1 matrix of side 2^k obtained by k-fold Kronecker iteration of
    the 2x2 seed [[+, +], [+, -]]; k = 0 gives the 1x1 matrix [+]."""
    if k < 0:
        raise ValueError("iteration count must be non-negative")
    if 2**k > MAX_SIDE:
        raise ResourceLimitError(f"side 2^{k} exceeds the desk-scale cap of {MAX_SIDE}")
    n = 1
    rows = [0]  # per-row bit patterns, bit set means -1
    for _ in range(k):
        mask = (1 << n) - 1
        top = [r | (r << n) for r in rows]
        bottom = [r | ((r ^ mask) << n) for r in rows]
        rows = top + bottom
        n *= 2
    bits = 0
    for i, r in enumerate(rows):
        bits |= r << (i * n)
    return SignMatrix(n, bits)


def dft(n: int, approximate: bool = False) -> Matrix:
    """Fourier matrix with entry (j, k) equal to w^(j*k) for 0-based
    indices and w = exp(2*pi*i/n).

    Exact mode stores cyclotomic entries and requires n to be a power of
    two (n >= 2); approximate mode allows any n >= 1.
    """
    if approximate:
        if n < 1:
            raise ValueError("side must be positive")
        w = cmath.exp(2j * cmath.pi / n)
        return Matrix.build(n, n, lambda i, j: w ** ((i * j) % n), kind="approx")
    if n < 2 or n & (n - 1):
        raise ValueError(f"exact mode needs a power-of-two side >= 2, got {n}")
    if n > MAX_SIDE:
        raise ResourceLimitError(f"side {n} exceeds the desk-scale cap of {MAX_SIDE}")
    powers = [Cyclotomic.root_power(n, e) for e in range(n)]
    return Matrix.build(n, n, lambda i, j: powers[(i * j) % n], kind="cyclo", order=n)


def is_hadamard(m) -> bool:
    """True iff the matrix is square with +-1 entries and M * M^T = n * I
    exactly."""
    if isinstance(m, SignMatrix):
        n = m.n
        if n % 2 and n > 1:
            return False
        half = n // 2
        return all(
            bin(m.row_bits(i) ^ m.row_bits(j)).count("1") == half
            for i in range(n)
            for j in range(i + 1, n)
        )
    if not m.is_square() or m.kind not in ("int", "rat"):
        return False
    if any(v != 1 and v != -1 for v in m.entries()):
        return False
    n = m.rows
    product = m.matmul(m.transpose())
    return product == Matrix.build(n, n, lambda i, j: n if i == j else 0, kind=m.kind)


# -- permutations ----------------------------------------------------------


def permute_columns(m, perm):
    """Reorder columns: result column j is source column perm[j]."""
    perm = list(perm)
    if isinstance(m, SignMatrix):
        if sorted(perm) != list(range(m.n)):
            raise ValueError("not a permutation of the column indices")
        bits = 0
        for i in range(m.n):
            row = m.row_bits(i)
            for j, src in enumerate(perm):
                if (row >> src) & 1:
                    bits |= 1 << (i * m.n + j)
        return SignMatrix(m.n, bits)
    if sorted(perm) != list(range(m.cols)):
        raise ValueError("not a permutation of the column indices")
    return Matrix.build(
        m.rows, m.cols, lambda i, j: m[i, perm[j]], kind=m.kind, order=m.order
    )


def evens_first_permutation(cols: int):
    if cols % 2:
        raise ValueError(f"need an even number of columns, got {cols}")
    return list(range(0, cols, 2)) + list(range(1, cols, 2))


def evens_first(m):
    """Move the even-indexed (0-based) columns in front, keeping relative
    order within each half."""
    cols = m.n if isinstance(m, SignMatrix) else m.cols
    return permute_columns(m, evens_first_permutation(cols))


def bit_reversal_permutation(cols: int):
    """Permutation sending position j to the column whose index is j with
    its bits reversed; equals recursively re-applying evens_first to each
    half."""
    if cols <= 0 or cols & (cols - 1):
        raise ValueError(f"need a power-of-two number of columns, got {cols}")
    width = cols.bit_length() - 1
    perm = []
    for j in range(cols):
        rev = 0
        for b in range(width):
            if (j >> b) & 1:
                rev |= 1 << (width - 1 - b)
        perm.append(rev)
    return perm


def bit_reversal_columns(m):
    cols = m.n if isinstance(m, SignMatrix) else m.cols
    return permute_columns(m, bit_reversal_permutation(cols))


# -- blocks and perturbations ---------------------------------------------


def block(m, grid_i: int, grid_j: int, size: int):
    """Aligned contiguous size x size submatrix at grid position
    (grid_i, grid_j)."""
    if isinstance(m, SignMatrix):
        return m.sub(grid_i, grid_j, size)
    if size <= 0 or m.rows % size or m.cols % size:
        raise ValueError(f"block size {size} does not divide {m.rows}x{m.cols}")
    if not (0 <= grid_i < m.rows // size and 0 <= grid_j < m.cols // size):
        raise ValueError(f"grid position ({grid_i}, {grid_j}) out of range")
    return Matrix.build(
        size,
        size,
        lambda a, b: m[grid_i * size + a, grid_j * size + b],
        kind=m.kind,
        order=m.order,
    )


def apply_perturbation(m, p: Perturbation) -> Matrix:
    """Copy of the matrix with the listed entries replaced.

    The entry domain widens if a change value needs it (an integer matrix
    with a rational change comes back rational); approximate and exact
    values never mix.
    """
    if isinstance(m, SignMatrix):
        m = m.to_matrix()
    kind, order = m.kind, m.order
    for row, col, value in p.changes:
        if not (0 <= row < m.rows and 0 <= col < m.cols):
            raise ValueError(f"perturbation position ({row}, {col}) out of bounds")
        vk = scalar_kind(value)
        vo = value.order if isinstance(value, Cyclotomic) else None
        kind, order = _unify_kind(kind, order, vk, vo)
    entries = list(m.entries())
    for row, col, value in p.changes:
        entries[row * m.cols + col] = value
    return Matrix(m.rows, m.cols, entries, kind=kind, order=order)


def weight_diff(a, b, tol: float = DEFAULT_TOLERANCE) -> int:
    """Number of positions where the two matrices differ (exact comparison;
    ``tol``-based for approximate entries)."""
    if isinstance(a, SignMatrix):
        a = a.to_matrix()
    if isinstance(b, SignMatrix):
        b = b.to_matrix()
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise ValueError(f"dimension mismatch: {a.rows}x{a.cols} vs {b.rows}x{b.cols}")
    if (a.kind == "approx") != (b.kind == "approx"):
        raise FieldMismatchError("cannot compare approximate with exact entries")
    return sum(
        1 for x, y in zip(a.entries(), b.entries()) if not scalars_equal(x, y, tol)
    )
