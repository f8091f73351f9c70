import cmath
import random
from fractions import Fraction

import pytest

from rigidbench.errors import FieldMismatchError, ResourceLimitError
from rigidbench.matrices import (
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
from rigidbench.scalars import Cyclotomic

S2_ROWS = ["++", "+-"]
S4_ROWS = ["++++", "+-+-", "++--", "+--+"]


def sign_rows(m: SignMatrix):
    out = []
    for i in range(m.n):
        out.append("".join("+" if m[i, j] == 1 else "-" for j in range(m.n)))
    return out


def test_sylvester_small_displays():
    assert sign_rows(sylvester(0)) == ["+"]
    assert sign_rows(sylvester(1)) == S2_ROWS
    assert sign_rows(sylvester(2)) == S4_ROWS


def test_sylvester_recursion_blocks():
    # S(2n) = [[S, S], [S, -S]] in n-sized blocks
    for k in (2, 3, 4):
        s = sylvester(k)
        half = sylvester(k - 1)
        assert s.sub(0, 0, s.n // 2) == half
        assert s.sub(0, 1, s.n // 2) == half
        assert s.sub(1, 0, s.n // 2) == half
        assert s.sub(1, 1, s.n // 2) == -half


def test_sylvester_guard():
    with pytest.raises(ValueError):
        sylvester(-1)
    with pytest.raises(ResourceLimitError):
        sylvester(14)


def test_kronecker_block_convention():
    # block (k, l) of A x B is b_kl * A
    a = Matrix.from_rows([[1, 2], [3, 4]])
    b = Matrix.from_rows([[0, 5], [6, 7]])
    prod = kronecker(a, b)
    for k in range(2):
        for l in range(2):
            for i in range(2):
                for j in range(2):
                    assert prod[k * 2 + i, l * 2 + j] == b[k, l] * a[i, j]


def test_kronecker_reproduces_sylvester():
    s2 = sylvester(1).to_matrix()
    assert kronecker(s2, s2) == sylvester(2).to_matrix()
    assert kronecker(sylvester(2).to_matrix(), s2) == sylvester(3).to_matrix()


def test_dft_matches_complex_formula():
    for n in (2, 4, 8):
        m = dft(n)
        w = cmath.exp(2j * cmath.pi / n)
        for i in range(n):
            for j in range(n):
                assert cmath.isclose(m[i, j].to_complex(), w ** (i * j), abs_tol=1e-9)


def test_dft_row_one():
    m = dft(4)
    w = Cyclotomic.root(4)
    assert [m[1, j] for j in range(4)] == [w**0, w, w**2, w**3]


def test_dft_approximate():
    m = dft(6, approximate=True)
    assert m.kind == "approx"
    w = cmath.exp(2j * cmath.pi / 6)
    assert cmath.isclose(m[2, 3], w**6, abs_tol=1e-9)


def test_dft_validation():
    with pytest.raises(ValueError):
        dft(6)
    with pytest.raises(ValueError):
        dft(0, approximate=True)


def test_is_hadamard():
    for k in range(1, 5):
        s = sylvester(k)
        assert is_hadamard(s)
        assert is_hadamard(s.to_matrix())
    broken = Matrix.from_rows([[1, 1], [1, 1]])
    assert not is_hadamard(broken)
    assert not is_hadamard(Matrix.from_rows([[1, 2], [1, -1]]))


def test_evens_first_permutation():
    assert evens_first_permutation(8) == [0, 2, 4, 6, 1, 3, 5, 7]
    m = Matrix.from_rows([[0, 1, 2, 3]])
    assert [evens_first(m)[0, j] for j in range(4)] == [0, 2, 1, 3]


def test_bit_reversal_permutation():
    assert bit_reversal_permutation(2) == [0, 1]
    assert bit_reversal_permutation(4) == [0, 2, 1, 3]
    assert bit_reversal_permutation(8) == [0, 4, 2, 6, 1, 5, 3, 7]
    with pytest.raises(ValueError):
        bit_reversal_permutation(6)


def test_bit_reversal_is_iterated_evens_first():
    # applying evens-first recursively on halves equals one bit-reversal
    m = Matrix.from_rows([list(range(8))])
    once = evens_first(m)
    left = Matrix.from_rows([[once[0, j] for j in range(4)]])
    right = Matrix.from_rows([[once[0, j] for j in range(4, 8)]])
    nested = [evens_first(left)[0, j] for j in range(4)] + [
        evens_first(right)[0, j] for j in range(4)
    ]
    assert nested == [bit_reversal_columns(m)[0, j] for j in range(8)]


def test_bit_reversal_involution():
    perm = bit_reversal_permutation(16)
    assert [perm[perm[j]] for j in range(16)] == list(range(16))


def test_permute_columns_identity_and_signmatrix():
    s = sylvester(2)
    assert permute_columns(s, [0, 1, 2, 3]) == s
    swapped = permute_columns(s, [1, 0, 3, 2])
    assert [swapped[1, j] for j in range(4)] == [-1, 1, -1, 1]
    with pytest.raises(ValueError):
        permute_columns(s, [0, 0, 1, 2])


def test_block_partition():
    p = BlockPartition.for_target_rank(8, 2)
    assert (p.block_size, p.grid_side) == (4, 2)
    assert p.block_index(5, 2) == (1, 0)
    assert list(p.iter_blocks()) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    with pytest.raises(ValueError):
        BlockPartition.of(8, 3)


def test_block_extraction():
    s = sylvester(2)
    assert sign_rows(block(s, 1, 1, 2)) == ["--", "-+"]
    m = Matrix.from_rows([[1, 2], [3, 4]])
    assert block(m, 0, 1, 1)[0, 0] == 2


def test_perturbation_normalization():
    p = Perturbation([(1, 0, 5), (0, 1, -2)])
    assert p.weight == 2
    assert p.positions() == [(0, 1), (1, 0)]
    with pytest.raises(ValueError):
        Perturbation([(0, 0, 1), (0, 0, 2)])
    assert Perturbation.empty().weight == 0


def test_apply_perturbation_widens_kind():
    s = sylvester(1)
    out = apply_perturbation(s, Perturbation([(0, 0, Fraction(1, 2))]))
    assert out.kind == "rat"
    assert out[0, 0] == Fraction(1, 2)
    assert out[1, 1] == -1
    with pytest.raises(ValueError):
        apply_perturbation(s, Perturbation([(5, 0, 1)]))
    with pytest.raises(FieldMismatchError):
        apply_perturbation(s, Perturbation([(0, 0, 0.5)]))


def test_weight_diff_exact_and_tolerance():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    b = Matrix.from_rows([[1, 2], [0, 4]])
    assert weight_diff(a, b) == 1
    assert weight_diff(a, a) == 0
    x = Matrix.from_rows([[1.0, 2.0]], kind="approx")
    y = Matrix.from_rows([[1.0 + 1e-12, 2.5]], kind="approx")
    assert weight_diff(x, y) == 1
    with pytest.raises(FieldMismatchError):
        weight_diff(a, a.to_approx())


def test_weight_diff_counts_definition():
    # weight of M - N equals the number of differing positions
    rng = random.Random(3)
    for _ in range(50):
        rows = [[rng.randrange(-2, 3) for _ in range(4)] for _ in range(4)]
        other = [row[:] for row in rows]
        touched = set()
        for _ in range(rng.randrange(6)):
            i, j = rng.randrange(4), rng.randrange(4)
            if other[i][j] == 9:
                continue
            other[i][j] = 9
            touched.add((i, j))
        assert weight_diff(Matrix.from_rows(rows), Matrix.from_rows(other)) == len(touched)


def test_matrix_equality_across_representations():
    assert sylvester(2).to_matrix() == sylvester(2)
    assert sylvester(2) == sylvester(2).to_matrix()
    assert sylvester(2) != sylvester(1)


def test_matmul_and_transpose():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    b = Matrix.from_rows([[0, 1], [1, 0]])
    assert (a @ b).to_lists() == [[2, 1], [4, 3]]
    assert a.transpose().to_lists() == [[1, 3], [2, 4]]
    with pytest.raises(ValueError):
        a @ Matrix.from_rows([[1, 2, 3]])


def test_mixed_kind_matmul_promotes():
    a = Matrix.from_rows([[1, 2]])
    b = Matrix.from_rows([[Fraction(1, 2)], [Fraction(1, 3)]], kind="rat")
    assert (a @ b)[0, 0] == Fraction(7, 6)
    with pytest.raises(FieldMismatchError):
        a @ Matrix.from_rows([[0.5], [0.5]], kind="approx")


def test_signmatrix_round_trip():
    s = sylvester(3)
    again = SignMatrix.from_matrix(s.to_matrix())
    assert again == s
    with pytest.raises(ValueError):
        SignMatrix.from_rows([[1, 0], [1, 1]])
