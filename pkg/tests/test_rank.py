import random
from fractions import Fraction

import pytest

from rigidbench.matrices import Matrix, Perturbation, apply_perturbation, dft, permute_columns, sylvester, weight_diff
from rigidbench.rank import exact_rank, numerical_rank, rank_lower_bound_after_changes
from rigidbench.scalars import Cyclotomic


def random_matrix(rng, rows, cols, pool):
    return Matrix.from_rows([[rng.choice(pool) for _ in range(cols)] for _ in range(rows)])


def test_constructions_have_full_rank():
    for k in range(5):
        s = sylvester(k)
        assert exact_rank(s) == s.n
    for n in (2, 4, 8):
        assert exact_rank(dft(n)) == n


def test_known_deficient_ranks():
    assert exact_rank(Matrix.from_rows([[1, 1], [1, 1]])) == 1
    assert exact_rank(Matrix.from_rows([[0, 0], [0, 0]])) == 0
    assert exact_rank(Matrix.from_rows([[1, 2], [2, 4]])) == 1
    assert exact_rank(Matrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])) == 2
    # rectangular
    assert exact_rank(Matrix.from_rows([[1, 2, 3], [2, 4, 6]])) == 1


def test_rank_of_outer_product_is_one():
    rng = random.Random(7)
    for _ in range(30):
        u = [rng.randrange(-3, 4) for _ in range(5)]
        v = [rng.randrange(-3, 4) for _ in range(5)]
        m = Matrix.from_rows([[a * b for b in v] for a in u])
        assert exact_rank(m) <= 1


def test_cyclotomic_rank():
    w = Cyclotomic.root(4)
    dependent = Matrix.from_rows([[w**0, w], [w**2, w**3]], kind="cyclo", order=4)
    # second row is w^2 times the first
    assert exact_rank(dependent) == 1
    assert exact_rank(dft(4)) == 4


def test_exact_rank_rejects_approx():
    with pytest.raises(TypeError):
        exact_rank(Matrix.from_rows([[0.5]], kind="approx"))


def test_numerical_rank():
    assert numerical_rank(Matrix.from_rows([[1.0, 2.0], [2.0, 4.0]], kind="approx")) == 1
    assert numerical_rank(dft(8, approximate=True)) == 8
    assert numerical_rank(sylvester(3)) == 8
    with pytest.raises(ValueError):
        numerical_rank(sylvester(1), tol=0.0)


def test_numerical_rank_tolerance_cliff():
    m = Matrix.from_rows([[1.0, 0.0], [0.0, 1e-6]], kind="approx")
    assert numerical_rank(m, tol=1e-9) == 2
    assert numerical_rank(m, tol=1e-3) == 1


def test_bareiss_field_numeric_agree():
    rng = random.Random(123)
    pool_int = list(range(-4, 5))
    pool_rat = [Fraction(n, d) for n in range(-3, 4) for d in (1, 2, 3)]
    for trial in range(300):
        rows = rng.randrange(1, 7)
        cols = rng.randrange(1, 7)
        if trial % 2:
            m = random_matrix(rng, rows, cols, pool_int)
            r = exact_rank(m)
            assert r == exact_rank(m.to_kind("rat"))
        else:
            m = random_matrix(rng, rows, cols, pool_rat)
            r = exact_rank(m)
        assert r == numerical_rank(m.to_approx())


def test_rank_drop_bounded_by_weight():
    rng = random.Random(42)
    for _ in range(200):
        m = random_matrix(rng, 5, 5, list(range(-3, 4)))
        changes = []
        used = set()
        for _ in range(rng.randrange(1, 6)):
            i, j = rng.randrange(5), rng.randrange(5)
            if (i, j) in used:
                continue
            used.add((i, j))
            changes.append((i, j, rng.randrange(-3, 4)))
        perturbed = apply_perturbation(m, Perturbation(changes))
        drop = abs(exact_rank(m) - exact_rank(perturbed))
        assert drop <= weight_diff(m, perturbed)


def test_rank_permutation_invariance():
    rng = random.Random(9)
    for _ in range(100):
        m = random_matrix(rng, 4, 6, list(range(-2, 3)))
        perm = list(range(6))
        rng.shuffle(perm)
        assert exact_rank(permute_columns(m, perm)) == exact_rank(m)


def test_rank_submatrix_monotone():
    rng = random.Random(10)
    for _ in range(100):
        m = random_matrix(rng, 5, 5, list(range(-2, 3)))
        keep_rows = sorted(rng.sample(range(5), rng.randrange(1, 6)))
        keep_cols = sorted(rng.sample(range(5), rng.randrange(1, 6)))
        sub = Matrix.from_rows([[m[i, j] for j in keep_cols] for i in keep_rows])
        assert exact_rank(sub) <= exact_rank(m)


def test_rank_lower_bound_after_changes():
    assert rank_lower_bound_after_changes(4, 1) == 3
    assert rank_lower_bound_after_changes(2, 5) == 0
    with pytest.raises(ValueError):
        rank_lower_bound_after_changes(-1, 0)
    with pytest.raises(ValueError):
        rank_lower_bound_after_changes(2, -1)
