"""Acceptance suite: one test per criterion, each printing a single
CRITERION line with its outcome and wall time."""

import random
import time
from fractions import Fraction
from itertools import combinations

from rigidbench.certificates import (
    full_rank_partition_certificate,
    refute_perturbation,
    sylvester_bound_value,
    verify_dft_decomposition,
)
from rigidbench.cli import main
from rigidbench.formats import parse_matrix
from rigidbench.matrices import (
    Matrix,
    Perturbation,
    apply_perturbation,
    dft,
    is_hadamard,
    permute_columns,
    sylvester,
    weight_diff,
)
from rigidbench.rank import exact_rank, numerical_rank
from rigidbench.scalars import Cyclotomic, scalars_equal
from rigidbench.search import (
    EXACT_VALUE,
    cross_validate,
    exact_rigidity_rank1,
    rank_one_completion,
)

S2_TEXT = "2 2 sign\n++\n+-\n"
S4_TEXT = "4 4 sign\n++++\n+-+-\n++--\n+--+\n"


def run_criterion(capsys, number, label, limit, body):
    start = time.monotonic()
    try:
        body()
        elapsed = time.monotonic() - start
        if limit is not None and elapsed >= limit:
            raise AssertionError(f"runtime {elapsed:.2f}s exceeds the {limit:.0f}s limit")
    except BaseException:
        with capsys.disabled():
            print(f"CRITERION {number} {label}: FAIL")
        raise
    with capsys.disabled():
        print(f"CRITERION {number} {label}: PASS ({elapsed:.2f}s)")


def power_of_two_ranks(n):
    r = 1
    while 2 * r <= n:
        yield r
        r *= 2


def test_criterion_1_golden_constructions(capsys):
    def body():
        assert main(["gen", "sylvester", "1"]) == 0
        assert capsys.readouterr().out == S2_TEXT
        assert main(["gen", "sylvester", "2"]) == 0
        assert capsys.readouterr().out == S4_TEXT
        assert main(["gen", "dft", "4"]) == 0
        produced = parse_matrix(capsys.readouterr().out)
        assert produced.kind == "cyclo" and produced.order == 4
        for j in range(4):
            for k in range(4):
                assert scalars_equal(produced[j, k], Cyclotomic.root_power(4, j * k))

    run_criterion(capsys, 1, "golden constructions", 1.0, body)


def test_criterion_2_hadamard_identity(capsys):
    def body():
        for k in range(1, 7):
            assert is_hadamard(sylvester(k).to_matrix())

    run_criterion(capsys, 2, "hadamard identity", 5.0, body)


def test_criterion_3_certified_lower_bound(capsys):
    def body():
        for n in (4, 8, 16, 32, 64):
            s = sylvester(n.bit_length() - 1)
            for r in power_of_two_ranks(n):
                cert = full_rank_partition_certificate(s, r)
                assert cert.bound == n * n // (4 * r) == sylvester_bound_value(n, r)
                assert all(rank == 2 * r for _, _, rank in cert.blocks)
                target = sylvester((2 * r).bit_length() - 1)
                grid = sylvester((n // (2 * r)).bit_length() - 1)
                for bi in range(cert.grid_side):
                    for bj in range(cert.grid_side):
                        want = target if grid[bi, bj] == 1 else -target
                        assert s.sub(bi, bj, 2 * r) == want

    run_criterion(capsys, 3, "certified lower bound", 30.0, body)


def test_criterion_4_refutation_fuzzing(capsys):
    def body():
        rng = random.Random(20260823)
        for n in (4, 8, 16):
            s = sylvester(n.bit_length() - 1)
            base = s.to_matrix()
            cells = [(i, j) for i in range(n) for j in range(n)]
            for r in power_of_two_ranks(n):
                cert = full_rank_partition_certificate(s, r)
                bound = n * n // (4 * r)
                for _ in range(500):
                    changes = []
                    for i, j in rng.sample(cells, bound - 1):
                        mode = rng.randrange(3)
                        if mode == 0:
                            value = 0
                        elif mode == 1:
                            value = -base[i, j]
                        else:
                            value = Fraction(rng.randrange(-4, 5), rng.randrange(1, 5))
                            while value == base[i, j]:
                                value = Fraction(rng.randrange(-4, 5), rng.randrange(1, 5))
                        changes.append((i, j, value))
                    p = Perturbation(changes)
                    witness = refute_perturbation(s, p, r, cert)
                    assert witness.changes_in_block < r
                    assert witness.perturbation_weight == bound - 1
                    assert exact_rank(apply_perturbation(base, p)) > r

    run_criterion(capsys, 4, "refutation fuzzing", 120.0, body)


def test_criterion_5_exact_rigidity_meets_the_bound(capsys):
    def body():
        result = exact_rigidity_rank1(sylvester(2), 8)
        assert result.kind == EXACT_VALUE
        assert result.weight == 4 == sylvester_bound_value(4, 1)
        base = sylvester(2).to_matrix()
        perturbed = apply_perturbation(base, result.witness)
        assert exact_rank(perturbed) <= 1
        assert weight_diff(base, perturbed) == 4
        infeasible = 0
        cells = [(i, j) for i in range(4) for j in range(4)]
        for support in combinations(cells, 3):
            assert rank_one_completion(base, support) is None
            infeasible += 1
        assert infeasible == 560

    run_criterion(capsys, 5, "exact rigidity meets the bound", 60.0, body)


def test_criterion_6_dft_transfer(capsys):
    def body():
        for n in (4, 8, 16):
            assert verify_dft_decomposition(n)
        for n in (4, 8, 16):
            for r in (1, 2, 4):
                if 2 * r > n:
                    continue
                cert = full_rank_partition_certificate(dft(n), r, "bit-reversal")
                assert cert.bound == n * n // (4 * r)

    run_criterion(capsys, 6, "dft transfer", 120.0, body)


def test_criterion_7_interval_consistency(capsys):
    def body():
        instances = 0
        for n in (4, 8, 16, 32, 64):
            s = sylvester(n.bit_length() - 1)
            for r in power_of_two_ranks(n):
                budget = 10 if n >= 32 else 100
                lower, upper = cross_validate(s, r, budget=budget).interval()
                assert lower <= upper
                instances += 1
        for n in (4, 8, 16):
            for r in (1, 2, 4):
                if 2 * r > n:
                    continue
                lower, upper = cross_validate(dft(n), r, budget=30).interval()
                assert lower <= upper
                instances += 1
        rng = random.Random(97)
        while instances < 78:
            side = rng.randrange(2, 9)
            m = Matrix.from_rows(
                [
                    [Fraction(rng.randrange(-3, 4), rng.randrange(1, 4)) for _ in range(side)]
                    for _ in range(side)
                ]
            )
            if exact_rank(m) < side:
                continue
            r = rng.randrange(1, side + 1)
            lower, upper = cross_validate(m, r, budget=30).interval()
            assert lower <= upper
            instances += 1
        assert instances == 20 + 8 + 50

    run_criterion(capsys, 7, "interval consistency", None, body)


def test_criterion_8_rank_oracle_properties(capsys):
    def body():
        rng = random.Random(4242)

        def draw(rows, cols):
            return Matrix.from_rows(
                [
                    [Fraction(rng.randrange(-3, 4), rng.randrange(1, 4)) for _ in range(cols)]
                    for _ in range(rows)
                ]
            )

        for _ in range(1000):
            rows, cols = rng.randrange(1, 9), rng.randrange(1, 9)
            m = draw(rows, cols)
            picks = rng.sample(
                [(i, j) for i in range(rows) for j in range(cols)],
                rng.randrange(0, rows * cols + 1),
            )
            changes = [
                (i, j, Fraction(rng.randrange(-3, 4), rng.randrange(1, 4))) for i, j in picks
            ]
            perturbed = apply_perturbation(m, Perturbation(changes))
            assert exact_rank(m) - exact_rank(perturbed) <= weight_diff(m, perturbed)

        for _ in range(1000):
            rows, cols = rng.randrange(1, 9), rng.randrange(1, 9)
            m = draw(rows, cols)
            keep_rows = sorted(rng.sample(range(rows), rng.randrange(1, rows + 1)))
            keep_cols = sorted(rng.sample(range(cols), rng.randrange(1, cols + 1)))
            sub = Matrix.from_rows(
                [[m[i, j] for j in keep_cols] for i in keep_rows]
            )
            assert exact_rank(sub) <= exact_rank(m)

        for _ in range(1000):
            rows, cols = rng.randrange(1, 9), rng.randrange(1, 9)
            m = draw(rows, cols)
            row_order = rng.sample(range(rows), rows)
            col_order = rng.sample(range(cols), cols)
            shuffled = permute_columns(
                Matrix.from_rows([list(m.row_values(i)) for i in row_order]), col_order
            )
            assert exact_rank(shuffled) == exact_rank(m)

        for _ in range(200):
            rows, cols = rng.randrange(1, 9), rng.randrange(1, 9)
            k = rng.randrange(1, min(rows, cols) + 1)
            total = Matrix.from_rows([[0] * cols for _ in range(rows)], kind="rat")
            for _ in range(k):
                u = [Fraction(rng.randrange(-3, 4), rng.randrange(1, 3)) for _ in range(rows)]
                v = [Fraction(rng.randrange(-3, 4), rng.randrange(1, 3)) for _ in range(cols)]
                outer = Matrix.build(rows, cols, lambda i, j: u[i] * v[j], kind="rat")
                total = Matrix.build(
                    rows, cols, lambda i, j: total[i, j] + outer[i, j], kind="rat"
                )
            assert numerical_rank(total.to_approx(), 1e-9) == exact_rank(total)

    run_criterion(capsys, 8, "rank oracle properties", 60.0, body)
