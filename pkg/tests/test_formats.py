import json
from fractions import Fraction

import pytest

from rigidbench.errors import FormatError
from rigidbench.formats import (
    format_matrix,
    format_perturbation,
    matrix_digest,
    parse_matrix,
    parse_perturbation,
)
from rigidbench.matrices import Matrix, Perturbation, SignMatrix, dft, sylvester
from rigidbench.scalars import Cyclotomic


def test_sign_format():
    text = format_matrix(sylvester(2))
    assert text == "4 4 sign\n++++\n+-+-\n++--\n+--+\n"
    assert parse_matrix(text) == sylvester(2)


def test_int_format_round_trip():
    m = Matrix.from_rows([[1, -2, 0], [3, 4, -5]])
    text = format_matrix(m)
    assert text == "2 3 int\n1 -2 0\n3 4 -5\n"
    assert parse_matrix(text) == m


def test_rat_format_round_trip():
    m = Matrix.from_rows([[Fraction(1, 2), Fraction(-3, 7)]], kind="rat")
    text = format_matrix(m)
    assert text == "1 2 rat\n1/2 -3/7\n"
    assert parse_matrix(text) == m


def test_cyclo_format_round_trip():
    m = dft(4)
    text = format_matrix(m)
    assert text.startswith("4 4 cyclo4\n")
    # rational-valued entries print as bare rational tokens
    assert text.splitlines()[1] == "1 1 1 1"
    assert parse_matrix(text) == m


def test_cyclo2_is_rational_lines():
    assert format_matrix(dft(2)) == "2 2 cyclo2\n1 1\n1 -1\n"


def test_approx_format_round_trip():
    m = Matrix.from_rows([[0.5, 1.5 + 0.5j]], kind="approx")
    again = parse_matrix(format_matrix(m))
    assert again.kind == "approx"
    assert again[0, 0] == 0.5
    assert again[0, 1] == 1.5 + 0.5j


def test_parse_rejects_malformed():
    bad = [
        "garbage",
        "2 2\n1 1\n1 1\n",
        "2 2 int\n1 1\n1\n",
        "2 2 int\n1 1\n",
        "2 2 int\n1 1\n1 1\n1 1\n",
        "2 2 sign\n+?\n++\n",
        "2 2 sign\n+\n++\n",
        "2 2 int\n1 x\n1 1\n",
        "2 2 cyclo6\n1 1\n1 1\n",
        "0 2 int\n",
    ]
    for text in bad:
        with pytest.raises(FormatError):
            parse_matrix(text)


def test_parse_cyclo_coerces_bare_rationals():
    m = parse_matrix("1 2 cyclo4\n1/2 w4:0,1\n")
    assert isinstance(m[0, 0], Cyclotomic)
    assert m[0, 0] == Cyclotomic.from_rational(4, Fraction(1, 2))


def test_digest_is_canonical_text_hash():
    s = sylvester(2)
    assert matrix_digest(s) == matrix_digest(parse_matrix(format_matrix(s)))
    # digest distinguishes representation kinds
    assert matrix_digest(s) != matrix_digest(s.to_matrix())
    assert len(matrix_digest(s)) == 64


def test_perturbation_round_trip():
    p = Perturbation([(0, 1, Fraction(1, 2)), (2, 0, Cyclotomic.root(4)), (1, 1, -3)])
    text = format_perturbation(p)
    doc = json.loads(text)
    assert doc == [
        {"row": 0, "col": 1, "value": "1/2"},
        {"row": 1, "col": 1, "value": "-3"},
        {"row": 2, "col": 0, "value": "w4:0,1"},
    ]
    assert parse_perturbation(text) == p


def test_perturbation_parse_rejects_malformed():
    for text in ("{}", "[1]", '[{"row": 0}]', '[{"row": 0, "col": 0, "value": "x"}]', "not json"):
        with pytest.raises(FormatError):
            parse_perturbation(text)


def test_format_stable_under_reparse():
    for m in (sylvester(3), dft(8), Matrix.from_rows([[1, 2], [3, 4]])):
        text = format_matrix(m)
        assert format_matrix(parse_matrix(text)) == text


def test_parsed_sign_kind_is_signmatrix():
    assert isinstance(parse_matrix("2 2 sign\n++\n+-\n"), SignMatrix)
