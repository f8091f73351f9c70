"""Canonical text serialization for matrices and perturbations.

Matrix files: first line ``rows cols kind`` with kind one of ``int``,
``rat``, ``cyclo<order>``, ``approx``, ``sign``; then ``rows`` lines of
whitespace-separated scalar tokens.  ``sign`` rows are contiguous ``+``/``-``
strings.  The printer is canonical, so the SHA-256 of the text serves as a
stable content digest, and parse(print(m)) is lossless for exact kinds.

Perturbation files: a JSON list of ``{"row": r, "col": c, "value": token}``
objects with 0-based indices and values in the scalar token syntax.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .errors import FormatError
from .matrices import Matrix, Perturbation, SignMatrix
from .scalars import Cyclotomic, format_scalar_token, parse_scalar_token


def _entry_token(value, kind: str) -> str:
    if kind == "cyclo" and isinstance(value, Cyclotomic) and value.is_rational():
        # Rational-valued cyclotomic entries print bare; the header's order
        # restores the domain on parse.
        return str(value.rational_value())
    return format_scalar_token(value)


def format_matrix(m) -> str:
    """Render a matrix in the canonical text format (trailing newline)."""
    if isinstance(m, SignMatrix):
        lines = [f"{m.n} {m.n} sign"]
        for i in range(m.n):
            bits = m.row_bits(i)
            lines.append("".join("-" if (bits >> j) & 1 else "+" for j in range(m.n)))
        return "\n".join(lines) + "\n"
    kind = f"cyclo{m.order}" if m.kind == "cyclo" else m.kind
    lines = [f"{m.rows} {m.cols} {kind}"]
    for i in range(m.rows):
        lines.append(" ".join(_entry_token(v, m.kind) for v in m.row_values(i)))
    return "\n".join(lines) + "\n"


def _parse_entry(token: str, kind: str, order: int | None):
    if kind == "int":
        try:
            return int(token)
        except ValueError:
            raise FormatError(f"bad integer token {token!r}") from None
    if kind == "rat":
        try:
            return Fraction(token)
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"bad rational token {token!r}") from None
    if kind == "cyclo":
        if token.startswith("w"):
            value = parse_scalar_token(token)
            if not isinstance(value, Cyclotomic) or value.order != order:
                raise FormatError(
                    f"token {token!r} does not match declared cyclotomic order {order}"
                )
            return value
        try:
            return Cyclotomic.from_rational(order, Fraction(token))
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"bad cyclotomic token {token!r}") from None
    if kind == "approx":
        try:
            return complex(token)
        except ValueError:
            raise FormatError(f"bad numeric token {token!r}") from None
    raise FormatError(f"unknown matrix kind {kind!r}")


def parse_matrix(text: str):
    """Parse the canonical text format into a Matrix or SignMatrix."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty matrix file")
    header = lines[0].split()
    if len(header) != 3:
        raise FormatError(f"bad header line {lines[0]!r}")
    try:
        rows, cols = int(header[0]), int(header[1])
    except ValueError:
        raise FormatError(f"bad dimensions in header {lines[0]!r}") from None
    kind_token = header[2]
    if len(lines) != rows + 1:
        raise FormatError(f"expected {rows} data lines, found {len(lines) - 1}")

    if kind_token == "sign":
        if rows != cols:
            raise FormatError("sign matrices are square")
        bits = 0
        for i, line in enumerate(lines[1:]):
            row = line.strip()
            if len(row) != cols or any(ch not in "+-" for ch in row):
                raise FormatError(f"bad sign row {row!r}")
            for j, ch in enumerate(row):
                if ch == "-":
                    bits |= 1 << (i * cols + j)
        return SignMatrix(rows, bits)

    order = None
    if kind_token.startswith("cyclo"):
        try:
            order = int(kind_token[len("cyclo"):])
        except ValueError:
            raise FormatError(f"bad cyclotomic kind {kind_token!r}") from None
        kind = "cyclo"
    elif kind_token in ("int", "rat", "approx"):
        kind = kind_token
    else:
        raise FormatError(f"unknown matrix kind {kind_token!r}")

    entries = []
    for line in lines[1:]:
        tokens = line.split()
        if len(tokens) != cols:
            raise FormatError(f"expected {cols} entries per row, got {len(tokens)}")
        entries.extend(_parse_entry(t, kind, order) for t in tokens)
    try:
        return Matrix(rows, cols, entries, kind=kind, order=order)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def matrix_digest(m) -> str:
    """SHA-256 of the canonical text format."""
    return hashlib.sha256(format_matrix(m).encode("utf-8")).hexdigest()


def format_perturbation(p: Perturbation) -> str:
    items = [
        {"row": r, "col": c, "value": format_scalar_token(v)} for r, c, v in p.changes
    ]
    return json.dumps(items, indent=2) + "\n"


def parse_perturbation(text: str) -> Perturbation:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"perturbation file is not valid JSON: {exc}") from None
    if not isinstance(raw, list):
        raise FormatError("perturbation file must be a JSON list")
    changes = []
    for item in raw:
        if not isinstance(item, dict) or not {"row", "col", "value"} <= set(item):
            raise FormatError(f"bad perturbation item {item!r}")
        try:
            row, col = int(item["row"]), int(item["col"])
        except (TypeError, ValueError):
            raise FormatError(f"bad position in {item!r}") from None
        value = item["value"]
        if isinstance(value, str):
            value = parse_scalar_token(value)
        elif isinstance(value, bool) or not isinstance(value, (int, float)):
            raise FormatError(f"bad value in {item!r}")
        changes.append((row, col, value))
    try:
        return Perturbation(changes)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
