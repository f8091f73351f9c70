"""Exact scalar arithmetic for matrix entries.

Entry domains, from narrowest to widest:

* ``int``                  -- arbitrary-precision integers (kind ``int``)
* ``fractions.Fraction``   -- exact rationals in canonical form (kind ``rat``)
* ``Cyclotomic``           -- Q(w) for w a primitive n-th root of unity,
                              n a power of two (kind ``cyclo``)
* ``complex``              -- approximate fallback (kind ``approx``)

All values are immutable; every operation is a pure function.  The textual
token syntax is ``-3`` (int), ``-3/7`` (rational), ``w4:0,1`` (cyclotomic,
order after the ``w``, rational coefficients comma-separated) and
``1.5+0.5j`` (approximate complex).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldMismatchError, FormatError

# Absolute magnitude below which an approximate value counts as zero.
DEFAULT_TOLERANCE = 1e-9

EXACT_KINDS = ("int", "rat", "cyclo")
KINDS = EXACT_KINDS + ("approx",)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


class Cyclotomic:
    """Element of Q(w) where w = exp(2*pi*i/order) and order is a power of two.

    Stored as ``order//2`` rational coefficients ``c_0 + c_1 w + ... +
    c_{d-1} w^{d-1}`` with ``d = order//2``; the reduction ``w^d = -1`` is
    applied eagerly, so no higher power is ever stored.  Since ``x^d + 1``
    is irreducible over Q for power-of-two ``d``, Q(w) is a field and
    :meth:`inverse` is total on nonzero elements.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        if not (_is_power_of_two(order) and order >= 2):
            raise ValueError(f"cyclotomic order must be a power of two >= 2, got {order}")
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != order // 2:
            raise ValueError(
                f"order-{order} element needs exactly {order // 2} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic values are immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "Cyclotomic":
        return cls(order, (0,) * (order // 2))

    @classmethod
    def one(cls, order: int) -> "Cyclotomic":
        return cls.from_rational(order, 1)

    @classmethod
    def from_rational(cls, order: int, value) -> "Cyclotomic":
        coeffs = [Fraction(value)] + [Fraction(0)] * (order // 2 - 1)
        return cls(order, coeffs)

    @classmethod
    def root_power(cls, order: int, exponent: int) -> "Cyclotomic":
        """w^exponent, reduced: w has multiplicative order ``order``."""
        if not (_is_power_of_two(order) and order >= 2):
            raise ValueError(f"cyclotomic order must be a power of two >= 2, got {order}")
        d = order // 2
        e = exponent % order
        coeffs = [Fraction(0)] * d
        if e < d:
            coeffs[e] = Fraction(1)
        else:
            coeffs[e - d] = Fraction(-1)
        return cls(order, coeffs)

    @classmethod
    def root(cls, order: int) -> "Cyclotomic":
        return cls.root_power(order, 1)

    # -- coercion ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.order != self.order:
                raise FieldMismatchError(
                    f"incompatible cyclotomic orders {self.order} and {other.order}"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Cyclotomic.from_rational(self.order, other)
        return None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclotomic(self.order, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclotomic(self.order, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Cyclotomic(self.order, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.order // 2
        out = [Fraction(0)] * d
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                if b == 0:
                    continue
                k = i + j
                if k < d:
                    out[k] += a * b
                else:
                    out[k - d] -= a * b  # w^d = -1
        return Cyclotomic(self.order, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        acc = Cyclotomic.one(self.order)
        base = self
        e = exponent
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def inverse(self) -> "Cyclotomic":
        """Multiplicative inverse via the extended Euclidean algorithm on
        the coefficient polynomial and x^d + 1 over Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        d = self.order // 2
        modulus = [Fraction(0)] * (d + 1)
        modulus[0] = Fraction(1)
        modulus[d] = Fraction(1)
        # Invariant: r = s * a (mod modulus), tracked only up to the s factor.
        r0, s0 = modulus, [Fraction(0)]
        r1, s1 = _poly_trim(list(self.coeffs)), [Fraction(1)]
        while _poly_degree(r1) > 0:
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r1 is a nonzero constant because x^d + 1 is irreducible over Q.
        c = r1[0]
        inv = [x / c for x in s1]
        inv = _poly_mod_reduce(inv, d)
        return Cyclotomic(self.order, inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    # -- predicates and views ---------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def promote(self, order: int) -> "Cyclotomic":
        """Re-express this element in the larger field Q(w_order).

        Requires ``self.order`` to divide ``order``; uses w_n = w_m^(m/n).
        """
        if order == self.order:
            return self
        if order % self.order != 0 or not _is_power_of_two(order):
            raise FieldMismatchError(f"cannot promote order {self.order} into order {order}")
        stride = order // self.order
        out = [Fraction(0)] * (order // 2)
        for i, c in enumerate(self.coeffs):
            out[i * stride] = c
        return Cyclotomic(order, out)

    def to_complex(self) -> complex:
        import cmath

        w = cmath.exp(2j * cmath.pi / self.order)
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * w + complex(c)
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if self.order != other.order:
            # Compare in the larger field; legal since orders are powers of 2.
            order = max(self.order, other.order)
            return self.promote(order).coeffs == other.promote(order).coeffs
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        # Hash the minimal-order representation so cross-order equals agree.
        order, coeffs = self.order, self.coeffs
        while order > 2 and all(c == 0 for c in coeffs[1::2]):
            order //= 2
            coeffs = coeffs[::2]
        return hash((order, coeffs))

    def __repr__(self):
        return format_scalar_token(self)


# -- polynomial helpers over Q (dense, low-degree-first) -------------------


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_degree(p) -> int:
    return len(p) - 1 if p else -1


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _poly_trim(out)

def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    db, lead = _poly_degree(b), b[-1]
    while _poly_degree(rem) >= db:
        shift = _poly_degree(rem) - db
        factor = rem[-1] / lead
        q[shift] += factor
        for i in range(len(b)):
            rem[shift + i] -= factor * b[i]
        _poly_trim(rem)
    return _poly_trim(q), rem


def _poly_mod_reduce(p, d):
    """Reduce a polynomial modulo x^d + 1 and pad to length d."""
    out = [Fraction(0)] * d
    for i, c in enumerate(p):
        k, r = divmod(i, d)
        if k % 2 == 0:
            out[r] += c
        else:
            out[r] -= c
    return out


# -- scalar-level helpers --------------------------------------------------


def scalar_is_zero(value, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Exact variants: zero iff canonically zero.  Approximate values are
    zero iff their magnitude is at most ``tol``."""
    if isinstance(value, Cyclotomic):
        return value.is_zero()
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return value == 0
    if isinstance(value, (complex, float)):
        return abs(value) <= tol
    raise TypeError(f"not a scalar: {value!r}")


def scalars_equal(a, b, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Equality used by entry comparisons: exact for exact variants,
    within ``tol`` for approximate ones."""
    approx_a = isinstance(a, (complex, float))
    approx_b = isinstance(b, (complex, float))
    if approx_a or approx_b:
        return abs(complex(a) - complex(b)) <= tol
    return a == b


def numeric_value(value) -> complex:
    """Embed any scalar into the complex numbers."""
    if isinstance(value, Cyclotomic):
        return value.to_complex()
    return complex(value)


def format_scalar_token(value) -> str:
    """Canonical textual form; ``parse_scalar_token`` inverts it exactly."""
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Cyclotomic):
        body = ",".join(str(c) for c in value.coeffs)
        return f"w{value.order}:{body}"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, complex):
        return f"{value.real!r}{value.imag:+}j"
    raise TypeError(f"not a scalar: {value!r}")


def parse_scalar_token(token: str):
    """Parse a scalar token, inferring the variant from its shape."""
    token = token.strip()
    if not token:
        raise FormatError("empty scalar token")
    if token[0] == "w" and ":" in token:
        head, _, body = token.partition(":")
        try:
            order = int(head[1:])
        except ValueError:
            raise FormatError(f"bad cyclotomic order in {token!r}") from None
        parts = body.split(",")
        try:
            coeffs = [Fraction(p) for p in parts]
            return Cyclotomic(order, coeffs)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad cyclotomic token {token!r}: {exc}") from None
    if "/" in token:
        try:
            return Fraction(token)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad rational token {token!r}: {exc}") from None
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        pass
    try:
        return complex(token)
    except ValueError:
        raise FormatError(f"unrecognized scalar token {token!r}") from None


def scalar_kind(value) -> str:
    """The entry-domain name of a scalar value."""
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, int):
        return "int"
    if isinstance(value, Fraction):
        return "rat"
    if isinstance(value, Cyclotomic):
        return "cyclo"
    if isinstance(value, (complex, float)):
        return "approx"
    raise TypeError(f"not a scalar: {value!r}")
