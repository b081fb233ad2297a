"""Exact arithmetic in the cyclotomic field Q(q), q a primitive n-th root of unity.

Elements are stored as rational coordinates in the power basis
``1, q, ..., q^(phi(n)-1)`` and are always reduced modulo the n-th
cyclotomic polynomial, so equality is plain coefficient equality.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Union

__all__ = [
    "CyclotomicField",
    "Scalar",
    "ScalarSyntaxError",
    "field",
    "cyclotomic_polynomial",
]

Number = Union[int, Fraction, "Scalar"]


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # integer coefficient lists, lowest degree first; den is monic
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        q[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    rem = num[: len(den) - 1]
    return q, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


class ScalarSyntaxError(ValueError):
    """Raised for malformed scalar literals; ``offset`` is the byte offset."""

    def __init__(self, message: str, text: str, offset: int):
        super().__init__(f"{message} at offset {offset} in {text!r}")
        self.text = text
        self.offset = offset


class CyclotomicField:
    """The field Q(q) with q a primitive n-th root of unity."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.modulus = cyclotomic_polynomial(n)
        self.degree = len(self.modulus) - 1
        # power-basis rows for q^k, k below max(2*degree - 1, n)
        table = []
        for k in range(max(2 * self.degree - 1, self.n, 1)):
            if k < self.degree:
                row = [0] * self.degree
                row[k] = 1
            else:
                prev = table[k - 1]
                # multiply prev by q and reduce the overflow q^degree
                row = [0] + prev[:-1]
                top = prev[-1]
                if top:
                    for i in range(self.degree):
                        row[i] -= top * self.modulus[i]
            table.append(row)
        self._power_table = [tuple(r) for r in table]
        self.zero = Scalar(self, (Fraction(0),) * self.degree)
        self.one = self.from_rational(1)
        self.q = self.power(1)

    def __repr__(self) -> str:
        return f"CyclotomicField({self.n})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CyclotomicField) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("CyclotomicField", self.n))

    def from_rational(self, x: int | Fraction) -> Scalar:
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = Fraction(x)
        return Scalar(self, tuple(coeffs))

    def from_coeffs(self, coeffs) -> Scalar:
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            return self._reduce(coeffs)
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        return Scalar(self, tuple(coeffs))

    def power(self, k: int) -> Scalar:
        """q**k for any integer k (reduced using q**n == 1)."""
        k %= self.n
        coeffs = [Fraction(0)] * (k + 1)
        coeffs[k] = Fraction(1)
        return self._reduce(coeffs)

    def coerce(self, x: Number) -> Scalar:
        if isinstance(x, Scalar):
            if x.field.n != self.n:
                raise ValueError(f"modulus mismatch: {x.field.n} vs {self.n}")
            return x
        if isinstance(x, (int, Fraction)):
            return self.from_rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to a scalar of Q(q), n={self.n}")

    def _reduce(self, coeffs: list[Fraction]) -> Scalar:
        out = [Fraction(0)] * self.degree
        for k, c in enumerate(coeffs):
            if not c:
                continue
            row = self._power_table[k % self.n if k >= len(self._power_table) else k]
            for i, r in enumerate(row):
                if r:
                    out[i] += c * r
        return Scalar(self, tuple(out))

    def parse(self, text: str) -> Scalar:
        return _parse_scalar(self, text)


@lru_cache(maxsize=None)
def field(n: int = 3) -> CyclotomicField:
    """Shared field instance for modulus n."""
    return CyclotomicField(n)


class Scalar:
    """Immutable element of Q(q)."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, fld: CyclotomicField, coeffs: tuple[Fraction, ...]):
        self.field = fld
        self.coeffs = coeffs
        self._hash = None

    # -- arithmetic -------------------------------------------------------
    def _other(self, other) -> Scalar | None:
        if isinstance(other, Scalar):
            if other.field.n != self.field.n:
                raise ValueError(
                    f"modulus mismatch: {self.field.n} vs {other.field.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Scalar(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Scalar(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Scalar(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar(self.field, tuple(a * other for a in self.coeffs))
        o = self._other(other)
        if o is None:
            return NotImplemented
        deg = self.field.degree
        if deg == 2:
            # n in {3, 4, 6}: q^2 = -m0 - m1 q
            a0, a1 = self.coeffs
            b0, b1 = o.coeffs
            m0, m1 = self.field.modulus[0], self.field.modulus[1]
            top = a1 * b1
            return Scalar(self.field, (a0 * b0 - m0 * top, a0 * b1 + a1 * b0 - m1 * top))
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return self.field._reduce(prod)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(q)")
        deg = self.field.degree
        if all(c == 0 for c in self.coeffs[1:]):
            return self.field.from_rational(1 / self.coeffs[0])
        # solve (multiplication-by-self matrix) x = e_0 over Q
        cols = []
        for k in range(deg):
            cols.append((self * self.field.power(k)).coeffs)
        mat = [[cols[j][i] for j in range(deg)] + [Fraction(int(i == 0))]
               for i in range(deg)]
        for c in range(deg):
            piv = next(r for r in range(c, deg) if mat[r][c] != 0)
            mat[c], mat[piv] = mat[piv], mat[c]
            inv = 1 / mat[c][c]
            mat[c] = [v * inv for v in mat[c]]
            for r in range(deg):
                if r != c and mat[r][c] != 0:
                    f = mat[r][c]
                    mat[r] = [v - f * w for v, w in zip(mat[r], mat[c])]
        return Scalar(self.field, tuple(mat[i][deg] for i in range(deg)))

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -------------------------------------------------------
    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.field.n == other.field.n and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if not any(self.coeffs[1:]):
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.field.n, self.coeffs))
        return self._hash

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    # -- text -------------------------------------------------------------
    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r}, n={self.field.n})"


def format_scalar(x: Scalar) -> str:
    """Canonical text: terms by increasing power of q, zero printed as ``0``."""
    parts: list[str] = []
    for k, c in enumerate(x.coeffs):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if k == 0:
            body = str(mag)
        else:
            qpart = "q" if k == 1 else f"q^{k}"
            body = qpart if mag == 1 else f"{mag}{qpart}"
        if not parts:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(sign + body)
    return "".join(parts) if parts else "0"


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<sym>[-+/^q]))")


def _parse_scalar(fld: CyclotomicField, text: str) -> Scalar:
    src = text.replace("−", "-")
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if not m:
            raise ScalarSyntaxError(f"unexpected character {src[pos]!r}", text,
                                    len(src[:pos].encode()))
        kind = "num" if m.group("num") else m.group("sym")
        tokens.append((kind, m.group("num") or m.group("sym"), m.start(m.lastgroup)))
        pos = m.end()
    if not tokens:
        raise ScalarSyntaxError("empty scalar literal", text, 0)

    i = 0

    def offset(k: int) -> int:
        p = tokens[k][2] if k < len(tokens) else len(src)
        return len(src[:p].encode())

    def expect_num() -> int:
        nonlocal i
        if i >= len(tokens) or tokens[i][0] != "num":
            raise ScalarSyntaxError("expected an integer", text, offset(i))
        v = int(tokens[i][1])
        i += 1
        return v

    total = fld.zero
    first = True
    while i < len(tokens):
        sign = 1
        if tokens[i][0] in "+-":
            sign = -1 if tokens[i][0] == "-" else 1
            i += 1
        elif not first:
            raise ScalarSyntaxError("expected '+' or '-'", text, offset(i))
        first = False
        coeff: Fraction | None = None
        if i < len(tokens) and tokens[i][0] == "num":
            num = expect_num()
            den = 1
            if i < len(tokens) and tokens[i][0] == "/":
                i += 1
                den = expect_num()
                if den == 0:
                    raise ScalarSyntaxError("zero denominator", text, offset(i - 1))
            coeff = Fraction(num, den)
        power = 0
        if i < len(tokens) and tokens[i][0] == "q":
            i += 1
            power = 1
            if i < len(tokens) and tokens[i][0] == "^":
                i += 1
                power = expect_num()
        elif coeff is None:
            raise ScalarSyntaxError("expected a number or 'q'", text, offset(i))
        if coeff is None:
            coeff = Fraction(1)
        total = total + fld.power(power) * (sign * coeff)
    return total


def parse_scalar(text: str, n: int = 3) -> Scalar:
    """Parse a scalar literal such as ``-3/2+1/2q`` or ``q^2``."""
    return field(n).parse(text)
