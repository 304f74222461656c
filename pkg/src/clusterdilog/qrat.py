"""Rational functions of q with integer coefficients, kept in reduced form."""

from __future__ import annotations

from math import gcd
from typing import Sequence, Union

from flint import fmpz_poly

_ONE = fmpz_poly([1])


def _poly(x) -> fmpz_poly:
    if isinstance(x, fmpz_poly):
        return x
    if isinstance(x, int):
        return fmpz_poly([x])
    return fmpz_poly(list(x))


def _content_sign(p: fmpz_poly) -> tuple[int, int]:
    coeffs = [int(c) for c in p.coeffs()]
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    return g, 1 if coeffs[-1] > 0 else -1


class QRat:
    """num/den in Z[q], gcd 1 up to units, den with positive leading coefficient.

    >>> QRat([-1, 0, 1], [-1, 1]) == QRat([1, 1])
    True
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Union[int, Sequence[int], fmpz_poly] = 0,
                 den: Union[int, Sequence[int], fmpz_poly] = 1, *, _reduced: bool = False):
        num, den = _poly(num), _poly(den)
        if den.is_zero():
            raise ZeroDivisionError("QRat with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = _ONE
            else:
                g = num.gcd(den)
                if g != _ONE:
                    num, _ = divmod(num, g)
                    den, _ = divmod(den, g)
                cd, sd = _content_sign(den)
                cn, _ = _content_sign(num)
                c = gcd(cd, cn) * sd
                if c != 1:
                    num = fmpz_poly([int(v) // c for v in num.coeffs()])
                    den = fmpz_poly([int(v) // c for v in den.coeffs()])
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def q_power(cls, m: int) -> "QRat":
        if m >= 0:
            return cls(fmpz_poly([0] * m + [1]), _ONE, _reduced=True)
        return cls(_ONE, fmpz_poly([0] * (-m) + [1]), _reduced=True)

    @classmethod
    def coerce(cls, x) -> "QRat":
        return x if isinstance(x, QRat) else cls(x)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def __add__(self, other) -> "QRat":
        o = QRat.coerce(other)
        if self.den == o.den:
            return QRat(self.num + o.num, self.den)
        return QRat(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "QRat":
        return QRat(-self.num, self.den, _reduced=True)

    def __sub__(self, other) -> "QRat":
        return self + (-QRat.coerce(other))

    def __rsub__(self, other) -> "QRat":
        return QRat.coerce(other) - self

    def __mul__(self, other) -> "QRat":
        o = QRat.coerce(other)
        if self.is_zero() or o.is_zero():
            return QRat()
        return QRat(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> "QRat":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return QRat(self.den, self.num)

    def __truediv__(self, other) -> "QRat":
        return self * QRat.coerce(other).inv()

    def __rtruediv__(self, other) -> "QRat":
        return QRat.coerce(other) * self.inv()

    def __eq__(self, other) -> bool:
        if not isinstance(other, QRat):
            try:
                other = QRat(other)
            except TypeError:
                return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((tuple(int(c) for c in self.num.coeffs()),
                               tuple(int(c) for c in self.den.coeffs())))
        return self._hash

    def __call__(self, q):
        """Evaluate at a number (float, Fraction, ...)."""
        def ev(p):
            acc = 0
            for c in reversed([int(v) for v in p.coeffs()]):
                acc = acc * q + c
            return acc

        return ev(self.num) / ev(self.den)

    def __str__(self) -> str:
        if self.den == _ONE:
            return _pstr(self.num)
        num, den = self.num, self.den
        # display with the lowest-order denominator term positive: q/(1 - q^2)
        if next(int(c) for c in den.coeffs() if c) < 0:
            num, den = -num, -den
        return f"({_pstr(num)})/({_pstr(den)})"

    def __repr__(self) -> str:
        return f"QRat({str(self)!r})"

    def to_json(self) -> dict:
        return {"num": [int(c) for c in self.num.coeffs()], "den": [int(c) for c in self.den.coeffs()]}


def _pstr(p: fmpz_poly) -> str:
    coeffs = [int(c) for c in p.coeffs()]
    if not coeffs:
        return "0"
    parts = []
    for e, c in enumerate(coeffs):
        if c == 0:
            continue
        mon = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
        if mon and abs(c) == 1:
            term = mon
        else:
            term = f"{abs(c)}{'*' + mon if mon else ''}"
        parts.append(("-" if c < 0 else "+", term))
    s = "".join(f" {sg} {t}" for sg, t in parts).strip()
    return s[2:] if s.startswith("+ ") else "-" + s[2:]

