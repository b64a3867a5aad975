"""Exact complex rationals p + q i with Fraction parts."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainError


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def coerce(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(Fraction(value))
        if isinstance(value, str):
            return parse_complex_rational(value)
        raise DomainError(f"cannot make an exact complex rational from {value!r}")

    def __add__(self, other):
        other = _lift(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        return GaussianRational(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * _lift(other).inverse()

    def __rtruediv__(self, other):
        return _lift(other) * self.inverse()

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = GaussianRational()
ONE = GaussianRational(Fraction(1))
I = GaussianRational(Fraction(0), Fraction(1))


def _lift(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(Fraction(x))
    raise TypeError(f"cannot combine GaussianRational with {type(x).__name__}")


_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:/\d+)?"
_PART_RE = re.compile(rf"^([+-]?)({_NUM})?(\*?i)?$")


def _fraction(text: str) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        return Fraction(num) / Fraction(den)
    return Fraction(text)


def parse_complex_rational(text: str) -> GaussianRational:
    """Parse ``"3"``, ``"-1/2"``, ``"2i"``, ``"1+2i"``, ``"0.25-i/3"``-style literals.

    Decimal literals are read exactly (0.1 is 1/10).
    """
    s = text.replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise DomainError("empty complex literal")
    s = s.replace("i/", "/i_")  # i/3 -> 1/3 i handled below
    pieces = re.findall(r"[+-]?[^+-]+", s)
    if "".join(pieces) != s:
        raise DomainError(f"cannot parse complex rational {text!r}")
    out = ZERO
    for piece in pieces:
        if "/i_" in piece:
            # forms like "i/3" or "2i/3" were rewritten to "/i_3" / "2/i_3"
            head, _, den = piece.partition("/i_")
            sign = -1 if head.startswith("-") else 1
            head = head.lstrip("+-")
            num = _fraction(head) if head else Fraction(1)
            out = out + GaussianRational(0, sign * num / _fraction(den))
            continue
        m = _PART_RE.match(piece)
        if not m or (m.group(2) is None and m.group(3) is None):
            raise DomainError(f"cannot parse complex rational {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        mag = _fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            out = out + GaussianRational(0, sign * mag)
        else:
            out = out + GaussianRational(sign * mag)
    return out
