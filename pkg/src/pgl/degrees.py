"""Exact certainty and truth degrees in the unit interval.

Every truth value, clause weight, possibility value and necessity value in
the package is a :class:`Degree`: an immutable rational number in ``[0, 1]``.
Degrees compare exactly; there is no floating point tolerance anywhere in the
core.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Union

__all__ = [
    "Degree",
    "DegreeError",
    "ZERO",
    "ONE",
    "as_degree",
    "complement",
    "goedel_implies",
    "reciprocal_implies",
    "format_degree",
    "parse_rational",
    "degree_to_json",
    "degree_from_json",
]

DegreeLike = Union["Degree", Fraction, int, str, float]

_RATIONAL_RE = re.compile(r"^\s*(\d+(?:\.\d+)?|\.\d+)(?:\s*/\s*(\d+))?\s*$")


class DegreeError(ValueError):
    """Raised when a value cannot be a degree (outside [0, 1] or malformed)."""


class Degree(Fraction):
    """A rational number constrained to the closed unit interval.

    Accepts anything :class:`fractions.Fraction` accepts. Floats are read
    through their shortest ``repr`` so that ``Degree(0.6) == Degree("0.6")``.

    >>> Degree("0.6")
    Degree(3, 5)
    >>> Degree(3, 5) == Fraction(3, 5)
    True
    """

    __slots__ = ()

    def __new__(cls, numerator=0, denominator=None):
        if isinstance(numerator, Degree) and denominator is None:
            return numerator
        if isinstance(numerator, float):
            numerator = repr(numerator)
        try:
            self = super().__new__(cls, numerator, denominator)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise DegreeError(f"not a rational degree: {numerator!r}") from exc
        if self < 0 or self > 1:
            raise DegreeError(f"degree {format_degree(self)} outside [0, 1]")
        return self

    def __repr__(self) -> str:
        return f"Degree({self.numerator}, {self.denominator})"

    def __str__(self) -> str:
        return format_degree(self)

    def __reduce__(self):
        return (self.__class__, (self.numerator, self.denominator))

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self


ZERO = Degree(0)
ONE = Degree(1)


def as_degree(value: DegreeLike) -> Degree:
    """Coerce *value* to a :class:`Degree`, validating the range."""
    return value if isinstance(value, Degree) else Degree(value)


def complement(x: DegreeLike) -> Degree:
    """Return ``1 - x``."""
    return Degree(1 - as_degree(x))


def goedel_implies(x: DegreeLike, y: DegreeLike) -> Degree:
    """Goedel's residuated implication: 1 if ``x <= y`` else ``y``."""
    x, y = as_degree(x), as_degree(y)
    return ONE if x <= y else y


def reciprocal_implies(x: DegreeLike, y: DegreeLike) -> Degree:
    """The implication used inside necessity measures: 1 if ``x <= y`` else ``1 - x``."""
    x, y = as_degree(x), as_degree(y)
    return ONE if x <= y else complement(x)


def _terminating_digits(q: Fraction) -> int | None:
    """Number of decimal digits needed to write *q* exactly, or None."""
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return None
    return max(twos, fives)


def format_degree(q: Rational) -> str:
    """Decimal text when *q* terminates, ``num/den`` otherwise.

    >>> format_degree(Fraction(3, 5)), format_degree(Fraction(1, 3)), format_degree(1)
    ('0.6', '1/3', '1')
    """
    q = Fraction(q)
    digits = _terminating_digits(q)
    if digits is None:
        return f"{q.numerator}/{q.denominator}"
    if digits == 0:
        return str(q.numerator)
    scaled = q.numerator * 10**digits // q.denominator
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled)).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def parse_rational(text: str) -> Fraction:
    """Parse ``12``, ``0.75``, ``.5`` or ``3/4`` (optionally signed) exactly."""
    stripped = text.strip()
    sign = 1
    if stripped.startswith("-"):
        sign, stripped = -1, stripped[1:]
    m = _RATIONAL_RE.match(stripped)
    if not m:
        raise DegreeError(f"not a rational literal: {text!r}")
    num = Fraction(m.group(1))
    if m.group(2) is not None:
        if "." in m.group(1):
            raise DegreeError(f"fraction numerator must be an integer: {text!r}")
        if int(m.group(2)) == 0:
            raise DegreeError(f"zero denominator: {text!r}")
        num /= int(m.group(2))
    return sign * num


def degree_to_json(d: Rational) -> dict:
    q = Fraction(d)
    return {"num": q.numerator, "den": q.denominator}


def degree_from_json(obj: dict) -> Degree:
    return Degree(int(obj["num"]), int(obj["den"]))
