"""Fuzzy sets over finite sort domains.

Membership degrees are exact, so comparisons between fuzzy sets
(domination, the necessity of one set given another) are exact too.
Numeric domains are grids: a continuous range such as ``[0, 120]`` years is
sampled at ``lo, lo + step, ..., hi`` and trapezoids are evaluated exactly at
the grid points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Tuple, Union

from .degrees import ONE, ZERO, Degree, as_degree, format_degree, reciprocal_implies

__all__ = [
    "FuzzyError",
    "DomainMismatchError",
    "SortDomain",
    "Trapezoid",
    "FuzzySet",
    "trapezoid_to_fuzzy",
    "necessity_of_match",
    "pointwise_min",
    "pointwise_max",
    "raise_floor",
    "dominates",
]

Element = Union[str, Fraction]


class FuzzyError(ValueError):
    pass


class DomainMismatchError(FuzzyError):
    """Two fuzzy sets over different sorts were combined."""


@dataclass(frozen=True)
class SortDomain:
    """A named, ordered, finite domain.

    Elements are either all symbolic labels (``str``) or all rationals.
    ``range_spec`` remembers the ``lo..hi step s`` a numeric domain was built
    from so it can be printed back compactly; it does not take part in
    equality.
    """

    name: str
    elements: Tuple[Element, ...]
    range_spec: Optional[Tuple[Fraction, Fraction, Fraction]] = field(default=None, compare=False)
    unit: Optional[str] = None

    def __post_init__(self):
        if not self.elements:
            raise FuzzyError(f"sort {self.name!r} has an empty domain")
        if len(set(self.elements)) != len(self.elements):
            raise FuzzyError(f"sort {self.name!r} has repeated elements")
        kinds = {isinstance(e, str) for e in self.elements}
        if len(kinds) > 1:
            raise FuzzyError(f"sort {self.name!r} mixes labels and numbers")
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})

    @classmethod
    def grid(cls, name: str, lo, hi, step=1, unit: Optional[str] = None) -> "SortDomain":
        lo, hi, step = Fraction(lo), Fraction(hi), Fraction(step)
        if step <= 0:
            raise FuzzyError(f"sort {name!r}: step must be positive")
        if hi < lo:
            raise FuzzyError(f"sort {name!r}: empty range {lo}..{hi}")
        count = int((hi - lo) // step) + 1
        elements = tuple(lo + k * step for k in range(count))
        return cls(name, elements, range_spec=(lo, hi, step), unit=unit)

    @classmethod
    def labels(cls, name: str, labels: Iterable[str]) -> "SortDomain":
        return cls(name, tuple(labels))

    @property
    def is_numeric(self) -> bool:
        return not isinstance(self.elements[0], str)

    def index(self, element) -> int:
        if not isinstance(element, str):
            element = Fraction(element)
        try:
            return self._index[element]
        except KeyError:
            raise FuzzyError(f"{element!r} is not an element of sort {self.name!r}") from None

    def __contains__(self, element) -> bool:
        if not isinstance(element, str):
            try:
                element = Fraction(element)
            except (TypeError, ValueError):
                return False
        return element in self._index

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        if self.range_spec is not None:
            lo, hi, step = (format_degree(x) for x in self.range_spec)
            return f"SortDomain({self.name!r}, {lo}..{hi} step {step})"
        return f"SortDomain({self.name!r}, {list(map(_elem_text, self.elements))})"

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)


@dataclass(frozen=True)
class Trapezoid:
    """``[t1; t2; t3; t4]``: support ``[t1, t4]``, core ``[t2, t3]``."""

    t1: Fraction
    t2: Fraction
    t3: Fraction
    t4: Fraction

    def __post_init__(self):
        for name in ("t1", "t2", "t3", "t4"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not (self.t1 <= self.t2 <= self.t3 <= self.t4):
            raise FuzzyError(f"trapezoid parameters out of order: {self}")

    def membership(self, u) -> Degree:
        u = Fraction(u)
        if self.t2 <= u <= self.t3:
            return ONE
        if u <= self.t1 or u >= self.t4:
            return ZERO
        if u < self.t2:
            return Degree((u - self.t1) / (self.t2 - self.t1))
        return Degree((self.t4 - u) / (self.t4 - self.t3))

    def __str__(self) -> str:
        return "[" + ";".join(format_degree(t) for t in self.params) + "]"

    @property
    def params(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.t1, self.t2, self.t3, self.t4)


@dataclass(frozen=True)
class FuzzySet:
    """A total membership function over a :class:`SortDomain`.

    ``memberships[k]`` is the degree of ``domain.elements[k]``. ``shape``
    records the trapezoid the set was built from, if any (printing only).
    """

    domain: SortDomain
    memberships: Tuple[Degree, ...]
    shape: Optional[Trapezoid] = field(default=None, compare=False)

    def __post_init__(self):
        values = tuple(as_degree(v) for v in self.memberships)
        if len(values) != len(self.domain):
            raise FuzzyError(
                f"fuzzy set over {self.domain.name!r} needs {len(self.domain)} degrees, got {len(values)}"
            )
        object.__setattr__(self, "memberships", values)

    @classmethod
    def from_mapping(cls, domain: SortDomain, mapping: Mapping) -> "FuzzySet":
        """Build from ``{element: degree}``; every domain element must be listed."""
        values = [None] * len(domain)
        for element, degree in mapping.items():
            k = domain.index(element)
            if values[k] is not None:
                raise FuzzyError(f"element {element!r} listed twice")
            values[k] = as_degree(degree)
        missing = [domain.elements[k] for k, v in enumerate(values) if v is None]
        if missing:
            raise FuzzyError(
                f"fuzzy set over {domain.name!r} is undefined on {', '.join(map(_elem_text, missing))}"
            )
        return cls(domain, tuple(values))

    @classmethod
    def constant(cls, domain: SortDomain, level) -> "FuzzySet":
        return cls(domain, (as_degree(level),) * len(domain))

    def __call__(self, element) -> Degree:
        return self.memberships[self.domain.index(element)]

    def items(self):
        return zip(self.domain.elements, self.memberships)

    @property
    def is_normalized(self) -> bool:
        """Attains both 0 and 1 somewhere on the domain."""
        return ZERO in self.memberships and ONE in self.memberships

    def __repr__(self) -> str:
        return f"FuzzySet({self.domain.name!r}, {self})"

    def __str__(self) -> str:
        if self.shape is not None:
            return str(self.shape)
        body = ", ".join(f"{_elem_text(e)}: {format_degree(d)}" for e, d in self.items())
        return "{" + body + "}"


def _elem_text(e: Element) -> str:
    return e if isinstance(e, str) else format_degree(e)


def _check_same_domain(*sets: FuzzySet) -> SortDomain:
    first = sets[0].domain
    for s in sets[1:]:
        if s.domain is not first and s.domain != first:
            raise DomainMismatchError(f"fuzzy sets over {first.name!r} and {s.domain.name!r}")
    return first


def trapezoid_to_fuzzy(t: Trapezoid, d: SortDomain) -> FuzzySet:
    """Sample trapezoid *t* on the numeric grid of *d*.

    Raises :class:`FuzzyError` if the sampled set is not normalized on *d*
    (for example when the core falls between grid points).
    """
    if not d.is_numeric:
        raise FuzzyError(f"trapezoid over symbolic sort {d.name!r}")
    fs = FuzzySet(d, tuple(t.membership(u) for u in d.elements), shape=t)
    if not fs.is_normalized:
        raise FuzzyError(f"trapezoid {t} is not normalized on the grid of sort {d.name!r}")
    return fs


def necessity_of_match(b: FuzzySet, a: FuzzySet) -> Degree:
    """Necessity of *b* given *a*: the minimum over the domain of ``a(u) => b(u)``."""
    _check_same_domain(a, b)
    return min(reciprocal_implies(x, y) for x, y in zip(a.memberships, b.memberships))


def pointwise_min(f: FuzzySet, g: FuzzySet) -> FuzzySet:
    d = _check_same_domain(f, g)
    return FuzzySet(d, tuple(min(x, y) for x, y in zip(f.memberships, g.memberships)))


def pointwise_max(f: FuzzySet, g: FuzzySet) -> FuzzySet:
    d = _check_same_domain(f, g)
    return FuzzySet(d, tuple(max(x, y) for x, y in zip(f.memberships, g.memberships)))


def raise_floor(f: FuzzySet, level) -> FuzzySet:
    """The set ``u -> max(level, f(u))``."""
    level = as_degree(level)
    return FuzzySet(f.domain, tuple(max(level, x) for x in f.memberships))


def dominates(f: FuzzySet, g: FuzzySet) -> bool:
    """True iff ``f(u) >= g(u)`` for every domain element."""
    _check_same_domain(f, g)
    return all(x >= y for x, y in zip(f.memberships, g.memberships))
