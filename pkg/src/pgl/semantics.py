"""Many-valued interpretations, Goedel evaluation and necessity measures.

An interpretation assigns every sort one domain element (shared by all atoms
of that sort) and every abstract atom a truth degree. A sorted atom ``p`` is
then true to degree ``m(p)(i(sort of p))``.

Interpretation spaces are always finite: sorted atoms range over their
domains, abstract atoms over a finite *truth grid*. Spaces are lazy
sequences; :meth:`InterpretationSpace.truth_columns` gives an exact,
integer-scaled columnar view used for fast whole-space evaluation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .degrees import ONE, ZERO, Degree, as_degree, complement, goedel_implies, reciprocal_implies
from .fuzzy import FuzzySet
from .syntax import And, Clause, Context, Equiv, Falsum, Formula, Imp, Not, Or, Program, Var

__all__ = [
    "SemanticsError",
    "AtomNotInterpretable",
    "SpaceTooLarge",
    "Interpretation",
    "InterpretationSpace",
    "ExplicitSpace",
    "PossibilityDistribution",
    "DEFAULT_MAX_SPACE",
    "default_truth_grid",
    "refine_grid",
    "eval_formula",
    "enumerate_interpretations",
    "necessity_of_formula",
    "satisfies",
    "evaluate_on_space",
]

DEFAULT_MAX_SPACE = 2_000_000

# int64 headroom: scaled values never exceed the scale itself
_MAX_INT_SCALE = 1 << 52


class SemanticsError(ValueError):
    pass


class AtomNotInterpretable(SemanticsError):
    pass


class SpaceTooLarge(SemanticsError):
    """The interpretation space exceeds the configured cap."""

    def __init__(self, size: int, cap: int):
        super().__init__(f"interpretation space has {size} points, above the cap of {cap}")
        self.size = size
        self.cap = cap


@dataclass(frozen=True)
class Interpretation:
    """One extended interpretation.

    ``domain_choice`` and ``abstract_truth`` are stored as sorted tuples so
    interpretations hash and compare by value. ``meaning`` optionally
    overrides the context's fuzzy sets for this interpretation only, which is
    how two interpretations can agree on ``i`` but differ on ``m``.
    """

    domain_choice: Tuple[Tuple[str, object], ...] = ()
    abstract_truth: Tuple[Tuple[str, Degree], ...] = ()
    meaning: Tuple[Tuple[str, FuzzySet], ...] = ()

    @classmethod
    def of(
        cls,
        choices: Optional[Mapping[str, object]] = None,
        truth: Optional[Mapping[str, object]] = None,
        meaning: Optional[Mapping[str, FuzzySet]] = None,
    ) -> "Interpretation":
        choices = {k: (v if isinstance(v, str) else Fraction(v)) for k, v in (choices or {}).items()}
        truth = {k: as_degree(v) for k, v in (truth or {}).items()}
        return cls(
            tuple(sorted(choices.items())),
            tuple(sorted(truth.items())),
            tuple(sorted((meaning or {}).items(), key=lambda kv: kv[0])),
        )

    def choice(self, sort: str):
        for s, e in self.domain_choice:
            if s == sort:
                return e
        raise AtomNotInterpretable(f"interpretation chooses no element for sort {sort!r}")

    def truth(self, atom: str, ctx: Optional[Context] = None) -> Degree:
        for name, value in self.abstract_truth:
            if name == atom:
                return value
        fs = None
        for name, m in self.meaning:
            if name == atom:
                fs = m
                break
        if fs is None and ctx is not None:
            fs = ctx.interp.get(atom)
        if fs is None:
            raise AtomNotInterpretable(f"atom {atom!r} has no truth value in this interpretation")
        return fs(self.choice(fs.domain.name))


def eval_formula(i: Interpretation, f: Formula, ctx: Optional[Context] = None) -> Degree:
    """Goedel truth degree of *f* under *i*."""
    if isinstance(f, Var):
        return i.truth(f.name, ctx)
    if isinstance(f, Falsum):
        return ZERO
    if isinstance(f, Not):
        return ONE if eval_formula(i, f.operand, ctx) == 0 else ZERO
    a = eval_formula(i, f.left, ctx)
    b = eval_formula(i, f.right, ctx)
    if isinstance(f, And):
        return min(a, b)
    if isinstance(f, Imp):
        return goedel_implies(a, b)
    if isinstance(f, Or):
        return max(a, b)
    if isinstance(f, Equiv):
        return ONE if a == b else min(a, b)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Truth grids and spaces


def refine_grid(grid: Iterable) -> List[Degree]:
    """Insert the midpoint between each pair of consecutive grid values."""
    values = sorted(set(as_degree(v) for v in grid))
    out = list(values)
    out.extend(Degree((a + b) / 2) for a, b in zip(values, values[1:]))
    return sorted(set(out))


def default_truth_grid(program: Program, refinements: int = 0, step=None) -> List[Degree]:
    """Truth values abstract atoms range over.

    ``{0, 1}``, every clause weight and its complement, then midpoints between
    neighbours. Each extra *refinement* inserts midpoints again (doubling the
    density); *step* adds every multiple of ``step`` in ``[0, 1]``.
    """
    base = {ZERO, ONE}
    for w in program.weights():
        base.add(w)
        base.add(complement(w))
    if step is not None:
        step = Fraction(step)
        if step <= 0 or step > 1:
            raise SemanticsError("grid step must lie in (0, 1]")
        k = 0
        while k * step <= 1:
            base.add(Degree(k * step))
            k += 1
    grid = refine_grid(base)
    for _ in range(refinements):
        grid = refine_grid(grid)
    return grid


class InterpretationSpace(Sequence[Interpretation]):
    """The finite product space of a program's interpretations.

    Axes are one per used sort (its domain elements) followed by one per
    abstract atom (the truth grid). Points are materialized lazily.
    """

    def __init__(
        self,
        context: Optional[Context],
        abstract_atoms: Sequence[str],
        truth_grid: Sequence,
        max_space: Optional[int] = DEFAULT_MAX_SPACE,
    ):
        grid = sorted(set(as_degree(v) for v in truth_grid))
        if not grid:
            raise SemanticsError("truth grid is empty")
        if ZERO not in grid or ONE not in grid:
            raise SemanticsError("truth grid must contain 0 and 1")
        self.context = context
        self.sorts: List[str] = context.used_sorts() if context is not None else []
        self.abstract_atoms: List[str] = list(abstract_atoms)
        self.truth_grid: List[Degree] = grid
        self._axes: List[Sequence] = [context.domains[s].elements for s in self.sorts]
        self._axes += [grid] * len(self.abstract_atoms)
        self._size = math.prod(len(a) for a in self._axes)
        if max_space is not None and self._size > max_space:
            raise SpaceTooLarge(self._size, max_space)

    def __len__(self) -> int:
        return self._size

    def _build(self, coords: Sequence) -> Interpretation:
        ns = len(self.sorts)
        return Interpretation(
            tuple(sorted(zip(self.sorts, coords[:ns]))),
            tuple(sorted(zip(self.abstract_atoms, coords[ns:]))),
        )

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[j] for j in range(*k.indices(self._size))]
        if k < 0:
            k += self._size
        if not 0 <= k < self._size:
            raise IndexError(k)
        coords = []
        for axis in reversed(self._axes):
            k, r = divmod(k, len(axis))
            coords.append(axis[r])
        return self._build(coords[::-1])

    def __iter__(self) -> Iterator[Interpretation]:
        for coords in itertools.product(*self._axes):
            yield self._build(coords)

    def index(self, interp: Interpretation, *args) -> int:
        k = 0
        choices = dict(interp.domain_choice)
        truth = dict(interp.abstract_truth)
        if interp.meaning or set(choices) != set(self.sorts) or set(truth) != set(self.abstract_atoms):
            raise ValueError("interpretation is not in this space")
        coords = [choices[s] for s in self.sorts] + [truth[a] for a in self.abstract_atoms]
        for axis, c in zip(self._axes, coords):
            try:
                pos = axis.index(c)
            except ValueError:
                raise ValueError("interpretation is not in this space") from None
            k = k * len(axis) + pos
        return k

    def __contains__(self, interp) -> bool:
        try:
            self.index(interp)
        except (ValueError, TypeError):
            return False
        return True

    def same_as(self, other: "InterpretationSpace") -> bool:
        return (
            self.sorts == other.sorts
            and self.abstract_atoms == other.abstract_atoms
            and self.truth_grid == other.truth_grid
            and (self.context is other.context or self.context == other.context)
        )

    # columnar view -----------------------------------------------------------

    def scale(self) -> int:
        """Common denominator of every truth value reachable in the space."""
        dens = {v.denominator for v in self.truth_grid}
        if self.context is not None:
            for fs in self.context.interp.values():
                dens.update(d.denominator for d in fs.memberships)
        return math.lcm(*dens)

    def truth_columns(self, scale: Optional[int] = None) -> Tuple[int, Dict[str, np.ndarray]]:
        """Per-atom truth values over the whole space, as exact scaled integers.

        Returns ``(L, columns)`` where ``columns[atom][k] * 1/L`` is the truth
        of *atom* in ``self[k]``. When ``L`` is too large for int64 the arrays
        hold :class:`Fraction` numerators as Python ints (object dtype).
        """
        L = scale or self.scale()
        dtype = np.int64 if L < _MAX_INT_SCALE else object
        shape = [len(a) for a in self._axes]
        cols: Dict[str, np.ndarray] = {}
        ns = len(self.sorts)
        for axis_no, atom in enumerate(self.abstract_atoms, start=ns):
            vals = np.array([int(v * L) for v in self.truth_grid], dtype=dtype)
            cols[atom] = _broadcast_axis(vals, axis_no, shape)
        if self.context is not None:
            for atom, fs in self.context.interp.items():
                axis_no = self.sorts.index(fs.domain.name)
                vals = np.array([int(d * L) for d in fs.memberships], dtype=dtype)
                cols[atom] = _broadcast_axis(vals, axis_no, shape)
        return L, cols


class ExplicitSpace(Sequence[Interpretation]):
    """A hand-listed set of interpretations.

    Unlike :class:`InterpretationSpace` the points may carry their own
    ``meaning``, so two of them can agree on every domain choice and still
    give an atom different truth values.
    """

    def __init__(self, interpretations: Sequence[Interpretation], context: Optional[Context] = None):
        self.points: List[Interpretation] = list(interpretations)
        if len(set(self.points)) != len(self.points):
            raise SemanticsError("explicit space lists an interpretation twice")
        self.context = context
        self._pos = {i: k for k, i in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, k):
        return self.points[k]

    def __iter__(self) -> Iterator[Interpretation]:
        return iter(self.points)

    def index(self, interp: Interpretation, *args) -> int:
        try:
            return self._pos[interp]
        except (KeyError, TypeError):
            raise ValueError("interpretation is not in this space") from None

    def __contains__(self, interp) -> bool:
        return interp in self._pos


def _broadcast_axis(vals: np.ndarray, axis_no: int, shape: List[int]) -> np.ndarray:
    view = [1] * len(shape)
    view[axis_no] = len(vals)
    return np.broadcast_to(vals.reshape(view), shape).reshape(-1)


def enumerate_interpretations(
    p: Program,
    truth_grid: Optional[Sequence] = None,
    max_space: Optional[int] = DEFAULT_MAX_SPACE,
) -> InterpretationSpace:
    """All interpretations of *p*'s vocabulary over *truth_grid*.

    Raises :class:`SpaceTooLarge` rather than truncating.
    """
    grid = default_truth_grid(p) if truth_grid is None else truth_grid
    return InterpretationSpace(p.context, p.abstract_atoms(), grid, max_space)


def evaluate_on_space(f: Formula, L: int, columns: Mapping[str, np.ndarray], size: int) -> np.ndarray:
    """Scaled Goedel truth of *f* at every point of a space (see ``truth_columns``)."""
    if isinstance(f, Var):
        try:
            return columns[f.name]
        except KeyError:
            raise AtomNotInterpretable(f"atom {f.name!r} is not interpreted in this space") from None
    if isinstance(f, Falsum):
        return np.zeros(size, dtype=_dtype_of(columns, L))
    if isinstance(f, Not):
        a = evaluate_on_space(f.operand, L, columns, size)
        return np.where(a == 0, L, 0).astype(a.dtype)
    a = evaluate_on_space(f.left, L, columns, size)
    b = evaluate_on_space(f.right, L, columns, size)
    if isinstance(f, And):
        return np.minimum(a, b)
    if isinstance(f, Imp):
        return np.where(a <= b, L, b).astype(a.dtype)
    if isinstance(f, Or):
        return np.maximum(a, b)
    if isinstance(f, Equiv):
        return np.where(a == b, L, np.minimum(a, b)).astype(a.dtype)
    raise TypeError(f"not a formula: {f!r}")


def _dtype_of(columns: Mapping[str, np.ndarray], L: int):
    for col in columns.values():
        return col.dtype
    return np.int64 if L < _MAX_INT_SCALE else object


# ---------------------------------------------------------------------------
# Possibility distributions and necessity


class PossibilityDistribution:
    """A possibility value for every point of an :class:`InterpretationSpace`.

    Normalization (some point has possibility 1) is enforced unless
    ``normalized=False`` is passed, for transient sub-normal distributions.
    """

    def __init__(self, space: InterpretationSpace, values: Sequence, *, normalized: bool = True):
        if len(values) != len(space):
            raise SemanticsError(f"distribution has {len(values)} values for a space of {len(space)}")
        self.space = space
        self.values: Tuple[Degree, ...] = tuple(as_degree(v) for v in values)
        if normalized and not self.is_normalized:
            raise SemanticsError("possibility distribution is not normalized")

    @classmethod
    def from_mapping(cls, space: InterpretationSpace, mapping: Mapping[Interpretation, object], **kw):
        """Possibility given by *mapping*; unlisted interpretations get 0."""
        values = [ZERO] * len(space)
        for interp, v in mapping.items():
            values[space.index(interp)] = as_degree(v)
        return cls(space, values, **kw)

    @property
    def is_normalized(self) -> bool:
        return ONE in self.values

    def __call__(self, interp: Interpretation) -> Degree:
        return self.values[self.space.index(interp)]

    def items(self) -> Iterator[Tuple[Interpretation, Degree]]:
        return zip(self.space, self.values)

    def support(self) -> List[Tuple[Interpretation, Degree]]:
        return [(i, v) for i, v in self.items() if v > 0]

    def __le__(self, other: "PossibilityDistribution") -> bool:
        return all(a <= b for a, b in zip(self.values, other.values))


def necessity_of_formula(f: Formula, pi: PossibilityDistribution, ctx: Optional[Context] = None) -> Degree:
    """Necessity of *f* under *pi*: min over the space of ``pi(I) => I(f)``.

    Points with possibility 0 contribute 1 and are skipped.
    """
    ctx = ctx if ctx is not None else pi.space.context
    result = ONE
    for interp, possibility in pi.items():
        if possibility == 0:
            continue
        result = min(result, reciprocal_implies(possibility, eval_formula(interp, f, ctx)))
        if result == 0:
            break
    return result


def satisfies(pi: PossibilityDistribution, c: Clause, ctx: Optional[Context] = None) -> bool:
    """Whether *pi* gives clause *c* a necessity of at least its weight."""
    return necessity_of_formula(c.formula(), pi, ctx) >= c.weight
