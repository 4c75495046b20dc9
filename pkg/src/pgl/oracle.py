"""Independent ground truth for the engine.

Two oracles that share no code with :mod:`pgl.engine`:

* a semantic oracle. Every model of a program lies pointwise below the
  least-specific distribution ``pi*(I) = min_j max(1 - w_j, I(phi_j))``,
  and the necessity of a goal is antitone in the distribution, so the
  entailment degree is the necessity of the goal under ``pi*`` itself.
  Clause formulas are evaluated with the full Goedel evaluator.
* a syntactic oracle that enumerates every (atom, degree) pair reachable by
  derivations of bounded length, over all achievable premise degrees rather
  than only the best ones.

``witness_distribution`` builds the small distributions used in the
completeness argument, which certify upper bounds without going through
``pi*``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Sequence, Set, Union

import numpy as np

from .degrees import ONE, ZERO, Degree, complement
from .fuzzy import dominates, necessity_of_match, pointwise_min, raise_floor
from .semantics import (
    DEFAULT_MAX_SPACE,
    Interpretation,
    InterpretationSpace,
    PossibilityDistribution,
    enumerate_interpretations,
    eval_formula,
    evaluate_on_space,
)
from .syntax import Formula, Program, Var

__all__ = [
    "LeastSpecificModel",
    "SemanticDegree",
    "DerivationSearch",
    "least_specific_model",
    "semantic_degree",
    "enumerate_derivations",
    "witness_distribution",
]


@dataclass
class LeastSpecificModel:
    """``pi*`` over a space, held as integers scaled by ``scale``."""

    space: InterpretationSpace
    scale: int
    scaled: np.ndarray
    columns: Dict[str, np.ndarray] = field(repr=False, default_factory=dict)

    @property
    def normalized(self) -> bool:
        return bool(len(self.scaled)) and int(self.scaled.max()) == self.scale

    def value(self, interp: Union[Interpretation, int]) -> Degree:
        k = interp if isinstance(interp, int) else self.space.index(interp)
        return Degree(int(self.scaled[k]), self.scale)

    @property
    def pi_star(self) -> PossibilityDistribution:
        return PossibilityDistribution(
            self.space, [Degree(int(v), self.scale) for v in self.scaled], normalized=False
        )

    def necessity(self, f: Formula) -> Degree:
        """Necessity of *f* under ``pi*``, evaluated over the whole space."""
        L = self.scale
        truth = evaluate_on_space(f, L, self.columns, len(self.space))
        per_point = np.where(self.scaled <= truth, L, L - self.scaled)
        return Degree(int(per_point.min()), L) if len(per_point) else ONE


def least_specific_model(
    p: Program, space: Optional[InterpretationSpace] = None, *, vectorized: bool = True
) -> LeastSpecificModel:
    """The pointwise-largest distribution satisfying every clause of *p*.

    With ``vectorized=False`` each interpretation is evaluated one at a time
    with :func:`pgl.semantics.eval_formula`; the result is identical.
    """
    space = enumerate_interpretations(p) if space is None else space
    L = space.scale()
    for c in p.clauses:
        L = np.lcm(L, c.weight.denominator)
    L = int(L)
    L, columns = space.truth_columns(L)
    n = len(space)
    if vectorized:
        pi = np.full(n, L, dtype=_dtype(columns, L))
        for c in p.clauses:
            floor = L - int(c.weight * L)
            truth = evaluate_on_space(c.formula(), L, columns, n)
            pi = np.minimum(pi, np.maximum(floor, truth))
    else:
        ctx = space.context
        values = []
        for interp in space:
            v = ONE
            for c in p.clauses:
                v = min(v, max(complement(c.weight), eval_formula(interp, c.formula(), ctx)))
            values.append(int(v * L))
        pi = np.array(values, dtype=_dtype(columns, L))
    return LeastSpecificModel(space, L, pi, columns)


def _dtype(columns, L):
    for col in columns.values():
        return col.dtype
    return np.int64 if L < (1 << 52) else object


@dataclass(frozen=True)
class SemanticDegree:
    """Entailment degree of a goal. Unsatisfiable programs entail everything
    to degree 1; ``satisfiable`` says which case applies."""

    degree: Degree
    satisfiable: bool

    def __eq__(self, other):
        if isinstance(other, SemanticDegree):
            return (self.degree, self.satisfiable) == (other.degree, other.satisfiable)
        return NotImplemented

    def __hash__(self):
        return hash((self.degree, self.satisfiable))


def semantic_degree(
    p: Program,
    goal: Union[str, Formula],
    space: Optional[InterpretationSpace] = None,
    *,
    max_space: Optional[int] = DEFAULT_MAX_SPACE,
    model: Optional[LeastSpecificModel] = None,
) -> SemanticDegree:
    """Least necessity of *goal* over all models of *p* (the space's models)."""
    if model is None:
        if space is None:
            space = enumerate_interpretations(p, max_space=max_space)
        model = least_specific_model(p, space)
    if not model.normalized:
        return SemanticDegree(ONE, False)
    f = Var(goal) if isinstance(goal, str) else goal
    return SemanticDegree(model.necessity(f), True)


# ---------------------------------------------------------------------------
# Syntactic enumeration


@dataclass
class DerivationSearch:
    degree: Degree
    complete: bool
    reachable: Dict[str, Set[Degree]]
    rounds: int


def enumerate_derivations(p: Program, goal: str, max_steps: int = 256) -> DerivationSearch:
    """Best degree for *goal* over every derivation of depth ``<= max_steps``.

    Each round applies the axiom, modus ponens and the three fuzzy rules to
    every combination of already-reachable (atom, degree) pairs. ``complete``
    is False when the budget ran out while new pairs were still appearing.
    Weakening only produces smaller degrees and is not enumerated.
    """
    vocab = list(p.atoms())
    if goal not in vocab:
        raise LookupError(goal)
    ctx = p.context
    interp = ctx.interp if ctx is not None else {}
    reach: Dict[str, Set[Degree]] = {a: {ZERO} for a in vocab}
    for c in p.clauses:
        if c.is_fact:
            reach[c.head].add(c.weight)

    sorted_atoms = list(interp)
    rounds = 0
    complete = False
    while rounds < max_steps:
        rounds += 1
        new: Dict[str, Set[Degree]] = {a: set() for a in vocab}
        for c in p.clauses:
            if c.is_fact:
                continue
            for combo in itertools.product(*(reach[b] for b in c.body)):
                new[c.head].add(min((c.weight,) + combo))
        for a in sorted_atoms:
            for t in sorted_atoms:
                if interp[a].domain != interp[t].domain:
                    continue
                beta = necessity_of_match(interp[t], interp[a])
                for alpha in reach[a]:
                    new[t].add(min(alpha, beta))
                    if dominates(interp[t], raise_floor(interp[a], complement(alpha))):
                        new[t].add(ONE)
                for b in sorted_atoms:
                    if interp[b].domain != interp[a].domain:
                        continue
                    if dominates(interp[t], pointwise_min(interp[a], interp[b])):
                        for alpha in reach[a]:
                            for beta2 in reach[b]:
                                new[t].add(min(alpha, beta2))
        grew = False
        for a, vals in new.items():
            fresh = vals - reach[a]
            if fresh:
                reach[a] |= fresh
                grew = True
        if not grew:
            complete = True
            break
    return DerivationSearch(max(reach[goal]), complete, reach, rounds)


# ---------------------------------------------------------------------------
# Witness distributions


def _point(space: InterpretationSpace, truth: Dict[str, Degree]) -> Interpretation:
    interp = Interpretation.of(truth=truth)
    if interp not in space:
        raise ValueError(f"space has no interpretation {dict(truth)}")
    return interp


def witness_distribution(
    kind: str,
    space: InterpretationSpace,
    goal: str,
    gamma=None,
    body: Sequence[str] = (),
) -> PossibilityDistribution:
    """Small distributions certifying ``||goal|| <= value`` in a context-free space.

    ``fact-case``: ``pi(I1) = 1`` with ``I1(goal) = 1``, ``pi(I0) = 1 - gamma``
    with ``I0(goal) = 0``; the necessity of *goal* is exactly *gamma*.
    ``head-max-case``: as above, with every other atom true in ``I0`` and
    ``I1``, so it also satisfies the program's other clauses when *gamma* is
    the largest weight of a non-recursive clause for *goal*.
    ``rule-case``: all mass on one interpretation with every atom at 0, which
    satisfies any rule ``(body -> goal, w)`` while the necessity of *goal* is 0.
    """
    if space.sorts:
        raise ValueError("witness distributions are defined for context-free spaces")
    atoms = space.abstract_atoms
    if goal not in atoms:
        raise ValueError(f"goal {goal!r} is not an atom of the space")
    if kind in ("fact-case", "head-max-case"):
        gamma = Degree(gamma)
        other = ONE if kind == "head-max-case" else ZERO
        i1 = _point(space, {a: (ONE if a == goal else other) for a in atoms})
        mapping = {i1: ONE}
        if gamma < 1:
            i0 = _point(space, {a: (ZERO if a == goal else other) for a in atoms})
            mapping[i0] = complement(gamma)
        return PossibilityDistribution.from_mapping(space, mapping)
    if kind == "rule-case":
        missing = [b for b in body if b not in atoms]
        if missing:
            raise ValueError(f"body atoms not in the space: {missing}")
        i0 = _point(space, {a: ZERO for a in atoms})
        return PossibilityDistribution.from_mapping(space, {i0: ONE})
    raise ValueError(f"unknown witness kind {kind!r}")


def random_submodel(model: LeastSpecificModel, rng) -> PossibilityDistribution:
    """A random normalized distribution lying pointwise below ``pi*``."""
    if not model.normalized:
        raise ValueError("pi* is not normalized; the program has no models")
    L = model.scale
    tops = np.flatnonzero(model.scaled == L)
    keep = int(tops[rng.randrange(len(tops))])
    values = []
    for k, v in enumerate(model.scaled):
        v = int(v)
        if k == keep:
            values.append(ONE)
        else:
            values.append(Degree(Fraction(rng.randint(0, v), L)) if v else ZERO)
    return PossibilityDistribution(model.space, values)
