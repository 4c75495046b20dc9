"""Bottom-up saturation computing the maximum degree of deduction.

The calculus has the triviality axiom ``(q, 0)``, generalized modus ponens
over program rules, and three rules that relate sorted atoms through their
fuzzy sets in the context:

* SU  ``(p, a)  =>  (p', min(a, N(m(p') | m(p))))``
* IN  ``(p1, a), (p2, b)  =>  (p', min(a, b))``   if ``m(p') >= min(m(p1), m(p2))``
* UN  ``(p, a)  =>  (p', 1)``                     if ``m(p') >= max(1 - a, m(p))``

Every atom starts at degree 0 and only ever increases, through values of a
finite lattice, so saturation always terminates. The default strategy is
semi-naive: an atom's consequences are recomputed only when its degree
improves.
"""

from __future__ import annotations

import random
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Set, Tuple

from .degrees import ONE, ZERO, Degree, complement, degree_to_json, format_degree
from .fuzzy import dominates, necessity_of_match, pointwise_min, raise_floor
from .syntax import Clause, Context, Program

__all__ = [
    "ProofNode",
    "DerivationState",
    "UnknownAtomError",
    "apply_gmp",
    "apply_su",
    "apply_in",
    "apply_un",
    "saturate",
    "query",
    "replay",
    "degree_lattice",
]

RULES = ("Axiom0", "Fact", "GMP", "SU", "IN", "UN")


class UnknownAtomError(LookupError):
    def __str__(self) -> str:
        return f"unknown atom {self.args[0]!r}"


@dataclass(frozen=True, eq=False)
class ProofNode:
    """One step of a derivation, with the premises it was built from."""

    atom: str
    degree: Degree
    rule: str
    premises: Tuple["ProofNode", ...] = ()
    annotation: Mapping[str, object] = field(default_factory=dict)

    @property
    def conclusion(self) -> Tuple[str, Degree]:
        return (self.atom, self.degree)

    def to_json(self) -> dict:
        side = {
            k: (degree_to_json(v) if isinstance(v, Degree) else v) for k, v in self.annotation.items()
        }
        return {
            "goal": self.atom,
            "degree": degree_to_json(self.degree),
            "rule": self.rule,
            "premises": [p.to_json() for p in self.premises],
            "side_conditions": side,
        }

    def pretty(self, indent: int = 0) -> str:
        notes = ", ".join(
            f"{k}={format_degree(v) if isinstance(v, Degree) else v}" for k, v in self.annotation.items()
        )
        line = f"{'  ' * indent}({self.atom}, {format_degree(self.degree)})  [{self.rule}]"
        if notes:
            line += f"  {notes}"
        return "\n".join([line] + [p.pretty(indent + 1) for p in self.premises])

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


@dataclass
class DerivationState:
    """Best degree found so far for every atom, and the proof behind it."""

    best: Dict[str, Degree] = field(default_factory=dict)
    trace: Dict[str, ProofNode] = field(default_factory=dict)
    steps: int = 0

    @classmethod
    def initial(cls, atoms) -> "DerivationState":
        state = cls()
        for a in atoms:
            state.best[a] = ZERO
            state.trace[a] = ProofNode(a, ZERO, "Axiom0")
        return state

    def degree(self, atom: str) -> Degree:
        return self.best.get(atom, ZERO)

    def improve(self, node: ProofNode) -> bool:
        if node.degree > self.best.get(node.atom, ZERO):
            self.best[node.atom] = node.degree
            self.trace[node.atom] = node
            self.steps += 1
            return True
        return False


# ---------------------------------------------------------------------------
# Single rule applications


def apply_gmp(rule: Clause, state: DerivationState) -> Optional[Tuple[str, Degree]]:
    """Modus ponens on *rule* from the current degrees of its body atoms.

    Returns ``(head, degree)`` only when it beats the head's current degree.
    """
    if rule.is_fact:
        raise ValueError("modus ponens needs a rule with a non-empty body")
    degree = min([rule.weight] + [state.degree(b) for b in rule.body])
    if degree > state.degree(rule.head):
        return (rule.head, degree)
    return None


def _sorted_pair(ctx: Context, *atoms: str):
    sets = []
    for a in atoms:
        fs = ctx.interp.get(a)
        if fs is None:
            raise ValueError(f"atom {a!r} has no fuzzy set in the context")
        sets.append(fs)
    sort = sets[0].domain.name
    if any(fs.domain.name != sort for fs in sets):
        raise ValueError(f"atoms {', '.join(atoms)} are not all of one sort")
    return sets


def apply_su(derived: Tuple[str, Degree], target: str, ctx: Context) -> Tuple[str, Degree]:
    """Semantical unification of a derived ``(p, a)`` onto *target*."""
    p, alpha = derived
    mp, mt = _sorted_pair(ctx, p, target)
    return (target, min(alpha, necessity_of_match(mt, mp)))


def apply_in(
    d1: Tuple[str, Degree], d2: Tuple[str, Degree], target: str, ctx: Context
) -> Optional[Tuple[str, Degree]]:
    """Intersection: fires when the target's set covers the pointwise min."""
    (p1, a), (p2, b) = d1, d2
    m1, m2, mt = _sorted_pair(ctx, p1, p2, target)
    if dominates(mt, pointwise_min(m1, m2)):
        return (target, min(a, b))
    return None


def apply_un(d: Tuple[str, Degree], target: str, ctx: Context) -> Optional[Tuple[str, Degree]]:
    """Resolving uncertainty: certainty 1 when ``m(target) >= max(1 - a, m(p))``."""
    p, alpha = d
    mp, mt = _sorted_pair(ctx, p, target)
    if dominates(mt, raise_floor(mp, complement(alpha))):
        return (target, ONE)
    return None


# ---------------------------------------------------------------------------
# Saturation


class _ContextTables:
    """Static facts about the context the fuzzy rules need, computed once."""

    def __init__(self, ctx: Optional[Context]):
        self.ctx = ctx
        self.peers: Dict[str, List[str]] = {}
        self.necessity: Dict[Tuple[str, str], Degree] = {}
        self.in_targets: Dict[Tuple[str, str], List[str]] = {}
        self._un_cache: Dict[Tuple[str, Degree, str], bool] = {}
        if ctx is None:
            return
        by_sort: Dict[str, List[str]] = defaultdict(list)
        for a, fs in ctx.interp.items():
            by_sort[fs.domain.name].append(a)
        for atoms in by_sort.values():
            for p in atoms:
                self.peers[p] = atoms
                for t in atoms:
                    self.necessity[(p, t)] = necessity_of_match(ctx.interp[t], ctx.interp[p])
            for i, p in enumerate(atoms):
                for q in atoms[i:]:
                    low = pointwise_min(ctx.interp[p], ctx.interp[q])
                    targets = [t for t in atoms if dominates(ctx.interp[t], low)]
                    self.in_targets[(p, q)] = self.in_targets[(q, p)] = targets

    def un_fires(self, p: str, alpha: Degree, target: str) -> bool:
        key = (p, alpha, target)
        hit = self._un_cache.get(key)
        if hit is None:
            hit = apply_un((p, alpha), target, self.ctx) is not None
            self._un_cache[key] = hit
        return hit


def _consequences(atom: str, state: DerivationState, program_rules, tables: _ContextTables, rng):
    """Every proof node obtainable with *atom*'s current degree as a premise."""
    out: List[ProofNode] = []
    node = state.trace[atom]
    alpha = state.best[atom]
    for rule in program_rules.get(atom, ()):
        hit = apply_gmp(rule, state)
        if hit is not None:
            premises = tuple(state.trace[b] for b in rule.body)
            out.append(ProofNode(hit[0], hit[1], "GMP", premises, {"clause": str(rule), "weight": rule.weight}))
    peers = tables.peers.get(atom)
    if peers and alpha > 0:
        for target in peers:
            beta = tables.necessity[(atom, target)]
            out.append(ProofNode(target, min(alpha, beta), "SU", (node,), {"necessity": beta}))
        for other in peers:
            if state.best[other] == 0:
                continue
            degree = min(alpha, state.best[other])
            for target in tables.in_targets[(atom, other)]:
                out.append(
                    ProofNode(
                        target, degree, "IN", (node, state.trace[other]), {"covers_min_of": f"{atom}, {other}"}
                    )
                )
        for target in peers:
            if tables.un_fires(atom, alpha, target):
                out.append(ProofNode(target, ONE, "UN", (node,), {"floor": complement(alpha)}))
    if rng is not None:
        rng.shuffle(out)
    return out


def _fact_nodes(program: Program) -> List[ProofNode]:
    return [
        ProofNode(c.head, c.weight, "Fact", (), {"weight": c.weight}) for c in program.clauses if c.is_fact
    ]


def saturate(program: Program, *, strategy: str = "semi-naive", seed: Optional[int] = None) -> DerivationState:
    """Run the calculus on *program* to its least fixpoint.

    ``strategy`` is ``"semi-naive"`` (default) or ``"naive"`` (every rule on
    every pass, kept for differential testing). A ``seed`` randomizes the
    order in which pending atoms and candidate conclusions are processed; the
    resulting degrees do not depend on it.
    """
    if strategy not in ("semi-naive", "naive"):
        raise ValueError(f"unknown strategy {strategy!r}")
    rng = random.Random(seed) if seed is not None else None
    state = DerivationState.initial(program.atoms())
    tables = _ContextTables(program.context)
    rules_by_body: Dict[str, List[Clause]] = defaultdict(list)
    for c in program.clauses:
        for b in c.body:
            rules_by_body[b].append(c)

    facts = _fact_nodes(program)
    if rng is not None:
        rng.shuffle(facts)

    if strategy == "naive":
        for node in facts:
            state.improve(node)
        changed = True
        while changed:
            changed = False
            atoms = list(state.best)
            if rng is not None:
                rng.shuffle(atoms)
            for atom in atoms:
                for node in _consequences(atom, state, rules_by_body, tables, rng):
                    changed |= state.improve(node)
        return state

    agenda: deque = deque()
    queued: Set[str] = set()

    def push(node: ProofNode) -> None:
        if state.improve(node) and node.atom not in queued:
            queued.add(node.atom)
            agenda.append(node.atom)

    for node in facts:
        push(node)
    while agenda:
        if rng is not None:
            k = rng.randrange(len(agenda))
            agenda.rotate(-k)
            atom = agenda.popleft()
            agenda.rotate(k)
        else:
            atom = agenda.popleft()
        queued.discard(atom)
        for node in _consequences(atom, state, rules_by_body, tables, rng):
            push(node)
    return state


def query(program: Program, goal: str, **kwargs) -> Tuple[Degree, ProofNode]:
    """Maximum degree of deduction of *goal*, with its proof."""
    if goal not in program.atoms():
        raise UnknownAtomError(goal)
    state = saturate(program, **kwargs)
    return state.best[goal], state.trace[goal]


# ---------------------------------------------------------------------------
# Checking proofs


def replay(node: ProofNode, program: Program) -> bool:
    """Recompute every step of *node* from its premises; True iff all agree."""
    ctx = program.context
    ok = all(replay(p, program) for p in node.premises)
    if not ok:
        return False
    prem = [(p.atom, p.degree) for p in node.premises]
    if node.rule == "Axiom0":
        return node.degree == 0 and not node.premises
    if node.rule == "Fact":
        return Clause(node.atom, (), node.degree) in program.clauses
    if node.rule == "GMP":
        for c in program.clauses:
            if c.head == node.atom and not c.is_fact and tuple(p.atom for p in node.premises) == c.body:
                if min([c.weight] + [d for _, d in prem]) == node.degree:
                    return True
        return False
    if ctx is None:
        return False
    try:
        if node.rule == "SU" and len(prem) == 1:
            return apply_su(prem[0], node.atom, ctx) == (node.atom, node.degree)
        if node.rule == "IN" and len(prem) == 2:
            return apply_in(prem[0], prem[1], node.atom, ctx) == (node.atom, node.degree)
        if node.rule == "UN" and len(prem) == 1:
            return apply_un(prem[0], node.atom, ctx) == (node.atom, node.degree)
    except ValueError:
        return False
    return False


def degree_lattice(program: Program) -> Set[Degree]:
    """Every degree saturation can produce: 0, 1, weights and context necessities.

    The set is closed under ``min`` because ``min`` of two members is one of
    them.
    """
    values = {ZERO, ONE}
    values.update(program.weights())
    values.update(_ContextTables(program.context).necessity.values())
    return values
