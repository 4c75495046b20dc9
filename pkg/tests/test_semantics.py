import random
from fractions import Fraction

import pytest

from generators import QUARTERS, godel_axioms, random_context_program, random_distribution, random_formula
from pgl.degrees import ONE, ZERO, Degree
from pgl.fuzzy import SortDomain, Trapezoid, trapezoid_to_fuzzy
from pgl.syntax import And, Clause, Context, Falsum, Imp, Program, Var, expand_derived, parse_formula, parse_program
from pgl.semantics import (
    AtomNotInterpretable,
    ExplicitSpace,
    Interpretation,
    InterpretationSpace,
    PossibilityDistribution,
    SemanticsError,
    SpaceTooLarge,
    default_truth_grid,
    enumerate_interpretations,
    eval_formula,
    evaluate_on_space,
    necessity_of_formula,
    satisfies,
)

YEARS = SortDomain.grid("mary_years_old", 0, 120)
AROUND_19_WIDE = trapezoid_to_fuzzy(Trapezoid(17, 18, 20, 21), YEARS)
AROUND_19_NARROW = trapezoid_to_fuzzy(Trapezoid(18, 19, 19, 20), YEARS)
GRID3 = [ZERO, Degree(1, 2), ONE]
P, Q, R = Var("p"), Var("q"), Var("r")


def abstract_space(atoms=("p", "q", "r"), grid=GRID3):
    return InterpretationSpace(None, atoms, grid)


# -- evaluation --------------------------------------------------------------------


def test_self_implication_is_true():
    for i in abstract_space():
        assert eval_formula(i, Imp(P, P)) == 1


def test_falsum_implies_anything():
    for i in abstract_space():
        assert eval_formula(i, Imp(Falsum(), parse_formula("p & q -> r"))) == 1


def test_sorted_atom_truth_comes_from_membership():
    ctx = Context({"mary_years_old": YEARS}, {"age": AROUND_19_WIDE})
    i = Interpretation.of({"mary_years_old": 20})
    assert eval_formula(i, Var("age"), ctx) == 1


def test_example_2_same_age_different_meaning():
    i0 = Interpretation.of({"mary_years_old": 20}, meaning={"age_mary_around_19": AROUND_19_WIDE})
    i1 = Interpretation.of({"mary_years_old": 20}, meaning={"age_mary_around_19": AROUND_19_NARROW})
    assert i0.choice("mary_years_old") == i1.choice("mary_years_old")
    assert eval_formula(i0, Var("age_mary_around_19")) == 1
    assert eval_formula(i1, Var("age_mary_around_19")) == 0


def test_uninterpretable_atom():
    with pytest.raises(AtomNotInterpretable):
        eval_formula(Interpretation.of(truth={"p": 1}), Var("zzz"))


def test_goedel_tables():
    i = Interpretation.of(truth={"p": Degree("0.7"), "q": Degree("0.4")})
    assert eval_formula(i, Imp(P, Q)) == Degree("0.4")
    assert eval_formula(i, Imp(Q, P)) == 1
    assert eval_formula(i, And(P, Q)) == Degree("0.4")
    assert eval_formula(i, parse_formula("p | q")) == Degree("0.7")
    assert eval_formula(i, parse_formula("~q")) == 0
    assert eval_formula(i, parse_formula("p <-> q")) == Degree("0.4")


def test_derived_connectives_agree_with_their_expansions():
    rng = random.Random(11)
    space = abstract_space(grid=QUARTERS)
    for _ in range(200):
        f = random_formula(rng)
        for i in rng.sample(list(space), 10):
            assert eval_formula(i, f) == eval_formula(i, expand_derived(f))


# -- enumeration -----------------------------------------------------------------------


def test_one_sort_five_elements():
    dom = SortDomain.grid("s", 0, 4)
    fs = trapezoid_to_fuzzy(Trapezoid(0, 1, 2, 4), dom)
    p = Program((Clause("a", (), 1),), Context({"s": dom}, {"a": fs}))
    space = enumerate_interpretations(p, [ZERO, ONE])
    assert len(space) == 5 and len(set(space)) == 5


def test_two_abstract_atoms_three_grid_values():
    p = Program((Clause("q", ("p",), "0.5"),))
    space = enumerate_interpretations(p, GRID3)
    assert len(space) == 9 and len(set(space)) == 9
    assert {dict(i.abstract_truth)["p"] for i in space} == set(GRID3)


def test_example_3_space_has_121_points():
    from pathlib import Path

    p = parse_program((Path(__file__).resolve().parents[1] / "programs" / "example3.pgl").read_text())
    assert len(enumerate_interpretations(p)) == 121


def test_space_indexing_is_consistent():
    space = abstract_space(grid=QUARTERS)
    for k, i in enumerate(space):
        assert space[k] == i and space.index(i) == k
    assert space[-1] == list(space)[-1]


def test_space_cap():
    p = Program((Clause("d", ("a", "b", "c"), "0.5"),))
    with pytest.raises(SpaceTooLarge):
        enumerate_interpretations(p, QUARTERS, max_space=100)


def test_grid_needs_both_ends():
    with pytest.raises(SemanticsError):
        InterpretationSpace(None, ["p"], [Degree(1, 2), ONE])


def test_default_grid():
    p = Program((Clause("q", (), "0.6"),))
    assert default_truth_grid(p) == [Degree(x) for x in ("0", "0.2", "0.4", "0.5", "0.6", "0.8", "1")]


# -- necessity ----------------------------------------------------------------------


def test_necessity_point_mass():
    space = abstract_space(("q",))
    i1 = Interpretation.of(truth={"q": 1})
    pi = PossibilityDistribution.from_mapping(space, {i1: 1})
    assert necessity_of_formula(Var("q"), pi) == 1


@pytest.mark.parametrize("gamma", [Degree(1, 4), Degree(1, 2), Degree(3, 4)])
def test_two_point_witness_gives_gamma(gamma):
    space = InterpretationSpace(None, ["q"], QUARTERS)
    i1 = Interpretation.of(truth={"q": 1})
    i0 = Interpretation.of(truth={"q": 0})
    pi = PossibilityDistribution.from_mapping(space, {i1: 1, i0: 1 - gamma})
    assert satisfies(pi, Clause("q", (), gamma))
    assert necessity_of_formula(Var("q"), pi) == gamma


def test_rule_witness_gives_zero():
    space = InterpretationSpace(None, ["q", "r"], QUARTERS)
    i0 = Interpretation.of(truth={"q": Degree(1, 4), "r": 0})
    pi = PossibilityDistribution.from_mapping(space, {i0: 1})
    assert satisfies(pi, Clause("q", ("r",), 1))
    assert necessity_of_formula(Var("q"), pi) == 0


def test_zero_weight_clause_always_satisfied():
    rng = random.Random(3)
    space = abstract_space()
    for _ in range(50):
        assert satisfies(random_distribution(rng, space), Clause(rng.choice("pqr"), ("p",), 0))


def test_fully_possible_countermodel_fails_clause():
    space = abstract_space(("p",))
    pi = PossibilityDistribution.from_mapping(space, {Interpretation.of(truth={"p": 0}): 1})
    assert not satisfies(pi, Clause("p", (), "0.5"))


@pytest.mark.parametrize("t", [ONE, Degree("0.3"), ZERO])
def test_example_2_satisfying_distributions(t):
    i0 = Interpretation.of({"mary_years_old": 20}, meaning={"age_mary_around_19": AROUND_19_WIDE})
    i1 = Interpretation.of({"mary_years_old": 20}, meaning={"age_mary_around_19": AROUND_19_NARROW})
    space = ExplicitSpace([i0, i1])
    clause = Clause("age_mary_around_19", (), 1)
    ok = PossibilityDistribution(space, [t, ZERO], normalized=False)
    assert satisfies(ok, clause)
    for s in (Degree("0.1"), ONE):
        assert not satisfies(PossibilityDistribution(space, [t, s], normalized=False), clause)


def test_explicit_space_rejects_duplicates():
    i = Interpretation.of(truth={"p": 1})
    with pytest.raises(SemanticsError):
        ExplicitSpace([i, i])


def test_distribution_length_and_normalization_checked():
    space = abstract_space(("p",))
    with pytest.raises(SemanticsError):
        PossibilityDistribution(space, [1, 0])
    with pytest.raises(SemanticsError):
        PossibilityDistribution(space, [0, Degree(1, 2), 0])


# -- properties -----------------------------------------------------------------------


def _pairs(n, seed):
    rng = random.Random(seed)
    space = abstract_space()  # 27 points
    for _ in range(n):
        yield rng, space, random_formula(rng), random_formula(rng), random_distribution(rng, space)


def test_n1_tautologies_have_necessity_one():
    for rng, space, f, g, pi in _pairs(200, 1):
        assert necessity_of_formula(Imp(f, f), pi) == 1
        assert necessity_of_formula(Imp(And(f, g), f), pi) == 1


def test_n2_falsum_has_necessity_zero():
    for rng, space, f, g, pi in _pairs(100, 2):
        assert necessity_of_formula(Falsum(), pi) == 0


def test_n3_conjunction_is_min():
    for rng, space, f, g, pi in _pairs(300, 3):
        assert necessity_of_formula(And(f, g), pi) == min(necessity_of_formula(f, pi), necessity_of_formula(g, pi))


def test_threshold_equivalence():
    for rng, space, f, g, pi in _pairs(300, 4):
        n = necessity_of_formula(f, pi)
        for alpha in QUARTERS + [Degree(1, 3)]:
            bound = all(v <= max(1 - alpha, eval_formula(i, f)) for i, v in pi.items())
            assert (n >= alpha) == bound


def test_necessity_one_iff_below_membership():
    for rng, space, f, g, pi in _pairs(300, 5):
        below = all(v <= eval_formula(i, f) for i, v in pi.items())
        assert (necessity_of_formula(f, pi) == 1) == below


def test_goedel_axioms_are_tautologies():
    rng = random.Random(6)
    space = list(abstract_space(grid=QUARTERS + [Degree(1, 3)]))
    for _ in range(300):
        axioms = godel_axioms(random_formula(rng, depth=2), random_formula(rng, depth=2), random_formula(rng, depth=2))
        for i in rng.sample(space, 4):
            assert all(eval_formula(i, a) == 1 for a in axioms)


def test_modus_ponens_is_sound_semantically():
    for rng, space, f, g, pi in _pairs(300, 7):
        alpha, beta = necessity_of_formula(Imp(f, g), pi), necessity_of_formula(f, pi)
        assert necessity_of_formula(g, pi) >= min(alpha, beta)


def test_scalar_and_vectorized_evaluation_agree():
    rng = random.Random(8)
    for _ in range(40):
        p = random_context_program(rng)
        space = enumerate_interpretations(p)
        L, cols = space.truth_columns()
        atoms = list(p.atoms())
        for _ in range(5):
            f = random_formula(rng, atoms)
            vec = evaluate_on_space(f, L, cols, len(space))
            scalar = [eval_formula(i, f, p.context) for i in space]
            assert [Fraction(int(v), L) for v in vec] == scalar
