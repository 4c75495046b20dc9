"""scikit-learn style front ends for the engine and the semantic oracle.

``fit`` takes a program (object, ``.pgl`` text or path) and does the
expensive work once; ``predict`` maps goal atoms to degrees. Both classes
support ``get_params``/``set_params``/``clone`` through
:class:`sklearn.base.BaseEstimator`.

>>> r = PossibilisticReasoner().fit("clause (p, 0.8)\\nclause (p -> q, 0.6)")
>>> [str(d) for d in r.predict(["p", "q"])]
['0.8', '0.6']
"""

from __future__ import annotations

from typing import Dict, Iterable, Optional, Union

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .degrees import Degree
from .engine import ProofNode, saturate
from .oracle import least_specific_model, semantic_degree
from .semantics import DEFAULT_MAX_SPACE, default_truth_grid, enumerate_interpretations
from .validation import ProgramLike, check_goals, check_program

__all__ = ["PossibilisticReasoner", "SemanticOracle"]


class PossibilisticReasoner(BaseEstimator):
    """Maximum degree of deduction of goals, by saturation.

    Parameters
    ----------
    strategy : {"semi-naive", "naive"}
    seed : int or None
        Randomizes rule scheduling; results do not depend on it.
    """

    def __init__(self, strategy: str = "semi-naive", seed: Optional[int] = None):
        self.strategy = strategy
        self.seed = seed

    def fit(self, X: ProgramLike, y=None):
        self.program_ = check_program(X)
        self.state_ = saturate(self.program_, strategy=self.strategy, seed=self.seed)
        self.atoms_ = list(self.program_.atoms())
        return self

    def predict(self, goals: Union[str, Iterable[str]]) -> np.ndarray:
        check_is_fitted(self, "state_")
        goals = check_goals(goals, self.program_)
        return np.array([self.state_.best[g] for g in goals], dtype=object)

    def transform(self, X=None) -> Dict[str, Degree]:
        """Degrees of every atom of the fitted program (``X`` is ignored)."""
        check_is_fitted(self, "state_")
        return {a: self.state_.best[a] for a in self.atoms_}

    def fit_transform(self, X: ProgramLike, y=None, **fit_params) -> Dict[str, Degree]:
        return self.fit(X, y).transform()

    def explain(self, goal: str) -> ProofNode:
        check_is_fitted(self, "state_")
        (goal,) = check_goals(goal, self.program_)
        return self.state_.trace[goal]


class SemanticOracle(BaseEstimator):
    """Maximum degree of possibilistic entailment, from the least-specific model.

    Parameters
    ----------
    grid_refinements : int
        Extra midpoint insertions applied to the default truth grid.
    grid_step : rational or None
        Also put every multiple of this step in the truth grid.
    max_space : int
        Cap on the number of interpretations; exceeding it raises
        :class:`pgl.semantics.SpaceTooLarge`.
    """

    def __init__(self, grid_refinements: int = 0, grid_step=None, max_space: int = DEFAULT_MAX_SPACE):
        self.grid_refinements = grid_refinements
        self.grid_step = grid_step
        self.max_space = max_space

    def fit(self, X: ProgramLike, y=None):
        self.program_ = check_program(X)
        grid = default_truth_grid(self.program_, self.grid_refinements, self.grid_step)
        self.space_ = enumerate_interpretations(self.program_, grid, self.max_space)
        self.model_ = least_specific_model(self.program_, self.space_)
        self.satisfiable_ = self.model_.normalized
        return self

    def predict(self, goals: Union[str, Iterable[str]]) -> np.ndarray:
        check_is_fitted(self, "model_")
        goals = check_goals(goals, self.program_)
        return np.array(
            [semantic_degree(self.program_, g, model=self.model_).degree for g in goals], dtype=object
        )
