"""Possibilistic Goedel logic programming with fuzzy propositional variables.

Programs are sets of certainty-weighted Horn clauses ``(body -> head, w)``
whose atoms may be interpreted as fuzzy sets over finite sort domains. The
engine computes the maximum degree to which a goal can be deduced; the
oracle computes, independently, the degree to which it is entailed.
"""

from .degrees import Degree, format_degree
from .engine import ProofNode, query, saturate
from .estimators import PossibilisticReasoner, SemanticOracle
from .oracle import enumerate_derivations, least_specific_model, semantic_degree
from .syntax import Clause, Context, Program, format_program, parse_formula, parse_program

__all__ = [
    "Degree",
    "format_degree",
    "Clause",
    "Context",
    "Program",
    "parse_program",
    "parse_formula",
    "format_program",
    "saturate",
    "query",
    "ProofNode",
    "semantic_degree",
    "least_specific_model",
    "enumerate_derivations",
    "PossibilisticReasoner",
    "SemanticOracle",
]

__version__ = "0.1.0"
