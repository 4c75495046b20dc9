"""Input checking shared by the estimators and the command line."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable, List, Union

from .engine import UnknownAtomError
from .syntax import Program, parse_program

__all__ = ["check_program", "check_goals", "load_program"]

ProgramLike = Union[Program, str, os.PathLike]


def load_program(path: Union[str, os.PathLike]) -> Program:
    """Read and parse a ``.pgl`` file (UTF-8)."""
    return parse_program(Path(path).read_text(encoding="utf-8"))


def check_program(X: ProgramLike) -> Program:
    """Accept a :class:`Program`, ``.pgl`` source text, or a path to a file.

    A string is treated as a path only if it names an existing file ending in
    ``.pgl``; anything else is parsed as source. The context is validated.
    """
    if isinstance(X, Program):
        program = X
    elif isinstance(X, os.PathLike):
        program = load_program(X)
    elif isinstance(X, str):
        if X.endswith(".pgl") and "\n" not in X and Path(X).is_file():
            program = load_program(X)
        else:
            program = parse_program(X)
    else:
        raise TypeError(f"expected a Program, .pgl text or a path, got {type(X).__name__}")
    if program.context is not None:
        program.context.validate()
    return program


def check_goals(goals: Union[str, Iterable[str]], program: Program) -> List[str]:
    if isinstance(goals, str):
        goals = [goals]
    goals = list(goals)
    vocab = program.atoms()
    for g in goals:
        if g not in vocab:
            raise UnknownAtomError(g)
    return goals
