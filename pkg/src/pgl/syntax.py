"""Abstract syntax, parser and printer for ``.pgl`` programs.

A program file is a sequence of statements::

    # comments run to the end of the line
    sort john_years_old = 0..120 step 1 unit years
    sort colour = {red, green, blue}
    var john_is_about_16 : john_years_old = trapezoid(14, 16, 16, 18)
    var likes_red : colour = {red: 1, green: 0.5, blue: 0}
    var rain                                   # abstract atom
    clause (john_is_14_16, 1)                  # fact
    clause (mary_is_young & john_is_young -> friend_mary_john, 0.6)
    query friend_mary_john

Atoms used in clauses without a ``var`` declaration are abstract. Degrees
are written as decimals (``0.6``) or fractions (``3/5``) and read exactly.

General Goedel formulas (used by the semantics module, not by programs) have
their own small grammar, see :func:`parse_formula`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, NamedTuple, Optional, Tuple

from .degrees import ONE, Degree, DegreeError, as_degree, format_degree
from .fuzzy import FuzzyError, FuzzySet, SortDomain, Trapezoid, trapezoid_to_fuzzy

__all__ = [
    "Atom",
    "Clause",
    "Context",
    "Program",
    "ParseError",
    "ContextError",
    "Formula",
    "Var",
    "Falsum",
    "And",
    "Imp",
    "Or",
    "Not",
    "Equiv",
    "parse_program",
    "parse_formula",
    "format_program",
    "formula_atoms",
]


# ---------------------------------------------------------------------------
# General formulas


class Formula:
    """Base class of Goedel formula trees."""

    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Imp(self, other)


@dataclass(frozen=True)
class Var(Formula):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Falsum(Formula):
    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} -> {self.right})"


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula

    def __str__(self) -> str:
        return f"~{self.operand}"


@dataclass(frozen=True)
class Equiv(Formula):
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} <-> {self.right})"


def formula_atoms(f: Formula) -> List[str]:
    """Atom names of *f* in first-occurrence order."""
    seen: Dict[str, None] = {}

    def walk(g: Formula) -> None:
        if isinstance(g, Var):
            seen.setdefault(g.name)
        elif isinstance(g, Not):
            walk(g.operand)
        elif isinstance(g, (And, Imp, Or, Equiv)):
            walk(g.left)
            walk(g.right)

    walk(f)
    return list(seen)


def expand_derived(f: Formula) -> Formula:
    """Rewrite disjunction, negation and equivalence into ``&``, ``->`` and ``0``."""
    if isinstance(f, (Var, Falsum)):
        return f
    if isinstance(f, Not):
        return Imp(expand_derived(f.operand), Falsum())
    left, right = expand_derived(f.left), expand_derived(f.right)
    if isinstance(f, And):
        return And(left, right)
    if isinstance(f, Imp):
        return Imp(left, right)
    if isinstance(f, Or):
        return And(Imp(Imp(left, right), right), Imp(Imp(right, left), left))
    if isinstance(f, Equiv):
        return And(Imp(left, right), Imp(right, left))
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Programs


@dataclass(frozen=True)
class Atom:
    name: str
    sort: Optional[str] = None

    @property
    def is_abstract(self) -> bool:
        return self.sort is None


@dataclass(frozen=True)
class Clause:
    """A weighted Horn clause ``(p1 & ... & pk -> head, weight)``.

    Repeated body atoms are collapsed (conjunction is idempotent).
    """

    head: str
    body: Tuple[str, ...] = ()
    weight: Degree = ONE

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(dict.fromkeys(self.body)))
        object.__setattr__(self, "weight", as_degree(self.weight))

    @property
    def is_fact(self) -> bool:
        return not self.body

    @property
    def is_recursive(self) -> bool:
        return self.head in self.body

    def formula(self) -> Formula:
        if not self.body:
            return Var(self.head)
        conj: Formula = Var(self.body[0])
        for name in self.body[1:]:
            conj = And(conj, Var(name))
        return Imp(conj, Var(self.head))

    def atoms(self) -> Tuple[str, ...]:
        return tuple(dict.fromkeys(self.body + (self.head,)))

    def __str__(self) -> str:
        if self.body:
            return f"({' & '.join(self.body)} -> {self.head}, {format_degree(self.weight)})"
        return f"({self.head}, {format_degree(self.weight)})"


class ContextError(ValueError):
    """A context violates the domain/normalization requirements."""


@dataclass(frozen=True)
class Context:
    """Sort domains plus the fuzzy-set meaning of every sorted atom."""

    domains: Mapping[str, SortDomain] = field(default_factory=dict)
    interp: Mapping[str, FuzzySet] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "domains", dict(self.domains))
        object.__setattr__(self, "interp", dict(self.interp))

    def validate(self) -> "Context":
        for sort, dom in self.domains.items():
            if dom.name != sort:
                raise ContextError(f"sort {sort!r} is bound to a domain named {dom.name!r}")
        for name, fs in self.interp.items():
            declared = self.domains.get(fs.domain.name)
            if declared is None:
                raise ContextError(f"atom {name!r} uses undeclared sort {fs.domain.name!r}")
            if declared != fs.domain:
                raise ContextError(f"atom {name!r} is not defined on the declared domain of {fs.domain.name!r}")
            if not fs.is_normalized:
                raise ContextError(f"fuzzy set of {name!r} must take the values 0 and 1")
        return self

    def sort_of(self, atom: str) -> Optional[str]:
        fs = self.interp.get(atom)
        return None if fs is None else fs.domain.name

    def atoms_of_sort(self, sort: str) -> List[str]:
        return [a for a, fs in self.interp.items() if fs.domain.name == sort]

    def used_sorts(self) -> List[str]:
        return list(dict.fromkeys(fs.domain.name for fs in self.interp.values()))


@dataclass(frozen=True)
class Program:
    """Clauses, an optional context, declared abstract atoms and queries."""

    clauses: Tuple[Clause, ...] = ()
    context: Optional[Context] = None
    abstract: Tuple[str, ...] = ()
    queries: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        object.__setattr__(self, "abstract", tuple(self.abstract))
        object.__setattr__(self, "queries", tuple(self.queries))
        if self.context is not None and not (self.context.domains or self.context.interp):
            object.__setattr__(self, "context", None)

    def atoms(self) -> Dict[str, Atom]:
        """The vocabulary: sorted atoms, declared abstract atoms, then clause atoms."""
        vocab: Dict[str, Atom] = {}
        if self.context is not None:
            for name, fs in self.context.interp.items():
                vocab[name] = Atom(name, fs.domain.name)
        for name in self.abstract:
            vocab.setdefault(name, Atom(name))
        for c in self.clauses:
            for name in c.atoms():
                vocab.setdefault(name, Atom(name))
        return vocab

    def abstract_atoms(self) -> List[str]:
        return [a.name for a in self.atoms().values() if a.is_abstract]

    def weights(self) -> List[Degree]:
        return [c.weight for c in self.clauses]

    @property
    def is_context_free(self) -> bool:
        return self.context is None or not self.context.interp

    def with_clauses(self, clauses) -> "Program":
        return Program(tuple(clauses), self.context, self.abstract, self.queries)


# ---------------------------------------------------------------------------
# Lexer


class ParseError(ValueError):
    """A syntax or static-semantics error at a source location (1-based)."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z0-9_]+)*)
  | (?P<op><->|->|\.\.|[=:,{}()\[\];&|~/\-])
    """,
    re.VERBOSE,
)

KEYWORDS = {"sort", "var", "clause", "query"}


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.column)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "ident")

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.describe(self.tok)}")
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    @staticmethod
    def describe(tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident":
            raise self.error(f"expected {what}, found {self.describe(self.tok)}")
        return self.advance()

    def rational(self) -> Tuple[Fraction, Token]:
        start = self.tok
        sign = -1 if self.accept("-") else 1
        if self.tok.kind != "number":
            raise self.error(f"expected a number, found {self.describe(self.tok)}")
        num_tok = self.advance()
        value = Fraction(num_tok.text)
        if self.accept("/"):
            if self.tok.kind != "number" or "." in self.tok.text:
                raise self.error("expected an integer denominator")
            den_tok = self.advance()
            if "." in num_tok.text:
                raise self.error("fraction numerator must be an integer", num_tok)
            den = int(den_tok.text)
            if den == 0:
                raise self.error("zero denominator", den_tok)
            value /= den
        return sign * value, start

    def degree(self) -> Degree:
        value, tok = self.rational()
        try:
            return Degree(value)
        except DegreeError:
            raise self.error(f"degree {format_degree(value)} outside [0, 1]", tok) from None

    # formulas ------------------------------------------------------------

    def formula(self) -> Formula:
        left = self.imp()
        if self.accept("<->"):
            return Equiv(left, self.formula())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.accept("|"):
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.accept("&"):
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("("):
            inner = self.formula()
            self.expect(")")
            return inner
        if self.tok.kind == "number" and self.tok.text == "0":
            self.advance()
            return Falsum()
        return Var(self.ident("atom").text)

    # programs ------------------------------------------------------------

    def program(self) -> Program:
        domains: Dict[str, SortDomain] = {}
        interp: Dict[str, FuzzySet] = {}
        abstract: List[str] = []
        declared: Dict[str, Token] = {}
        clauses: List[Clause] = []
        queries: List[Tuple[str, Token]] = []
        while self.tok.kind != "eof":
            kw = self.tok
            if kw.kind != "ident" or kw.text not in KEYWORDS:
                raise self.error(f"expected a statement (sort, var, clause, query), found {self.describe(kw)}")
            self.advance()
            if kw.text == "sort":
                name_tok = self.ident("sort name")
                if name_tok.text in domains:
                    raise self.error(f"sort {name_tok.text!r} declared twice", name_tok)
                self.expect("=")
                domains[name_tok.text] = self.sort_body(name_tok)
            elif kw.text == "var":
                name_tok = self.ident("atom name")
                if name_tok.text in declared:
                    prev = declared[name_tok.text]
                    raise self.error(
                        f"atom {name_tok.text!r} already declared at {prev.line}:{prev.column}", name_tok
                    )
                declared[name_tok.text] = name_tok
                if self.accept(":"):
                    sort_tok = self.ident("sort name")
                    dom = domains.get(sort_tok.text)
                    if dom is None:
                        raise self.error(f"undeclared sort {sort_tok.text!r}", sort_tok)
                    self.expect("=")
                    interp[name_tok.text] = self.fuzzy_body(dom, name_tok)
                else:
                    abstract.append(name_tok.text)
            elif kw.text == "clause":
                clauses.append(self.clause())
            else:
                tok = self.ident("atom name")
                queries.append((tok.text, tok))
        context = Context(domains, interp) if (domains or interp) else None
        prog = Program(tuple(clauses), context, tuple(abstract), tuple(q for q, _ in queries))
        vocab = prog.atoms()
        for name, tok in queries:
            if name not in vocab:
                raise self.error(f"query of undeclared atom {name!r}", tok)
        return prog

    def sort_body(self, name_tok: Token) -> SortDomain:
        name = name_tok.text
        try:
            if self.accept("{"):
                items = []
                kinds = set()
                while True:
                    if self.tok.kind == "ident":
                        items.append(self.advance().text)
                        kinds.add("label")
                    else:
                        items.append(self.rational()[0])
                        kinds.add("number")
                    if not self.accept(","):
                        break
                self.expect("}")
                if len(kinds) > 1:
                    raise self.error(f"sort {name!r} mixes labels and numbers", name_tok)
                dom = SortDomain(name, tuple(items))
            else:
                lo, _ = self.rational()
                self.expect("..")
                hi, _ = self.rational()
                step = Fraction(1)
                if self.accept("step"):
                    step, step_tok = self.rational()
                    if step <= 0:
                        raise self.error("step must be positive", step_tok)
                unit = self.ident("unit name").text if self.accept("unit") else None
                dom = SortDomain.grid(name, lo, hi, step, unit=unit)
                return dom
            if self.accept("unit"):
                raise self.error("units apply only to numeric ranges")
            return dom
        except FuzzyError as exc:
            raise self.error(str(exc), name_tok) from None

    def fuzzy_body(self, dom: SortDomain, name_tok: Token) -> FuzzySet:
        start = self.tok
        try:
            if self.accept("trapezoid"):
                self.expect("(")
                params = [self.rational()[0]]
                for _ in range(3):
                    self.expect(",")
                    params.append(self.rational()[0])
                self.expect(")")
                return trapezoid_to_fuzzy(Trapezoid(*params), dom)
            if self.accept("["):
                params = [self.rational()[0]]
                for _ in range(3):
                    self.expect(";")
                    params.append(self.rational()[0])
                self.expect("]")
                return trapezoid_to_fuzzy(Trapezoid(*params), dom)
            self.expect("{")
            mapping = {}
            while True:
                elem_tok = self.tok
                if elem_tok.kind == "ident":
                    element = self.advance().text
                else:
                    element = self.rational()[0]
                if element not in dom:
                    raise self.error(f"{elem_tok.text!r} is not an element of sort {dom.name!r}", elem_tok)
                if element in mapping:
                    raise self.error(f"element {elem_tok.text!r} listed twice", elem_tok)
                self.expect(":")
                mapping[element] = self.degree()
                if not self.accept(","):
                    break
            self.expect("}")
            fs = FuzzySet.from_mapping(dom, mapping)
            if not fs.is_normalized:
                raise FuzzyError(f"fuzzy set of {name_tok.text!r} must take the values 0 and 1 on its sort")
            return fs
        except FuzzyError as exc:
            raise self.error(str(exc), start) from None

    def clause(self) -> Clause:
        self.expect("(")
        first = self.ident("atom name").text
        body: List[str] = [first]
        while self.accept("&"):
            body.append(self.ident("atom name").text)
        if self.accept("->"):
            head = self.ident("atom name").text
        else:
            if len(body) > 1:
                raise self.error("expected '->' after a conjunction")
            head, body = first, []
        self.expect(",")
        weight = self.degree()
        self.expect(")")
        return Clause(head, tuple(body), weight)


def parse_program(text: str) -> Program:
    """Parse ``.pgl`` source into a validated :class:`Program`.

    Raises :class:`ParseError` carrying a 1-based line and column.
    """
    return _Parser(text).program()


def parse_formula(text: str) -> Formula:
    """Parse a general formula.

    Connectives, loosest first: ``<->``, ``->`` (right associative), ``|``,
    ``&``, prefix ``~``. ``0`` is the false constant.

    >>> str(parse_formula("p & q -> r"))
    '((p & q) -> r)'
    """
    p = _Parser(text)
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.describe(p.tok)} after formula")
    return f


# ---------------------------------------------------------------------------
# Printer


def _element_text(e) -> str:
    return e if isinstance(e, str) else format_degree(e)


def _domain_text(dom: SortDomain) -> str:
    spec = dom.range_spec
    if spec is not None and SortDomain.grid(dom.name, *spec).elements == dom.elements:
        lo, hi, step = spec
        text = f"{_rational_text(lo)}..{_rational_text(hi)}"
        if step != 1:
            text += f" step {_rational_text(step)}"
        if dom.unit:
            text += f" unit {dom.unit}"
        return text
    return "{" + ", ".join(_element_text(e) for e in dom.elements) + "}"


def _rational_text(q: Fraction) -> str:
    return format_degree(Fraction(q))


def _fuzzy_text(fs: FuzzySet) -> str:
    shape = fs.shape
    if shape is not None and fs.domain.is_numeric:
        try:
            if trapezoid_to_fuzzy(shape, fs.domain) == fs:
                return "trapezoid(" + ", ".join(_rational_text(t) for t in shape.params) + ")"
        except FuzzyError:
            pass
    return "{" + ", ".join(f"{_element_text(e)}: {format_degree(d)}" for e, d in fs.items()) + "}"


def format_program(p: Program) -> str:
    """Render *p* as ``.pgl`` text that parses back to an equal program."""
    lines: List[str] = []
    if p.context is not None:
        for name, dom in p.context.domains.items():
            lines.append(f"sort {name} = {_domain_text(dom)}")
        for name, fs in p.context.interp.items():
            lines.append(f"var {name} : {fs.domain.name} = {_fuzzy_text(fs)}")
    for name in p.abstract:
        lines.append(f"var {name}")
    for c in p.clauses:
        lines.append(f"clause {c}")
    for q in p.queries:
        lines.append(f"query {q}")
    return "".join(line + "\n" for line in lines)
